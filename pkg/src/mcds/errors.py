"""Exception hierarchy shared across the auditor."""


class McdsError(Exception):
    """Base class for all auditor errors."""


# ---- package ingestion ----

class MissingEntry(McdsError):
    """No app entry configuration was found in the package directory."""


class UnreadableFile(McdsError):
    """A package file could not be read or decoded; carries the path."""

    def __init__(self, path, reason):
        super().__init__(f"{path}: {reason}")
        self.path = str(path)
        self.reason = reason


class MalformedMarkup(McdsError):
    """Layout markup broken beyond recovery; carries line/column."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} at {line}:{column}")
        self.line = line
        self.column = column


# ---- JavaScript frontend ----

class FatalSyntaxError(McdsError):
    """The tokenizer could not resynchronize; carries the position."""

    def __init__(self, message, line, column):
        super().__init__(f"{message} at {line}:{column}")
        self.line = line
        self.column = column


class SchemaError(McdsError):
    """An AST interchange document does not follow the expected schema."""


# ---- lexicons and API tables ----

class LexiconError(McdsError):
    """Base class for vocabulary load failures."""


class DuplicatePhrase(LexiconError):
    """The same phrase is assigned to two secondary categories."""


class UnknownPrimary(LexiconError):
    """A secondary category references an undeclared primary category."""


class TableError(McdsError):
    """A source/sink API table failed validation."""


# ---- policy NLP ----

class DimensionMismatch(McdsError):
    """A sentence vector does not match the classifier input width."""


class EmptyInput(McdsError):
    """Similarity was asked to compare an empty string."""
