"""Vocabularies: data-type taxonomy, operation word sets, policy keywords.

The type lexicon is a two-level taxonomy (primary category -> secondary
category -> phrase set). Text matching is token based: ASCII words are
lowercased and split on case/punctuation boundaries, CJK runs fall back to
per-character units, and phrases match as maximal token n-grams (longest
match first, left to right).
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .errors import DuplicatePhrase, LexiconError, UnknownPrimary

PRIMARIES_FILE = "_primaries.txt"
OPERATIONS_FILE = "operations.txt"
POLICY_KEYWORDS_FILE = "policy_keywords.txt"

OPERATIONS = ("Collect", "Use", "Send")

_TOKEN_RE = re.compile(
    r"[A-Za-z]+|[0-9]+|[㐀-鿿豈-﫿]",
)
_CAMEL_RE = re.compile(
    r"[A-Z]+(?=[A-Z][a-z])|[A-Z]?[a-z]+|[A-Z]+|[0-9]+",
)


def normalize(text: str) -> str:
    """NFKC-fold full-width forms, then lowercase ASCII."""
    return unicodedata.normalize("NFKC", text).lower()


def tokenize(text: str) -> list[str]:
    """Split into matching units: words, numbers, single CJK characters.

    camelCase and snake_case identifiers split on their boundaries, so
    ``getPhoneNumber`` yields ``get``, ``phone``, ``number``.
    """
    tokens: list[str] = []
    for piece in _TOKEN_RE.findall(unicodedata.normalize("NFKC", text)):
        if len(piece) == 1 and not piece.isascii():
            tokens.append(piece)
        else:
            for word in _CAMEL_RE.findall(piece):
                tokens.append(word.lower())
    return tokens


@dataclass
class PhraseMatch:
    phrase: str
    category: str      # secondary name (types) or operation name (ops)
    start: int         # token position
    length: int        # token count


class _PhraseMatcher:
    """Maximal-munch n-gram matcher over tokenized text."""

    def __init__(self) -> None:
        # first token -> [(token tuple, phrase, category)], longest first
        self._index: dict[str, list[tuple[tuple[str, ...], str, str]]] = {}

    def add(self, phrase: str, category: str) -> None:
        tokens = tuple(tokenize(phrase))
        if not tokens:
            return
        bucket = self._index.setdefault(tokens[0], [])
        bucket.append((tokens, phrase, category))
        bucket.sort(key=lambda item: -len(item[0]))

    def match(self, text: str) -> list[PhraseMatch]:
        tokens = tokenize(text)
        matches: list[PhraseMatch] = []
        i = 0
        while i < len(tokens):
            bucket = self._index.get(tokens[i])
            hit = None
            if bucket:
                for candidate, phrase, category in bucket:
                    if tuple(tokens[i:i + len(candidate)]) == candidate:
                        hit = PhraseMatch(phrase, category, i, len(candidate))
                        break
            if hit is not None:
                matches.append(hit)
                i += hit.length
            else:
                i += 1
        return matches


@dataclass
class TypeLexicon:
    primaries: list[str]
    # secondary -> (primary, normalized phrase set)
    secondaries: dict[str, tuple[str, set[str]]]
    phrase_index: dict[str, str] = field(default_factory=dict)
    _matcher: _PhraseMatcher = field(default_factory=_PhraseMatcher, repr=False)

    def lookup(self, phrase: str) -> Optional[tuple[str, str]]:
        """(secondary, primary) owning this exact phrase, or None."""
        secondary = self.phrase_index.get(normalize(phrase))
        if secondary is None:
            return None
        return secondary, self.secondaries[secondary][0]

    def primary_of(self, secondary: str) -> Optional[str]:
        entry = self.secondaries.get(secondary)
        return entry[0] if entry else None

    def is_type(self, name: str) -> bool:
        return name in self.secondaries or normalize(name) in self.phrase_index

    def match_text(self, text: str) -> list[PhraseMatch]:
        """Maximal phrase matches in the text, document order."""
        return self._matcher.match(text)

    def best_match(self, text: str) -> Optional[str]:
        """Secondary of the longest (earliest on ties) phrase match."""
        matches = self.match_text(text)
        if not matches:
            return None
        best = max(matches, key=lambda m: (m.length, -m.start))
        return best.category

    def all_phrases(self) -> list[str]:
        return sorted(self.phrase_index)

    def counts(self) -> dict[str, tuple[int, int]]:
        """primary -> (secondary count, phrase count)."""
        out: dict[str, tuple[int, int]] = {p: (0, 0) for p in self.primaries}
        for _, (primary, phrases) in self.secondaries.items():
            secs, phr = out[primary]
            out[primary] = (secs + 1, phr + len(phrases))
        return out


@dataclass
class OperationLexicon:
    operations: dict[str, set[str]]  # Collect/Use/Send -> normalized words
    _matcher: _PhraseMatcher = field(default_factory=_PhraseMatcher, repr=False)

    def operation_of(self, word: str) -> Optional[str]:
        norm = normalize(word)
        for operation, words in self.operations.items():
            if norm in words:
                return operation
        return None

    def match_text(self, text: str) -> list[PhraseMatch]:
        return self._matcher.match(text)

    def all_words(self) -> list[str]:
        out: set[str] = set()
        for words in self.operations.values():
            out.update(words)
        return sorted(out)


@dataclass
class LoadReport:
    primaries: int
    secondaries: int
    phrases: int
    operation_words: dict[str, int]
    warnings: list[str] = field(default_factory=list)


def _read_lines(path: Path) -> Iterable[tuple[int, str]]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as err:
        raise LexiconError(f"cannot read {path}: {err}") from err
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split(" #", 1)[0]
        if not body.strip() or body.lstrip().startswith("#"):
            continue
        yield lineno, body  # keep tabs intact; loaders strip per field


def _parse_phrases(raw: str) -> list[str]:
    # a leading '+' marks an implementer-added synonym; provenance only
    return [p.strip().lstrip("+").strip()
            for p in raw.split(",") if p.strip().lstrip("+").strip()]


def load_type_lexicon(directory: Path,
                      warnings: Optional[list[str]] = None) -> TypeLexicon:
    directory = Path(directory)
    manifest = directory / PRIMARIES_FILE
    if not manifest.exists():
        raise LexiconError(f"missing primaries manifest {manifest}")
    primaries: list[str] = []
    files: dict[str, str] = {}
    for _, line in _read_lines(manifest):
        if "\t" not in line:
            raise LexiconError(f"bad manifest line: {line!r}")
        primary, filename = line.split("\t", 1)
        primaries.append(primary.strip())
        files[primary.strip()] = filename.strip()

    lexicon = TypeLexicon(primaries, {})
    warnings = warnings if warnings is not None else []
    for primary in primaries:
        path = directory / files[primary]
        declared = _file_primary(path)
        if declared is not None and declared != primary:
            raise UnknownPrimary(
                f"{path.name} declares primary {declared!r}, "
                f"manifest says {primary!r}")
        seen_any = False
        for lineno, line in _read_lines(path):
            if "\t" not in line:
                raise LexiconError(f"{path.name}:{lineno}: expected "
                                   f"'secondary<TAB>phrases'")
            secondary, phrase_blob = line.split("\t", 1)
            secondary = secondary.strip()
            if secondary in lexicon.secondaries:
                raise LexiconError(
                    f"{path.name}:{lineno}: duplicate secondary {secondary!r}")
            phrases: set[str] = set()
            for phrase in _parse_phrases(phrase_blob):
                norm = normalize(phrase)
                owner = lexicon.phrase_index.get(norm)
                if owner is not None and owner != secondary:
                    raise DuplicatePhrase(
                        f"phrase {phrase!r} assigned to both "
                        f"{owner!r} and {secondary!r}")
                lexicon.phrase_index[norm] = secondary
                phrases.add(norm)
                lexicon._matcher.add(phrase, secondary)
            if not phrases:
                warnings.append(f"{path.name}:{lineno}: secondary "
                                f"{secondary!r} has no phrases")
            lexicon.secondaries[secondary] = (primary, phrases)
            seen_any = True
        if not seen_any:
            warnings.append(f"{path.name}: primary {primary!r} is empty")
    return lexicon


def _file_primary(path: Path) -> Optional[str]:
    try:
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.startswith("#primary:"):
                return line.split(":", 1)[1].strip()
            if line.strip() and not line.startswith("#"):
                break
    except OSError as err:
        raise LexiconError(f"cannot read {path}: {err}") from err
    return None


def load_operation_lexicon(directory: Path) -> OperationLexicon:
    path = Path(directory) / OPERATIONS_FILE
    operations: dict[str, set[str]] = {op: set() for op in OPERATIONS}
    lexicon = OperationLexicon(operations)
    for lineno, line in _read_lines(path):
        if "\t" not in line:
            raise LexiconError(f"{path.name}:{lineno}: expected "
                               f"'operation<TAB>words'")
        operation, blob = line.split("\t", 1)
        operation = operation.strip()
        if operation not in operations:
            raise LexiconError(f"{path.name}:{lineno}: unknown operation "
                               f"category {operation!r}")
        for word in _parse_phrases(blob):
            norm = normalize(word)
            for other, words in operations.items():
                if other != operation and norm in words:
                    raise DuplicatePhrase(
                        f"operation word {word!r} in both {other!r} "
                        f"and {operation!r}")
            operations[operation].add(norm)
            lexicon._matcher.add(word, operation)
    return lexicon


def load_policy_keywords(directory: Path) -> list[str]:
    path = Path(directory) / POLICY_KEYWORDS_FILE
    if not path.exists():
        return []
    return [normalize(line) for _, line in _read_lines(path)]


def load_lexicons(directory: Path) -> tuple[TypeLexicon, OperationLexicon]:
    """Load and validate the type and operation vocabularies."""
    warnings: list[str] = []
    type_lexicon = load_type_lexicon(Path(directory), warnings)
    operation_lexicon = load_operation_lexicon(Path(directory))
    return type_lexicon, operation_lexicon


def load_report(directory: Path) -> LoadReport:
    warnings: list[str] = []
    type_lexicon = load_type_lexicon(Path(directory), warnings)
    operation_lexicon = load_operation_lexicon(Path(directory))
    return LoadReport(
        primaries=len(type_lexicon.primaries),
        secondaries=len(type_lexicon.secondaries),
        phrases=len(type_lexicon.phrase_index),
        operation_words={op: len(words) for op, words
                         in operation_lexicon.operations.items()},
        warnings=warnings,
    )


def serialize_lexicons(type_lexicon: TypeLexicon,
                       operation_lexicon: OperationLexicon,
                       out_dir: Path,
                       policy_keywords: Optional[list[str]] = None) -> None:
    """Write the lexicons back out in the load format.

    Loading the result yields semantically identical lexicons (order of
    phrases within a line is not significant).
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    filenames = {}
    for index, primary in enumerate(type_lexicon.primaries):
        safe = re.sub(r"[^a-z0-9]+", "_", primary.lower()).strip("_")
        filenames[primary] = f"{index:02d}_{safe}.txt"
    manifest = [f"{primary}\t{filenames[primary]}"
                for primary in type_lexicon.primaries]
    (out_dir / PRIMARIES_FILE).write_text("\n".join(manifest) + "\n",
                                          encoding="utf-8")
    for primary in type_lexicon.primaries:
        lines = [f"#primary: {primary}"]
        for secondary in sorted(type_lexicon.secondaries):
            owner, phrases = type_lexicon.secondaries[secondary]
            if owner != primary:
                continue
            lines.append(f"{secondary}\t{','.join(sorted(phrases))}")
        (out_dir / filenames[primary]).write_text("\n".join(lines) + "\n",
                                                  encoding="utf-8")
    op_lines = [f"{op}\t{','.join(sorted(words))}"
                for op, words in operation_lexicon.operations.items()]
    (out_dir / OPERATIONS_FILE).write_text("\n".join(op_lines) + "\n",
                                           encoding="utf-8")
    if policy_keywords:
        (out_dir / POLICY_KEYWORDS_FILE).write_text(
            "\n".join(policy_keywords) + "\n", encoding="utf-8")


def default_dict_dir() -> Path:
    return Path(__file__).parent / "data" / "lexicon"
