"""Tokenizer for the JavaScript subset.

Produces the whole token stream up front so the parser can look ahead and
backtrack cheaply. Recoverable lexical damage (an unterminated string cut
off by a newline) is recorded as a diagnostic; damage that leaves nothing
to resynchronize on (unterminated block comment, template or string at end
of input) raises FatalSyntaxError.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .errors import FatalSyntaxError

KEYWORDS = frozenset({
    "break", "case", "catch", "class", "const", "continue", "debugger",
    "default", "delete", "do", "else", "export", "extends", "finally",
    "for", "function", "if", "import", "in", "instanceof", "let", "new",
    "return", "super", "switch", "this", "throw", "try", "typeof", "var",
    "void", "while", "with", "yield", "async", "await", "of", "static",
    "get", "set", "true", "false", "null", "undefined",
})

# Keywords that may directly precede a regular expression literal.
_REGEX_AFTER_KEYWORD = frozenset({
    "return", "typeof", "instanceof", "in", "of", "new", "delete", "void",
    "throw", "case", "do", "else", "yield", "await",
})

_PUNCTUATORS = [
    ">>>=",
    "===", "!==", ">>>", "<<=", ">>=", "**=", "...",
    "==", "!=", "<=", ">=", "&&", "||", "??", "?.", "++", "--", "+=",
    "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "=>", "**",
    "{", "}", "(", ")", "[", "]", ";", ",", "<", ">", "+", "-", "*",
    "/", "%", "&", "|", "^", "!", "~", "?", ":", "=", ".",
]

_ID_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ$_")
_DIGITS = frozenset("0123456789")

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "b": "\b", "f": "\f",
            "v": "\v", "0": "\0"}


@dataclass
class Token:
    type: str          # name | num | str | template | regex | punct | eof
    value: Any
    line: int
    col: int
    end_line: int
    end_col: int
    nl_before: bool = False
    start_offset: int = -1
    end_offset: int = -1

    @property
    def is_keyword(self) -> bool:
        return self.type == "name" and self.value in KEYWORDS


@dataclass
class LexDiagnostic:
    message: str
    line: int
    col: int


@dataclass
class TemplateSegments:
    """Decomposed template literal: cooked strings and raw expression slices."""

    strings: list[str] = field(default_factory=list)
    # (source substring, absolute line, absolute column) per interpolation
    expressions: list[tuple[str, int, int]] = field(default_factory=list)


class Lexer:
    def __init__(self, source: str, start_line: int = 1, start_col: int = 0):
        self.src = source
        self.pos = 0
        self.line = start_line
        self.col = start_col
        self.diagnostics: list[LexDiagnostic] = []

    # -- low-level ----------------------------------------------------

    def _peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.src[i] if i < len(self.src) else ""

    def _advance(self) -> str:
        ch = self.src[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 0
        else:
            self.col += 1
        return ch

    def _fatal(self, message: str, line: int, col: int) -> None:
        raise FatalSyntaxError(message, line, col)

    # -- public -------------------------------------------------------

    def tokenize(self) -> list[Token]:
        tokens: list[Token] = []
        nl_before = False
        prev: Optional[Token] = None
        while True:
            nl_before = self._skip_trivia() or nl_before
            if self.pos >= len(self.src):
                eof = Token("eof", None, self.line, self.col,
                            self.line, self.col, nl_before)
                eof.start_offset = eof.end_offset = self.pos
                tokens.append(eof)
                return tokens
            start_offset = self.pos
            token = self._next_token(prev)
            token.nl_before = nl_before
            token.start_offset = start_offset
            token.end_offset = self.pos
            tokens.append(token)
            prev = token
            nl_before = False

    # -- trivia -------------------------------------------------------

    def _skip_trivia(self) -> bool:
        """Skip whitespace and comments; returns True if a newline passed."""
        saw_nl = False
        while self.pos < len(self.src):
            ch = self._peek()
            if ch in " \t\r\f\v ﻿":
                self._advance()
            elif ch == "\n":
                saw_nl = True
                self._advance()
            elif ch == "/" and self._peek(1) == "/":
                while self.pos < len(self.src) and self._peek() != "\n":
                    self._advance()
            elif ch == "/" and self._peek(1) == "*":
                line, col = self.line, self.col
                self._advance(); self._advance()
                closed = False
                while self.pos < len(self.src):
                    if self._peek() == "\n":
                        saw_nl = True
                    if self._peek() == "*" and self._peek(1) == "/":
                        self._advance(); self._advance()
                        closed = True
                        break
                    self._advance()
                if not closed:
                    self._fatal("unterminated block comment", line, col)
            else:
                break
        return saw_nl

    # -- dispatch -----------------------------------------------------

    def _next_token(self, prev: Optional[Token]) -> Token:
        ch = self._peek()
        line, col = self.line, self.col
        if ch in _ID_START or ord(ch) > 0x7F:
            return self._read_name(line, col)
        if ch in _DIGITS or (ch == "." and self._peek(1) in _DIGITS):
            return self._read_number(line, col)
        if ch in "'\"":
            return self._read_string(line, col)
        if ch == "`":
            return self._read_template(line, col)
        if ch == "/" and self._regex_allowed(prev):
            return self._read_regex(line, col)
        return self._read_punct(line, col)

    def _regex_allowed(self, prev: Optional[Token]) -> bool:
        if prev is None:
            return True
        if prev.type == "punct":
            return prev.value not in (")", "]", "}", "++", "--")
        if prev.type == "name":
            return prev.value in _REGEX_AFTER_KEYWORD
        return False  # after num / str / template / regex: division

    # -- token readers ------------------------------------------------

    def _read_name(self, line: int, col: int) -> Token:
        start = self.pos
        while self.pos < len(self.src):
            ch = self._peek()
            if ch in _ID_START or ch in _DIGITS or ord(ch) > 0x7F:
                self._advance()
            else:
                break
        return Token("name", self.src[start:self.pos], line, col,
                     self.line, self.col)

    def _read_number(self, line: int, col: int) -> Token:
        start = self.pos
        if self._peek() == "0" and self._peek(1) in ("x", "X", "o", "O", "b", "B"):
            self._advance(); self._advance()
            while self._peek() and (self._peek() in "0123456789abcdefABCDEF"):
                self._advance()
            raw = self.src[start:self.pos]
            try:
                value: Any = int(raw, 0)
            except ValueError:
                value = raw
            return Token("num", value, line, col, self.line, self.col)
        while self._peek() in _DIGITS:
            self._advance()
        is_float = False
        if self._peek() == "." :
            is_float = True
            self._advance()
            while self._peek() in _DIGITS:
                self._advance()
        if self._peek() in ("e", "E"):
            is_float = True
            self._advance()
            if self._peek() in ("+", "-"):
                self._advance()
            while self._peek() in _DIGITS:
                self._advance()
        raw = self.src[start:self.pos]
        try:
            value = float(raw) if is_float else int(raw)
        except ValueError:
            value = raw
        return Token("num", value, line, col, self.line, self.col)

    def _read_escape(self, parts: list[str]) -> None:
        # caller consumed the backslash
        ch = self._advance() if self.pos < len(self.src) else ""
        if ch == "\n":
            return  # line continuation
        if ch in _ESCAPES:
            parts.append(_ESCAPES[ch])
        elif ch in ("u", "x"):
            width = 4 if ch == "u" else 2
            if ch == "u" and self._peek() == "{":
                self._advance()
                digits = ""
                while self._peek() and self._peek() != "}":
                    digits += self._advance()
                if self._peek() == "}":
                    self._advance()
                try:
                    parts.append(chr(int(digits, 16)))
                except ValueError:
                    parts.append(digits)
                return
            digits = ""
            for _ in range(width):
                if self._peek() and self._peek() in "0123456789abcdefABCDEF":
                    digits += self._advance()
            try:
                parts.append(chr(int(digits, 16)))
            except ValueError:
                parts.append(digits)
        else:
            parts.append(ch)

    def _read_string(self, line: int, col: int) -> Token:
        quote = self._advance()
        parts: list[str] = []
        while True:
            if self.pos >= len(self.src):
                self._fatal("unterminated string literal", line, col)
            ch = self._peek()
            if ch == quote:
                self._advance()
                break
            if ch == "\n":
                # recover at the newline; the rest of the line is lost
                self.diagnostics.append(LexDiagnostic(
                    "unterminated string literal", line, col))
                break
            if ch == "\\":
                self._advance()
                self._read_escape(parts)
            else:
                parts.append(self._advance())
        return Token("str", "".join(parts), line, col, self.line, self.col)

    def _read_regex(self, line: int, col: int) -> Token:
        start = self.pos
        self._advance()  # leading /
        in_class = False
        while True:
            if self.pos >= len(self.src) or self._peek() == "\n":
                self._fatal("unterminated regular expression", line, col)
            ch = self._advance()
            if ch == "\\":
                if self.pos < len(self.src):
                    self._advance()
            elif ch == "[":
                in_class = True
            elif ch == "]":
                in_class = False
            elif ch == "/" and not in_class:
                break
        while self._peek() and self._peek() in _ID_START:
            self._advance()  # flags
        return Token("regex", self.src[start:self.pos], line, col,
                     self.line, self.col)

    def _read_template(self, line: int, col: int) -> Token:
        self._advance()  # backtick
        segments = TemplateSegments()
        parts: list[str] = []
        while True:
            if self.pos >= len(self.src):
                self._fatal("unterminated template literal", line, col)
            ch = self._peek()
            if ch == "`":
                self._advance()
                break
            if ch == "$" and self._peek(1) == "{":
                self._advance(); self._advance()
                segments.strings.append("".join(parts))
                parts = []
                expr_line, expr_col = self.line, self.col
                expr_src = self._read_template_expr(line, col)
                segments.expressions.append((expr_src, expr_line, expr_col))
                continue
            if ch == "\\":
                self._advance()
                self._read_escape(parts)
            else:
                parts.append(self._advance())
        segments.strings.append("".join(parts))
        return Token("template", segments, line, col, self.line, self.col)

    def _read_template_expr(self, tline: int, tcol: int) -> str:
        """Consume a balanced ``${ ... }`` body, skipping nested literals."""
        start = self.pos
        depth = 1
        while True:
            if self.pos >= len(self.src):
                self._fatal("unterminated template literal", tline, tcol)
            ch = self._peek()
            if ch == "{":
                depth += 1
                self._advance()
            elif ch == "}":
                depth -= 1
                self._advance()
                if depth == 0:
                    return self.src[start:self.pos - 1]
            elif ch in "'\"":
                self._read_string(self.line, self.col)
            elif ch == "`":
                self._read_template(self.line, self.col)
            elif ch == "/" and self._peek(1) == "/":
                while self.pos < len(self.src) and self._peek() != "\n":
                    self._advance()
            elif ch == "/" and self._peek(1) == "*":
                self._advance(); self._advance()
                while self.pos < len(self.src):
                    if self._peek() == "*" and self._peek(1) == "/":
                        self._advance(); self._advance()
                        break
                    self._advance()
            else:
                self._advance()

    def _read_punct(self, line: int, col: int) -> Token:
        for punct in _PUNCTUATORS:
            if self.src.startswith(punct, self.pos):
                for _ in punct:
                    self._advance()
                return Token("punct", punct, line, col, self.line, self.col)
        # Unknown byte: emit it as a one-character punctuator and let the
        # parser's recovery deal with it.
        ch = self._advance()
        return Token("punct", ch, line, col, self.line, self.col)


def tokenize(source: str, start_line: int = 1, start_col: int = 0):
    """Tokenize ``source``; returns (tokens, lexical diagnostics)."""
    lexer = Lexer(source, start_line, start_col)
    tokens = lexer.tokenize()
    return tokens, lexer.diagnostics
