"""Tokenizer for the supported Java subset.

Comments never enter the token stream; they are collected on the side with
their positions and character offsets so the parser can attach doc comments
to declarations and ordinary comments to their nearest enclosing block.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import Comment, SourcePosition
from .errors import ParseError

KEYWORDS = frozenset({
    "abstract", "assert", "boolean", "break", "byte", "case", "catch",
    "char", "class", "const", "continue", "default", "do", "double", "else",
    "enum", "extends", "final", "finally", "float", "for", "goto", "if",
    "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return",
    "short", "static", "strictfp", "super", "switch", "synchronized",
    "this", "throw", "throws", "transient", "try", "void", "volatile",
    "while", "true", "false", "null",
})

PRIMITIVE_TYPES = frozenset({
    "boolean", "byte", "char", "short", "int", "long", "float", "double",
})

MODIFIERS = frozenset({
    "public", "private", "protected", "static", "final", "abstract",
    "native", "synchronized", "transient", "volatile", "strictfp",
    "default",
})

# longest-first so maximal munch falls out of a linear scan
_PUNCT = [
    ">>>=", "<<=", ">>=", ">>>", "...", "<<", ">>", "->", "::", "++", "--",
    "&&", "||", "<=", ">=", "==", "!=", "+=", "-=", "*=", "/=", "%=", "&=",
    "|=", "^=",
    "+", "-", "*", "/", "%", "=", "<", ">", "!", "~", "&", "|", "^", "?",
    ":", ";", ",", ".", "(", ")", "{", "}", "[", "]", "@",
]


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "kw" | "int" | "float" | "char" | "string" | "punct" | "eof"
    text: str
    line: int
    column: int
    offset: int

    def position(self, file: str) -> SourcePosition:
        return SourcePosition(file, self.line, self.column)


class LexedSource:
    """Tokens plus side-channel comments for one source file."""

    def __init__(self, tokens: list[Token], comments: list[Comment],
                 comment_spans: list[tuple[int, int]],
                 comments_before: list[list[int]], file: str):
        self.tokens = tokens
        self.comments = comments
        self.comment_spans = comment_spans  # (start, end) offsets per comment
        # for each token index, indices of comments between it and the
        # previous token
        self.comments_before = comments_before
        self.file = file


def tokenize(source: str, file: str) -> LexedSource:
    tokens: list[Token] = []
    comments: list[Comment] = []
    comment_spans: list[tuple[int, int]] = []
    comments_before: list[list[int]] = []
    pending: list[int] = []

    i = 0
    line = 1
    col = 1
    n = len(source)

    def advance(text: str) -> None:
        nonlocal line, col
        for ch in text:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1

    def err(msg: str, at_line: int, at_col: int) -> ParseError:
        return ParseError(msg, SourcePosition(file, at_line, at_col))

    while i < n:
        ch = source[i]
        if ch in " \t\r\n\f":
            advance(ch)
            i += 1
            continue

        if ch == "/" and i + 1 < n:
            nxt = source[i + 1]
            if nxt == "/":
                j = source.find("\n", i)
                if j == -1:
                    j = n
                text = source[i:j]
                comments.append(Comment(text, SourcePosition(file, line, col)))
                comment_spans.append((i, j))
                pending.append(len(comments) - 1)
                advance(text)
                i = j
                continue
            if nxt == "*":
                j = source.find("*/", i + 2)
                if j == -1:
                    raise err("unterminated block comment", line, col)
                text = source[i:j + 2]
                is_doc = text.startswith("/**") and len(text) > 4
                comments.append(Comment(text, SourcePosition(file, line, col), is_doc))
                comment_spans.append((i, j + 2))
                pending.append(len(comments) - 1)
                advance(text)
                i = j + 2
                continue

        start_line, start_col, start_off = line, col, i

        if ch.isalpha() or ch in "_$":
            j = i + 1
            while j < n and (source[j].isalnum() or source[j] in "_$"):
                j += 1
            text = source[i:j]
            kind = "kw" if text in KEYWORDS else "ident"
            tokens.append(Token(kind, text, start_line, start_col, start_off))
            comments_before.append(pending)
            pending = []
            advance(text)
            i = j
            continue

        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            j, kind = _scan_number(source, i)
            text = source[i:j]
            tokens.append(Token(kind, text, start_line, start_col, start_off))
            comments_before.append(pending)
            pending = []
            advance(text)
            i = j
            continue

        if ch == '"':
            j = _scan_quoted(source, i, '"')
            if j == -1:
                raise err("unterminated string literal", line, col)
            text = source[i:j]
            tokens.append(Token("string", text, start_line, start_col, start_off))
            comments_before.append(pending)
            pending = []
            advance(text)
            i = j
            continue

        if ch == "'":
            j = _scan_quoted(source, i, "'")
            if j == -1:
                raise err("unterminated character literal", line, col)
            text = source[i:j]
            tokens.append(Token("char", text, start_line, start_col, start_off))
            comments_before.append(pending)
            pending = []
            advance(text)
            i = j
            continue

        for p in _PUNCT:
            if source.startswith(p, i):
                tokens.append(Token("punct", p, start_line, start_col, start_off))
                comments_before.append(pending)
                pending = []
                advance(p)
                i += len(p)
                break
        else:
            raise err(f"unexpected character {ch!r}", line, col)

    tokens.append(Token("eof", "", line, col, n))
    comments_before.append(pending)
    return LexedSource(tokens, comments, comment_spans, comments_before, file)


def _scan_number(source: str, i: int) -> tuple[int, str]:
    n = len(source)
    j = i
    kind = "int"
    if source.startswith(("0x", "0X", "0b", "0B"), i):
        j = i + 2
        while j < n and (source[j].isalnum() or source[j] == "_"):
            j += 1
        return j, "int"
    while j < n and (source[j].isdigit() or source[j] == "_"):
        j += 1
    if j < n and source[j] == "." and j + 1 < n and source[j + 1].isdigit():
        kind = "float"
        j += 1
        while j < n and (source[j].isdigit() or source[j] == "_"):
            j += 1
    if j < n and source[j] in "eE":
        k = j + 1
        if k < n and source[k] in "+-":
            k += 1
        if k < n and source[k].isdigit():
            kind = "float"
            j = k
            while j < n and source[j].isdigit():
                j += 1
    if j < n and source[j] in "lLfFdD":
        if source[j] in "fFdD":
            kind = "float"
        j += 1
    return j, kind


def _scan_quoted(source: str, i: int, quote: str) -> int:
    n = len(source)
    j = i + 1
    while j < n:
        ch = source[j]
        if ch == "\\":
            j += 2
            continue
        if ch == quote:
            return j + 1
        if ch == "\n":
            return -1
        j += 1
    return -1
