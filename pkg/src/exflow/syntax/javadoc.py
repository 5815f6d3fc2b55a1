"""Extraction of @throws/@exception tags from doc comments."""

from __future__ import annotations

from .ast import DocComment

_THROWS_TAGS = ("@throws", "@exception")


def extract_doc_throws(raw: str) -> list[tuple[str, str]]:
    """Return (exception type name, description) per tag, in document order.

    The type name is the first token after the tag; tags with no type are
    dropped. Use extract_doc_throws_counted when the dropped count matters.
    """
    entries, _ = extract_doc_throws_counted(raw)
    return entries


def extract_doc_throws_counted(raw: str) -> tuple[list[tuple[str, str]], int]:
    """Like extract_doc_throws, also returning the malformed-tag count."""
    entries: list[tuple[str, str]] = []
    malformed = 0
    current: list | None = None  # [type name, description lines]

    def flush() -> None:
        nonlocal current
        if current is not None:
            entries.append((current[0], " ".join(current[1]).strip()))
            current = None

    for line in _comment_lines(raw):
        if line.startswith("@"):
            flush()
            parts = line.split(None, 1)
            if parts[0] in _THROWS_TAGS:
                if len(parts) == 1:
                    malformed += 1
                else:
                    tail = parts[1].split(None, 1)
                    description = tail[1].strip() if len(tail) > 1 else ""
                    current = [tail[0], [description]]
            continue
        if current is not None:
            current[1].append(line)
    flush()
    return entries, malformed


def parse_doc_comment(raw: str) -> DocComment:
    return DocComment(raw, extract_doc_throws(raw))


def _comment_lines(raw: str) -> list[str]:
    text = raw
    if text.startswith("/**"):
        text = text[3:]
    elif text.startswith("/*"):
        text = text[2:]
    if text.endswith("*/"):
        text = text[:-2]
    lines = []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("*"):
            stripped = stripped[1:].strip()
        if stripped:
            lines.append(stripped)
    return lines
