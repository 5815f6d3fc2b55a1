"""Errors raised while reading source files."""

from __future__ import annotations

from typing import Optional

from .ast import SourcePosition


class ParseError(Exception):
    def __init__(self, message: str, position: Optional[SourcePosition] = None):
        self.message = message
        self.position = position
        super().__init__(f"{position}: {message}" if position else message)
