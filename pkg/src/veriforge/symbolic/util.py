"""Shared lexical helpers for the symbolic parsers."""

from __future__ import annotations

import re

_ELLIPSIS = re.compile(r"\s*(\.\.\.|…)\s*$")


def strip_ellipsis(line: str) -> str:
    """Drop a trailing ellipsis; hand-written prompts use it to mark truncation."""
    return _ELLIPSIS.sub("", line)
