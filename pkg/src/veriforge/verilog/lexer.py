"""Tokenizer for a practical Verilog-2001 subset.

Comments and preprocessor-directive lines are stripped before tokenization
(macros are not expanded).  Line numbers are preserved through stripping so
downstream diagnostics and evidence point at the original source.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import TokenizeError

KEYWORDS = frozenset(
    """module endmodule input output inout wire reg logic integer real genvar
    parameter localparam assign always initial begin end if else case casez
    casex endcase default for while posedge negedge or and not buf xor nand
    nor xnor function endfunction task endtask generate endgenerate signed
    wait forever repeat""".split()
)

_OPERATORS = [
    "<<<", ">>>", "===", "!==", "**",
    "<<", ">>", "==", "!=", "<=", ">=", "&&", "||", "~&", "~|", "~^", "^~",
    "+", "-", "*", "/", "%", "&", "|", "^", "~", "!", "<", ">", "=", "?",
    ":", "@", "#", "(", ")", "[", "]", "{", "}", ";", ",", ".",
]

_NUMBER = re.compile(r"(?:\d+)?'\s*[sS]?[bBoOdDhH][0-9a-fA-FxXzZ_?]+|\d[\d_]*")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_$]*")
_SYSIDENT = re.compile(r"\$[A-Za-z_][A-Za-z0-9_$]*")


@dataclass(frozen=True)
class Token:
    kind: str  # kw | ident | sysident | number | string | op | eof
    value: str
    line: int


def strip_comments_and_directives(source: str) -> str:
    """Blank out comments and `-directive lines, preserving line structure."""
    out = []
    i, n = 0, len(source)
    line_start = True
    while i < n:
        ch = source[i]
        if ch == "/" and source.startswith("//", i):
            j = source.find("\n", i)
            i = n if j == -1 else j
            continue
        if ch == "/" and source.startswith("/*", i):
            j = source.find("*/", i)
            if j == -1:
                line = source.count("\n", 0, i) + 1
                raise TokenizeError(f"line {line}: unterminated block comment")
            out.append(re.sub(r"[^\n]", " ", source[i : j + 2]))
            i = j + 2
            continue
        if ch == "`" and line_start:
            j = source.find("\n", i)
            i = n if j == -1 else j
            continue
        if ch == "\n":
            line_start = True
        elif not ch.isspace():
            line_start = False
        out.append(ch)
        i += 1
    return "".join(out)


def tokenize(source: str) -> list[Token]:
    text = strip_comments_and_directives(source)
    tokens: list[Token] = []
    i, n = 0, len(text)
    line = 1
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            continue
        if ch == '"':
            j = i + 1
            while j < n and text[j] != '"':
                if text[j] == "\n":
                    raise TokenizeError(f"line {line}: unterminated string")
                j += 1
            if j >= n:
                raise TokenizeError(f"line {line}: unterminated string")
            tokens.append(Token("string", text[i + 1 : j], line))
            i = j + 1
            continue
        m = _SYSIDENT.match(text, i)
        if m:
            tokens.append(Token("sysident", m.group(), line))
            i = m.end()
            continue
        m = _NUMBER.match(text, i)
        if m:
            tokens.append(Token("number", m.group().replace(" ", ""), line))
            i = m.end()
            continue
        m = _IDENT.match(text, i)
        if m:
            value = m.group()
            kind = "kw" if value in KEYWORDS else "ident"
            tokens.append(Token(kind, value, line))
            i = m.end()
            continue
        for op in _OPERATORS:
            if text.startswith(op, i):
                tokens.append(Token("op", op, line))
                i += len(op)
                break
        else:
            raise TokenizeError(f"line {line}: illegal character {ch!r}")
    tokens.append(Token("eof", "", line))
    return tokens


def parse_sized_number(literal: str) -> tuple[int | None, int | None]:
    """Decode a Verilog literal to (value, width); x/z digits give value None.

    Width is None for unsized decimal literals.
    """
    lit = literal.replace("_", "")
    if "'" not in lit:
        return int(lit), None
    size_part, rest = lit.split("'", 1)
    rest = rest.lstrip()
    if rest and rest[0] in "sS":
        rest = rest[1:]
    base_ch = rest[0].lower()
    digits = rest[1:]
    width = int(size_part) if size_part else None
    if any(c in "xzXZ?" for c in digits):
        return None, width
    base = {"b": 2, "o": 8, "d": 10, "h": 16}[base_ch]
    value = int(digits, base)
    if width is not None:
        value &= (1 << width) - 1
    return value, width
