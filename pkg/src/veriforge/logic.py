"""Boolean expression trees and exact two-level minimization.

minimize_sop implements Quine-McCluskey prime-implicant generation followed
by exact minimum-cover selection (essential implicants first, then
branch-and-bound over the residue).  Cost is total literal count, with ties
broken by fewer product terms and then the lexicographically smallest
implicant set under plain string ordering of cubes.  Don't-care rows may be
absorbed into implicants but are never required to be covered.

Cube notation: a string over '0', '1', '-' with one position per input, the
first input being the most significant bit of the minterm index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .errors import LogicError, MultiOutputUnsupported, UnboundVariable
from .symbolic.types import TruthTable

# -- expression trees ---------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Not:
    operand: "LogicExpr"


@dataclass(frozen=True)
class And:
    terms: tuple["LogicExpr", ...]


@dataclass(frozen=True)
class Or:
    terms: tuple["LogicExpr", ...]


@dataclass(frozen=True)
class Xor:
    terms: tuple["LogicExpr", ...]


@dataclass(frozen=True)
class Const:
    value: int


LogicExpr = Union[Var, Not, And, Or, Xor, Const]


def eval_expression(expr: LogicExpr, assignment: Mapping[str, int]) -> int:
    """Evaluate to 0/1 under a complete variable assignment."""
    if isinstance(expr, Const):
        return 1 if expr.value else 0
    if isinstance(expr, Var):
        if expr.name not in assignment:
            raise UnboundVariable(f"variable {expr.name!r} is not bound")
        return 1 if assignment[expr.name] else 0
    if isinstance(expr, Not):
        return 1 - eval_expression(expr.operand, assignment)
    if isinstance(expr, And):
        return int(all(eval_expression(t, assignment) for t in expr.terms))
    if isinstance(expr, Or):
        return int(any(eval_expression(t, assignment) for t in expr.terms))
    if isinstance(expr, Xor):
        acc = 0
        for t in expr.terms:
            acc ^= eval_expression(t, assignment)
        return acc
    raise TypeError(f"not a logic expression: {type(expr).__name__}")


def variables(expr: LogicExpr) -> set[str]:
    if isinstance(expr, Var):
        return {expr.name}
    if isinstance(expr, Not):
        return variables(expr.operand)
    if isinstance(expr, (And, Or, Xor)):
        out: set[str] = set()
        for t in expr.terms:
            out |= variables(t)
        return out
    return set()


def literal_count(expr: LogicExpr) -> int:
    """Number of literals in a sum-of-products expression."""
    if isinstance(expr, Const):
        return 0
    if isinstance(expr, Var):
        return 1
    if isinstance(expr, Not):
        return literal_count(expr.operand)
    if isinstance(expr, (And, Or, Xor)):
        return sum(literal_count(t) for t in expr.terms)
    raise TypeError(f"not a logic expression: {type(expr).__name__}")


def to_verilog(expr: LogicExpr) -> str:
    """Render as a Verilog rvalue, parenthesizing multi-literal products."""
    if isinstance(expr, Const):
        return "1'b1" if expr.value else "1'b0"
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Not):
        inner = to_verilog(expr.operand)
        if isinstance(expr.operand, Var):
            return f"~{inner}"
        return f"~({inner})"
    if isinstance(expr, And):
        return " & ".join(to_verilog(t) for t in expr.terms)
    if isinstance(expr, Xor):
        return " ^ ".join(to_verilog(t) for t in expr.terms)
    if isinstance(expr, Or):
        parts = []
        for t in expr.terms:
            rendered = to_verilog(t)
            if isinstance(t, (And, Xor)) and len(t.terms) > 1:
                rendered = f"({rendered})"
            parts.append(rendered)
        return " | ".join(parts)
    raise TypeError(f"not a logic expression: {type(expr).__name__}")


# -- Quine-McCluskey ----------------------------------------------------------


def _cube_covers(cube: str, minterm: int, n: int) -> bool:
    for i, ch in enumerate(cube):
        if ch == "-":
            continue
        bit = (minterm >> (n - 1 - i)) & 1
        if bit != int(ch):
            return False
    return True


def cube_literals(cube: str) -> int:
    return sum(1 for ch in cube if ch != "-")


def _merge(a: str, b: str) -> Optional[str]:
    diff = -1
    for i, (x, y) in enumerate(zip(a, b)):
        if x != y:
            if x == "-" or y == "-" or diff >= 0:
                return None
            diff = i
    if diff < 0:
        return None
    return a[:diff] + "-" + a[diff + 1 :]


def prime_implicants(n: int, on: list[int], dc: list[int]) -> list[str]:
    def to_cube(m: int) -> str:
        return format(m, f"0{n}b")

    current = {to_cube(m) for m in sorted(set(on) | set(dc))}
    primes: set[str] = set()
    while current:
        merged: set[str] = set()
        used: set[str] = set()
        cubes = sorted(current)
        by_ones: dict[int, list[str]] = {}
        for c in cubes:
            by_ones.setdefault(c.count("1"), []).append(c)
        for ones, group in by_ones.items():
            for a in group:
                for b in by_ones.get(ones + 1, ()):
                    m = _merge(a, b)
                    if m is not None:
                        merged.add(m)
                        used.add(a)
                        used.add(b)
        primes |= current - used
        current = merged
    return sorted(primes)


def cubes_to_expr(cubes: list[str], inputs: tuple[str, ...]) -> LogicExpr:
    if not cubes:
        return Const(0)
    terms: list[LogicExpr] = []
    for cube in sorted(cubes):
        literals: list[LogicExpr] = []
        for name, ch in zip(inputs, cube):
            if ch == "1":
                literals.append(Var(name))
            elif ch == "0":
                literals.append(Not(Var(name)))
        if not literals:
            return Const(1)  # the all-dash cube subsumes everything
        terms.append(literals[0] if len(literals) == 1 else And(tuple(literals)))
    return terms[0] if len(terms) == 1 else Or(tuple(terms))


def _exact_cover(primes: list[str], on: list[int], n: int) -> list[str]:
    """Minimum-cost prime cover: cost = (literals, terms, lexicographic cubes)."""
    cover_sets = {m: [i for i, p in enumerate(primes) if _cube_covers(p, m, n)] for m in on}

    chosen: set[int] = set()
    remaining = set(on)
    while True:
        forced = {
            covers[0]
            for m, covers in cover_sets.items()
            if m in remaining and len(covers) == 1
        }
        forced -= chosen
        if not forced:
            break
        chosen |= forced
        remaining = {
            m for m in remaining if not any(i in chosen for i in cover_sets[m])
        }

    if not remaining:
        return sorted(primes[i] for i in chosen)

    # branch on cheap, canonical primes first so good solutions prune early
    for m in cover_sets:
        cover_sets[m].sort(key=lambda i: (cube_literals(primes[i]), primes[i]))
    base_cost = sum(cube_literals(primes[i]) for i in chosen)
    best: Optional[tuple[int, int, tuple[str, ...]]] = None
    best_set: Optional[set[int]] = None

    def search(covered_by: set[int], uncovered: set[int], cost: int):
        nonlocal best, best_set
        if best is not None and cost > best[0]:
            return
        if not uncovered:
            cubes = tuple(sorted(primes[i] for i in covered_by))
            key = (cost, len(cubes), cubes)
            if best is None or key < best:
                best = key
                best_set = set(covered_by)
            return
        pick = min(uncovered, key=lambda m: len(cover_sets[m]))
        for i in cover_sets[pick]:
            if i in covered_by:
                continue
            nxt = {m for m in uncovered if not _cube_covers(primes[i], m, n)}
            search(covered_by | {i}, nxt, cost + cube_literals(primes[i]))

    search(set(chosen), set(remaining), base_cost)
    assert best_set is not None
    return sorted(primes[i] for i in best_set)


def table_on_dc_sets(table: TruthTable) -> tuple[int, list[int], list[int]]:
    """Validate a single-output, fully covered table; return (n, on, dc)."""
    if len(table.outputs) != 1:
        raise MultiOutputUnsupported("minimization handles single-output tables only")
    n = len(table.inputs)
    on: list[int] = []
    dc: list[int] = []
    seen: set[int] = set()
    for in_bits, out_bits in table.rows:
        if "x" in in_bits:
            raise LogicError("input-side don't-cares are not supported by minimization")
        idx = int("".join(in_bits), 2)
        seen.add(idx)
        if out_bits[0] == "1":
            on.append(idx)
        elif out_bits[0] == "x":
            dc.append(idx)
    if len(seen) != 2**n:
        raise LogicError(f"table must cover all {2**n} input combinations")
    return n, on, dc


def minimize_sop(table: TruthTable) -> LogicExpr:
    """Minimum sum-of-products expression equivalent on all defined rows."""
    n, on, dc = table_on_dc_sets(table)
    if not on:
        return Const(0)
    primes = [p for p in prime_implicants(n, on, dc) if any(_cube_covers(p, m, n) for m in on)]
    cover = _exact_cover(primes, on, n)
    return cubes_to_expr(cover, table.inputs)
