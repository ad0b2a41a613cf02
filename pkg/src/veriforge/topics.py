"""Structural topic and attribute detection for Verilog source.

A self-contained replacement for external-parser-based topic matching: the
bundled structural parser recovers always-blocks, case statements and
assignments, and rule-based detectors derive module topics (FSM, counter,
shift register, clock divider, ALU) and Verilog-specific attributes (reset
style, edge sensitivity, enable polarity).  Every detection carries evidence
pointing at a source line.

Source that tokenizes but does not parse structurally is classified Other
rather than rejected, so unusual files still flow through dataset pipelines.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Optional

from .errors import CorpusInvalid, VerilogSyntaxError
from .symbolic.header import find_module_header
from .verilog import ast
from .verilog.parser import parse_source
from .verilog.lexer import tokenize


class Topic(Enum):
    FSM = "fsm"
    COUNTER = "counter"
    SHIFT_REGISTER = "shift_register"
    CLOCK_DIVIDER = "clock_divider"
    ALU = "alu"
    OTHER = "other"


class Attribute(Enum):
    SYNC_RESET = "sync_reset"
    ASYNC_RESET = "async_reset"
    POS_EDGE = "pos_edge"
    NEG_EDGE = "neg_edge"
    ACTIVE_HIGH_ENABLE = "active_high_enable"
    ACTIVE_LOW_ENABLE = "active_low_enable"


@dataclass(frozen=True)
class Evidence:
    tag: str  # Topic.value or Attribute.value
    finding: str
    line: int


@dataclass(frozen=True)
class TopicProfile:
    topics: frozenset[Topic]
    attributes: frozenset[Attribute]
    evidence: tuple[Evidence, ...]

    def __post_init__(self):
        tags = {e.tag for e in self.evidence}
        for member in (*self.topics, *self.attributes):
            if member.value not in tags:
                raise ValueError(f"{member.value} detected without evidence")

    def tags(self) -> frozenset[str]:
        return frozenset(t.value for t in self.topics) | frozenset(a.value for a in self.attributes)

    def evidence_for(self, tag: str) -> list[Evidence]:
        return [e for e in self.evidence if e.tag == tag]


_CLOCKISH = re.compile(r"clk|clock", re.IGNORECASE)
_RESETISH = re.compile(r"rst|reset|clr|clear", re.IGNORECASE)
_STATEISH = re.compile(r"state", re.IGNORECASE)
_ENABLEISH = re.compile(
    r"^(en|ena|enable|ce|we|wen|oe)(_n|_b)?$|_en(a|able)?(_n|_b)?$|^en_", re.IGNORECASE
)


def _is_enableish(name: str) -> bool:
    return bool(_ENABLEISH.search(name)) and not _RESETISH.search(name)


def _idents(expr: Optional[ast.Expr]) -> list[ast.Ident]:
    found: list[ast.Ident] = []

    def walk(node):
        if node is None:
            return
        if isinstance(node, ast.Ident):
            found.append(node)
        elif isinstance(node, ast.Select):
            walk(node.base), walk(node.msb), walk(node.lsb)
        elif isinstance(node, ast.Concat):
            for p in node.parts:
                walk(p)
        elif isinstance(node, ast.Repeat):
            walk(node.count), walk(node.inner)
        elif isinstance(node, ast.Unary):
            walk(node.operand)
        elif isinstance(node, ast.Binary):
            walk(node.left), walk(node.right)
        elif isinstance(node, ast.Ternary):
            walk(node.cond), walk(node.if_true), walk(node.if_false)

    walk(expr)
    return found


def _lhs_name(lhs: ast.Expr) -> Optional[str]:
    if isinstance(lhs, ast.Ident):
        return lhs.name
    if isinstance(lhs, ast.Select) and isinstance(lhs.base, ast.Ident):
        return lhs.base.name
    return None


def _walk_stmts(stmt: Optional[ast.Stmt]):
    if stmt is None:
        return
    yield stmt
    if isinstance(stmt, ast.Block):
        for s in stmt.stmts:
            yield from _walk_stmts(s)
    elif isinstance(stmt, ast.If):
        yield from _walk_stmts(stmt.then)
        yield from _walk_stmts(stmt.orelse)
    elif isinstance(stmt, ast.Case):
        for arm in stmt.arms:
            yield from _walk_stmts(arm.body)
    elif isinstance(stmt, ast.For):
        yield from _walk_stmts(stmt.body)
    elif isinstance(stmt, (ast.Delay, ast.EventWait)):
        yield from _walk_stmts(stmt.stmt)


def _contains_arith(expr: Optional[ast.Expr], ops=("+", "-", "*", "/", "<<", ">>", "&", "|", "^")) -> bool:
    if expr is None:
        return False
    if isinstance(expr, ast.Binary):
        if expr.op in ops:
            return True
        return _contains_arith(expr.left, ops) or _contains_arith(expr.right, ops)
    if isinstance(expr, ast.Unary):
        return _contains_arith(expr.operand, ops)
    if isinstance(expr, ast.Ternary):
        return any(_contains_arith(e, ops) for e in (expr.cond, expr.if_true, expr.if_false))
    if isinstance(expr, (ast.Concat,)):
        return any(_contains_arith(p, ops) for p in expr.parts)
    return False


def _self_arith(rhs: ast.Expr, target: str, ops=("+", "-")) -> bool:
    """True when rhs contains a +/- node whose subtree reads the target."""

    def search(node) -> bool:
        if isinstance(node, ast.Binary):
            if node.op in ops and any(i.name == target for i in _idents(node)):
                return True
            return search(node.left) or search(node.right)
        if isinstance(node, ast.Unary):
            return search(node.operand)
        if isinstance(node, ast.Ternary):
            return search(node.cond) or search(node.if_true) or search(node.if_false)
        return False

    return search(rhs)


def _is_shift_pattern(rhs: ast.Expr, target: str) -> bool:
    if isinstance(rhs, ast.Concat):
        for part in rhs.parts:
            if isinstance(part, ast.Select) and isinstance(part.base, ast.Ident) and part.base.name == target:
                return True
        return False
    if isinstance(rhs, ast.Binary) and rhs.op in ("<<", ">>", "<<<", ">>>"):
        return any(i.name == target for i in _idents(rhs.left))
    if isinstance(rhs, ast.Ternary):
        return _is_shift_pattern(rhs.if_true, target) or _is_shift_pattern(rhs.if_false, target)
    return False


def _is_toggle(rhs: ast.Expr, target: str) -> bool:
    if isinstance(rhs, ast.Unary) and rhs.op in ("~", "!"):
        op = rhs.operand
        return isinstance(op, ast.Ident) and op.name == target
    if isinstance(rhs, ast.Ternary):
        return _is_toggle(rhs.if_true, target) or _is_toggle(rhs.if_false, target)
    return False


@dataclass
class _BlockInfo:
    always: ast.Always
    edges: list[ast.SensItem]
    assigns: list[ast.AssignStmt] = field(default_factory=list)


def analyze(source: str) -> TopicProfile:
    """Classify one source file.  Raises TokenizeError on lexical garbage."""
    tokens = tokenize(source)  # raises TokenizeError on unrecoverable input
    try:
        modules = parse_source(source)
    except VerilogSyntaxError as exc:
        evidence = (Evidence(Topic.OTHER.value, f"source did not parse structurally ({exc})", 1),)
        return TopicProfile(frozenset({Topic.OTHER}), frozenset(), evidence)
    del tokens

    evidence: list[Evidence] = []
    topics: set[Topic] = set()
    attributes: set[Attribute] = set()

    for mod in modules:
        loop_vars = {
            name
            for item in mod.items
            if isinstance(item, ast.NetDecl) and item.kind in ("integer", "genvar")
            for name in item.names
        }

        edge_blocks: list[_BlockInfo] = []
        cases: list[ast.Case] = []
        ifs: list[ast.If] = []
        all_assign_targets: list[tuple[str, int]] = []

        for item in mod.items:
            if isinstance(item, ast.ContinuousAssign):
                name = _lhs_name(item.lhs)
                if name:
                    all_assign_targets.append((name, item.line))
            if not isinstance(item, ast.Always):
                continue
            sens = item.sens
            edges = [s for s in sens.items if s.edge] if sens else []
            info = _BlockInfo(always=item, edges=edges)
            for stmt in _walk_stmts(item.body):
                if isinstance(stmt, ast.AssignStmt):
                    info.assigns.append(stmt)
                    name = _lhs_name(stmt.lhs)
                    if name:
                        all_assign_targets.append((name, stmt.line))
                elif isinstance(stmt, ast.Case):
                    cases.append(stmt)
                elif isinstance(stmt, ast.If):
                    ifs.append(stmt)
            if edges:
                edge_blocks.append(info)

        # --- topics ------------------------------------------------------
        state_cases = [
            c
            for c in cases
            if (n := _lhs_name(c.selector)) and _STATEISH.search(n)
        ]
        if state_cases:
            state_assigns = [
                (name, line) for name, line in all_assign_targets if _STATEISH.search(name)
            ]
            if state_assigns:
                case = state_cases[0]
                topics.add(Topic.FSM)
                evidence.append(
                    Evidence(Topic.FSM.value, f"case over state register '{_lhs_name(case.selector)}'", case.line)
                )
                name, line = state_assigns[0]
                evidence.append(Evidence(Topic.FSM.value, f"next-state assignment to '{name}'", line))

        counter_targets: set[str] = set()
        for info in edge_blocks:
            for stmt in info.assigns:
                target = _lhs_name(stmt.lhs)
                if not target or target in loop_vars:
                    continue
                if _self_arith(stmt.rhs, target):
                    topics.add(Topic.COUNTER)
                    counter_targets.add(target)
                    evidence.append(
                        Evidence(Topic.COUNTER.value, f"register '{target}' counts under a clock edge", stmt.line)
                    )
                if _is_shift_pattern(stmt.rhs, target):
                    topics.add(Topic.SHIFT_REGISTER)
                    evidence.append(
                        Evidence(Topic.SHIFT_REGISTER.value, f"concatenation/shift update of '{target}'", stmt.line)
                    )

        for info in edge_blocks:
            block_counters = {
                t
                for stmt in info.assigns
                if (t := _lhs_name(stmt.lhs)) and t not in loop_vars and _self_arith(stmt.rhs, t)
            }
            block_if_idents: set[str] = set()
            for s in _walk_stmts(info.always.body):
                if isinstance(s, ast.If):
                    block_if_idents |= {i.name for i in _idents(s.cond)}
            for stmt in info.assigns:
                target = _lhs_name(stmt.lhs)
                if not target or not _is_toggle(stmt.rhs, target):
                    continue
                gated = bool(counter_targets & (block_if_idents | block_counters))
                if _CLOCKISH.search(target) or gated:
                    topics.add(Topic.CLOCK_DIVIDER)
                    evidence.append(
                        Evidence(
                            Topic.CLOCK_DIVIDER.value,
                            f"toggle of '{target}' derives a divided clock",
                            stmt.line,
                        )
                    )

        for case in cases:
            sel = _lhs_name(case.selector)
            if sel and _STATEISH.search(sel):
                continue
            arith_arms = [
                arm
                for arm in case.arms
                if arm.body is not None
                and any(
                    isinstance(s, ast.AssignStmt) and _contains_arith(s.rhs)
                    for s in _walk_stmts(arm.body)
                )
            ]
            if len(arith_arms) >= 2:
                topics.add(Topic.ALU)
                label = sel if sel else "expression"
                evidence.append(
                    Evidence(Topic.ALU.value, f"case over '{label}' selects arithmetic/logic results", case.line)
                )

        # if/else-if opcode ladder form of an ALU: the same selector compared
        # against constants in >=2 branches that assign arithmetic results
        ladder_hits: dict[str, list[int]] = {}
        for node in ifs:
            cond = node.cond
            if not isinstance(cond, ast.Binary) or cond.op != "==":
                continue
            left, right = cond.left, cond.right
            if isinstance(right, ast.Ident) and isinstance(left, ast.Num):
                left, right = right, left
            if not (isinstance(left, ast.Ident) and isinstance(right, ast.Num)):
                continue
            sel = left.name
            if _STATEISH.search(sel) or _RESETISH.search(sel) or _is_enableish(sel):
                continue
            branch_arith = any(
                isinstance(s, ast.AssignStmt) and _contains_arith(s.rhs)
                for s in _walk_stmts(node.then)
            )
            if branch_arith:
                ladder_hits.setdefault(sel, []).append(node.line)
        for sel, hit_lines in ladder_hits.items():
            if len(hit_lines) >= 2:
                topics.add(Topic.ALU)
                evidence.append(
                    Evidence(Topic.ALU.value, f"if-chain over '{sel}' selects arithmetic results", hit_lines[0])
                )
                break

        # --- attributes ----------------------------------------------------
        for info in edge_blocks:
            reset_edges = [s for s in info.edges if _RESETISH.search(s.signal)]
            clock_edges = [s for s in info.edges if not _RESETISH.search(s.signal)]
            if reset_edges and clock_edges:
                attributes.add(Attribute.ASYNC_RESET)
                evidence.append(
                    Evidence(
                        Attribute.ASYNC_RESET.value,
                        f"reset '{reset_edges[0].signal}' in the sensitivity list",
                        info.always.line,
                    )
                )
            clock = clock_edges[0] if clock_edges else (info.edges[0] if info.edges else None)
            if clock is not None:
                attr = Attribute.POS_EDGE if clock.edge == "posedge" else Attribute.NEG_EDGE
                attributes.add(attr)
                evidence.append(
                    Evidence(attr.value, f"{clock.edge} {clock.signal} clocking", info.always.line)
                )

            body_ifs = [s for s in _walk_stmts(info.always.body) if isinstance(s, ast.If)]
            for node in body_ifs:
                names = {i.name for i in _idents(node.cond)}
                reset_names = {n for n in names if _RESETISH.search(n)}
                if reset_names and not reset_edges:
                    attributes.add(Attribute.SYNC_RESET)
                    evidence.append(
                        Evidence(
                            Attribute.SYNC_RESET.value,
                            f"reset '{sorted(reset_names)[0]}' tested inside a clock-edge-only block",
                            node.line,
                        )
                    )
                polarity = _enable_polarity(node.cond)
                if polarity is not None:
                    attr, name = polarity
                    attributes.add(attr)
                    evidence.append(
                        Evidence(attr.value, f"enable guard on '{name}'", node.line)
                    )

    if not topics:
        topics.add(Topic.OTHER)
        evidence.append(Evidence(Topic.OTHER.value, "no structural topic patterns matched", 1))

    return TopicProfile(frozenset(topics), frozenset(attributes), tuple(evidence))


def _enable_polarity(cond: ast.Expr) -> Optional[tuple[Attribute, str]]:
    if isinstance(cond, ast.Ident) and _is_enableish(cond.name):
        return Attribute.ACTIVE_HIGH_ENABLE, cond.name
    if isinstance(cond, ast.Unary) and cond.op in ("!", "~"):
        op = cond.operand
        if isinstance(op, ast.Ident) and _is_enableish(op.name):
            return Attribute.ACTIVE_LOW_ENABLE, op.name
    if isinstance(cond, ast.Binary) and cond.op == "==":
        left, right = cond.left, cond.right
        if isinstance(right, ast.Ident):
            left, right = right, left
        if isinstance(left, ast.Ident) and _is_enableish(left.name) and isinstance(right, ast.Num):
            if right.value == 0:
                return Attribute.ACTIVE_LOW_ENABLE, left.name
            if right.value == 1:
                return Attribute.ACTIVE_HIGH_ENABLE, left.name
    return None


# -- exemplar store -----------------------------------------------------------

VALID_SOURCES = ("textbook", "manual")


@dataclass(frozen=True)
class Exemplar:
    id: str
    topic: str  # a Topic/Attribute value, or a custom store tag
    instruction: str
    code: str
    source: str = "manual"


def load_exemplar_store(
    directory: str | Path,
    verify: Optional[Callable[[str], bool]] = None,
) -> list[Exemplar]:
    """Load every ``*.jsonl`` exemplar file under ``directory``.

    ``verify`` is the compile check applied to each exemplar's code at load
    time (pass None to skip, e.g. when the store was validated beforehand).
    """
    directory = Path(directory)
    exemplars: list[Exemplar] = []
    seen_ids: set[str] = set()
    for path in sorted(directory.glob("*.jsonl")):
        for lineno, line in enumerate(path.read_text().splitlines(), start=1):
            if not line.strip():
                continue
            record = json.loads(line)
            if record.get("_meta"):
                continue
            ex = Exemplar(
                id=str(record["id"]),
                topic=str(record["topic"]),
                instruction=record["instruction"],
                code=record["code"],
                source=record.get("source", "manual"),
            )
            where = f"{path.name}:{lineno}"
            if ex.id in seen_ids:
                raise CorpusInvalid(f"{where}: duplicate exemplar id {ex.id!r}")
            if not ex.instruction.strip():
                raise CorpusInvalid(f"{where}: exemplar instruction is empty")
            if find_module_header(ex.instruction) is None:
                raise CorpusInvalid(f"{where}: exemplar instruction lacks a module header")
            if ex.source not in VALID_SOURCES:
                raise CorpusInvalid(f"{where}: unknown source {ex.source!r}")
            if verify is not None and not verify(ex.code):
                raise CorpusInvalid(f"{where}: exemplar code failed compile verification")
            seen_ids.add(ex.id)
            exemplars.append(ex)
    return exemplars


def match_exemplars(profile: TopicProfile, store: Iterable[Exemplar]) -> list[Exemplar]:
    """Exemplars whose tag matches the profile, best matches first.

    Ordering is total: (number of matching tags, descending) then exemplar id
    ascending.  An untagged profile (Other only) matches nothing.
    """
    tags = profile.tags() - {Topic.OTHER.value}
    scored = []
    for ex in store:
        count = 1 if ex.topic in tags else 0
        if count:
            scored.append((-count, ex.id, ex))
    scored.sort(key=lambda t: (t[0], t[1]))
    return [ex for _, _, ex in scored]
