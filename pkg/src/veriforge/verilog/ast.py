"""AST node types for the structural Verilog subset."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

# -- expressions --------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    value: Optional[int]  # None encodes x/z digits
    width: Optional[int]
    line: int = 0


@dataclass(frozen=True)
class Ident:
    name: str
    line: int = 0


@dataclass(frozen=True)
class Select:
    base: "Expr"
    msb: "Expr"
    lsb: Optional["Expr"]  # None for a single bit select
    line: int = 0


@dataclass(frozen=True)
class Concat:
    parts: tuple["Expr", ...]
    line: int = 0


@dataclass(frozen=True)
class Repeat:
    count: "Expr"
    inner: Concat
    line: int = 0


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    line: int = 0


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    line: int = 0


@dataclass(frozen=True)
class Ternary:
    cond: "Expr"
    if_true: "Expr"
    if_false: "Expr"
    line: int = 0


Expr = Union[Num, Ident, Select, Concat, Repeat, Unary, Binary, Ternary]

# -- statements ---------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    stmts: tuple["Stmt", ...]
    label: Optional[str] = None
    line: int = 0


@dataclass(frozen=True)
class If:
    cond: Expr
    then: Optional["Stmt"]
    orelse: Optional["Stmt"]
    line: int = 0


@dataclass(frozen=True)
class CaseArm:
    labels: Optional[tuple[Expr, ...]]  # None = default
    body: Optional["Stmt"]
    line: int = 0


@dataclass(frozen=True)
class Case:
    kind: str  # case | casez | casex
    selector: Expr
    arms: tuple[CaseArm, ...]
    line: int = 0


@dataclass(frozen=True)
class AssignStmt:
    lhs: Expr
    rhs: Expr
    blocking: bool
    line: int = 0


@dataclass(frozen=True)
class For:
    init: AssignStmt
    cond: Expr
    step: AssignStmt
    body: "Stmt"
    line: int = 0


@dataclass(frozen=True)
class TaskCall:
    name: str
    args: tuple[Expr, ...]
    line: int = 0


@dataclass(frozen=True)
class Delay:
    amount: Expr
    stmt: Optional["Stmt"]
    line: int = 0


@dataclass(frozen=True)
class EventWait:
    sens: "SensList"
    stmt: Optional["Stmt"]
    line: int = 0


@dataclass(frozen=True)
class NullStmt:
    line: int = 0


Stmt = Union[Block, If, Case, AssignStmt, For, TaskCall, Delay, EventWait, NullStmt]

# -- module items -------------------------------------------------------------


@dataclass(frozen=True)
class SensItem:
    edge: Optional[str]  # posedge | negedge | None (level)
    signal: str


@dataclass(frozen=True)
class SensList:
    items: tuple[SensItem, ...]
    star: bool = False


@dataclass(frozen=True)
class PortDecl:
    direction: Optional[str]  # input | output | inout | None (non-ANSI name)
    net: Optional[str]  # wire | reg | logic
    msb: Optional[Expr]
    lsb: Optional[Expr]
    name: str
    line: int = 0


@dataclass(frozen=True)
class NetDecl:
    kind: str  # wire | reg | logic | integer | genvar | "input [wire]" etc.
    msb: Optional[Expr]
    lsb: Optional[Expr]
    names: tuple[str, ...]
    inits: tuple[Optional[Expr], ...] = ()  # parallel to names when non-empty
    line: int = 0


@dataclass(frozen=True)
class ParamDecl:
    kind: str  # parameter | localparam
    assigns: tuple[tuple[str, Expr], ...]
    line: int = 0


@dataclass(frozen=True)
class ContinuousAssign:
    lhs: Expr
    rhs: Expr
    line: int = 0


@dataclass(frozen=True)
class Always:
    sens: Optional[SensList]  # None for plain `always` (e.g. clock generators)
    body: Stmt
    line: int = 0


@dataclass(frozen=True)
class Initial:
    body: Stmt
    line: int = 0


@dataclass(frozen=True)
class Instance:
    module: str
    name: str
    # (port_name or None for positional, expr or None for unconnected)
    connections: tuple[tuple[Optional[str], Optional[Expr]], ...]
    line: int = 0


Item = Union[PortDecl, NetDecl, ParamDecl, ContinuousAssign, Always, Initial, Instance]


@dataclass
class Module:
    name: str
    ports: tuple[PortDecl, ...]
    items: tuple[Item, ...] = field(default_factory=tuple)
    line: int = 0
