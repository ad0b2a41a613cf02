"""Scenario-driven simulator for a small synthesizable Verilog subset.

Executes one module (no hierarchy) under an explicit stimulus scenario:
a list of steps, each setting inputs, optionally pulsing the clock, and
checking expected output values.  Signals are whole-value four-state-lite:
a Python int, or None for unknown (x).  Registers start unknown, inputs
start at 0 unless the scenario sets them.

Semantics covered: continuous assigns, combinational always blocks (settled
to a fixed point), and edge-triggered always blocks with blocking and
nonblocking assignment.  Edges on any signal listed in a sensitivity list
fire the block, so asynchronous resets behave correctly without a clock
event.  Constructs outside the subset raise SimulationError.

Usable as a command: ``veriforge-sim dut.v --scenario steps.json`` (or
``python -m veriforge.verilog.sim``).  Mismatches are printed one per line
starting with ``MISMATCH``; exit status is 0 when all checks pass, 1 on any
mismatch, 2 on a simulation or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from ..errors import SimulationError, TokenizeError, VerilogSyntaxError
from . import ast
from .parser import parse_source

_SETTLE_LIMIT = 100
_CASCADE_LIMIT = 100


def _const_eval(expr: ast.Expr, params: dict[str, int]) -> int:
    value = _eval(expr, params, {}, {})
    if value is None:
        raise SimulationError(f"line {expr.line}: expected a constant expression")
    return value


def _mask(value: Optional[int], width: int) -> Optional[int]:
    if value is None:
        return None
    return value & ((1 << width) - 1)


class VerilogSim:
    def __init__(self, module: ast.Module):
        self.module = module
        self.params: dict[str, int] = {}
        self.widths: dict[str, int] = {}
        self.inputs: set[str] = set()
        self.outputs: set[str] = set()
        self.assigns: list[ast.ContinuousAssign] = []
        self.comb_blocks: list[ast.Always] = []
        self.edge_blocks: list[ast.Always] = []
        self.env: dict[str, Optional[int]] = {}
        self._elaborate()
        for name in self.widths:
            self.env[name] = 0 if name in self.inputs else None
        self._apply_initials()
        self._settle()

    # -- elaboration -------------------------------------------------------

    def _declare(self, name: str, msb: Optional[ast.Expr], lsb: Optional[ast.Expr]):
        width = 1
        if msb is not None:
            hi = _const_eval(msb, self.params)
            lo = _const_eval(lsb, self.params) if lsb is not None else hi
            width = abs(hi - lo) + 1
        self.widths[name] = max(width, self.widths.get(name, 1))

    def _elaborate(self):
        mod = self.module
        for item in mod.items:
            if isinstance(item, ast.ParamDecl):
                for name, expr in item.assigns:
                    self.params[name] = _const_eval(expr, self.params)
        for port in mod.ports:
            if port.direction:
                self._declare(port.name, port.msb, port.lsb)
                (self.inputs if port.direction == "input" else self.outputs).add(port.name)
            else:
                self.widths.setdefault(port.name, 1)
        initials: list[ast.Initial] = []
        for item in mod.items:
            if isinstance(item, ast.NetDecl):
                kind = item.kind.split()[0]
                for name in item.names:
                    self._declare(name, item.msb, item.lsb)
                    if kind == "input":
                        self.inputs.add(name)
                        self.outputs.discard(name)
                    elif kind in ("output", "inout"):
                        self.outputs.add(name)
            elif isinstance(item, ast.ContinuousAssign):
                self.assigns.append(item)
            elif isinstance(item, ast.Always):
                if item.sens is None:
                    raise SimulationError(f"line {item.line}: plain 'always' is not simulatable")
                if item.sens.star or all(s.edge is None for s in item.sens.items):
                    self.comb_blocks.append(item)
                elif all(s.edge is not None for s in item.sens.items):
                    self.edge_blocks.append(item)
                else:
                    raise SimulationError(f"line {item.line}: mixed edge/level sensitivity list")
            elif isinstance(item, ast.Initial):
                initials.append(item)
            elif isinstance(item, ast.Instance):
                raise SimulationError(f"line {item.line}: module instances are not simulatable")
        self._initials = initials

    def _apply_initials(self):
        for item in self.module.items:
            if isinstance(item, ast.NetDecl) and item.inits:
                for name, init in zip(item.names, item.inits):
                    if init is not None:
                        self.env[name] = _mask(self._eval(init), self.widths[name])
        for block in self._initials:
            nba: list[tuple[str, int, int, Optional[int]]] = []
            self._exec(block.body, nba)
            self._commit(nba)

    # -- expression evaluation ----------------------------------------------

    def _eval(self, expr: ast.Expr) -> Optional[int]:
        return _eval(expr, self.params, self.env, self.widths)

    def width_of(self, expr: ast.Expr) -> int:
        return _width_of(expr, self.params, self.widths)

    # -- statement execution -------------------------------------------------

    def _store(self, lhs: ast.Expr, value: Optional[int], nba: Optional[list]):
        """Assign to an identifier or bit/range select; nba=None is blocking."""
        if isinstance(lhs, ast.Ident):
            name = lhs.name
            if name in self.params:
                raise SimulationError(f"line {lhs.line}: assignment to parameter {name}")
            width = self.widths.get(name)
            if width is None:
                self.widths[name] = 1
                width = 1
            masked = _mask(value, width)
            if nba is None:
                self.env[name] = masked
            else:
                nba.append((name, 0, width, masked))
            return
        if isinstance(lhs, ast.Select) and isinstance(lhs.base, ast.Ident):
            name = lhs.base.name
            width = self.widths.get(name, 1)
            hi = self._eval(lhs.msb)
            lo = self._eval(lhs.lsb) if lhs.lsb is not None else hi
            if hi is None or lo is None:
                raise SimulationError(f"line {lhs.line}: unknown index in assignment to {name}")
            lo, hi = min(lo, hi), max(lo, hi)
            sel_width = hi - lo + 1
            masked = _mask(value, sel_width)
            if nba is None:
                cur = self.env.get(name)
                if cur is None or masked is None:
                    # an unknown part-select poisons the whole value
                    self.env[name] = None
                else:
                    keep = cur & ~(((1 << sel_width) - 1) << lo)
                    self.env[name] = keep | (masked << lo)
            else:
                nba.append((name, lo, sel_width, masked))
            return
        if isinstance(lhs, ast.Concat):
            if value is None:
                for part in lhs.parts:
                    self._store(part, None, nba)
                return
            shift = 0
            for part in reversed(lhs.parts):
                w = self.width_of(part)
                self._store(part, (value >> shift) & ((1 << w) - 1), nba)
                shift += w
            return
        raise SimulationError(f"line {getattr(lhs, 'line', 0)}: unsupported assignment target")

    def _commit(self, nba: list[tuple[str, int, int, Optional[int]]]):
        for name, lo, sel_width, value in nba:
            width = self.widths.get(name, 1)
            if sel_width >= width and lo == 0:
                self.env[name] = _mask(value, width)
                continue
            cur = self.env.get(name)
            if cur is None or value is None:
                self.env[name] = None
            else:
                keep = cur & ~(((1 << sel_width) - 1) << lo)
                self.env[name] = keep | (value << lo)

    def _exec(self, stmt: Optional[ast.Stmt], nba: list):
        if stmt is None or isinstance(stmt, ast.NullStmt):
            return
        if isinstance(stmt, ast.Block):
            for s in stmt.stmts:
                self._exec(s, nba)
            return
        if isinstance(stmt, ast.AssignStmt):
            value = self._eval(stmt.rhs)
            self._store(stmt.lhs, value, None if stmt.blocking else nba)
            return
        if isinstance(stmt, ast.If):
            cond = self._eval(stmt.cond)
            if cond:  # x/0 both fall to else, like a 1-only truth check
                self._exec(stmt.then, nba)
            else:
                self._exec(stmt.orelse, nba)
            return
        if isinstance(stmt, ast.Case):
            self._exec_case(stmt, nba)
            return
        if isinstance(stmt, ast.TaskCall):
            return  # $display and friends are no-ops here
        if isinstance(stmt, ast.Delay):
            raise SimulationError(f"line {stmt.line}: delays are not supported in design blocks")
        if isinstance(stmt, ast.EventWait):
            raise SimulationError(f"line {stmt.line}: event waits are not supported in design blocks")
        if isinstance(stmt, ast.For):
            raise SimulationError(f"line {stmt.line}: for loops are not supported in design blocks")
        raise SimulationError(f"unsupported statement {type(stmt).__name__}")

    def _exec_case(self, stmt: ast.Case, nba: list):
        selector = self._eval(stmt.selector)
        default: Optional[ast.CaseArm] = None
        for arm in stmt.arms:
            if arm.labels is None:
                default = arm
                continue
            for label in arm.labels:
                value = self._eval(label)
                if selector is not None and value is not None and selector == value:
                    self._exec(arm.body, nba)
                    return
                if selector is None and value is None:
                    self._exec(arm.body, nba)
                    return
        if default is not None:
            self._exec(default.body, nba)

    # -- scheduling ----------------------------------------------------------

    def _eval_comb_pass(self) -> bool:
        changed = False
        for item in self.assigns:
            value = self._eval(item.rhs)
            before = dict(self.env)
            self._store(item.lhs, value, None)
            changed |= before != self.env
        for block in self.comb_blocks:
            before = dict(self.env)
            nba: list = []
            self._exec(block.body, nba)
            self._commit(nba)
            changed |= before != self.env
        return changed

    def _settle(self):
        for _ in range(_SETTLE_LIMIT):
            if not self._eval_comb_pass():
                return
        raise SimulationError("combinational logic did not settle (feedback loop?)")

    def _fire_edges(self, edges: dict[str, tuple[Optional[int], Optional[int]]]):
        """Run edge-triggered blocks whose sensitivity matches a transition."""
        for _ in range(_CASCADE_LIMIT):
            to_fire = []
            for block in self.edge_blocks:
                assert block.sens is not None
                for item in block.sens.items:
                    if item.signal not in edges:
                        continue
                    old, new = edges[item.signal]
                    if item.edge == "posedge" and new == 1 and old != 1:
                        to_fire.append(block)
                        break
                    if item.edge == "negedge" and new == 0 and old != 0:
                        to_fire.append(block)
                        break
            if not to_fire:
                break
            before = dict(self.env)
            nba: list = []
            for block in to_fire:
                self._exec(block.body, nba)
            self._commit(nba)
            self._settle()
            edges = {
                name: (before.get(name), self.env.get(name))
                for name in self.env
                if before.get(name) != self.env.get(name)
            }
            if not edges:
                break
        else:
            raise SimulationError("edge cascade did not terminate (derived-clock loop?)")

    # -- public API ------------------------------------------------------------

    def apply(self, changes: dict[str, Optional[int]]):
        """Drive input values; fires edge blocks and settles combinational logic."""
        before = dict(self.env)
        for name, value in changes.items():
            self.env[name] = _mask(value, self.widths.get(name, 1))
        self._settle()
        # edge candidates include combinationally derived signals (gated clocks)
        edges = {
            name: (before.get(name), self.env.get(name))
            for name in self.env
            if before.get(name) != self.env.get(name)
        }
        if edges:
            self._fire_edges(edges)

    def tick(self, clock: str = "clk", cycles: int = 1):
        for _ in range(cycles):
            self.apply({clock: 0})
            self.apply({clock: 1})
        self.apply({clock: 0})

    def get(self, name: str) -> Optional[int]:
        if name not in self.env:
            raise SimulationError(f"unknown signal {name!r}")
        return self.env[name]


# -- scenario running ------------------------------------------------------


def _parse_value(raw) -> Optional[int]:
    if raw is None or raw == "x" or raw == "X":
        return None
    if isinstance(raw, bool):
        return int(raw)
    if isinstance(raw, int):
        return raw
    return int(str(raw), 0)


def pick_module(modules: list[ast.Module], name: Optional[str]) -> ast.Module:
    if name:
        for mod in modules:
            if mod.name == name:
                return mod
        raise SimulationError(f"module {name!r} not found")
    if len(modules) == 1:
        return modules[0]
    raise SimulationError("multiple modules in file; scenario must name one")


def run_scenario(source: str, scenario: dict) -> list[str]:
    """Execute a stimulus scenario; returns mismatch descriptions."""
    modules = parse_source(source)
    sim = VerilogSim(pick_module(modules, scenario.get("module")))
    clock = scenario.get("clock", "clk")
    mismatches = []
    for i, step in enumerate(scenario.get("steps", [])):
        sets = {name: _parse_value(v) for name, v in step.get("set", {}).items()}
        if sets:
            sim.apply(sets)
        ticks = int(step.get("tick", 0))
        if ticks:
            sim.tick(clock, ticks)
        for name, raw in step.get("expect", {}).items():
            expected = _parse_value(raw)
            actual = sim.get(name)
            if actual != expected:
                fmt = lambda v: "x" if v is None else str(v)
                mismatches.append(
                    f"MISMATCH step={i} signal={name} expected={fmt(expected)} actual={fmt(actual)}"
                )
    return mismatches


# -- standalone expression/width evaluation ----------------------------------


def _width_of(expr: ast.Expr, params: dict[str, int], widths: dict[str, int]) -> int:
    if isinstance(expr, ast.Num):
        return expr.width or 32
    if isinstance(expr, ast.Ident):
        if expr.name in params:
            return 32
        return widths.get(expr.name, 1)
    if isinstance(expr, ast.Select):
        if expr.lsb is None:
            return 1
        hi = _eval(expr.msb, params, {}, widths)
        lo = _eval(expr.lsb, params, {}, widths)
        if hi is None or lo is None:
            return 1
        return abs(hi - lo) + 1
    if isinstance(expr, ast.Concat):
        return sum(_width_of(p, params, widths) for p in expr.parts)
    if isinstance(expr, ast.Repeat):
        count = _eval(expr.count, params, {}, widths) or 0
        return count * _width_of(expr.inner, params, widths)
    if isinstance(expr, ast.Unary):
        if expr.op in ("!", "&", "|", "^", "~&", "~|", "~^", "^~"):
            return 1
        return _width_of(expr.operand, params, widths)
    if isinstance(expr, ast.Binary):
        if expr.op in ("==", "!=", "===", "!==", "<", "<=", ">", ">=", "&&", "||"):
            return 1
        if expr.op in ("<<", ">>", "<<<", ">>>"):
            return _width_of(expr.left, params, widths)
        return max(_width_of(expr.left, params, widths), _width_of(expr.right, params, widths))
    if isinstance(expr, ast.Ternary):
        return max(_width_of(expr.if_true, params, widths), _width_of(expr.if_false, params, widths))
    return 1


def _eval(
    expr: ast.Expr,
    params: dict[str, int],
    env: dict[str, Optional[int]],
    widths: dict[str, int],
) -> Optional[int]:
    if isinstance(expr, ast.Num):
        return expr.value
    if isinstance(expr, ast.Ident):
        if expr.name in params:
            return params[expr.name]
        if expr.name in env:
            return env[expr.name]
        raise SimulationError(f"line {expr.line}: unknown identifier {expr.name!r}")
    if isinstance(expr, ast.Select):
        base = _eval(expr.base, params, env, widths)
        hi = _eval(expr.msb, params, env, widths)
        if expr.lsb is None:
            if base is None or hi is None:
                return None
            return (base >> hi) & 1
        lo = _eval(expr.lsb, params, env, widths)
        if base is None or hi is None or lo is None:
            return None
        lo, hi = min(lo, hi), max(lo, hi)
        return (base >> lo) & ((1 << (hi - lo + 1)) - 1)
    if isinstance(expr, ast.Concat):
        value = 0
        for part in expr.parts:
            pv = _eval(part, params, env, widths)
            if pv is None:
                return None
            w = _width_of(part, params, widths)
            value = (value << w) | (pv & ((1 << w) - 1))
        return value
    if isinstance(expr, ast.Repeat):
        count = _eval(expr.count, params, env, widths)
        inner = _eval(expr.inner, params, env, widths)
        if count is None or inner is None:
            return None
        w = _width_of(expr.inner, params, widths)
        value = 0
        for _ in range(count):
            value = (value << w) | inner
        return value
    if isinstance(expr, ast.Unary):
        v = _eval(expr.operand, params, env, widths)
        w = _width_of(expr.operand, params, widths)
        if v is None:
            return None
        full = (1 << w) - 1
        if expr.op == "+":
            return v
        if expr.op == "-":
            return (-v) & full
        if expr.op == "~":
            return (~v) & full
        if expr.op == "!":
            return int(v == 0)
        if expr.op == "&":
            return int(v == full)
        if expr.op == "~&":
            return int(v != full)
        if expr.op == "|":
            return int(v != 0)
        if expr.op == "~|":
            return int(v == 0)
        if expr.op in ("^", "~^", "^~"):
            parity = bin(v).count("1") & 1
            return parity if expr.op == "^" else 1 - parity
        raise SimulationError(f"unsupported unary operator {expr.op!r}")
    if isinstance(expr, ast.Binary):
        left = _eval(expr.left, params, env, widths)
        right = _eval(expr.right, params, env, widths)
        op = expr.op
        if op == "&&":
            if left == 0 or right == 0:
                return 0
            if left is None or right is None:
                return None
            return 1
        if op == "||":
            if (left is not None and left != 0) or (right is not None and right != 0):
                return 1
            if left is None or right is None:
                return None
            return 0
        if op == "===":
            return int(left == right)
        if op == "!==":
            return int(left != right)
        if left is None or right is None:
            return None
        if op == "+":
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            return left // right if right else None
        if op == "%":
            return left % right if right else None
        if op == "&":
            return left & right
        if op == "|":
            return left | right
        if op in ("^",):
            return left ^ right
        if op in ("~^", "^~"):
            w = max(_width_of(expr.left, params, widths), _width_of(expr.right, params, widths))
            return (~(left ^ right)) & ((1 << w) - 1)
        if op == "==":
            return int(left == right)
        if op == "!=":
            return int(left != right)
        if op == "<":
            return int(left < right)
        if op == "<=":
            return int(left <= right)
        if op == ">":
            return int(left > right)
        if op == ">=":
            return int(left >= right)
        if op in ("<<", "<<<"):
            return left << right
        if op in (">>", ">>>"):
            return left >> right
        if op == "**":
            return left**right
        raise SimulationError(f"unsupported binary operator {op!r}")
    if isinstance(expr, ast.Ternary):
        cond = _eval(expr.cond, params, env, widths)
        if cond is None:
            t = _eval(expr.if_true, params, env, widths)
            f = _eval(expr.if_false, params, env, widths)
            return t if t == f else None
        branch = expr.if_true if cond else expr.if_false
        return _eval(branch, params, env, widths)
    raise SimulationError(f"unsupported expression {type(expr).__name__}")


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="veriforge-sim", description=__doc__.splitlines()[0])
    ap.add_argument("source", help="Verilog file containing the module under test")
    ap.add_argument("--scenario", required=True, help="JSON stimulus/expectation file")
    ap.add_argument("--module", help="module name (defaults to the file's only module)")
    args = ap.parse_args(argv)
    try:
        scenario = json.loads(Path(args.scenario).read_text())
        if args.module:
            scenario["module"] = args.module
        mismatches = run_scenario(Path(args.source).read_text(), scenario)
    except (SimulationError, VerilogSyntaxError, TokenizeError, OSError, ValueError) as exc:
        print(f"Error: {exc}", file=sys.stderr)
        return 2
    for line in mismatches:
        print(line)
    if mismatches:
        print(f"{len(mismatches)} mismatch(es)")
        return 1
    print("all checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
