"""Recursive-descent parser for the structural Verilog subset.

Covers module headers (ANSI and non-ANSI), net/reg/integer declarations,
parameters, continuous assigns, always/initial blocks with the usual
behavioral statements, and module instantiation — enough for small design
files and generated testbenches.  Anything outside the subset raises
VerilogSyntaxError with a line number.
"""

from __future__ import annotations

from typing import Optional

from ..errors import VerilogSyntaxError
from . import ast
from .lexer import Token, parse_sized_number, tokenize

_UNARY_OPS = {"+", "-", "!", "~", "&", "|", "^", "~&", "~|", "~^", "^~"}

# binary operators by increasing precedence tier
_BINARY_TIERS = [
    {"||"},
    {"&&"},
    {"|"},
    {"^", "^~", "~^"},
    {"&"},
    {"==", "!=", "===", "!=="},
    {"<", "<=", ">", ">="},
    {"<<", ">>", "<<<", ">>>"},
    {"+", "-"},
    {"*", "/", "%"},
    {"**"},
]


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing --------------------------------------------------

    @property
    def cur(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.cur
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at_kw(self, *words: str) -> bool:
        return self.cur.kind == "kw" and self.cur.value in words

    def at_op(self, *ops: str) -> bool:
        return self.cur.kind == "op" and self.cur.value in ops

    def expect_op(self, op: str) -> Token:
        if not self.at_op(op):
            raise VerilogSyntaxError(f"expected {op!r}, found {self.cur.value!r}", self.cur.line)
        return self.advance()

    def expect_kw(self, word: str) -> Token:
        if not self.at_kw(word):
            raise VerilogSyntaxError(f"expected {word!r}, found {self.cur.value!r}", self.cur.line)
        return self.advance()

    def expect_ident(self) -> Token:
        if self.cur.kind != "ident":
            raise VerilogSyntaxError(f"expected identifier, found {self.cur.value!r}", self.cur.line)
        return self.advance()

    # -- top level ---------------------------------------------------------

    def parse_source(self) -> list[ast.Module]:
        modules = []
        while self.cur.kind != "eof":
            if self.at_kw("module"):
                modules.append(self.parse_module())
            else:
                raise VerilogSyntaxError(
                    f"unexpected {self.cur.value!r} at top level; expected 'module'", self.cur.line
                )
        return modules

    def parse_module(self) -> ast.Module:
        line = self.expect_kw("module").line
        name = self.expect_ident().value
        if self.at_op("#"):
            self.advance()
            self.expect_op("(")
            self.parse_param_overrides()
            self.expect_op(")")
        ports: list[ast.PortDecl] = []
        if self.at_op("("):
            self.advance()
            if not self.at_op(")"):
                ports = self.parse_port_list()
            self.expect_op(")")
        self.expect_op(";")
        items: list[ast.Item] = []
        while not self.at_kw("endmodule"):
            if self.cur.kind == "eof":
                raise VerilogSyntaxError(f"missing 'endmodule' for module {name}", line)
            items.append(self.parse_item())
        self.advance()
        return ast.Module(name=name, ports=tuple(ports), items=tuple(items), line=line)

    def parse_param_overrides(self) -> list[tuple[str, ast.Expr]]:
        overrides = []
        while True:
            if self.at_op("."):
                self.advance()
                pname = self.expect_ident().value
                self.expect_op("(")
                overrides.append((pname, self.parse_expr()))
                self.expect_op(")")
            else:
                if self.at_kw("parameter"):
                    self.advance()
                pname = self.expect_ident().value
                self.expect_op("=")
                overrides.append((pname, self.parse_expr()))
            if self.at_op(","):
                self.advance()
                continue
            return overrides

    def parse_range(self) -> tuple[Optional[ast.Expr], Optional[ast.Expr]]:
        if not self.at_op("["):
            return None, None
        self.advance()
        msb = self.parse_expr()
        self.expect_op(":")
        lsb = self.parse_expr()
        self.expect_op("]")
        return msb, lsb

    def parse_port_list(self) -> list[ast.PortDecl]:
        ports = []
        direction: Optional[str] = None
        net: Optional[str] = None
        msb: Optional[ast.Expr] = None
        lsb: Optional[ast.Expr] = None
        while True:
            line = self.cur.line
            if self.at_kw("input", "output", "inout"):
                direction = self.advance().value
                net = None
                msb = lsb = None
                if self.at_kw("wire", "reg", "logic"):
                    net = self.advance().value
                if self.at_kw("signed"):
                    self.advance()
                msb, lsb = self.parse_range()
            elif direction is None and self.cur.kind == "ident":
                # non-ANSI list: bare names only
                pass
            ports.append(ast.PortDecl(direction, net, msb, lsb, self.expect_ident().value, line))
            if self.at_op(","):
                self.advance()
                continue
            return ports

    def parse_item(self) -> ast.Item:
        tok = self.cur
        if self.at_kw("input", "output", "inout"):
            return self.parse_nonansi_port_decl()
        if self.at_kw("wire", "reg", "logic", "integer", "genvar"):
            return self.parse_net_decl()
        if self.at_kw("parameter", "localparam"):
            return self.parse_param_decl()
        if self.at_kw("assign"):
            return self.parse_continuous_assign()
        if self.at_kw("always"):
            return self.parse_always()
        if self.at_kw("initial"):
            self.advance()
            return ast.Initial(body=self.parse_stmt(), line=tok.line)
        if tok.kind == "ident":
            return self.parse_instance()
        raise VerilogSyntaxError(f"unexpected {tok.value!r} inside module", tok.line)

    def parse_nonansi_port_decl(self) -> ast.NetDecl:
        line = self.cur.line
        direction = self.advance().value
        if self.at_kw("wire", "reg", "logic"):
            direction = f"{direction} {self.advance().value}"
        if self.at_kw("signed"):
            self.advance()
        msb, lsb = self.parse_range()
        names = [self.expect_ident().value]
        while self.at_op(","):
            self.advance()
            names.append(self.expect_ident().value)
        self.expect_op(";")
        return ast.NetDecl(kind=direction, msb=msb, lsb=lsb, names=tuple(names), line=line)

    def parse_net_decl(self) -> ast.Item:
        line = self.cur.line
        kind = self.advance().value
        if self.at_kw("signed"):
            self.advance()
        msb, lsb = self.parse_range()
        names: list[str] = []
        inits: list[Optional[ast.Expr]] = []
        while True:
            names.append(self.expect_ident().value)
            # optional memory dimension, accepted but not simulated
            if self.at_op("["):
                self.parse_range()
            if self.at_op("="):
                self.advance()
                inits.append(self.parse_expr())
            else:
                inits.append(None)
            if self.at_op(","):
                self.advance()
                continue
            break
        self.expect_op(";")
        return ast.NetDecl(
            kind=kind, msb=msb, lsb=lsb, names=tuple(names), inits=tuple(inits), line=line
        )

    def parse_param_decl(self) -> ast.ParamDecl:
        line = self.cur.line
        kind = self.advance().value
        if self.at_kw("integer"):
            self.advance()
        self.parse_range()
        assigns = []
        while True:
            name = self.expect_ident().value
            self.expect_op("=")
            assigns.append((name, self.parse_expr()))
            if self.at_op(","):
                self.advance()
                continue
            break
        self.expect_op(";")
        return ast.ParamDecl(kind=kind, assigns=tuple(assigns), line=line)

    def parse_continuous_assign(self) -> ast.ContinuousAssign:
        line = self.expect_kw("assign").line
        if self.at_op("#"):
            self.advance()
            self.parse_primary()
        lhs = self.parse_lvalue()
        self.expect_op("=")
        rhs = self.parse_expr()
        self.expect_op(";")
        return ast.ContinuousAssign(lhs=lhs, rhs=rhs, line=line)

    def parse_always(self) -> ast.Always:
        line = self.expect_kw("always").line
        sens: Optional[ast.SensList] = None
        if self.at_op("@"):
            self.advance()
            sens = self.parse_sens_list()
        return ast.Always(sens=sens, body=self.parse_stmt(), line=line)

    def parse_sens_list(self) -> ast.SensList:
        if self.at_op("*"):
            self.advance()
            return ast.SensList(items=(), star=True)
        self.expect_op("(")
        if self.at_op("*"):
            self.advance()
            self.expect_op(")")
            return ast.SensList(items=(), star=True)
        items = []
        while True:
            edge = None
            if self.at_kw("posedge", "negedge"):
                edge = self.advance().value
            items.append(ast.SensItem(edge=edge, signal=self.expect_ident().value))
            if self.at_kw("or") or self.at_op(","):
                self.advance()
                continue
            break
        self.expect_op(")")
        return ast.SensList(items=tuple(items))

    def parse_instance(self) -> ast.Instance:
        line = self.cur.line
        module = self.expect_ident().value
        if self.at_op("#"):
            self.advance()
            self.expect_op("(")
            self.parse_connections()
            self.expect_op(")")
        name = self.expect_ident().value
        self.expect_op("(")
        conns = self.parse_connections() if not self.at_op(")") else []
        self.expect_op(")")
        self.expect_op(";")
        return ast.Instance(module=module, name=name, connections=tuple(conns), line=line)

    def parse_connections(self) -> list[tuple[Optional[str], Optional[ast.Expr]]]:
        conns: list[tuple[Optional[str], Optional[ast.Expr]]] = []
        while True:
            if self.at_op("."):
                self.advance()
                pname = self.expect_ident().value
                self.expect_op("(")
                expr = None if self.at_op(")") else self.parse_expr()
                self.expect_op(")")
                conns.append((pname, expr))
            else:
                conns.append((None, self.parse_expr()))
            if self.at_op(","):
                self.advance()
                continue
            return conns

    # -- statements --------------------------------------------------------

    def parse_stmt(self) -> ast.Stmt:
        tok = self.cur
        if self.at_kw("begin"):
            self.advance()
            label = None
            if self.at_op(":"):
                self.advance()
                label = self.expect_ident().value
            stmts = []
            while not self.at_kw("end"):
                if self.cur.kind == "eof":
                    raise VerilogSyntaxError("missing 'end' for begin block", tok.line)
                stmts.append(self.parse_stmt())
            self.advance()
            return ast.Block(stmts=tuple(stmts), label=label, line=tok.line)
        if self.at_kw("if"):
            self.advance()
            self.expect_op("(")
            cond = self.parse_expr()
            self.expect_op(")")
            then = self.parse_stmt()
            orelse = None
            if self.at_kw("else"):
                self.advance()
                orelse = self.parse_stmt()
            return ast.If(cond=cond, then=then, orelse=orelse, line=tok.line)
        if self.at_kw("case", "casez", "casex"):
            return self.parse_case()
        if self.at_kw("for"):
            return self.parse_for()
        if self.at_op("#"):
            self.advance()
            amount = self.parse_primary()
            if self.at_op(";"):
                self.advance()
                return ast.Delay(amount=amount, stmt=None, line=tok.line)
            return ast.Delay(amount=amount, stmt=self.parse_stmt(), line=tok.line)
        if self.at_op("@"):
            self.advance()
            sens = self.parse_sens_list()
            if self.at_op(";"):
                self.advance()
                return ast.EventWait(sens=sens, stmt=None, line=tok.line)
            return ast.EventWait(sens=sens, stmt=self.parse_stmt(), line=tok.line)
        if self.cur.kind == "sysident":
            name = self.advance().value
            args: list[ast.Expr] = []
            if self.at_op("("):
                self.advance()
                while not self.at_op(")"):
                    if self.cur.kind == "string":
                        args.append(ast.Num(value=None, width=None, line=self.cur.line))
                        self.advance()
                    else:
                        args.append(self.parse_expr())
                    if self.at_op(","):
                        self.advance()
                self.expect_op(")")
            self.expect_op(";")
            return ast.TaskCall(name=name, args=tuple(args), line=tok.line)
        if self.at_op(";"):
            self.advance()
            return ast.NullStmt(line=tok.line)
        if self.cur.kind == "ident" or self.at_op("{"):
            return self.parse_assign_stmt()
        raise VerilogSyntaxError(f"unexpected {tok.value!r} in statement position", tok.line)

    def parse_assign_stmt(self, expect_semicolon: bool = True) -> ast.AssignStmt:
        line = self.cur.line
        lhs = self.parse_lvalue()
        if self.at_op("<="):
            self.advance()
            blocking = False
        elif self.at_op("="):
            self.advance()
            blocking = True
        else:
            raise VerilogSyntaxError(f"expected assignment, found {self.cur.value!r}", self.cur.line)
        if self.at_op("#"):
            self.advance()
            self.parse_primary()
        rhs = self.parse_expr()
        if expect_semicolon:
            self.expect_op(";")
        return ast.AssignStmt(lhs=lhs, rhs=rhs, blocking=blocking, line=line)

    def parse_case(self) -> ast.Case:
        tok = self.advance()
        self.expect_op("(")
        selector = self.parse_expr()
        self.expect_op(")")
        arms = []
        while not self.at_kw("endcase"):
            if self.cur.kind == "eof":
                raise VerilogSyntaxError("missing 'endcase'", tok.line)
            line = self.cur.line
            if self.at_kw("default"):
                self.advance()
                if self.at_op(":"):
                    self.advance()
                arms.append(ast.CaseArm(labels=None, body=self._parse_arm_body(), line=line))
                continue
            labels = [self.parse_expr()]
            while self.at_op(","):
                self.advance()
                labels.append(self.parse_expr())
            self.expect_op(":")
            arms.append(ast.CaseArm(labels=tuple(labels), body=self._parse_arm_body(), line=line))
        self.advance()
        return ast.Case(kind=tok.value, selector=selector, arms=tuple(arms), line=tok.line)

    def _parse_arm_body(self) -> Optional[ast.Stmt]:
        if self.at_op(";"):
            self.advance()
            return None
        return self.parse_stmt()

    def parse_for(self) -> ast.For:
        line = self.expect_kw("for").line
        self.expect_op("(")
        init = self.parse_assign_stmt(expect_semicolon=False)
        self.expect_op(";")
        cond = self.parse_expr()
        self.expect_op(";")
        step = self.parse_assign_stmt(expect_semicolon=False)
        self.expect_op(")")
        return ast.For(init=init, cond=cond, step=step, body=self.parse_stmt(), line=line)

    # -- expressions -------------------------------------------------------

    def parse_lvalue(self) -> ast.Expr:
        if self.at_op("{"):
            return self.parse_concat()
        tok = self.expect_ident()
        expr: ast.Expr = ast.Ident(name=tok.value, line=tok.line)
        while self.at_op("["):
            self.advance()
            msb = self.parse_expr()
            lsb = None
            if self.at_op(":"):
                self.advance()
                lsb = self.parse_expr()
            self.expect_op("]")
            expr = ast.Select(base=expr, msb=msb, lsb=lsb, line=tok.line)
        return expr

    def parse_expr(self) -> ast.Expr:
        return self.parse_ternary()

    def parse_ternary(self) -> ast.Expr:
        cond = self.parse_binary(0)
        if self.at_op("?"):
            line = self.advance().line
            if_true = self.parse_expr()
            self.expect_op(":")
            if_false = self.parse_expr()
            return ast.Ternary(cond=cond, if_true=if_true, if_false=if_false, line=line)
        return cond

    def parse_binary(self, tier: int) -> ast.Expr:
        if tier >= len(_BINARY_TIERS):
            return self.parse_unary()
        left = self.parse_binary(tier + 1)
        while self.cur.kind == "op" and self.cur.value in _BINARY_TIERS[tier]:
            op = self.advance()
            right = self.parse_binary(tier + 1)
            left = ast.Binary(op=op.value, left=left, right=right, line=op.line)
        return left

    def parse_unary(self) -> ast.Expr:
        if self.cur.kind == "op" and self.cur.value in _UNARY_OPS:
            op = self.advance()
            return ast.Unary(op=op.value, operand=self.parse_unary(), line=op.line)
        return self.parse_primary()

    def parse_primary(self) -> ast.Expr:
        tok = self.cur
        if tok.kind == "number":
            self.advance()
            value, width = parse_sized_number(tok.value)
            return ast.Num(value=value, width=width, line=tok.line)
        if tok.kind == "ident":
            self.advance()
            expr: ast.Expr = ast.Ident(name=tok.value, line=tok.line)
            while self.at_op("["):
                self.advance()
                msb = self.parse_expr()
                lsb = None
                if self.at_op(":"):
                    self.advance()
                    lsb = self.parse_expr()
                self.expect_op("]")
                expr = ast.Select(base=expr, msb=msb, lsb=lsb, line=tok.line)
            return expr
        if tok.kind == "sysident":
            # system function call in expression position ($random, $time)
            self.advance()
            if self.at_op("("):
                self.advance()
                while not self.at_op(")"):
                    self.parse_expr()
                    if self.at_op(","):
                        self.advance()
                self.expect_op(")")
            return ast.Num(value=None, width=None, line=tok.line)
        if self.at_op("("):
            self.advance()
            expr = self.parse_expr()
            self.expect_op(")")
            return expr
        if self.at_op("{"):
            return self.parse_concat()
        raise VerilogSyntaxError(f"unexpected {tok.value!r} in expression", tok.line)

    def parse_concat(self) -> ast.Expr:
        line = self.expect_op("{").line
        first = self.parse_expr()
        if self.at_op("{"):
            # replication: {count{expr, ...}}
            inner = self.parse_concat()
            self.expect_op("}")
            assert isinstance(inner, ast.Concat)
            return ast.Repeat(count=first, inner=inner, line=line)
        parts = [first]
        while self.at_op(","):
            self.advance()
            parts.append(self.parse_expr())
        self.expect_op("}")
        return ast.Concat(parts=tuple(parts), line=line)


def parse_source(source: str) -> list[ast.Module]:
    """Tokenize and parse a source file into its modules."""
    return Parser(tokenize(source)).parse_source()
