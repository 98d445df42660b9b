"""Random well-formed pl0+ programs and a source printer for tests.

Generated programs always pass semantic analysis.  Loops count down a
dedicated counter variable that nothing else assigns, and procedures only
call procedures that are not their ancestors, so almost every program
terminates quickly.  A small fraction contain a loop with an arbitrary
condition, to exercise step limits.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from pl0plus import tree as t
from pl0plus.numeric import INT_MAX


# Source printer

def _expr_src(e: t.Expr) -> str:
    if isinstance(e, t.Num):
        return str(e.value)
    if isinstance(e, t.IdentRef):
        return e.name
    if isinstance(e, t.Neg):
        inner = _expr_src(e.expr)
        if not isinstance(e.expr, (t.Num, t.IdentRef)):
            inner = f"({inner})"
        return f"-{inner}"
    sym = {t.ArithOp.SUMA: "+", t.ArithOp.RESTA: "-",
           t.ArithOp.MULTIPLICACION: "*", t.ArithOp.DIVISION: "/"}[e.op]
    lhs = _expr_src(e.lhs)
    rhs = _expr_src(e.rhs)
    if isinstance(e.lhs, (t.BinOp, t.Neg)):
        lhs = f"({lhs})"
    if isinstance(e.rhs, (t.BinOp, t.Neg)):
        rhs = f"({rhs})"
    return f"{lhs} {sym} {rhs}"


_REL_SRC = {
    t.RelOp.COMPARACION: "=", t.RelOp.DIFERENTE_DE: "<>", t.RelOp.MENOR_QUE: "<",
    t.RelOp.MAYOR_QUE: ">", t.RelOp.MENOR_IGUAL_QUE: "<=", t.RelOp.MAYOR_IGUAL_QUE: ">=",
}


def _cond_src(c: t.Condition) -> str:
    if isinstance(c, t.Odd):
        return f"odd {_expr_src(c.expr)}"
    return f"{_expr_src(c.lhs)} {_REL_SRC[c.op]} {_expr_src(c.rhs)}"


def _stmt_src(s: t.Statement, indent: str) -> str:
    inner = indent + "  "
    if isinstance(s, t.Assign):
        return f"{indent}{s.target.name} := {_expr_src(s.expr)}"
    if isinstance(s, t.Call):
        return f"{indent}call {s.target.name}"
    if isinstance(s, t.Read):
        return f"{indent}read {s.target.name}"
    if isinstance(s, t.Write):
        return f"{indent}write {s.source.name}"
    if isinstance(s, t.Empty):
        return indent
    if isinstance(s, t.Sequence):
        body = ";\n".join(_stmt_src(x, inner) for x in s.stmts)
        return f"{indent}begin\n{body}\n{indent}end"
    if isinstance(s, t.If):
        # Wrap so a trailing else-less if inside cannot capture our else.
        then = s.then
        if s.otherwise is not None and isinstance(then, (t.If, t.While)):
            then = t.Sequence((then,))
        text = f"{indent}if {_cond_src(s.cond)} then\n{_stmt_src(then, inner)}"
        if s.otherwise is not None:
            text += f"\n{indent}else\n{_stmt_src(s.otherwise, inner)}"
        return text
    if isinstance(s, t.While):
        return f"{indent}while {_cond_src(s.cond)} do\n{_stmt_src(s.body, inner)}"
    raise TypeError(s)


def _block_src(b: t.Block, indent: str) -> str:
    lines = []
    if b.consts:
        lines.append(indent + "const " + ", ".join(f"{c.name} = {c.value}" for c in b.consts) + ";")
    if b.vars:
        lines.append(indent + "var " + ", ".join(v.name for v in b.vars) + ";")
    for p in b.procs:
        lines.append(f"{indent}procedure {p.name};")
        lines.append(_block_src(p.block, indent + "  ") + ";")
    lines.append(_stmt_src(b.body, indent))
    return "\n".join(lines)


def to_source(program: t.Program) -> str:
    return _block_src(program.block, "") + ".\n"


# Generator

@dataclass
class _Scope:
    consts: list[str] = field(default_factory=list)
    vars: list[str] = field(default_factory=list)
    counters: list[str] = field(default_factory=list)
    procs: list[str] = field(default_factory=list)
    names: set[str] = field(default_factory=set)


class ProgramGenerator:
    def __init__(self, rng: random.Random, max_depth: int = 3, max_statements: int = 30,
                 wild_loop_rate: float = 0.01):
        self.rng = rng
        self.max_depth = max_depth
        self.budget = max_statements
        self.wild_loop_rate = wild_loop_rate
        self.scopes: list[_Scope] = []
        self.ancestors: list[str] = []
        self.serial = 0

    def fresh(self, prefix: str) -> str:
        # Reuse outer names now and then to exercise shadowing.
        if self.rng.random() < 0.15:
            outer = [n for s in self.scopes[:-1] for n in s.names
                     if n.startswith(prefix) and n not in self.scopes[-1].names]
            if outer:
                return self.rng.choice(outer)
        self.serial += 1
        return f"{prefix}{self.serial}"

    # name lookups honour shadowing: innermost declaration wins

    def visible(self) -> dict[str, str]:
        kinds: dict[str, str] = {}
        for scope in self.scopes:
            for n in scope.consts:
                kinds[n] = "const"
            for n in scope.vars:
                kinds[n] = "var"
            for n in scope.counters:
                kinds[n] = "counter"
            for n in scope.procs:
                kinds[n] = "proc"
        return kinds

    def names_of(self, *kinds: str) -> list[str]:
        return sorted(n for n, k in self.visible().items() if k in kinds)

    def program(self) -> t.Program:
        return t.Program(self.block(0))

    def block(self, depth: int) -> t.Block:
        scope = _Scope()
        self.scopes.append(scope)
        consts = []
        for _ in range(self.rng.randint(0, 2)):
            name = self.fresh("c")
            scope.names.add(name)
            scope.consts.append(name)
            consts.append(t.ConstDecl(name, self.rng.choice([0, 1, 2, 3, 7, 10, 100, INT_MAX])))
        vars_ = []
        for _ in range(self.rng.randint(1, 3)):
            name = self.fresh("v")
            scope.names.add(name)
            scope.vars.append(name)
            vars_.append(t.VarDecl(name))
        for i in range(3):
            name = f"w{depth}_{i}"
            scope.names.add(name)
            scope.counters.append(name)
            vars_.append(t.VarDecl(name))
        procs = []
        if depth < self.max_depth:
            for _ in range(self.rng.randint(0, 2)):
                if self.budget <= 0:
                    break
                name = self.fresh("p")
                scope.names.add(name)
                scope.procs.append(name)
                self.ancestors.append(name)
                # Procedures get a slice of the budget; the caller keeps the rest.
                outer_budget = self.budget
                share = min(self.budget, self.rng.randint(2, 6))
                self.budget = share
                inner = self.block(depth + 1)
                self.budget = outer_budget - (share - self.budget)
                self.ancestors.pop()
                procs.append(t.ProcDecl(name, inner))
        body = self.sequence(loop_depth=0, nesting=0)
        self.scopes.pop()
        return t.Block(tuple(consts), tuple(vars_), tuple(procs), body)

    def sequence(self, loop_depth: int, nesting: int) -> t.Statement:
        stmts = [self.statement(loop_depth, nesting) for _ in range(self.rng.randint(1, 4))]
        if len(stmts) == 1 and self.rng.random() < 0.5:
            return stmts[0]
        return t.Sequence(tuple(stmts))

    def statement(self, loop_depth: int, nesting: int) -> t.Statement:
        if self.budget <= 0:
            return t.Empty()
        self.budget -= 1
        rng = self.rng
        writable = self.names_of("var")
        readable = self.names_of("var", "const", "counter")
        callable_ = [p for p in self.names_of("proc") if p not in self.ancestors]
        choices = ["assign"] * 4 + ["write"] * 3 + ["read"]
        if nesting < 3:
            choices += ["if"] * 2 + ["seq"]
            if loop_depth < 3:
                choices += ["while"] * 2
        if callable_:
            choices += ["call"] * 2
        kind = rng.choice(choices)

        if kind == "assign":
            return t.Assign(t.IdentRef(rng.choice(writable)), self.expr(2))
        if kind == "write":
            return t.Write(t.IdentRef(rng.choice(readable)))
        if kind == "read":
            return t.Read(t.IdentRef(rng.choice(writable)))
        if kind == "call":
            return t.Call(t.IdentRef(rng.choice(callable_)))
        if kind == "seq":
            return self.sequence(loop_depth, nesting + 1)
        if kind == "if":
            then = self.statement(loop_depth, nesting + 1)
            otherwise = self.statement(loop_depth, nesting + 1) if rng.random() < 0.5 else None
            return t.If(self.condition(), then, otherwise)
        # while; a counted loop costs two extra statements for its counter
        if self.budget < 2:
            return t.Write(t.IdentRef(rng.choice(readable)))
        self.budget -= 2
        if rng.random() < self.wild_loop_rate:
            return t.While(self.condition(), self.statement(loop_depth + 1, nesting + 1))
        counter = t.IdentRef(f"w{len(self.scopes) - 1}_{loop_depth}")
        body = self.statement(loop_depth + 1, nesting + 1)
        decrement = t.Assign(counter, t.BinOp(t.ArithOp.RESTA, counter, t.Num(1)))
        return t.Sequence((
            t.Assign(counter, t.Num(rng.randint(0, 6))),
            t.While(t.Relation(t.RelOp.MAYOR_QUE, counter, t.Num(0)),
                    t.Sequence((body, decrement))),
        ))

    def condition(self) -> t.Condition:
        if self.rng.random() < 0.2:
            return t.Odd(self.expr(1))
        return t.Relation(self.rng.choice(list(t.RelOp)), self.expr(1), self.expr(1))

    def atom(self) -> t.Expr:
        readable = self.names_of("var", "const", "counter")
        if readable and self.rng.random() < 0.6:
            return t.IdentRef(self.rng.choice(readable))
        value = self.rng.choice([0, 1, 2, 3, 5, 10, 42, self.rng.randint(0, 1000), INT_MAX])
        return t.Num(value)

    def expr(self, depth: int) -> t.Expr:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.35:
            e = self.atom()
        else:
            op = rng.choice(list(t.ArithOp))
            rhs = self.expr(depth - 1)
            if op is t.ArithOp.DIVISION and rng.random() < 0.85:
                rhs = t.Num(rng.randint(1, 9))
            e = t.BinOp(op, self.expr(depth - 1), rhs)
        if rng.random() < 0.1:
            e = t.Neg(e)
        return e


def random_program(seed: int, **kwargs) -> t.Program:
    return ProgramGenerator(random.Random(seed), **kwargs).program()


def random_source(seed: int, **kwargs) -> str:
    return to_source(random_program(seed, **kwargs))


def random_inputs(seed: int, n: int = 8) -> list[int]:
    rng = random.Random(seed ^ 0x5EED)
    return [rng.randint(-50, 50) for _ in range(n)]
