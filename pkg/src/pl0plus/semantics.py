"""Semantic analysis: symbol codes, scope resolution and the pl0+ checks.

Every declaration receives a code such as ``v0/2/0/2_1``: a kind prefix
(``b`` block/procedure, ``c`` constant, ``v`` variable), the nesting path of
the declaring block joined by ``/``, and after ``_`` a per-kind correlative
counted from zero inside that block.  The main block is always ``b0``.

Checks performed:

1. codes are unique (guaranteed by construction, asserted by tests);
2. a name may be declared only once per scope;
3. procedure names may not appear in expressions, assignments or I/O;
4. constants may not be assigned to or read into;
5. every referenced name must resolve to a visible declaration.

Declarations become visible in program order, so a procedure can call
itself and anything declared before it in enclosing scopes.
"""

from __future__ import annotations

import dataclasses
import enum
import re
from dataclasses import dataclass
from typing import Optional

from . import tree as t
from .diagnostics import DiagnosticLog, Phase, SourcePos, error


class SymbolKind(enum.Enum):
    BLOCK = "b"
    CONSTANT = "c"
    VARIABLE = "v"


@dataclass(frozen=True)
class SymbolCode:
    kind: SymbolKind
    path: tuple[int, ...]
    correlative: Optional[int] = None

    @property
    def is_main(self) -> bool:
        return self.correlative is None

    @property
    def scope_path(self) -> tuple[int, ...]:
        """Path given to declarations made inside this block."""
        if self.correlative is None:
            return self.path
        return self.path + (self.correlative,)

    @property
    def level(self) -> int:
        """Nesting depth of the block holding this declaration (main is 0)."""
        return len(self.path) - 1

    def parent(self) -> SymbolCode:
        """Code of the block in which this symbol is declared."""
        if self.is_main:
            raise ValueError("the main block has no container")
        if len(self.path) == 1:
            return MAIN_CODE
        return SymbolCode(SymbolKind.BLOCK, self.path[:-1], self.path[-1])

    def __str__(self):
        return code_text(self)


MAIN_CODE = SymbolCode(SymbolKind.BLOCK, (0,))

_CODE_RE = re.compile(r"^([bcv])(\d+(?:/\d+)*)(?:_(\d+))?$")


def code_text(code: SymbolCode) -> str:
    body = "/".join(str(p) for p in code.path)
    if code.correlative is None:
        return f"{code.kind.value}{body}"
    return f"{code.kind.value}{body}_{code.correlative}"


def parse_code(text: str) -> SymbolCode:
    m = _CODE_RE.match(text)
    if m is None:
        raise ValueError(f"malformed symbol code {text!r}")
    kind = SymbolKind(m.group(1))
    path = tuple(int(p) for p in m.group(2).split("/"))
    if m.group(3) is None:
        code = SymbolCode(kind, path)
        if code != MAIN_CODE:
            raise ValueError(f"only the main block code lacks a correlative: {text!r}")
        return code
    if path[0] != 0:
        raise ValueError(f"symbol code path must start at 0: {text!r}")
    return SymbolCode(kind, path, int(m.group(3)))


@dataclass(frozen=True)
class SymbolEntry:
    name: str
    kind: SymbolKind
    code: SymbolCode
    decl_pos: SourcePos
    const_value: Optional[int] = None
    var_index: Optional[int] = None


@dataclass
class Scope:
    owner: SymbolCode
    entries: dict[str, SymbolEntry] = dataclasses.field(default_factory=dict)
    counters: dict[SymbolKind, int] = dataclasses.field(
        default_factory=lambda: {k: 0 for k in SymbolKind})

    def next_code(self, kind: SymbolKind) -> SymbolCode:
        n = self.counters[kind]
        self.counters[kind] = n + 1
        return SymbolCode(kind, self.owner.scope_path, n)


ScopeChain = list[Scope]


def resolve(name: str, scopes: ScopeChain) -> Optional[tuple[SymbolEntry, int]]:
    """Innermost visible entry for ``name`` and how many blocks out it lives."""
    for diff, scope in enumerate(reversed(scopes)):
        entry = scope.entries.get(name)
        if entry is not None:
            return entry, diff
    return None


class _Analyzer:
    def __init__(self):
        self.log = DiagnosticLog()
        self.scopes: ScopeChain = []

    def fail(self, pos: SourcePos, message: str, length: int = 0):
        self.log = self.log.report(error(Phase.SEM, pos, message, length))

    def declare(self, name: str, kind: SymbolKind, pos: SourcePos, **extra) -> SymbolCode:
        scope = self.scopes[-1]
        code = scope.next_code(kind)
        if name in scope.entries:
            self.fail(pos, f"identificador '{name}' declarado más de una vez en el mismo ámbito", len(name))
        else:
            scope.entries[name] = SymbolEntry(name, kind, code, pos, **extra)
        return code

    def block(self, block: t.Block, owner: SymbolCode) -> t.Block:
        self.scopes.append(Scope(owner))
        try:
            consts = tuple(
                dataclasses.replace(c, code=code_text(self.declare(
                    c.name, SymbolKind.CONSTANT, c.pos, const_value=c.value)))
                for c in block.consts
            )
            vars_ = []
            for v in block.vars:
                index = self.scopes[-1].counters[SymbolKind.VARIABLE]
                code = self.declare(v.name, SymbolKind.VARIABLE, v.pos, var_index=index)
                vars_.append(dataclasses.replace(v, code=code_text(code)))
            procs = []
            for p in block.procs:
                code = self.declare(p.name, SymbolKind.BLOCK, p.pos)
                inner = self.block(p.block, code)
                procs.append(dataclasses.replace(p, code=code_text(code), block=inner))
            body = self.statement(block.body)
        finally:
            self.scopes.pop()
        return t.Block(consts, tuple(vars_), tuple(procs), body)

    def reference(self, ref: t.IdentRef, allowed: tuple[SymbolKind, ...], misuse: str) -> t.IdentRef:
        found = resolve(ref.name, self.scopes)
        if found is None:
            self.fail(ref.pos, f"identificador '{ref.name}' no declarado", len(ref.name))
            return ref
        entry, _ = found
        if entry.kind not in allowed:
            self.fail(ref.pos, misuse.format(name=ref.name), len(ref.name))
            return ref
        return dataclasses.replace(ref, symbol=code_text(entry.code))

    def value_ref(self, ref: t.IdentRef) -> t.IdentRef:
        return self.reference(
            ref, (SymbolKind.CONSTANT, SymbolKind.VARIABLE),
            "el procedimiento '{name}' no puede usarse como valor")

    def store_ref(self, ref: t.IdentRef) -> t.IdentRef:
        found = resolve(ref.name, self.scopes)
        if found is not None and found[0].kind is SymbolKind.CONSTANT:
            return self.reference(ref, (SymbolKind.VARIABLE,),
                                  "no se puede asignar un valor a la constante '{name}'")
        return self.reference(ref, (SymbolKind.VARIABLE,),
                              "no se puede asignar un valor al procedimiento '{name}'")

    def statement(self, s: t.Statement) -> t.Statement:
        if isinstance(s, t.Assign):
            target = self.store_ref(s.target)
            return dataclasses.replace(s, target=target, expr=self.expr(s.expr))
        if isinstance(s, t.Call):
            return dataclasses.replace(s, target=self.reference(
                s.target, (SymbolKind.BLOCK,), "'{name}' no es un procedimiento"))
        if isinstance(s, t.Read):
            return dataclasses.replace(s, target=self.store_ref(s.target))
        if isinstance(s, t.Write):
            return dataclasses.replace(s, source=self.value_ref(s.source))
        if isinstance(s, t.Sequence):
            return dataclasses.replace(s, stmts=tuple(self.statement(x) for x in s.stmts))
        if isinstance(s, t.If):
            otherwise = None if s.otherwise is None else self.statement(s.otherwise)
            return dataclasses.replace(s, cond=self.condition(s.cond),
                                       then=self.statement(s.then), otherwise=otherwise)
        if isinstance(s, t.While):
            return dataclasses.replace(s, cond=self.condition(s.cond), body=self.statement(s.body))
        return s

    def condition(self, c: t.Condition) -> t.Condition:
        if isinstance(c, t.Odd):
            return dataclasses.replace(c, expr=self.expr(c.expr))
        return dataclasses.replace(c, lhs=self.expr(c.lhs), rhs=self.expr(c.rhs))

    def expr(self, e: t.Expr) -> t.Expr:
        if isinstance(e, t.IdentRef):
            return self.value_ref(e)
        if isinstance(e, t.Neg):
            return dataclasses.replace(e, expr=self.expr(e.expr))
        if isinstance(e, t.BinOp):
            return dataclasses.replace(e, lhs=self.expr(e.lhs), rhs=self.expr(e.rhs))
        return e


def analyze(program: t.Program) -> tuple[t.Program, DiagnosticLog]:
    analyzer = _Analyzer()
    block = analyzer.block(program.block, MAIN_CODE)
    return t.Program(block), analyzer.log


def declarations(program: t.Program):
    """Yield ``(name, code_text)`` for the main block and every declaration.

    The main block is reported with an empty name.
    """
    yield "", code_text(MAIN_CODE)

    def walk(block: t.Block):
        for c in block.consts:
            yield c.name, c.code
        for v in block.vars:
            yield v.name, v.code
        for p in block.procs:
            yield p.name, p.code
            yield from walk(p.block)

    yield from walk(program.block)
