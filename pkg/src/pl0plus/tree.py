"""Syntax tree node types.

Nodes are frozen dataclasses; semantic analysis produces annotated copies
rather than mutating the tree.  ``code``/``symbol`` fields hold textual
symbol codes (``"v0/2_1"``) and stay ``None`` until analysis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

from .diagnostics import SourcePos

_NOWHERE = SourcePos(1, 1)


class RelOp(enum.Enum):
    COMPARACION = "comparacion"
    DIFERENTE_DE = "diferente_de"
    MENOR_QUE = "menor_que"
    MAYOR_QUE = "mayor_que"
    MENOR_IGUAL_QUE = "menor_igual_que"
    MAYOR_IGUAL_QUE = "mayor_igual_que"


class ArithOp(enum.Enum):
    SUMA = "suma"
    RESTA = "resta"
    MULTIPLICACION = "multiplicacion"
    DIVISION = "division"


# Expressions

@dataclass(frozen=True)
class IdentRef:
    name: str
    pos: SourcePos = _NOWHERE
    symbol: Optional[str] = None


@dataclass(frozen=True)
class Num:
    value: int
    pos: SourcePos = _NOWHERE


@dataclass(frozen=True)
class Neg:
    expr: "Expr"
    pos: SourcePos = _NOWHERE


@dataclass(frozen=True)
class BinOp:
    op: ArithOp
    lhs: "Expr"
    rhs: "Expr"

    @property
    def pos(self) -> SourcePos:
        return self.lhs.pos


Expr = Union[IdentRef, Num, Neg, BinOp]


# Conditions

@dataclass(frozen=True)
class Relation:
    op: RelOp
    lhs: Expr
    rhs: Expr

    @property
    def pos(self) -> SourcePos:
        return self.lhs.pos


@dataclass(frozen=True)
class Odd:
    expr: Expr
    pos: SourcePos = _NOWHERE


Condition = Union[Relation, Odd]


# Statements

@dataclass(frozen=True)
class Assign:
    target: IdentRef
    expr: Expr
    pos: SourcePos = _NOWHERE


@dataclass(frozen=True)
class Call:
    target: IdentRef
    pos: SourcePos = _NOWHERE


@dataclass(frozen=True)
class Sequence:
    stmts: tuple["Statement", ...]
    pos: SourcePos = _NOWHERE


@dataclass(frozen=True)
class If:
    cond: Condition
    then: "Statement"
    otherwise: Optional["Statement"] = None
    pos: SourcePos = _NOWHERE


@dataclass(frozen=True)
class While:
    cond: Condition
    body: "Statement"
    pos: SourcePos = _NOWHERE


@dataclass(frozen=True)
class Read:
    target: IdentRef
    pos: SourcePos = _NOWHERE


@dataclass(frozen=True)
class Write:
    source: IdentRef
    pos: SourcePos = _NOWHERE


@dataclass(frozen=True)
class Empty:
    pos: SourcePos = _NOWHERE


Statement = Union[Assign, Call, Sequence, If, While, Read, Write, Empty]


# Declarations and blocks

@dataclass(frozen=True)
class ConstDecl:
    name: str
    value: int
    pos: SourcePos = _NOWHERE
    code: Optional[str] = None


@dataclass(frozen=True)
class VarDecl:
    name: str
    pos: SourcePos = _NOWHERE
    code: Optional[str] = None


@dataclass(frozen=True)
class Block:
    consts: tuple[ConstDecl, ...] = ()
    vars: tuple[VarDecl, ...] = ()
    procs: tuple["ProcDecl", ...] = ()
    body: Statement = field(default_factory=Empty)


@dataclass(frozen=True)
class ProcDecl:
    name: str
    block: Block
    pos: SourcePos = _NOWHERE
    code: Optional[str] = None


@dataclass(frozen=True)
class Program:
    block: Block


def iter_nodes(node):
    """Pre-order walk over every node reachable from ``node``."""
    yield node
    if isinstance(node, Program):
        yield from iter_nodes(node.block)
    elif isinstance(node, Block):
        for child in (*node.consts, *node.vars, *node.procs, node.body):
            yield from iter_nodes(child)
    elif isinstance(node, ProcDecl):
        yield from iter_nodes(node.block)
    elif isinstance(node, Assign):
        yield from iter_nodes(node.target)
        yield from iter_nodes(node.expr)
    elif isinstance(node, (Call, Read)):
        yield from iter_nodes(node.target)
    elif isinstance(node, Write):
        yield from iter_nodes(node.source)
    elif isinstance(node, Sequence):
        for s in node.stmts:
            yield from iter_nodes(s)
    elif isinstance(node, If):
        yield from iter_nodes(node.cond)
        yield from iter_nodes(node.then)
        if node.otherwise is not None:
            yield from iter_nodes(node.otherwise)
    elif isinstance(node, While):
        yield from iter_nodes(node.cond)
        yield from iter_nodes(node.body)
    elif isinstance(node, (Relation, BinOp)):
        yield from iter_nodes(node.lhs)
        yield from iter_nodes(node.rhs)
    elif isinstance(node, (Odd, Neg)):
        yield from iter_nodes(node.expr)


def strip_annotations(node):
    """Return a copy of ``node`` with every symbol code removed."""
    import dataclasses

    if isinstance(node, (IdentRef, ConstDecl, VarDecl)):
        field_name = "symbol" if isinstance(node, IdentRef) else "code"
        return dataclasses.replace(node, **{field_name: None})
    if isinstance(node, ProcDecl):
        return dataclasses.replace(node, code=None, block=strip_annotations(node.block))
    if not dataclasses.is_dataclass(node):
        return node
    changes = {}
    for f in dataclasses.fields(node):
        value = getattr(node, f.name)
        if isinstance(value, tuple):
            changes[f.name] = tuple(strip_annotations(v) for v in value)
        elif dataclasses.is_dataclass(value) and not isinstance(value, SourcePos):
            changes[f.name] = strip_annotations(value)
    return dataclasses.replace(node, **changes)


def strip_positions(node):
    """Return a copy of ``node`` with every source position reset."""
    import dataclasses

    if not dataclasses.is_dataclass(node) or isinstance(node, SourcePos):
        return node
    changes = {}
    for f in dataclasses.fields(node):
        value = getattr(node, f.name)
        if isinstance(value, SourcePos):
            changes[f.name] = _NOWHERE
        elif isinstance(value, tuple):
            changes[f.name] = tuple(strip_positions(v) for v in value)
        elif dataclasses.is_dataclass(value):
            changes[f.name] = strip_positions(value)
    return dataclasses.replace(node, **changes)
