"""Reference interpreter that executes annotated pl0+ trees directly.

It exists to cross-check ``codegen`` + ``vm``.  Values are kept in
per-activation dictionaries linked by static scope; nothing here looks at
generated code.  To make step limits and stack overflow comparable with
the virtual machine, every construct is charged the number of instructions
its translation executes, and the height of the machine stack is tracked
alongside (frame cells plus expression temporaries).
"""

from __future__ import annotations

import sys
import threading
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import tree as t
from .numeric import STACK_LIMIT, ArithmeticFault, apply_binary, apply_unary, in_range
from .semantics import MAIN_CODE, SymbolCode, SymbolKind, parse_code
from .vm import Exit

FRAME_CELLS = 3

_ARITH = {
    t.ArithOp.SUMA: 2, t.ArithOp.RESTA: 3, t.ArithOp.MULTIPLICACION: 4, t.ArithOp.DIVISION: 5,
}
_REL = {
    t.RelOp.COMPARACION: 8, t.RelOp.DIFERENTE_DE: 9, t.RelOp.MENOR_QUE: 10,
    t.RelOp.MAYOR_IGUAL_QUE: 11, t.RelOp.MAYOR_QUE: 12, t.RelOp.MENOR_IGUAL_QUE: 13,
}


class _Fault(Exception):
    pass


class _Limit(Exception):
    pass


@dataclass
class Frame:
    scope_path: tuple[int, ...]
    cells: dict[str, int]
    static: Optional["Frame"]
    base: int


@dataclass
class Environment:
    """Static chain of activation frames."""
    current: Frame

    def frame_for(self, path: tuple[int, ...]) -> Frame:
        frame = self.current
        while frame is not None and frame.scope_path != path:
            frame = frame.static
        if frame is None:
            raise _Fault(f"no hay marco activo para el ámbito {path}")
        return frame


@dataclass
class _Run:
    blocks: dict[str, t.Block]
    constants: dict[str, int]
    inputs: list[int]
    step_limit: Optional[int]
    output: list[int] = field(default_factory=list)
    steps: int = 0
    top: int = 3
    next_input: int = 0

    def tick(self):
        if self.step_limit is not None and self.steps >= self.step_limit:
            raise _Limit
        self.steps += 1

    def grow(self, new_top: int):
        if new_top >= STACK_LIMIT:
            raise _Fault("desbordamiento de pila")

    def push(self):
        self.grow(self.top + 1)
        self.top += 1

    def arith(self, fn, *args) -> int:
        try:
            return fn(*args)
        except ArithmeticFault as exc:
            raise _Fault(str(exc)) from None

    # blocks and calls

    def activate(self, env: Environment, block: t.Block, scope_path: tuple[int, ...],
                 static: Optional[Frame], base: int):
        self.tick()  # INS
        new_top = base + FRAME_CELLS + len(block.vars) - 1
        self.grow(new_top)
        frame = Frame(scope_path, {v.code: 0 for v in block.vars}, static, base)
        saved_top = self.top
        self.top = new_top
        outer = env.current
        env.current = frame
        self.statement(env, block.body)
        self.tick()  # RET
        env.current = outer
        return saved_top

    def call(self, env: Environment, code: SymbolCode):
        self.tick()  # LLA
        static = env.frame_for(code.path)
        self.grow(self.top + 3)
        before = self.top
        self.activate(env, self.blocks[str(code)], code.scope_path, static, before + 1)
        self.top = before

    # statements

    def statement(self, env: Environment, s: t.Statement):
        if isinstance(s, t.Assign):
            value = self.expr(env, s.expr)
            self.store(env, s.target, value)
        elif isinstance(s, t.Call):
            self.call(env, parse_code(s.target.symbol))
        elif isinstance(s, t.Sequence):
            for x in s.stmts:
                self.statement(env, x)
        elif isinstance(s, t.If):
            taken = self.condition(env, s.cond)
            self.tick()  # SAC
            self.top -= 1
            if taken:
                self.statement(env, s.then)
                if s.otherwise is not None:
                    self.tick()  # SAL over the else part
            elif s.otherwise is not None:
                self.statement(env, s.otherwise)
        elif isinstance(s, t.While):
            while True:
                taken = self.condition(env, s.cond)
                self.tick()  # SAC
                self.top -= 1
                if not taken:
                    break
                self.statement(env, s.body)
                self.tick()  # SAL back to the condition
        elif isinstance(s, t.Read):
            self.tick()  # LEE
            if self.next_input >= len(self.inputs):
                raise _Fault("entrada agotada")
            value = self.inputs[self.next_input]
            self.next_input += 1
            if not in_range(value):
                raise _Fault("entrada fuera de rango")
            self.push()
            self.store(env, s.target, value)
        elif isinstance(s, t.Write):
            value = self.expr(env, s.source)
            self.tick()  # ESC
            self.top -= 1
            self.output.append(value)

    def store(self, env: Environment, ref: t.IdentRef, value: int):
        self.tick()  # ALM
        code = parse_code(ref.symbol)
        env.frame_for(code.path).cells[ref.symbol] = value
        self.top -= 1

    def condition(self, env: Environment, c: t.Condition) -> int:
        if isinstance(c, t.Odd):
            value = self.expr(env, c.expr)
            self.tick()
            return apply_unary(6, value)
        lhs = self.expr(env, c.lhs)
        rhs = self.expr(env, c.rhs)
        self.tick()
        self.top -= 1
        return apply_binary(_REL[c.op], lhs, rhs)

    def expr(self, env: Environment, e: t.Expr) -> int:
        if isinstance(e, t.Num):
            self.tick()  # LIT
            self.push()
            return e.value
        if isinstance(e, t.IdentRef):
            code = parse_code(e.symbol)
            self.tick()  # LIT or CAR
            if code.kind is SymbolKind.CONSTANT:
                value = self.constants[e.symbol]
            else:
                value = env.frame_for(code.path).cells[e.symbol]
            self.push()
            return value
        if isinstance(e, t.Neg):
            value = self.expr(env, e.expr)
            self.tick()
            return self.arith(apply_unary, 1, value)
        lhs = self.expr(env, e.lhs)
        rhs = self.expr(env, e.rhs)
        self.tick()
        self.top -= 1
        return self.arith(apply_binary, _ARITH[e.op], lhs, rhs)


def _index(program: t.Program) -> tuple[dict[str, t.Block], dict[str, int]]:
    blocks: dict[str, t.Block] = {}
    constants: dict[str, int] = {}

    def walk(block: t.Block):
        for c in block.consts:
            constants[c.code] = c.value
        for p in block.procs:
            blocks[p.code] = p.block
            walk(p.block)

    walk(program.block)
    return blocks, constants


def _interpret(program: t.Program, inputs: list[int], step_limit: Optional[int]):
    blocks, constants = _index(program)
    run = _Run(blocks, constants, inputs, step_limit)
    env = Environment(Frame((), {}, None, 0))
    try:
        run.tick()  # SAL at address 0
        run.activate(env, program.block, MAIN_CODE.scope_path, None, 1)
    except _Limit:
        return run.output, Exit.LIMIT, run.steps
    except _Fault:
        return run.output, Exit.FAULTED, run.steps
    return run.output, Exit.HALTED, run.steps


def interpret(program: t.Program, inputs: Iterable[int] = (),
              step_limit: Optional[int] = None) -> tuple[list[int], Exit]:
    """Run an error-free annotated program; returns ``(output, exit)``."""
    output, exit_, _ = interpret_counted(program, inputs, step_limit)
    return output, exit_


def interpret_counted(program: t.Program, inputs: Iterable[int] = (),
                      step_limit: Optional[int] = None) -> tuple[list[int], Exit, int]:
    """Like :func:`interpret` but also returns the number of charged steps."""
    inputs = list(inputs)
    result: list = []
    errors: list = []

    # Deep pl0+ recursion maps onto Python recursion; run on a roomy stack.
    def target():
        try:
            result.append(_interpret(program, inputs, step_limit))
        except BaseException as exc:  # re-raised in the caller's thread
            errors.append(exc)

    old_limit = sys.getrecursionlimit()
    old_size = threading.stack_size()
    sys.setrecursionlimit(max(old_limit, 200_000))
    threading.stack_size(512 * 1024 * 1024)
    try:
        worker = threading.Thread(target=target)
        worker.start()
        worker.join()
    finally:
        threading.stack_size(old_size)
        sys.setrecursionlimit(old_limit)
    if errors:
        raise errors[0]
    return result[0]
