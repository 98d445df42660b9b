"""Translation of an annotated syntax tree into p+ instructions.

Every block becomes::

    i:  SAL b
        ... code of nested procedures ...
    b:  INS num          # num = local variables + 3 frame cells
        ... body ...
    f:  RET

Frame cells 0, 1, 2 hold the static link, dynamic link and return address,
so the n-th variable (0-based) of a block lives at offset 3 + n.  Constants
take no storage; each use compiles to ``LIT value``.

Forward jumps are emitted with a placeholder and patched once the target
address is known.  Calls may name a procedure whose entry has not been
emitted yet (an enclosing procedure, for instance), so ``LLA`` operands are
patched from the block layouts at the end of generation.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import tree as t
from .diagnostics import DiagnosticLog, Phase, SourcePos, error
from .isa import ALM, CAR, ESC, INS, LEE, LIT, LLA, OPR, RET, SAC, SAL, Instruction, Op, OperationCode
from .semantics import MAIN_CODE, SymbolCode, SymbolKind, code_text, parse_code

FRAME_CELLS = 3

ARITH_CODES = {
    t.ArithOp.SUMA: OperationCode.SUMA,
    t.ArithOp.RESTA: OperationCode.RESTA,
    t.ArithOp.MULTIPLICACION: OperationCode.MULTIPLICACION,
    t.ArithOp.DIVISION: OperationCode.DIVISION,
}

REL_CODES = {
    t.RelOp.COMPARACION: OperationCode.COMPARACION,
    t.RelOp.DIFERENTE_DE: OperationCode.DIFERENTE_DE,
    t.RelOp.MENOR_QUE: OperationCode.MENOR_QUE,
    t.RelOp.MAYOR_IGUAL_QUE: OperationCode.MAYOR_IGUAL_QUE,
    t.RelOp.MAYOR_QUE: OperationCode.MAYOR_QUE,
    t.RelOp.MENOR_IGUAL_QUE: OperationCode.MENOR_IGUAL_QUE,
}


@dataclass
class BlockLayout:
    block_code: SymbolCode
    var_count: int
    level: int
    header_address: int = -1
    entry_address: int = -1
    return_address: int = -1

    @property
    def ins_operand(self) -> int:
        return self.var_count + FRAME_CELLS


class GenerationError(Exception):
    def __init__(self, pos: SourcePos, message: str):
        super().__init__(message)
        self.pos = pos


class _Generator:
    def __init__(self, program: t.Program):
        self.code: list[Instruction] = []
        self.layouts: dict[str, BlockLayout] = {}
        self.calls: list[tuple[int, int, str]] = []  # (address, dif, callee code)
        self.constants: dict[str, int] = {}
        self.scope: tuple[int, ...] = ()
        self.variables: set[str] = set()
        self._collect(program.block)

    def _collect(self, block: t.Block):
        for c in block.consts:
            self.constants[c.code] = c.value
        for v in block.vars:
            self.variables.add(v.code)
        for p in block.procs:
            self._collect(p.block)

    @property
    def here(self) -> int:
        return len(self.code)

    def emit(self, ins: Instruction) -> int:
        self.code.append(ins)
        return len(self.code) - 1

    def patch(self, address: int, target: int):
        ins = self.code[address]
        self.code[address] = Instruction(ins.op, ins.args[:-1] + (target,))

    def block(self, block: t.Block, code: SymbolCode) -> BlockLayout:
        for decl in (*block.consts, *block.vars, *block.procs):
            if decl.code is None:
                raise GenerationError(decl.pos, f"declaración '{decl.name}' sin código de símbolo")
        level = len(code.scope_path) - 1
        layout = BlockLayout(code, len(block.vars), level)
        self.layouts[code_text(code)] = layout

        layout.header_address = self.emit(SAL(0))
        for p in block.procs:
            self.block(p.block, parse_code(p.code))
        layout.entry_address = self.emit(INS(layout.ins_operand))
        self.patch(layout.header_address, layout.entry_address)
        outer, self.scope = self.scope, code.scope_path
        self.statement(block.body, level)
        self.scope = outer
        layout.return_address = self.emit(RET)
        return layout

    def lookup(self, ref: t.IdentRef, use_level: int) -> tuple[SymbolCode, int]:
        if ref.symbol is None:
            raise GenerationError(ref.pos, f"identificador '{ref.name}' sin código de símbolo")
        try:
            code = parse_code(ref.symbol)
        except ValueError as exc:
            raise GenerationError(ref.pos, str(exc)) from None
        dif = use_level - code.level
        if self.scope[:len(code.path)] != code.path:
            raise GenerationError(ref.pos, f"símbolo '{ref.symbol}' fuera de ámbito")
        return code, dif

    def load(self, ref: t.IdentRef, level: int):
        code, dif = self.lookup(ref, level)
        text = code_text(code)
        if code.kind is SymbolKind.CONSTANT and text in self.constants:
            self.emit(LIT(self.constants[text]))
        elif code.kind is SymbolKind.VARIABLE and text in self.variables:
            self.emit(CAR(dif, FRAME_CELLS + code.correlative))
        else:
            raise GenerationError(ref.pos, f"'{ref.name}' no es una variable ni una constante")

    def store(self, ref: t.IdentRef, level: int):
        code, dif = self.lookup(ref, level)
        if code.kind is not SymbolKind.VARIABLE or code_text(code) not in self.variables:
            raise GenerationError(ref.pos, f"'{ref.name}' no es una variable")
        self.emit(ALM(dif, FRAME_CELLS + code.correlative))

    def statement(self, s: t.Statement, level: int):
        if isinstance(s, t.Assign):
            self.expr(s.expr, level)
            self.store(s.target, level)
        elif isinstance(s, t.Call):
            code, dif = self.lookup(s.target, level)
            if code.kind is not SymbolKind.BLOCK or code.is_main:
                raise GenerationError(s.pos, f"'{s.target.name}' no es un procedimiento")
            self.calls.append((self.emit(LLA(dif, 0)), dif, code_text(code)))
        elif isinstance(s, t.Sequence):
            for x in s.stmts:
                self.statement(x, level)
        elif isinstance(s, t.If):
            self.condition(s.cond, level)
            jump_false = self.emit(SAC(0))
            self.statement(s.then, level)
            if s.otherwise is None:
                self.patch(jump_false, self.here)
            else:
                jump_end = self.emit(SAL(0))
                self.patch(jump_false, self.here)
                self.statement(s.otherwise, level)
                self.patch(jump_end, self.here)
        elif isinstance(s, t.While):
            start = self.here
            self.condition(s.cond, level)
            jump_out = self.emit(SAC(0))
            self.statement(s.body, level)
            self.emit(SAL(start))
            self.patch(jump_out, self.here)
        elif isinstance(s, t.Read):
            self.emit(LEE)
            self.store(s.target, level)
        elif isinstance(s, t.Write):
            self.load(s.source, level)
            self.emit(ESC)

    def condition(self, c: t.Condition, level: int):
        if isinstance(c, t.Odd):
            self.expr(c.expr, level)
            self.emit(OPR(OperationCode.ODD))
        else:
            self.expr(c.lhs, level)
            self.expr(c.rhs, level)
            self.emit(OPR(REL_CODES[c.op]))

    def expr(self, e: t.Expr, level: int):
        if isinstance(e, t.Num):
            self.emit(LIT(e.value))
        elif isinstance(e, t.IdentRef):
            self.load(e, level)
        elif isinstance(e, t.Neg):
            self.expr(e.expr, level)
            self.emit(OPR(OperationCode.NEGATIVO))
        else:
            self.expr(e.lhs, level)
            self.expr(e.rhs, level)
            self.emit(OPR(ARITH_CODES[e.op]))

    def resolve_calls(self):
        for address, dif, callee in self.calls:
            self.code[address] = LLA(dif, self.layouts[callee].entry_address)


def _generate(program: t.Program) -> _Generator:
    gen = _Generator(program)
    gen.block(program.block, MAIN_CODE)
    gen.resolve_calls()
    return gen


def generate(program: t.Program) -> tuple[list[Instruction], DiagnosticLog]:
    try:
        gen = _generate(program)
    except GenerationError as exc:
        return [], DiagnosticLog().report(error(Phase.GEN, exc.pos, str(exc)))
    return gen.code, DiagnosticLog()


def layout_blocks(program: t.Program) -> list[BlockLayout]:
    """Addresses of every block, main first, in code emission order of headers."""
    gen = _generate(program)
    return sorted(gen.layouts.values(), key=lambda layout: layout.header_address)


def jump_targets_valid(code: list[Instruction]) -> bool:
    for ins in code:
        if ins.op in (Op.SAC, Op.SAL, Op.LLA) and not 0 <= ins.target < len(code):
            return False
        if ins.op is Op.LLA and code[ins.target].op is not Op.INS:
            return False
    return True
