"""The p+ instruction set and the ``.p+`` object text format.

An object file holds one instruction per line: the uppercase mnemonic
followed by its decimal operands, separated by single spaces.  The 0-based
line index is the instruction address.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .diagnostics import DiagnosticLog, Phase, SourcePos, error
from .numeric import in_range


class OperationCode(enum.IntEnum):
    NEGATIVO = 1
    SUMA = 2
    RESTA = 3
    MULTIPLICACION = 4
    DIVISION = 5
    ODD = 6
    COMPARACION = 8
    DIFERENTE_DE = 9
    MENOR_QUE = 10
    MAYOR_IGUAL_QUE = 11
    MAYOR_QUE = 12
    MENOR_IGUAL_QUE = 13

    @property
    def is_unary(self) -> bool:
        return self in (OperationCode.NEGATIVO, OperationCode.ODD)

    @property
    def is_relational(self) -> bool:
        return self >= OperationCode.COMPARACION


class Op(enum.Enum):
    LIT = "LIT"
    CAR = "CAR"
    ALM = "ALM"
    LLA = "LLA"
    INS = "INS"
    SAC = "SAC"
    SAL = "SAL"
    OPR = "OPR"
    RET = "RET"
    LEE = "LEE"
    ESC = "ESC"


ARITY = {
    Op.LIT: 1, Op.INS: 1, Op.SAC: 1, Op.SAL: 1, Op.OPR: 1,
    Op.CAR: 2, Op.ALM: 2, Op.LLA: 2,
    Op.RET: 0, Op.LEE: 0, Op.ESC: 0,
}

JUMPS = (Op.SAC, Op.SAL, Op.LLA)


@dataclass(frozen=True)
class Instruction:
    op: Op
    args: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.args) != ARITY[self.op]:
            raise ValueError(f"{self.op.value} takes {ARITY[self.op]} operand(s), got {len(self.args)}")

    @property
    def a(self) -> int:
        return self.args[0]

    @property
    def b(self) -> int:
        return self.args[1]

    @property
    def target(self) -> int:
        """Jump/call destination address for SAC, SAL and LLA."""
        return self.args[-1]

    def __str__(self):
        return " ".join([self.op.value, *map(str, self.args)])


def LIT(val: int) -> Instruction: return Instruction(Op.LIT, (val,))
def CAR(dif: int, pos: int) -> Instruction: return Instruction(Op.CAR, (dif, pos))
def ALM(dif: int, pos: int) -> Instruction: return Instruction(Op.ALM, (dif, pos))
def LLA(dif: int, dir: int) -> Instruction: return Instruction(Op.LLA, (dif, dir))
def INS(num: int) -> Instruction: return Instruction(Op.INS, (num,))
def SAC(dir: int) -> Instruction: return Instruction(Op.SAC, (dir,))
def SAL(dir: int) -> Instruction: return Instruction(Op.SAL, (dir,))
def OPR(code: int) -> Instruction: return Instruction(Op.OPR, (int(code),))


RET = Instruction(Op.RET)
LEE = Instruction(Op.LEE)
ESC = Instruction(Op.ESC)


def _operand_problem(ins: Instruction, code_length: int) -> str | None:
    op, args = ins.op, ins.args
    if op is Op.LIT:
        return None if in_range(args[0]) else "literal fuera del rango de 32 bits"
    if op is Op.OPR:
        return None if args[0] in OperationCode._value2member_map_ else "código de operación inválido"
    if op is Op.INS:
        return None if args[0] >= 3 else "INS requiere al menos 3 celdas"
    if any(a < 0 for a in args):
        return "operando negativo"
    if op in JUMPS and args[-1] >= code_length:
        return "dirección fuera del programa"
    return None


def parse_object_text(text: str) -> tuple[list[Instruction], DiagnosticLog]:
    log = DiagnosticLog()
    instructions: list[Instruction] = []
    lines = [(n, line.rstrip()) for n, line in enumerate(text.split("\n"), start=1)]
    lines = [(n, line) for n, line in lines if line]

    def fail(n: int, message: str):
        nonlocal log
        log = log.report(error(Phase.GEN, SourcePos(n, 1), f"línea {n}: {message}"))

    parsed = []
    for n, line in lines:
        mnemonic, *rest = line.split(" ")
        try:
            op = Op(mnemonic)
        except ValueError:
            fail(n, f"mnemónico desconocido {mnemonic!r}")
            continue
        try:
            args = tuple(int(x, 10) for x in rest)
            if any(x != str(a) for x, a in zip(rest, args)):
                raise ValueError
        except ValueError:
            fail(n, "operando no es un entero decimal")
            continue
        if len(args) != ARITY[op]:
            fail(n, f"{op.value} requiere {ARITY[op]} operando(s)")
            continue
        parsed.append((n, Instruction(op, args)))

    for n, ins in parsed:
        problem = _operand_problem(ins, len(lines))
        if problem is not None:
            fail(n, problem)
        instructions.append(ins)
    return instructions, log


def render_object_text(instructions) -> str:
    return "".join(f"{ins}\n" for ins in instructions)
