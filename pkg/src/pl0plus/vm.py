"""Stack-machine interpreter for p+ object code.

Registers: ``p`` program counter, ``b`` base of the current frame and ``t``
top of stack.  Stack index 0 is never used.  :func:`load` builds a bottom
frame at ``b = 1`` whose return-address cell holds the code length, so the
main block's final ``RET`` lands on ``p == len(code)`` and the machine halts.
"""

from __future__ import annotations

import argparse
import enum
import sys
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, TextIO

from .isa import Instruction, Op, parse_object_text
from .numeric import STACK_LIMIT, ArithmeticFault, apply_binary, apply_unary, in_range


class Exit(enum.Enum):
    HALTED = "halted"
    FAULTED = "faulted"
    LIMIT = "limit"


class MachineFault(Exception):
    def __init__(self, message: str, address: int = -1, instruction: Optional[Instruction] = None):
        super().__init__(message)
        self.message = message
        self.address = address
        self.instruction = instruction

    def __str__(self):
        if self.instruction is None:
            return self.message
        return f"{self.message} (p={self.address}, {self.instruction})"


class InputExhausted(Exception):
    pass


@dataclass
class MachineState:
    code: list[Instruction]
    stack: list[int] = field(default_factory=lambda: [0, 0, 0, 0])
    p: int = 0
    b: int = 1
    t: int = 3
    steps: int = 0
    fault: Optional[MachineFault] = None

    @property
    def halted(self) -> bool:
        return self.p == len(self.code)

    @property
    def faulted(self) -> bool:
        return self.fault is not None

    def top(self, n: int = 4) -> list[int]:
        return self.stack[max(1, self.t - n + 1):self.t + 1]


class IoPorts:
    """Integer input/output; ``read_int`` raises :class:`InputExhausted`."""

    def read_int(self) -> int:
        raise NotImplementedError

    def write_int(self, value: int) -> None:
        raise NotImplementedError


class ListIo(IoPorts):
    def __init__(self, inputs: Iterable[int] = ()):
        self.inputs = list(inputs)
        self.output: list[int] = []
        self._next = 0

    def read_int(self) -> int:
        if self._next >= len(self.inputs):
            raise InputExhausted
        value = self.inputs[self._next]
        self._next += 1
        return value

    def write_int(self, value: int) -> None:
        self.output.append(value)


class StreamIo(IoPorts):
    """Whitespace-separated integers from ``stdin``, one integer per output line."""

    def __init__(self, stdin: TextIO, stdout: TextIO):
        self.stdin = stdin
        self.stdout = stdout
        self._pending: list[str] = []

    def read_int(self) -> int:
        while not self._pending:
            line = self.stdin.readline()
            if not line:
                raise InputExhausted
            self._pending = line.split()
        word = self._pending.pop(0)
        try:
            return int(word)
        except ValueError:
            raise MachineFault(f"entrada no es un entero: {word!r}") from None

    def write_int(self, value: int) -> None:
        self.stdout.write(f"{value}\n")
        self.stdout.flush()


def load(instructions: list[Instruction]) -> MachineState:
    code = list(instructions)
    return MachineState(code=code, stack=[0, 0, 0, len(code)])


def base(state: MachineState, dif: int) -> int:
    b = state.b
    for _ in range(dif):
        b = state.stack[b]
        if b < 1:
            raise MachineFault("cadena estática rota")
    return b


def _cell(state: MachineState, index: int) -> int:
    if not 1 <= index <= state.t:
        raise MachineFault(f"acceso fuera de la pila (celda {index})")
    return index


def _ensure(state: MachineState, top: int):
    if top >= STACK_LIMIT:
        raise MachineFault("desbordamiento de pila")
    if top >= len(state.stack):
        state.stack.extend([0] * (top + 1 - len(state.stack)))


def _push(state: MachineState, value: int):
    _ensure(state, state.t + 1)
    state.t += 1
    state.stack[state.t] = value


def _pop(state: MachineState) -> int:
    if state.t < 1:
        raise MachineFault("pila vacía")
    value = state.stack[state.t]
    state.t -= 1
    return value


def step(state: MachineState, io: IoPorts) -> MachineState:
    """Execute one instruction, mutating and returning ``state``.

    Raises :class:`MachineFault`; :func:`run` turns that into a faulted exit.
    """
    address = state.p
    ins = state.code[address]
    state.p += 1
    state.steps += 1
    try:
        _execute(state, ins, io)
    except MachineFault as exc:
        exc.address, exc.instruction = address, ins
        raise
    except ArithmeticFault as exc:
        raise MachineFault(str(exc), address, ins) from None
    except InputExhausted:
        raise MachineFault("entrada agotada", address, ins) from None
    return state


def _execute(state: MachineState, ins: Instruction, io: IoPorts):
    op = ins.op
    if op is Op.LIT:
        _push(state, ins.a)
    elif op is Op.CAR:
        _push(state, state.stack[_cell(state, base(state, ins.a) + ins.b)])
    elif op is Op.ALM:
        index = _cell(state, base(state, ins.a) + ins.b)
        state.stack[index] = _pop(state)
    elif op is Op.LLA:
        link = base(state, ins.a)
        _ensure(state, state.t + 3)
        t = state.t
        state.stack[t + 1] = link
        state.stack[t + 2] = state.b
        state.stack[t + 3] = state.p
        state.b = t + 1
        state.p = ins.b
    elif op is Op.INS:
        top = state.b + ins.a - 1
        _ensure(state, top)
        # Locals start at zero so runs are reproducible.
        for i in range(state.b + 3, top + 1):
            state.stack[i] = 0
        state.t = top
    elif op is Op.SAC:
        if _pop(state) == 0:
            state.p = ins.a
    elif op is Op.SAL:
        state.p = ins.a
    elif op is Op.OPR:
        code = ins.a
        if code in (1, 6):
            if state.t < 1:
                raise MachineFault("pila vacía")
            state.stack[state.t] = apply_unary(code, state.stack[state.t])
        else:
            rhs = _pop(state)
            lhs = _pop(state)
            _push(state, apply_binary(code, lhs, rhs))
    elif op is Op.RET:
        b = state.b
        if b < 1 or b + 2 >= len(state.stack):
            raise MachineFault("retorno sin marco de activación")
        state.t = b - 1
        state.p = state.stack[b + 2]
        state.b = state.stack[b + 1]
        if not 0 <= state.p <= len(state.code):
            raise MachineFault(f"dirección de retorno inválida {state.p}")
    elif op is Op.LEE:
        value = io.read_int()
        if not in_range(value):
            raise MachineFault(f"entrada fuera del rango de 32 bits: {value}")
        _push(state, value)
    elif op is Op.ESC:
        io.write_int(_pop(state))


def run(state: MachineState, io: IoPorts, step_limit: Optional[int] = None,
        on_step: Optional[Callable[[MachineState], None]] = None) -> tuple[MachineState, Exit]:
    """Step until halt, fault or ``step_limit`` executed instructions."""
    while not state.halted:
        if state.fault is not None:
            return state, Exit.FAULTED
        if step_limit is not None and state.steps >= step_limit:
            return state, Exit.LIMIT
        try:
            step(state, io)
        except MachineFault as exc:
            state.fault = exc
            return state, Exit.FAULTED
        if on_step is not None:
            on_step(state)
    return state, Exit.HALTED


def trace_line(state: MachineState, ins: Instruction) -> str:
    top = " ".join(str(v) for v in state.top(4))
    return f"p={state.p} b={state.b} t={state.t} instr={ins} pila=[{top}]"


# Command line

def _open_pause_stream():
    try:
        return open("/dev/tty")
    except OSError:
        return None


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vm-run",
        description="Intérprete de programas p+.",
        add_help=False,
    )
    parser.add_argument("-a", "--ayuda", action="store_true", help="muestra esta ayuda y termina")
    parser.add_argument("-d", "--depurar", action="store_true",
                        help="ejecuta paso a paso mostrando los registros")
    parser.add_argument("programa", nargs="?", help="programa objeto .p+")
    return parser


def main(argv=None, stdin: TextIO = None, stdout: TextIO = None, stderr: TextIO = None,
         pause: TextIO = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_arg_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.ayuda:
        stdout.write(parser.format_help())
        return 0
    if args.programa is None:
        print(parser.format_usage().rstrip(), file=stderr)
        print("vm-run: falta el programa objeto", file=stderr)
        return 2

    try:
        with open(args.programa, encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        print(f"vm-run: no se puede leer {args.programa}: {exc.strerror}", file=stderr)
        return 2
    code, log = parse_object_text(text)
    if log.has_errors:
        for d in log.errors:
            print(f"vm-run: {d.message}", file=stderr)
        return 2

    state = load(code)
    io = StreamIo(stdin, stdout)
    if args.depurar:
        if pause is None:
            pause = _open_pause_stream()
        exit_ = Exit.HALTED
        while not state.halted:
            ins = state.code[state.p]
            try:
                step(state, io)
            except MachineFault as exc:
                state.fault = exc
                exit_ = Exit.FAULTED
                break
            print(trace_line(state, ins), file=stderr)
            if pause is not None:
                pause.readline()
    else:
        state, exit_ = run(state, io)

    if exit_ is Exit.FAULTED:
        print(f"vm-run: error en ejecución: {state.fault}", file=stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
