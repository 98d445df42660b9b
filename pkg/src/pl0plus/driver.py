"""Compiler command line (``tradukilo``).

Usage::

    tradukilo [-a] [-m] [-e] [--lex] [--sin] [--sem] [--gen] programa

Without phase flags every phase runs.  The selected phases must be
contiguous in registry order, and the input file extension must match the
first selected phase.  Only the output of the last phase is written.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Optional, TextIO

from . import codegen, isa, lexer, parser, semantics, xmlio
from .diagnostics import DiagnosticLog, merge, render_text, render_xml
from .xmlio import DocumentKind

SOURCE_EXTENSION = ".pl0+"
OBJECT_EXTENSION = ".p+"

Translate = Callable[[Any, DiagnosticLog], tuple[Any, DiagnosticLog]]


@dataclass(frozen=True)
class PhaseDescriptor:
    name: str
    input_extension: str
    output_extension: str
    description: str
    translate: Translate


class UsageError(Exception):
    pass


class RegistrationError(Exception):
    pass


def _lex(source: str, log: DiagnosticLog):
    tokens, found = lexer.tokenize(source)
    return tokens, merge(log, found)


def _sin(tokens, log: DiagnosticLog):
    program, found = parser.parse(tokens)
    return program, merge(log, found)


def _sem(program, log: DiagnosticLog):
    annotated, found = semantics.analyze(program)
    return annotated, merge(log, found)


def _gen(program, log: DiagnosticLog):
    if log.has_errors:
        return [], log
    code, found = codegen.generate(program)
    return code, merge(log, found)


DEFAULT_PHASES = (
    PhaseDescriptor("lex", SOURCE_EXTENSION, ".pl0+lex", "Fase de análisis léxico", _lex),
    PhaseDescriptor("sin", ".pl0+lex", ".pl0+sin", "Fase de análisis sintáctico", _sin),
    PhaseDescriptor("sem", ".pl0+sin", ".pl0+sem", "Fase de análisis semántico", _sem),
    PhaseDescriptor("gen", ".pl0+sem", OBJECT_EXTENSION, "Fase de generación de código objeto", _gen),
)


# File codecs keyed by extension: reader returns (value, log), writer returns text.

def _read_source(text: str):
    return text, DiagnosticLog()


READERS: dict[str, Callable[[str], tuple[Any, DiagnosticLog]]] = {
    SOURCE_EXTENSION: _read_source,
    ".pl0+lex": xmlio.read_tokens,
    ".pl0+sin": lambda text: xmlio.read_tree(text, DocumentKind.SIN),
    ".pl0+sem": lambda text: xmlio.read_tree(text, DocumentKind.SEM),
}

WRITERS: dict[str, Callable[[Any], str]] = {
    SOURCE_EXTENSION: lambda text: text,
    ".pl0+lex": xmlio.write_tokens,
    ".pl0+sin": lambda tree: xmlio.write_tree(tree, DocumentKind.SIN),
    ".pl0+sem": lambda tree: xmlio.write_tree(tree, DocumentKind.SEM),
    OBJECT_EXTENSION: isa.render_object_text,
}


class PhaseRegistry:
    """Ordered phases available to the command line."""

    def __init__(self, phases=DEFAULT_PHASES):
        self.phases: tuple[PhaseDescriptor, ...] = tuple(phases)

    def __iter__(self):
        return iter(self.phases)

    def __len__(self):
        return len(self.phases)

    def names(self) -> list[str]:
        return [p.name for p in self.phases]

    def register(self, descriptor: PhaseDescriptor, position: int) -> PhaseRegistry:
        """Return a new registry with ``descriptor`` inserted at ``position``."""
        if descriptor.name in self.names():
            raise RegistrationError(f"la fase '{descriptor.name}' ya existe")
        if not 0 <= position <= len(self.phases):
            raise RegistrationError(f"posición inválida {position}")
        before = self.phases[position - 1] if position > 0 else None
        after = self.phases[position] if position < len(self.phases) else None
        if before is not None and before.output_extension != descriptor.input_extension:
            raise RegistrationError(
                f"'{descriptor.name}' recibe {descriptor.input_extension} pero '{before.name}' "
                f"produce {before.output_extension}")
        if after is not None and descriptor.output_extension != after.input_extension:
            raise RegistrationError(
                f"'{descriptor.name}' produce {descriptor.output_extension} pero '{after.name}' "
                f"recibe {after.input_extension}")
        for ext in (descriptor.input_extension, descriptor.output_extension):
            if ext not in READERS and ext not in WRITERS:
                raise RegistrationError(f"extensión desconocida {ext}")
        phases = self.phases[:position] + (descriptor,) + self.phases[position:]
        return PhaseRegistry(phases)


def register_phase(registry: PhaseRegistry, descriptor: PhaseDescriptor, position: int) -> PhaseRegistry:
    return registry.register(descriptor, position)


@dataclass(frozen=True)
class RunPlan:
    phases: tuple[PhaseDescriptor, ...]
    input_path: str
    output_path: str
    show: bool = False
    errors_as_xml: bool = False


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_arg_parser(registry: PhaseRegistry) -> argparse.ArgumentParser:
    ap = _ArgumentParser(
        prog="tradukilo",
        description="Compilador de pl0+ con fases separables.",
        add_help=False,
    )
    ap.add_argument("-a", "--ayuda", action="store_true", help="muestra esta ayuda y termina")
    ap.add_argument("-m", "--mostrar", action="store_true",
                    help="si no hay errores, muestra el resultado en la pantalla")
    ap.add_argument("-e", "--errores-xml", action="store_true",
                    help="reporta errores y advertencias como XML en la salida de error")
    for phase in registry:
        ap.add_argument(f"--{phase.name}", action="store_true", dest=f"phase_{phase.name}",
                        help=f"{phase.description} ({phase.input_extension} -> {phase.output_extension})")
    ap.add_argument("programa", nargs="?", help="archivo de entrada")
    return ap


def help_text(registry: Optional[PhaseRegistry] = None) -> str:
    return build_arg_parser(registry or PhaseRegistry()).format_help()


def _split_extension(path: str, extensions) -> tuple[str, str] | None:
    for ext in sorted(set(extensions), key=len, reverse=True):
        if path.endswith(ext) and len(path) > len(ext):
            return path[: -len(ext)], ext
    return None


def parse_args(argv: list[str], registry: Optional[PhaseRegistry] = None) -> Optional[RunPlan]:
    """Build a :class:`RunPlan`; ``None`` means help was requested."""
    registry = registry or PhaseRegistry()
    if "-a" in argv or "--ayuda" in argv:
        return None
    ns = build_arg_parser(registry).parse_args(argv)
    if ns.programa is None:
        raise UsageError("falta el archivo de entrada")

    chosen = [i for i, p in enumerate(registry) if getattr(ns, f"phase_{p.name}")]
    if not chosen:
        chosen = list(range(len(registry)))
    if chosen != list(range(chosen[0], chosen[-1] + 1)):
        names = ", ".join(f"--{registry.phases[i].name}" for i in chosen)
        raise UsageError(f"combinación de fases inválida ({names}): deben ser consecutivas")
    phases = tuple(registry.phases[i] for i in chosen)

    first = phases[0]
    split = _split_extension(ns.programa, [p.input_extension for p in registry])
    if split is None or split[1] != first.input_extension:
        raise UsageError(
            f"la fase '{first.name}' requiere un archivo {first.input_extension}: {ns.programa}")
    output = split[0] + phases[-1].output_extension
    return RunPlan(phases, ns.programa, output, ns.mostrar, ns.errores_xml)


def _report(log: DiagnosticLog, plan_xml: bool, stderr: TextIO):
    if plan_xml:
        stderr.write(render_xml(log))
    elif log:
        stderr.write(render_text(log))


def compile_text(text: str, phases, log: Optional[DiagnosticLog] = None) -> tuple[Any, DiagnosticLog]:
    """Run ``phases`` in order over an already-loaded value."""
    value = text
    log = log or DiagnosticLog()
    for phase in phases:
        value, log = phase.translate(value, log)
    return value, log


def run_pipeline(plan: RunPlan, stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        text = Path(plan.input_path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        print(f"tradukilo: no se puede leer {plan.input_path}: {exc}", file=stderr)
        return 2

    value, log = READERS[plan.phases[0].input_extension](text)
    if log.has_errors:
        _report(log, plan.errors_as_xml, stderr)
        return 2

    value, log = compile_text(value, plan.phases, log)
    _report(log, plan.errors_as_xml, stderr)
    if log.has_errors:
        return 1

    output = WRITERS[plan.phases[-1].output_extension](value)
    Path(plan.output_path).write_text(output, encoding="utf-8", newline="\n")
    if plan.show:
        stdout.write(output)
    return 0


def main(argv=None, registry: Optional[PhaseRegistry] = None,
         stdout: TextIO = None, stderr: TextIO = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    registry = registry or PhaseRegistry()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        plan = parse_args(argv, registry)
    except UsageError as exc:
        print(f"tradukilo: {exc}", file=stderr)
        print(build_arg_parser(registry).format_usage(), end="", file=stderr)
        return 2
    if plan is None:
        stdout.write(help_text(registry))
        return 0
    return run_pipeline(plan, stdout, stderr)


if __name__ == "__main__":
    sys.exit(main())
