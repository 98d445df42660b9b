"""Error and warning collection shared by every compiler phase.

A :class:`DiagnosticLog` is an immutable value.  :func:`report` returns a new
log; when an error or warning already exists for the same source line and the
same phase, the newer one is dropped (the one-error-per-line heuristic).
"""

from __future__ import annotations

import bisect
import enum
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


class Phase(enum.Enum):
    LEX = "lex"
    SIN = "sin"
    SEM = "sem"
    GEN = "gen"


@dataclass(frozen=True, order=True)
class SourcePos:
    line: int = 1
    column: int = 1

    def __post_init__(self):
        if self.line < 1 or self.column < 1:
            raise ValueError(f"invalid source position {self.line}:{self.column}")

    def __str__(self):
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    phase: Phase
    pos: SourcePos
    message: str
    length: int = 0


def error(phase: Phase, pos: SourcePos, message: str, length: int = 0) -> Diagnostic:
    return Diagnostic(Severity.ERROR, phase, pos, message, length)


def warning(phase: Phase, pos: SourcePos, message: str, length: int = 0) -> Diagnostic:
    return Diagnostic(Severity.WARNING, phase, pos, message, length)


@dataclass(frozen=True)
class DiagnosticLog:
    errors: tuple[Diagnostic, ...] = field(default=())
    warnings: tuple[Diagnostic, ...] = field(default=())

    def __bool__(self):
        return bool(self.errors or self.warnings)

    def __len__(self):
        return len(self.errors) + len(self.warnings)

    @property
    def has_errors(self) -> bool:
        return bool(self.errors)

    def __iter__(self):
        yield from self.errors
        yield from self.warnings

    def report(self, d: Diagnostic) -> DiagnosticLog:
        return report(self, d)

    def extend(self, diagnostics) -> DiagnosticLog:
        log = self
        for d in diagnostics:
            log = report(log, d)
        return log


def report(log: DiagnosticLog, d: Diagnostic) -> DiagnosticLog:
    # Both lists are consulted: a warning also blocks a later error on the
    # same line of the same phase.
    for existing in log:
        if existing.pos.line == d.pos.line and existing.phase == d.phase:
            return log
    target = log.errors if d.severity is Severity.ERROR else log.warnings
    keys = [(x.pos.line, x.pos.column) for x in target]
    i = bisect.bisect_right(keys, (d.pos.line, d.pos.column))
    updated = target[:i] + (d,) + target[i:]
    if d.severity is Severity.ERROR:
        return DiagnosticLog(updated, log.warnings)
    return DiagnosticLog(log.errors, updated)


def merge(first: DiagnosticLog, second: DiagnosticLog) -> DiagnosticLog:
    return first.extend(second)


_SEVERITY_WORD = {Severity.ERROR: "ERROR", Severity.WARNING: "AVISO"}


def render_text(log: DiagnosticLog) -> str:
    lines = [
        f"{_SEVERITY_WORD[d.severity]} [{d.phase.value}] {d.pos.line}:{d.pos.column} {d.message}"
        for d in log
    ]
    return "".join(line + "\n" for line in lines)


def to_element(log: DiagnosticLog) -> ET.Element:
    root = ET.Element("diagnosticos")
    for d in log:
        tag = "error" if d.severity is Severity.ERROR else "advertencia"
        ET.SubElement(root, tag, {
            "fase": d.phase.value,
            "linea": str(d.pos.line),
            "columna": str(d.pos.column),
            "longitud": str(d.length),
            "mensaje": d.message,
        })
    return root


def render_xml(log: DiagnosticLog) -> str:
    from .xmlio import serialize

    return serialize(to_element(log))


def parse_xml(text: str) -> DiagnosticLog:
    """Inverse of :func:`render_xml`; raises ``ValueError`` on bad input."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise ValueError(str(exc)) from exc
    if root.tag != "diagnosticos":
        raise ValueError(f"unexpected root element <{root.tag}>")
    log = DiagnosticLog()
    for el in root:
        severity = {"error": Severity.ERROR, "advertencia": Severity.WARNING}[el.tag]
        d = Diagnostic(
            severity,
            Phase(el.get("fase")),
            SourcePos(int(el.get("linea")), int(el.get("columna"))),
            el.get("mensaje"),
            int(el.get("longitud")),
        )
        log = report(log, d)
    return log
