from __future__ import annotations

from pathlib import Path

import pytest

from pl0plus import codegen, lexer, parser, semantics, vm
from pl0plus.diagnostics import merge

FIXTURES = Path(__file__).parent / "fixtures"
VALID_FIXTURES = sorted(p for p in FIXTURES.glob("*.pl0+") if p.stem != "errores")


def front_end(source: str):
    """Lex, parse and analyze; returns the annotated tree and the combined log."""
    tokens, log = lexer.tokenize(source)
    program, found = parser.parse(tokens)
    log = merge(log, found)
    annotated, found = semantics.analyze(program)
    return annotated, merge(log, found)


def compile_source(source: str):
    program, log = front_end(source)
    assert not log.has_errors, list(log)
    code, found = codegen.generate(program)
    assert not found.has_errors, list(found)
    return code


def run_source(source: str, inputs=(), step_limit=None):
    io = vm.ListIo(inputs)
    state, exit_ = vm.run(vm.load(compile_source(source)), io, step_limit)
    return io.output, exit_, state


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES
