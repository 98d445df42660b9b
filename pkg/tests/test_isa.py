from hypothesis import given, strategies as st

from pl0plus import isa
from pl0plus.isa import ARITY, Op, OperationCode, parse_object_text, render_object_text
from pl0plus.numeric import INT_MAX, INT_MIN


def test_eleven_mnemonics():
    assert sorted(op.name for op in Op) == sorted(
        ["LIT", "CAR", "ALM", "LLA", "INS", "SAC", "SAL", "OPR", "RET", "LEE", "ESC"])
    assert set(ARITY) == set(Op)


def test_parse_simple():
    code, log = parse_object_text("LIT 5\nCAR 0 3\nRET\n")
    assert not log
    assert code == [isa.LIT(5), isa.CAR(0, 3), isa.RET]


def test_opr_seven_is_invalid():
    _, log = parse_object_text("OPR 7\n")
    assert log.has_errors
    assert "código de operación inválido" in log.errors[0].message


def test_errors_name_the_line():
    _, log = parse_object_text("LIT 1\nFOO 2\nLIT\nSAL 99\n")
    assert [d.pos.line for d in log.errors] == [2, 3, 4]


def test_render():
    assert render_object_text([isa.RET]) == "RET\n"
    assert render_object_text([isa.LIT(5), isa.ESC, isa.RET]).splitlines() == ["LIT 5", "ESC", "RET"]


def test_ins_below_frame_size_rejected():
    _, log = parse_object_text("INS 2\n")
    assert log.has_errors


def _instruction(n):
    addr = st.integers(0, n - 1)
    return st.one_of(
        st.integers(INT_MIN, INT_MAX).map(isa.LIT),
        st.builds(isa.CAR, st.integers(0, 5), st.integers(3, 20)),
        st.builds(isa.ALM, st.integers(0, 5), st.integers(3, 20)),
        st.builds(isa.LLA, st.integers(0, 5), addr),
        st.integers(3, 30).map(isa.INS),
        addr.map(isa.SAC),
        addr.map(isa.SAL),
        st.sampled_from(list(OperationCode)).map(isa.OPR),
        st.sampled_from([isa.RET, isa.LEE, isa.ESC]),
    )


@given(st.integers(1, 30).flatmap(lambda n: st.lists(_instruction(n), min_size=n, max_size=n)))
def test_object_text_round_trip(code):
    again, log = parse_object_text(render_object_text(code))
    assert not log
    assert again == code


@given(st.sampled_from(list(Op)), st.lists(st.integers(0, 9), max_size=3))
def test_wrong_operand_count(op, args):
    text = " ".join([op.name, *map(str, args)])
    _, log = parse_object_text(text + "\n" + "RET\n" * 10)
    if len(args) != ARITY[op]:
        assert log.has_errors
