import re

from hypothesis import given, strategies as st

from pl0plus.diagnostics import Phase, SourcePos
from pl0plus.lexer import KEYWORDS, SYMBOLS, TokenKind as K, canonical_text, tokenize
from pl0plus.numeric import INT_MAX


def kinds(source):
    tokens, _ = tokenize(source)
    return [tok.kind for tok in tokens]


def test_keyword_length_and_position():
    (tok,), log = tokenize("while")
    assert tok.kind is K.WHILE and tok.length == 5 and tok.pos == SourcePos(1, 1)
    assert not log


def test_assignment_position():
    tokens, _ = tokenize("x := 3")
    assert tokens[1].kind is K.ASIGNACION
    assert tokens[1].pos == SourcePos(1, 3)
    assert tokens[1].length == 2


def test_relation_with_numbers():
    tokens, log = tokenize("x1 <= 10")
    assert [t.kind for t in tokens] == [K.IDENTIFICADOR, K.MENOR_IGUAL, K.NUMERO]
    assert tokens[0].name == "x1" and tokens[2].value == 10
    assert [t.pos.column for t in tokens] == [1, 4, 7]
    assert not log


def test_invalid_character():
    tokens, log = tokenize("@")
    assert tokens == []
    assert len(log.errors) == 1
    d = log.errors[0]
    assert d.phase is Phase.LEX and d.pos == SourcePos(1, 1)


def test_keywords_are_lowercase_only():
    assert kinds("WHILE While while") == [K.IDENTIFICADOR, K.IDENTIFICADOR, K.WHILE]


def test_every_keyword_and_symbol():
    for text, kind in {**KEYWORDS, **SYMBOLS}.items():
        assert kinds(text) == [kind], text


def test_maximal_munch():
    assert kinds("<><=>=:=") == [K.DIFERENTE, K.MENOR_IGUAL, K.MAYOR_IGUAL, K.ASIGNACION]
    assert kinds("< >") == [K.MENOR_QUE, K.MAYOR_QUE]


def test_lone_colon_is_an_error():
    tokens, log = tokenize("x : 1")
    assert [t.kind for t in tokens] == [K.IDENTIFICADOR, K.NUMERO]
    assert log.errors[0].pos == SourcePos(1, 3)


def test_lines_and_columns():
    tokens, _ = tokenize("var x;\n  begin\n\tend.")
    assert [(t.line, t.column) for t in tokens] == [(1, 1), (1, 5), (1, 6), (2, 3), (3, 2), (3, 5)]


def test_large_number_is_clamped_with_error():
    tokens, log = tokenize("99999999999")
    assert tokens[0].value == INT_MAX
    assert log.has_errors
    tokens, log = tokenize(str(INT_MAX))
    assert tokens[0].value == INT_MAX and not log


def test_identifier_adjacent_to_number():
    tokens, _ = tokenize("12ab")
    assert [(t.kind, t.value or t.name) for t in tokens] == [(K.NUMERO, 12), (K.IDENTIFICADOR, "ab")]


# Property tests

_SPELLINGS = sorted(set(KEYWORDS) | set(SYMBOLS))
_piece = st.one_of(
    st.sampled_from(_SPELLINGS),
    st.from_regex(r"[A-Za-z_][A-Za-z0-9_]{0,6}", fullmatch=True),
    st.integers(0, INT_MAX).map(str),
)


@given(st.lists(_piece, max_size=30))
def test_tokens_reconstruct_source(pieces):
    source = " ".join(pieces)
    tokens, log = tokenize(source)
    assert not log
    assert [t.lexeme() for t in tokens] == pieces
    for tok in tokens:
        start = tok.column - 1
        assert source[start:start + tok.length] == tok.lexeme()


@given(st.text(alphabet="abz019 \n\t:=<>+-*/().,;@#!", max_size=60))
def test_canonical_text_is_a_fixed_point(source):
    tokens, _ = tokenize(source)
    again, log = tokenize(canonical_text(tokens))
    assert [t.lexeme() for t in again] == [t.lexeme() for t in tokens]
    assert not log


@given(st.text(alphabet=st.characters(blacklist_categories=("Cs",)), max_size=60))
def test_invalid_characters_are_reported(source):
    tokens, log = tokenize(source)
    valid = re.compile(r"[A-Za-z0-9_ \t\r\n\f\v:=<>+\-*/().,;]")
    bad_lines = {i + 1 for i, line in enumerate(source.split("\n")) if any(not valid.match(c) for c in line)}
    assert bad_lines <= {d.pos.line for d in log.errors}
    for tok in tokens:
        assert tok.length >= 1
