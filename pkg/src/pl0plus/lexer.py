"""Lexical analysis: pl0+ source text to a flat list of tokens."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .diagnostics import DiagnosticLog, Phase, SourcePos, error
from .numeric import INT_MAX


class TokenKind(enum.Enum):
    # Keywords are tagged with their own name in uppercase.
    BEGIN = "BEGIN"
    CALL = "CALL"
    CONST = "CONST"
    DO = "DO"
    END = "END"
    IF = "IF"
    ODD = "ODD"
    PROCEDURE = "PROCEDURE"
    THEN = "THEN"
    VAR = "VAR"
    WHILE = "WHILE"
    ELSE = "ELSE"
    WRITE = "WRITE"
    READ = "READ"

    IGUAL = "igual"
    ASIGNACION = "asignacion"
    COMA = "coma"
    PUNTO_Y_COMA = "punto_y_coma"
    PARENTESIS_APERTURA = "parentesis_apertura"
    PARENTESIS_CIERRE = "parentesis_cierre"
    DIFERENTE = "diferente"
    MENOR_QUE = "menor_que"
    MAYOR_QUE = "mayor_que"
    MENOR_IGUAL = "menor_igual"
    MAYOR_IGUAL = "mayor_igual"
    MAS = "mas"
    MENOS = "menos"
    POR = "por"
    ENTRE = "entre"
    PUNTO = "punto"

    IDENTIFICADOR = "IDENTIFICADOR"
    NUMERO = "NUMERO"

    @property
    def tag(self) -> str:
        return self.value

    @property
    def is_keyword(self) -> bool:
        return self in KEYWORDS.values()


KEYWORDS = {
    kind.value.lower(): kind
    for kind in TokenKind
    if kind.value.isupper() and kind.value not in ("IDENTIFICADOR", "NUMERO")
}

SYMBOLS = {
    "=": TokenKind.IGUAL,
    ":=": TokenKind.ASIGNACION,
    ",": TokenKind.COMA,
    ";": TokenKind.PUNTO_Y_COMA,
    "(": TokenKind.PARENTESIS_APERTURA,
    ")": TokenKind.PARENTESIS_CIERRE,
    "<>": TokenKind.DIFERENTE,
    "<": TokenKind.MENOR_QUE,
    ">": TokenKind.MAYOR_QUE,
    "<=": TokenKind.MENOR_IGUAL,
    ">=": TokenKind.MAYOR_IGUAL,
    "+": TokenKind.MAS,
    "-": TokenKind.MENOS,
    "*": TokenKind.POR,
    "/": TokenKind.ENTRE,
    ".": TokenKind.PUNTO,
}

TAG_TO_KIND = {kind.tag: kind for kind in TokenKind}

_WHITESPACE = " \t\r\n\f\v"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    pos: SourcePos
    length: int
    name: Optional[str] = None
    value: Optional[int] = None

    @property
    def line(self) -> int:
        return self.pos.line

    @property
    def column(self) -> int:
        return self.pos.column

    def lexeme(self) -> str:
        """Canonical source spelling of the token."""
        if self.kind is TokenKind.IDENTIFICADOR:
            return self.name
        if self.kind is TokenKind.NUMERO:
            return str(self.value)
        if self.kind.is_keyword:
            return self.kind.value.lower()
        return _SYMBOL_TEXT[self.kind]


_SYMBOL_TEXT = {kind: text for text, kind in SYMBOLS.items()}


def _is_ident_start(c: str) -> bool:
    return c == "_" or ("a" <= c <= "z") or ("A" <= c <= "Z")


def _is_ident_char(c: str) -> bool:
    return _is_ident_start(c) or c.isdigit() and c.isascii()


def tokenize(source: str) -> tuple[list[Token], DiagnosticLog]:
    tokens: list[Token] = []
    log = DiagnosticLog()
    i, n = 0, len(source)
    line, col = 1, 1

    while i < n:
        c = source[i]
        if c == "\n":
            i += 1
            line, col = line + 1, 1
            continue
        if c in _WHITESPACE:
            i += 1
            col += 1
            continue

        pos = SourcePos(line, col)
        if _is_ident_start(c):
            j = i + 1
            while j < n and _is_ident_char(source[j]):
                j += 1
            word = source[i:j]
            kind = KEYWORDS.get(word)
            if kind is None:
                tokens.append(Token(TokenKind.IDENTIFICADOR, pos, j - i, name=word))
            else:
                tokens.append(Token(kind, pos, j - i))
        elif "0" <= c <= "9":
            j = i + 1
            while j < n and "0" <= source[j] <= "9":
                j += 1
            value = int(source[i:j])
            if value > INT_MAX:
                log = log.report(error(Phase.LEX, pos, "número fuera del rango de 32 bits", j - i))
                value = INT_MAX
            tokens.append(Token(TokenKind.NUMERO, pos, j - i, value=value))
        else:
            pair = source[i:i + 2]
            if pair in SYMBOLS:
                j = i + 2
                kind = SYMBOLS[pair]
            elif c in SYMBOLS:
                j = i + 1
                kind = SYMBOLS[c]
            else:
                log = log.report(error(Phase.LEX, pos, f"carácter inválido {c!r}", 1))
                i += 1
                col += 1
                continue
            tokens.append(Token(kind, pos, j - i))
        col += j - i
        i = j

    return tokens, log


def canonical_text(tokens: list[Token]) -> str:
    """Render tokens as source text, one space between lexemes."""
    return " ".join(t.lexeme() for t in tokens)
