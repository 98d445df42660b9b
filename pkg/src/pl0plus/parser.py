"""Recursive-descent parser for pl0+.

Grammar (PL/0 plus ``else``, ``read`` and ``write``)::

    programa    -> bloque "."
    bloque      -> ["const" ident "=" numero {"," ident "=" numero} ";"]
                   ["var" ident {"," ident} ";"]
                   {"procedure" ident ";" bloque ";"}
                   instruccion
    instruccion -> ident ":=" expresion | "call" ident
                 | "begin" instruccion {";" instruccion} "end"
                 | "if" condicion "then" instruccion ["else" instruccion]
                 | "while" condicion "do" instruccion
                 | "read" ident | "write" ident | <empty>
    condicion   -> "odd" expresion | expresion relop expresion
    expresion   -> ["+" | "-"] termino {("+" | "-") termino}
    termino     -> factor {("*" | "/") factor}
    factor      -> ident | numero | "(" expresion ")"

On a syntax error the parser reports it, skips ahead to a synchronization
token and carries on, so the returned tree is always complete.
"""

from __future__ import annotations

from typing import Optional

from . import tree as t
from .diagnostics import DiagnosticLog, Phase, SourcePos, error, warning
from .lexer import Token, TokenKind as K

SYNC = frozenset({
    K.PUNTO_Y_COMA, K.END, K.PUNTO, K.CONST, K.VAR, K.PROCEDURE,
    K.IF, K.WHILE, K.BEGIN, K.CALL, K.READ, K.WRITE,
})

STATEMENT_START = frozenset({K.IDENTIFICADOR, K.CALL, K.BEGIN, K.IF, K.WHILE, K.READ, K.WRITE})

RELOPS = {
    K.IGUAL: t.RelOp.COMPARACION,
    K.DIFERENTE: t.RelOp.DIFERENTE_DE,
    K.MENOR_QUE: t.RelOp.MENOR_QUE,
    K.MAYOR_QUE: t.RelOp.MAYOR_QUE,
    K.MENOR_IGUAL: t.RelOp.MENOR_IGUAL_QUE,
    K.MAYOR_IGUAL: t.RelOp.MAYOR_IGUAL_QUE,
}

_DESCRIPTION = {
    K.PUNTO: "punto",
    K.PUNTO_Y_COMA: "';'",
    K.IGUAL: "'='",
    K.ASIGNACION: "':='",
    K.PARENTESIS_CIERRE: "')'",
    K.IDENTIFICADOR: "un identificador",
    K.NUMERO: "un número",
    K.THEN: "'then'",
    K.DO: "'do'",
    K.END: "'end'",
}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0
        self.log = DiagnosticLog()
        if tokens:
            last = tokens[-1]
            self.eof_pos = SourcePos(last.line, last.column + last.length)
        else:
            self.eof_pos = SourcePos(1, 1)

    # token helpers

    @property
    def tok(self) -> Optional[Token]:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    @property
    def kind(self) -> Optional[K]:
        tok = self.tok
        return tok.kind if tok is not None else None

    @property
    def pos(self) -> SourcePos:
        tok = self.tok
        return tok.pos if tok is not None else self.eof_pos

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, kind: K) -> Optional[Token]:
        if self.kind is kind:
            return self.advance()
        return None

    def fail(self, message: str):
        tok = self.tok
        length = tok.length if tok is not None else 0
        self.log = self.log.report(error(Phase.SIN, self.pos, message, length))

    def warn(self, message: str):
        self.log = self.log.report(warning(Phase.SIN, self.pos, message, self.tok.length))

    def expect(self, kind: K) -> Optional[Token]:
        tok = self.accept(kind)
        if tok is None:
            self.fail(f"se esperaba {_DESCRIPTION.get(kind, kind.tag)}")
        return tok

    def skip_to(self, stop=SYNC):
        while self.tok is not None and self.kind not in stop:
            self.advance()

    # grammar

    def program(self) -> t.Program:
        block = self.block()
        if self.expect(K.PUNTO) is None:
            self.skip_to(frozenset({K.PUNTO}))
            self.accept(K.PUNTO)
        if self.tok is not None:
            self.fail("texto después del final del programa")
        return t.Program(block)

    def block(self) -> t.Block:
        consts: list[t.ConstDecl] = []
        vars_: list[t.VarDecl] = []
        procs: list[t.ProcDecl] = []

        if self.accept(K.CONST):
            while True:
                decl = self.const_decl()
                if decl is not None:
                    consts.append(decl)
                if not self.accept(K.COMA):
                    break
            self.end_of_declaration()

        if self.accept(K.VAR):
            while True:
                tok = self.expect(K.IDENTIFICADOR)
                if tok is not None:
                    vars_.append(t.VarDecl(tok.name, tok.pos))
                else:
                    self.skip_to(SYNC | {K.COMA})
                if not self.accept(K.COMA):
                    break
            self.end_of_declaration()

        while self.kind is K.PROCEDURE:
            start = self.advance()
            name_tok = self.expect(K.IDENTIFICADOR)
            self.end_of_declaration()
            body = self.block()
            if self.expect(K.PUNTO_Y_COMA) is None:
                self.skip_to(SYNC - {K.END})
                self.accept(K.PUNTO_Y_COMA)
            if name_tok is not None:
                procs.append(t.ProcDecl(name_tok.name, body, name_tok.pos))
            else:
                procs.append(t.ProcDecl("?", body, start.pos))

        body = self.statement()
        return t.Block(tuple(consts), tuple(vars_), tuple(procs), body)

    def end_of_declaration(self):
        if self.expect(K.PUNTO_Y_COMA) is None:
            self.skip_to()
            self.accept(K.PUNTO_Y_COMA)

    def const_decl(self) -> Optional[t.ConstDecl]:
        name_tok = self.expect(K.IDENTIFICADOR)
        if name_tok is None:
            self.skip_to(SYNC | {K.COMA})
            return None
        if self.kind is K.ASIGNACION:
            self.warn("se asume '=' en lugar de ':=' en la declaración de constante")
            self.advance()
        elif self.expect(K.IGUAL) is None:
            self.skip_to(SYNC | {K.COMA})
            return None
        value_tok = self.expect(K.NUMERO)
        if value_tok is None:
            self.skip_to(SYNC | {K.COMA})
            return None
        return t.ConstDecl(name_tok.name, value_tok.value, name_tok.pos)

    def ident(self) -> Optional[t.IdentRef]:
        tok = self.expect(K.IDENTIFICADOR)
        if tok is None:
            return None
        return t.IdentRef(tok.name, tok.pos)

    def statement(self) -> t.Statement:
        pos = self.pos
        kind = self.kind

        if kind is K.IDENTIFICADOR:
            target = self.ident()
            if self.kind is K.IGUAL:
                self.warn("se asume ':=' en lugar de '='")
                self.advance()
            elif self.expect(K.ASIGNACION) is None:
                self.skip_to(SYNC | {K.ELSE})
                return t.Empty(pos)
            return t.Assign(target, self.expression(), pos)

        if kind is K.CALL:
            self.advance()
            target = self.ident()
            if target is None:
                self.skip_to(SYNC | {K.ELSE})
                return t.Empty(pos)
            return t.Call(target, pos)

        if kind is K.BEGIN:
            self.advance()
            stmts = [self.statement()]
            while True:
                if self.accept(K.PUNTO_Y_COMA):
                    stmts.append(self.statement())
                elif self.kind in STATEMENT_START:
                    self.fail("se esperaba ';'")
                    stmts.append(self.statement())
                else:
                    break
            if self.expect(K.END) is None:
                self.skip_to(SYNC - {K.PUNTO_Y_COMA} | {K.ELSE})
                self.accept(K.END)
            return t.Sequence(tuple(stmts), pos)

        if kind is K.IF:
            self.advance()
            cond = self.condition()
            if self.expect(K.THEN) is None:
                self.skip_to(SYNC | {K.THEN, K.ELSE})
                self.accept(K.THEN)
            then = self.statement()
            otherwise = None
            if self.accept(K.ELSE):
                otherwise = self.statement()
            return t.If(cond, then, otherwise, pos)

        if kind is K.WHILE:
            self.advance()
            cond = self.condition()
            if self.expect(K.DO) is None:
                self.skip_to(SYNC | {K.DO, K.ELSE})
                self.accept(K.DO)
            return t.While(cond, self.statement(), pos)

        if kind in (K.READ, K.WRITE):
            self.advance()
            target = self.ident()
            if target is None:
                self.skip_to(SYNC | {K.ELSE})
                return t.Empty(pos)
            return t.Read(target, pos) if kind is K.READ else t.Write(target, pos)

        return t.Empty(pos)

    def condition(self) -> t.Condition:
        if self.kind is K.ODD:
            pos = self.advance().pos
            return t.Odd(self.expression(), pos)
        lhs = self.expression()
        op = RELOPS.get(self.kind)
        if op is None:
            self.fail("se esperaba un operador relacional")
            return t.Relation(t.RelOp.COMPARACION, lhs, t.Num(0, self.pos))
        self.advance()
        return t.Relation(op, lhs, self.expression())

    def expression(self) -> t.Expr:
        if self.kind is K.MENOS:
            pos = self.advance().pos
            expr: t.Expr = t.Neg(self.term(), pos)
        else:
            self.accept(K.MAS)
            expr = self.term()
        while self.kind in (K.MAS, K.MENOS):
            op = t.ArithOp.SUMA if self.advance().kind is K.MAS else t.ArithOp.RESTA
            expr = t.BinOp(op, expr, self.term())
        return expr

    def term(self) -> t.Expr:
        expr = self.factor()
        while self.kind in (K.POR, K.ENTRE):
            op = t.ArithOp.MULTIPLICACION if self.advance().kind is K.POR else t.ArithOp.DIVISION
            expr = t.BinOp(op, expr, self.factor())
        return expr

    def factor(self) -> t.Expr:
        tok = self.tok
        if tok is not None and tok.kind is K.IDENTIFICADOR:
            self.advance()
            return t.IdentRef(tok.name, tok.pos)
        if tok is not None and tok.kind is K.NUMERO:
            self.advance()
            return t.Num(tok.value, tok.pos)
        if tok is not None and tok.kind is K.PARENTESIS_APERTURA:
            self.advance()
            expr = self.expression()
            if self.expect(K.PARENTESIS_CIERRE) is None:
                self.skip_to(SYNC | {K.PARENTESIS_CIERRE, K.THEN, K.DO, K.ELSE})
                self.accept(K.PARENTESIS_CIERRE)
            return expr
        self.fail("se esperaba un identificador, un número o '('")
        pos = self.pos
        # Consume the offending token unless it can resynchronize the caller.
        if tok is not None and tok.kind not in SYNC | {K.THEN, K.DO, K.ELSE, K.PARENTESIS_CIERRE} | RELOPS.keys():
            self.advance()
        return t.Num(0, pos)


def parse(tokens: list[Token]) -> tuple[t.Program, DiagnosticLog]:
    p = _Parser(list(tokens))
    program = p.program()
    return program, p.log
