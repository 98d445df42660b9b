"""XML forms of the intermediate representations.

* ``.pl0+lex``: ``<elementos_lexicos>`` with one empty element per token.
* ``.pl0+sin``: the syntax tree rooted at ``<programa>``.
* ``.pl0+sem``: the same tree with ``codigo`` on declarations and
  ``simbolo`` on identifier references.

Output is canonical: fixed attribute order, two-space indentation, LF line
endings and an XML declaration, so equal values give byte-identical files.
Readers are strict and report problems as a single document error.
"""

from __future__ import annotations

import enum
import re
import xml.etree.ElementTree as ET
from typing import Optional

from . import tree as t
from .diagnostics import DiagnosticLog, Phase, SourcePos, error
from .lexer import KEYWORDS, TAG_TO_KIND, Token, TokenKind
from .numeric import INT_MAX, in_range
from .semantics import parse_code

XML_DECLARATION = '<?xml version="1.0" encoding="UTF-8"?>\n'


class DocumentKind(enum.Enum):
    LEX = "lex"
    SIN = "sin"
    SEM = "sem"

    @property
    def extension(self) -> str:
        return f".pl0+{self.value}"

    @property
    def phase(self) -> Phase:
        return Phase(self.value)


def serialize(root: ET.Element) -> str:
    ET.indent(root, "  ")
    body = ET.tostring(root, encoding="unicode").replace(" />", "/>")
    return XML_DECLARATION + body + "\n"


class DocumentError(Exception):
    def __init__(self, message: str, element: Optional[ET.Element] = None, pos: Optional[SourcePos] = None):
        super().__init__(message)
        if pos is None and element is not None:
            try:
                pos = SourcePos(int(element.get("linea", "1")), int(element.get("columna", "1")))
            except ValueError:
                pos = None
        self.pos = pos or SourcePos(1, 1)


def _parse_document(text: str, root_tag: str) -> ET.Element:
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, column = exc.position
        raise DocumentError(f"XML mal formado: {exc}", pos=SourcePos(max(line, 1), column + 1)) from None
    if root.tag != root_tag:
        raise DocumentError(f"se esperaba el elemento raíz <{root_tag}>, se encontró <{root.tag}>")
    return root


def _int_attr(el: ET.Element, name: str, minimum: Optional[int] = None) -> int:
    raw = el.get(name)
    if raw is None:
        raise DocumentError(f"falta el atributo '{name}' en <{el.tag}>", el)
    if not re.fullmatch(r"-?\d+", raw):
        raise DocumentError(f"el atributo '{name}' de <{el.tag}> no es entero: {raw!r}", el)
    value = int(raw)
    if minimum is not None and value < minimum:
        raise DocumentError(f"el atributo '{name}' de <{el.tag}> es menor que {minimum}", el)
    return value


def _check_attrs(el: ET.Element, allowed: tuple[str, ...]):
    extra = set(el.attrib) - set(allowed)
    if extra:
        raise DocumentError(f"atributo inesperado '{sorted(extra)[0]}' en <{el.tag}>", el)


def _pos(el: ET.Element) -> SourcePos:
    return SourcePos(_int_attr(el, "linea", 1), _int_attr(el, "columna", 1))


def _pos_attrs(pos: SourcePos) -> dict[str, str]:
    return {"linea": str(pos.line), "columna": str(pos.column)}


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _ident_name(el: ET.Element) -> str:
    name = el.get("nombre")
    if name is None:
        raise DocumentError(f"falta el atributo 'nombre' en <{el.tag}>", el)
    if not _IDENT_RE.fullmatch(name) or name in KEYWORDS:
        raise DocumentError(f"nombre de identificador inválido {name!r}", el)
    return name


def _failed(kind: DocumentKind, exc: DocumentError) -> DiagnosticLog:
    return DiagnosticLog().report(error(kind.phase, exc.pos, f"documento {kind.extension}: {exc}"))


# Token lists

def tokens_to_element(tokens: list[Token]) -> ET.Element:
    root = ET.Element("elementos_lexicos")
    for tok in tokens:
        attrs: dict[str, str] = {}
        if tok.kind is TokenKind.IDENTIFICADOR:
            attrs["nombre"] = tok.name
        elif tok.kind is TokenKind.NUMERO:
            attrs["valor"] = str(tok.value)
        attrs.update(columna=str(tok.column), linea=str(tok.line), longitud=str(tok.length))
        ET.SubElement(root, tok.kind.tag, attrs)
    return root


def write_tokens(tokens: list[Token]) -> str:
    return serialize(tokens_to_element(tokens))


def read_tokens(text: str) -> tuple[list[Token], DiagnosticLog]:
    try:
        root = _parse_document(text, "elementos_lexicos")
        tokens = [_read_token(el) for el in root]
    except DocumentError as exc:
        return [], _failed(DocumentKind.LEX, exc)
    return tokens, DiagnosticLog()


def _read_token(el: ET.Element) -> Token:
    kind = TAG_TO_KIND.get(el.tag)
    if kind is None:
        raise DocumentError(f"elemento léxico desconocido <{el.tag}>", el)
    if len(el):
        raise DocumentError(f"<{el.tag}> no admite hijos", el)
    pos = _pos(el)
    length = _int_attr(el, "longitud", 1)
    if kind is TokenKind.IDENTIFICADOR:
        _check_attrs(el, ("nombre", "columna", "linea", "longitud"))
        return Token(kind, pos, length, name=_ident_name(el))
    if kind is TokenKind.NUMERO:
        _check_attrs(el, ("valor", "columna", "linea", "longitud"))
        value = _int_attr(el, "valor", 0)
        if value > INT_MAX:
            raise DocumentError("valor fuera del rango de 32 bits", el)
        return Token(kind, pos, length, value=value)
    _check_attrs(el, ("columna", "linea", "longitud"))
    return Token(kind, pos, length)


# Syntax trees

class _TreeWriter:
    def __init__(self, kind: DocumentKind):
        self.sem = kind is DocumentKind.SEM

    def annotation(self, attrs: dict, key: str, value: Optional[str], what: str):
        if self.sem:
            if value is None:
                raise ValueError(f"{what} sin anotación semántica")
            attrs[key] = value

    def program(self, program: t.Program) -> ET.Element:
        root = ET.Element("programa")
        root.append(self.block(program.block))
        return root

    def block(self, block: t.Block) -> ET.Element:
        el = ET.Element("bloque")
        for c in block.consts:
            attrs = {"nombre": c.name, "valor": str(c.value)}
            self.annotation(attrs, "codigo", c.code, f"constante '{c.name}'")
            ET.SubElement(el, "constante", {**attrs, **_pos_attrs(c.pos)})
        for v in block.vars:
            attrs = {"nombre": v.name}
            self.annotation(attrs, "codigo", v.code, f"variable '{v.name}'")
            ET.SubElement(el, "variable", {**attrs, **_pos_attrs(v.pos)})
        for p in block.procs:
            attrs = {"nombre": p.name}
            self.annotation(attrs, "codigo", p.code, f"procedimiento '{p.name}'")
            sub = ET.SubElement(el, "procedimiento", {**attrs, **_pos_attrs(p.pos)})
            sub.append(self.block(p.block))
        el.append(self.statement(block.body))
        return el

    def statement(self, s: t.Statement) -> ET.Element:
        pos = _pos_attrs(s.pos)
        if isinstance(s, t.Assign):
            el = ET.Element("asignacion", pos)
            el.append(self.expr(s.target))
            el.append(self.expr(s.expr))
        elif isinstance(s, t.Call):
            el = ET.Element("llamada", pos)
            el.append(self.expr(s.target))
        elif isinstance(s, t.Sequence):
            el = ET.Element("secuencia", pos)
            el.extend(self.statement(x) for x in s.stmts)
        elif isinstance(s, t.If):
            el = ET.Element("si", pos)
            el.append(self.condition(s.cond))
            ET.SubElement(el, "entonces").append(self.statement(s.then))
            if s.otherwise is not None:
                ET.SubElement(el, "sino").append(self.statement(s.otherwise))
        elif isinstance(s, t.While):
            el = ET.Element("mientras", pos)
            el.append(self.condition(s.cond))
            el.append(self.statement(s.body))
        elif isinstance(s, t.Read):
            el = ET.Element("leer", pos)
            el.append(self.expr(s.target))
        elif isinstance(s, t.Write):
            el = ET.Element("escribir", pos)
            el.append(self.expr(s.source))
        elif isinstance(s, t.Empty):
            el = ET.Element("vacia", pos)
        else:
            raise TypeError(f"not a statement: {s!r}")
        return el

    def condition(self, c: t.Condition) -> ET.Element:
        if isinstance(c, t.Odd):
            el = ET.Element("odd", _pos_attrs(c.pos))
            el.append(self.expr(c.expr))
            return el
        el = ET.Element("condicion", {"operacion": c.op.value})
        el.append(self.expr(c.lhs))
        el.append(self.expr(c.rhs))
        return el

    def expr(self, e: t.Expr) -> ET.Element:
        if isinstance(e, t.IdentRef):
            attrs = {"nombre": e.name}
            self.annotation(attrs, "simbolo", e.symbol, f"referencia a '{e.name}'")
            return ET.Element("identificador", {**attrs, **_pos_attrs(e.pos)})
        if isinstance(e, t.Num):
            return ET.Element("numero", {"valor": str(e.value), **_pos_attrs(e.pos)})
        if isinstance(e, t.Neg):
            el = ET.Element("negativo", _pos_attrs(e.pos))
            el.append(self.expr(e.expr))
            return el
        el = ET.Element(e.op.value)
        el.append(self.expr(e.lhs))
        el.append(self.expr(e.rhs))
        return el


_ARITH_TAGS = {op.value: op for op in t.ArithOp}
_REL_VALUES = {op.value: op for op in t.RelOp}
_STATEMENT_TAGS = ("asignacion", "llamada", "secuencia", "si", "mientras", "leer", "escribir", "vacia")


class _TreeReader:
    def __init__(self, kind: DocumentKind):
        self.sem = kind is DocumentKind.SEM

    def children(self, el: ET.Element, count: Optional[int] = None) -> list[ET.Element]:
        kids = list(el)
        if count is not None and len(kids) != count:
            raise DocumentError(f"<{el.tag}> requiere {count} hijo(s), tiene {len(kids)}", el)
        return kids

    def code_attr(self, el: ET.Element, key: str) -> Optional[str]:
        if not self.sem:
            return None
        value = el.get(key)
        if value is None:
            raise DocumentError(f"falta el atributo '{key}' en <{el.tag}>", el)
        try:
            parse_code(value)
        except ValueError:
            raise DocumentError(f"código de símbolo inválido {value!r}", el) from None
        return value

    def allowed(self, *names: str, annotation: Optional[str] = None) -> tuple[str, ...]:
        if self.sem and annotation is not None:
            return names + (annotation,)
        return names

    def program(self, el: ET.Element) -> t.Program:
        _check_attrs(el, ())
        (child,) = self.children(el, 1)
        return t.Program(self.block(child))

    def block(self, el: ET.Element) -> t.Block:
        if el.tag != "bloque":
            raise DocumentError(f"se esperaba <bloque>, se encontró <{el.tag}>", el)
        _check_attrs(el, ())
        kids = self.children(el)
        consts, vars_, procs = [], [], []
        i = 0
        while i < len(kids) and kids[i].tag == "constante":
            c = kids[i]
            _check_attrs(c, self.allowed("nombre", "valor", "linea", "columna", annotation="codigo"))
            self.children(c, 0)
            value = _int_attr(c, "valor")
            if not in_range(value):
                raise DocumentError("valor fuera del rango de 32 bits", c)
            consts.append(t.ConstDecl(_ident_name(c), value, _pos(c), self.code_attr(c, "codigo")))
            i += 1
        while i < len(kids) and kids[i].tag == "variable":
            v = kids[i]
            _check_attrs(v, self.allowed("nombre", "linea", "columna", annotation="codigo"))
            self.children(v, 0)
            vars_.append(t.VarDecl(_ident_name(v), _pos(v), self.code_attr(v, "codigo")))
            i += 1
        while i < len(kids) and kids[i].tag == "procedimiento":
            p = kids[i]
            _check_attrs(p, self.allowed("nombre", "linea", "columna", annotation="codigo"))
            (sub,) = self.children(p, 1)
            procs.append(t.ProcDecl(_ident_name(p), self.block(sub), _pos(p), self.code_attr(p, "codigo")))
            i += 1
        rest = kids[i:]
        if len(rest) != 1:
            raise DocumentError("<bloque> debe terminar con exactamente una instrucción", el)
        return t.Block(tuple(consts), tuple(vars_), tuple(procs), self.statement(rest[0]))

    def statement(self, el: ET.Element) -> t.Statement:
        tag = el.tag
        if tag not in _STATEMENT_TAGS:
            raise DocumentError(f"instrucción desconocida <{tag}>", el)
        _check_attrs(el, ("linea", "columna"))
        pos = _pos(el)
        if tag == "asignacion":
            target, expr = self.children(el, 2)
            return t.Assign(self.ident(target), self.expr(expr), pos)
        if tag == "llamada":
            (target,) = self.children(el, 1)
            return t.Call(self.ident(target), pos)
        if tag == "secuencia":
            kids = self.children(el)
            if not kids:
                raise DocumentError("<secuencia> vacía", el)
            return t.Sequence(tuple(self.statement(k) for k in kids), pos)
        if tag == "si":
            kids = self.children(el)
            if len(kids) not in (2, 3):
                raise DocumentError("<si> requiere condición, <entonces> y opcionalmente <sino>", el)
            cond = self.condition(kids[0])
            then = self.branch(kids[1], "entonces")
            otherwise = self.branch(kids[2], "sino") if len(kids) == 3 else None
            return t.If(cond, then, otherwise, pos)
        if tag == "mientras":
            cond, body = self.children(el, 2)
            return t.While(self.condition(cond), self.statement(body), pos)
        if tag == "leer":
            (target,) = self.children(el, 1)
            return t.Read(self.ident(target), pos)
        if tag == "escribir":
            (target,) = self.children(el, 1)
            return t.Write(self.ident(target), pos)
        self.children(el, 0)
        return t.Empty(pos)

    def branch(self, el: ET.Element, tag: str) -> t.Statement:
        if el.tag != tag:
            raise DocumentError(f"se esperaba <{tag}>, se encontró <{el.tag}>", el)
        _check_attrs(el, ())
        (stmt,) = self.children(el, 1)
        return self.statement(stmt)

    def condition(self, el: ET.Element) -> t.Condition:
        if el.tag == "odd":
            _check_attrs(el, ("linea", "columna"))
            (expr,) = self.children(el, 1)
            return t.Odd(self.expr(expr), _pos(el))
        if el.tag != "condicion":
            raise DocumentError(f"se esperaba una condición, se encontró <{el.tag}>", el)
        _check_attrs(el, ("operacion",))
        op = _REL_VALUES.get(el.get("operacion"))
        if op is None:
            raise DocumentError(f"operación relacional inválida {el.get('operacion')!r}", el)
        lhs, rhs = self.children(el, 2)
        return t.Relation(op, self.expr(lhs), self.expr(rhs))

    def ident(self, el: ET.Element) -> t.IdentRef:
        if el.tag != "identificador":
            raise DocumentError(f"se esperaba <identificador>, se encontró <{el.tag}>", el)
        _check_attrs(el, self.allowed("nombre", "linea", "columna", annotation="simbolo"))
        self.children(el, 0)
        return t.IdentRef(_ident_name(el), _pos(el), self.code_attr(el, "simbolo"))

    def expr(self, el: ET.Element) -> t.Expr:
        tag = el.tag
        if tag == "identificador":
            return self.ident(el)
        if tag == "numero":
            _check_attrs(el, ("valor", "linea", "columna"))
            self.children(el, 0)
            value = _int_attr(el, "valor", 0)
            if value > INT_MAX:
                raise DocumentError("valor fuera del rango de 32 bits", el)
            return t.Num(value, _pos(el))
        if tag == "negativo":
            _check_attrs(el, ("linea", "columna"))
            (inner,) = self.children(el, 1)
            return t.Neg(self.expr(inner), _pos(el))
        op = _ARITH_TAGS.get(tag)
        if op is None:
            raise DocumentError(f"expresión desconocida <{tag}>", el)
        _check_attrs(el, ())
        lhs, rhs = self.children(el, 2)
        return t.BinOp(op, self.expr(lhs), self.expr(rhs))


def tree_to_element(program: t.Program, kind: DocumentKind) -> ET.Element:
    return _TreeWriter(kind).program(program)


def write_tree(program: t.Program, kind: DocumentKind = DocumentKind.SIN) -> str:
    return serialize(tree_to_element(program, kind))


def read_tree(text: str, kind: DocumentKind = DocumentKind.SIN) -> tuple[Optional[t.Program], DiagnosticLog]:
    try:
        root = _parse_document(text, "programa")
        program = _TreeReader(kind).program(root)
    except DocumentError as exc:
        return None, _failed(kind, exc)
    return program, DiagnosticLog()
