"""Parser and pretty-printer for the `.bra` model description language.

Grammar (canonical sketch):

    stmt      := space | algebra | morphism | extension | assume | assert | query
    space     := "space" ID "=" ( "sphere(" INT ")" | "torus(" INT ")"
                | "cube(" INT ")" | "point"
                | "product(" ID {"," ID} ")" [fields]
                | "custom" fields )
    algebra   := "algebra" ID "=" ( "C(" ID ")" | "matrix(" INT "," ID ")"
                | "sum(" ID "," ID ")" | "stabilize(" ID ")"
                | "limit(" ID {"," ID} ")" {"liminf" RANK "=" VALUE}
                | "tensor_ext(" ID {"," ID} ")" ["times" "C(" ID ")"]
                | "abstract" | CATALOG_NAME ["(" INT ")"] ) [flags]
    morphism  := "morphism" ID ":" ID "->" ID "[" ATTR {"," ATTR} "]"
    extension := "extension" ID ":" ID "->" ID "->" ID ["[" "approx_identity" "]"]
    assume    := "assume" RANK "(" ID ")" REL VALUE
    assert    := "assert" RANK "(" ID ")" REL VALUE
    query     := "query" ID

    RANK := "bsr" | "tsr" | "csr" | "gsr"      REL := "==" | "<=" | ">="
    VALUE := INT | "inf"                       TRI := "true" | "false" | "unknown"

Comments run from `#` to end of line.  Identifiers are case-sensitive ASCII.
Extensions are written in exact-sequence order, ideal -> algebra -> quotient.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .lattice import INF, ExtNat, RankKind

TriState = Optional[bool]

MORPHISM_ATTRS = ("onto", "split", "dense", "spectral", "homotopy_equiv", "gelfand")

SPACE_FIELD_NAMES = (
    "dim",
    "metric",
    "contractible",
    "top_cohomology_nonzero",
    "codim1_cohomology_nonzero",
)

FLAG_NAMES = (
    "is_cstar",
    "is_commutative",
    "is_finite",
    "is_stably_finite",
    "is_purely_infinite_simple",
    "is_infinite_simple",
    "k1_trivial",
    "unit_finite_order_k0",
)

#: Built-in catalog names; True when the name takes an integer argument.
CATALOG_NAMES: Dict[str, bool] = {
    "compacts": False,
    "af": False,
    "irrational_rotation": False,
    "cstar_red_hyperbolic": False,
    "cuntz": True,
    "cuntz_inf": False,
    "toeplitz": False,
    "toeplitz_n": True,
    "disk_algebra": False,
    "hardy_inf": False,
    "l1_lattice": True,
    "torus5_pr_fact": False,
}


@dataclass(frozen=True)
class SourceSpan:
    begin: int
    end: int
    line: int
    column: int


def _span_field() -> SourceSpan:
    return SourceSpan(0, 0, 1, 1)


@dataclass
class SpaceDecl:
    name: str
    kind: str  # sphere | torus | cube | point | product | custom
    dim: Optional[int] = None
    factors: Tuple[str, ...] = ()
    metric: TriState = None
    contractible: TriState = None
    top_cohomology_nonzero: TriState = None
    codim1_cohomology_nonzero: TriState = None
    dim_override: Optional[int] = None  # product only
    span: SourceSpan = field(default_factory=_span_field, compare=False)


@dataclass
class AlgebraDecl:
    name: str
    kind: str  # cof | matrix | sum | stabilize | limit | tensor_ext | abstract | catalog
    space: Optional[str] = None  # cof: the space id
    size: Optional[int] = None  # matrix
    base: Optional[str] = None  # matrix / stabilize
    parts: Tuple[str, ...] = ()  # sum / limit / tensor_ext extension ids
    liminf: Tuple[Tuple[RankKind, ExtNat], ...] = ()
    z_space: Optional[str] = None  # tensor_ext
    catalog_name: Optional[str] = None
    catalog_arg: Optional[int] = None
    flags: Tuple[Tuple[str, TriState], ...] = ()
    span: SourceSpan = field(default_factory=_span_field, compare=False)


@dataclass
class MorphismDecl:
    name: str
    src: str
    dst: str
    attrs: Tuple[str, ...]
    span: SourceSpan = field(default_factory=_span_field, compare=False)


@dataclass
class ExtensionDecl:
    name: str
    ideal: str
    middle: str
    quotient: str
    approx_identity: bool = False
    span: SourceSpan = field(default_factory=_span_field, compare=False)


@dataclass
class AssumeDecl:
    rank: RankKind
    algebra: str
    relation: str  # == | <= | >=
    value: ExtNat
    span: SourceSpan = field(default_factory=_span_field, compare=False)


@dataclass
class AssertDecl:
    rank: RankKind
    algebra: str
    relation: str
    value: ExtNat
    span: SourceSpan = field(default_factory=_span_field, compare=False)


@dataclass
class QueryDecl:
    algebra: str
    span: SourceSpan = field(default_factory=_span_field, compare=False)


Statement = Union[
    SpaceDecl, AlgebraDecl, MorphismDecl, ExtensionDecl, AssumeDecl, AssertDecl, QueryDecl
]


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan, expected: Sequence[str] = ()):
        super().__init__(f"{span.line}:{span.column}: {message}")
        self.message = message
        self.span = span
        self.expected = tuple(expected)


# ---------------------------------------------------------------- tokenizer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<int>\d+)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>->|==|<=|>=|[=(){},:\[\]])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # int | id | op | eof
    text: str
    span: SourceSpan


def tokenize(text: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            span = SourceSpan(pos, pos + 1, line, pos - line_start + 1)
            raise ParseError(f"unexpected character {text[pos]!r}", span)
        kind = m.lastgroup
        value = m.group()
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            span = SourceSpan(m.start(), m.end(), line, m.start() - line_start + 1)
            tokens.append(Token(kind, value, span))
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(n, n, line, n - line_start + 1)))
    return tokens


# ------------------------------------------------------------------- parser

_RANKS = {k.value: k for k in RankKind}
_TRI = {"true": True, "false": False, "unknown": None}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    # token helpers ----------------------------------------------------
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if tok.text != text or tok.kind == "eof":
            raise ParseError(f"expected {text!r}, found {tok.text or 'end of input'!r}",
                             tok.span, expected=[text])
        return self.advance()

    def expect_id(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "id":
            raise ParseError(f"expected {what}, found {tok.text or 'end of input'!r}",
                             tok.span, expected=["ID"])
        return self.advance()

    def expect_int(self, minimum: int = 0, what: str = "integer") -> Tuple[int, Token]:
        tok = self.peek()
        if tok.kind != "int":
            raise ParseError(f"expected {what}, found {tok.text or 'end of input'!r}",
                             tok.span, expected=["INT"])
        value = int(tok.text)
        if value < minimum:
            raise ParseError(f"{what} must be >= {minimum}, got {value}", tok.span)
        return value, self.advance()

    def expect_value(self) -> Tuple[ExtNat, Token]:
        tok = self.peek()
        if tok.kind == "int":
            value = int(tok.text)
            if value < 1:
                raise ParseError("rank value must be >= 1 or inf", tok.span)
            return ExtNat(value), self.advance()
        if tok.kind == "id" and tok.text == "inf":
            return INF, self.advance()
        raise ParseError(f"expected rank value, found {tok.text!r}", tok.span,
                         expected=["INT", "inf"])

    def expect_tri(self) -> TriState:
        tok = self.peek()
        if tok.kind == "id" and tok.text in _TRI:
            self.advance()
            return _TRI[tok.text]
        raise ParseError(f"expected true/false/unknown, found {tok.text!r}",
                         tok.span, expected=list(_TRI))

    def _join(self, begin: Token, end: Token) -> SourceSpan:
        return SourceSpan(begin.span.begin, end.span.end, begin.span.line, begin.span.column)

    def _last(self) -> Token:
        return self.tokens[self.pos - 1]

    # grammar ----------------------------------------------------------
    def parse(self) -> List[Statement]:
        statements: List[Statement] = []
        while self.peek().kind != "eof":
            statements.append(self.statement())
        return statements

    def statement(self) -> Statement:
        tok = self.peek()
        handlers = {
            "space": self.space_stmt,
            "algebra": self.algebra_stmt,
            "morphism": self.morphism_stmt,
            "extension": self.extension_stmt,
            "assume": self.assume_stmt,
            "assert": self.assert_stmt,
            "query": self.query_stmt,
        }
        if tok.kind == "id" and tok.text in handlers:
            return handlers[tok.text]()
        raise ParseError(
            f"expected a statement keyword, found {tok.text or 'end of input'!r}",
            tok.span, expected=sorted(handlers))

    def space_stmt(self) -> SpaceDecl:
        begin = self.advance()  # 'space'
        name = self.expect_id("space name").text
        self.expect("=")
        kind_tok = self.expect_id("space kind")
        kind = kind_tok.text
        decl = SpaceDecl(name=name, kind=kind)
        if kind in ("sphere", "torus", "cube"):
            self.expect("(")
            decl.dim, _ = self.expect_int(0, "dimension")
            self.expect(")")
        elif kind == "point":
            pass
        elif kind == "product":
            self.expect("(")
            factors = [self.expect_id("space id").text]
            while self.peek().text == ",":
                self.advance()
                factors.append(self.expect_id("space id").text)
            self.expect(")")
            decl.factors = tuple(factors)
            if self.peek().text == "{":
                for fname, fval, ftok in self.fields_block(("dim",)):
                    decl.dim_override = fval
        elif kind == "custom":
            seen = set()
            for fname, fval, ftok in self.fields_block(SPACE_FIELD_NAMES):
                if fname in seen:
                    raise ParseError(f"duplicate field {fname!r}", ftok.span)
                seen.add(fname)
                if fname == "dim":
                    decl.dim = fval
                else:
                    setattr(decl, fname, fval)
            if decl.dim is None:
                raise ParseError("custom space requires a dim field", kind_tok.span)
        else:
            raise ParseError(f"unknown space kind {kind!r}", kind_tok.span,
                             expected=["sphere", "torus", "cube", "point", "product", "custom"])
        decl.span = self._join(begin, self._last())
        return decl

    def fields_block(self, allowed: Sequence[str]):
        """Parse `{ name = value, ... }`; ints for dim, tri-states elsewhere."""
        self.expect("{")
        out = []
        while True:
            ftok = self.expect_id("field name")
            if ftok.text not in allowed:
                raise ParseError(f"unknown field {ftok.text!r}", ftok.span,
                                 expected=list(allowed))
            self.expect("=")
            if ftok.text == "dim":
                value, _ = self.expect_int(0, "dimension")
            else:
                value = self.expect_tri()
            out.append((ftok.text, value, ftok))
            if self.peek().text == ",":
                self.advance()
                continue
            break
        self.expect("}")
        return out

    def algebra_stmt(self) -> AlgebraDecl:
        begin = self.advance()  # 'algebra'
        name = self.expect_id("algebra name").text
        self.expect("=")
        kind_tok = self.expect_id("algebra kind")
        kw = kind_tok.text
        decl = AlgebraDecl(name=name, kind="abstract")
        if kw == "C":
            self.expect("(")
            decl.kind = "cof"
            decl.space = self.expect_id("space id").text
            self.expect(")")
        elif kw == "matrix":
            self.expect("(")
            decl.kind = "matrix"
            decl.size, _ = self.expect_int(1, "matrix size")
            self.expect(",")
            decl.base = self.expect_id("algebra id").text
            self.expect(")")
        elif kw == "sum":
            self.expect("(")
            decl.kind = "sum"
            left = self.expect_id("algebra id").text
            self.expect(",")
            right = self.expect_id("algebra id").text
            self.expect(")")
            decl.parts = (left, right)
        elif kw == "stabilize":
            self.expect("(")
            decl.kind = "stabilize"
            decl.base = self.expect_id("algebra id").text
            self.expect(")")
        elif kw == "limit":
            self.expect("(")
            decl.kind = "limit"
            parts = [self.expect_id("algebra id").text]
            while self.peek().text == ",":
                self.advance()
                parts.append(self.expect_id("algebra id").text)
            self.expect(")")
            decl.parts = tuple(parts)
            liminf = []
            while self.peek().text == "liminf":
                self.advance()
                rank_tok = self.expect_id("rank kind")
                if rank_tok.text not in _RANKS:
                    raise ParseError(f"unknown rank {rank_tok.text!r}", rank_tok.span,
                                     expected=sorted(_RANKS))
                self.expect("=")
                value, _ = self.expect_value()
                liminf.append((_RANKS[rank_tok.text], value))
            decl.liminf = tuple(liminf)
        elif kw == "tensor_ext":
            self.expect("(")
            decl.kind = "tensor_ext"
            parts = [self.expect_id("extension id").text]
            while self.peek().text == ",":
                self.advance()
                parts.append(self.expect_id("extension id").text)
            self.expect(")")
            decl.parts = tuple(parts)
            if self.peek().text == "times":
                self.advance()
                self.expect("C")
                self.expect("(")
                decl.z_space = self.expect_id("space id").text
                self.expect(")")
        elif kw == "abstract":
            decl.kind = "abstract"
        elif kw in CATALOG_NAMES:
            decl.kind = "catalog"
            decl.catalog_name = kw
            if CATALOG_NAMES[kw]:
                self.expect("(")
                minimum = 1 if kw == "l1_lattice" else 2
                decl.catalog_arg, _ = self.expect_int(minimum, f"{kw} parameter")
                self.expect(")")
        else:
            raise ParseError(f"unknown algebra kind {kw!r}", kind_tok.span,
                             expected=["C", "matrix", "sum", "stabilize", "limit",
                                       "tensor_ext", "abstract", *sorted(CATALOG_NAMES)])
        if self.peek().text == "{":
            decl.flags = tuple(self.flags_block())
        decl.span = self._join(begin, self._last())
        return decl

    def flags_block(self):
        self.expect("{")
        out = []
        seen = set()
        while True:
            ftok = self.expect_id("flag name")
            if ftok.text not in FLAG_NAMES:
                raise ParseError(f"unknown flag {ftok.text!r}", ftok.span,
                                 expected=list(FLAG_NAMES))
            if ftok.text in seen:
                raise ParseError(f"duplicate flag {ftok.text!r}", ftok.span)
            seen.add(ftok.text)
            self.expect("=")
            out.append((ftok.text, self.expect_tri()))
            if self.peek().text == ",":
                self.advance()
                continue
            break
        self.expect("}")
        return out

    def morphism_stmt(self) -> MorphismDecl:
        begin = self.advance()
        name = self.expect_id("morphism name").text
        self.expect(":")
        src = self.expect_id("algebra id").text
        self.expect("->")
        dst = self.expect_id("algebra id").text
        self.expect("[")
        attrs = []
        while True:
            attr_tok = self.expect_id("morphism attribute")
            if attr_tok.text not in MORPHISM_ATTRS:
                raise ParseError(f"unknown morphism attribute {attr_tok.text!r}",
                                 attr_tok.span, expected=list(MORPHISM_ATTRS))
            if attr_tok.text in attrs:
                raise ParseError(f"duplicate attribute {attr_tok.text!r}", attr_tok.span)
            attrs.append(attr_tok.text)
            if self.peek().text == ",":
                self.advance()
                continue
            break
        self.expect("]")
        return MorphismDecl(name, src, dst, tuple(attrs),
                            span=self._join(begin, self._last()))

    def extension_stmt(self) -> ExtensionDecl:
        begin = self.advance()
        name = self.expect_id("extension name").text
        self.expect(":")
        ideal = self.expect_id("algebra id").text
        self.expect("->")
        middle = self.expect_id("algebra id").text
        self.expect("->")
        quotient = self.expect_id("algebra id").text
        approx = False
        if self.peek().text == "[":
            self.advance()
            tok = self.expect_id("extension attribute")
            if tok.text != "approx_identity":
                raise ParseError(f"unknown extension attribute {tok.text!r}",
                                 tok.span, expected=["approx_identity"])
            approx = True
            self.expect("]")
        return ExtensionDecl(name, ideal, middle, quotient, approx,
                             span=self._join(begin, self._last()))

    def _rank_relation(self):
        rank_tok = self.expect_id("rank kind")
        if rank_tok.text not in _RANKS:
            raise ParseError(f"unknown rank {rank_tok.text!r}", rank_tok.span,
                             expected=sorted(_RANKS))
        self.expect("(")
        algebra = self.expect_id("algebra id").text
        self.expect(")")
        rel_tok = self.peek()
        if rel_tok.text not in ("==", "<=", ">="):
            raise ParseError(f"expected ==, <= or >=, found {rel_tok.text!r}",
                             rel_tok.span, expected=["==", "<=", ">="])
        self.advance()
        value, _ = self.expect_value()
        return _RANKS[rank_tok.text], algebra, rel_tok.text, value

    def assume_stmt(self) -> AssumeDecl:
        begin = self.advance()
        rank, algebra, rel, value = self._rank_relation()
        return AssumeDecl(rank, algebra, rel, value, span=self._join(begin, self._last()))

    def assert_stmt(self) -> AssertDecl:
        begin = self.advance()
        rank, algebra, rel, value = self._rank_relation()
        return AssertDecl(rank, algebra, rel, value, span=self._join(begin, self._last()))

    def query_stmt(self) -> QueryDecl:
        begin = self.advance()
        algebra = self.expect_id("algebra id").text
        return QueryDecl(algebra, span=self._join(begin, self._last()))


def parse(text: str) -> List[Statement]:
    """Parse DSL text into an ordered statement list; raises ParseError."""
    return _Parser(text).parse()


# ---------------------------------------------------------------- formatter

def _tri_text(value: TriState) -> str:
    return {True: "true", False: "false", None: "unknown"}[value]


def _format_space(s: SpaceDecl) -> str:
    if s.kind in ("sphere", "torus", "cube"):
        return f"space {s.name} = {s.kind}({s.dim})"
    if s.kind == "point":
        return f"space {s.name} = point"
    if s.kind == "product":
        body = f"space {s.name} = product({', '.join(s.factors)})"
        if s.dim_override is not None:
            body += f" {{ dim = {s.dim_override} }}"
        return body
    fields = [f"dim = {s.dim}"]
    if s.metric is not None:
        fields.append(f"metric = {_tri_text(s.metric)}")
    for fname in ("contractible", "top_cohomology_nonzero", "codim1_cohomology_nonzero"):
        value = getattr(s, fname)
        if value is not None:
            fields.append(f"{fname} = {_tri_text(value)}")
    return f"space {s.name} = custom {{ {', '.join(fields)} }}"


def _format_algebra(a: AlgebraDecl) -> str:
    if a.kind == "cof":
        body = f"C({a.space})"
    elif a.kind == "matrix":
        body = f"matrix({a.size}, {a.base})"
    elif a.kind == "sum":
        body = f"sum({a.parts[0]}, {a.parts[1]})"
    elif a.kind == "stabilize":
        body = f"stabilize({a.base})"
    elif a.kind == "limit":
        body = f"limit({', '.join(a.parts)})"
        for rank, value in a.liminf:
            body += f" liminf {rank.value} = {value}"
    elif a.kind == "tensor_ext":
        body = f"tensor_ext({', '.join(a.parts)})"
        if a.z_space is not None:
            body += f" times C({a.z_space})"
    elif a.kind == "catalog":
        body = a.catalog_name or ""
        if a.catalog_arg is not None:
            body += f"({a.catalog_arg})"
    else:
        body = "abstract"
    text = f"algebra {a.name} = {body}"
    if a.flags:
        inner = ", ".join(f"{fname} = {_tri_text(fval)}" for fname, fval in a.flags)
        text += f" {{ {inner} }}"
    return text


def format_statement(stmt: Statement) -> str:
    if isinstance(stmt, SpaceDecl):
        return _format_space(stmt)
    if isinstance(stmt, AlgebraDecl):
        return _format_algebra(stmt)
    if isinstance(stmt, MorphismDecl):
        return f"morphism {stmt.name}: {stmt.src} -> {stmt.dst} [{', '.join(stmt.attrs)}]"
    if isinstance(stmt, ExtensionDecl):
        text = f"extension {stmt.name}: {stmt.ideal} -> {stmt.middle} -> {stmt.quotient}"
        if stmt.approx_identity:
            text += " [approx_identity]"
        return text
    if isinstance(stmt, AssumeDecl):
        return f"assume {stmt.rank.value}({stmt.algebra}) {stmt.relation} {stmt.value}"
    if isinstance(stmt, AssertDecl):
        return f"assert {stmt.rank.value}({stmt.algebra}) {stmt.relation} {stmt.value}"
    if isinstance(stmt, QueryDecl):
        return f"query {stmt.algebra}"
    raise TypeError(f"not a statement: {stmt!r}")


def format_statements(statements: Sequence[Statement]) -> str:
    """Canonical text; parse(format_statements(s)) is structurally identical to s."""
    return "\n".join(format_statement(s) for s in statements) + ("\n" if statements else "")
