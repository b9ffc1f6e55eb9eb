"""Parser for algebra spec files.

The format is line oriented.  A section keyword starts a section; the
blocks run until the next keyword.  Comments start with '#'.

    name heisenberg
    field Q
    params
        mu = 2
    generators x y z
    relations
        x*y - y*x = z
    representation adjoint left 3
        x = [0,0,0; 0,0,0; 0,1,0]
        ...
    options
        max_degree = 8

Relation expressions support rational literals (optional sign, integer or
a/b), parameter identifiers with integer exponents (mu^2, mu^-6),
generator identifiers, explicit '*' products, '+', '-' and parentheses.
Juxtaposition is not multiplication.  Parameters are substituted at parse
time and must be bound to nonzero rationals; after moving the right-hand
side over, every relation must keep a nonzero degree-2 part.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import SpecError
from .linalg import Matrix
from .nonhomog import NCPoly, NonhomogeneousPresentation
from .prealgebra import Representation
from .quadratic import Word

_ZERO = Fraction(0)
_ONE = Fraction(1)

SECTION_KEYWORDS = {
    "name",
    "field",
    "params",
    "generators",
    "relations",
    "representation",
    "options",
}

KNOWN_OPTIONS = {"max_degree"}

_SYMBOLS = set("+-*/^=()[],;")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "int" | "sym" | "newline" | "eof"
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        col = 0
        length = len(line)
        while col < length:
            ch = line[col]
            if ch.isspace():
                col += 1
                continue
            start = col
            if ch.isdigit():
                while col < length and line[col].isdigit():
                    col += 1
                tokens.append(Token("int", line[start:col], lineno, start + 1))
            elif ch.isalpha() or ch == "_":
                while col < length and (line[col].isalnum() or line[col] == "_"):
                    col += 1
                tokens.append(Token("ident", line[start:col], lineno, start + 1))
            elif ch in _SYMBOLS:
                tokens.append(Token("sym", ch, lineno, start + 1))
                col += 1
            else:
                raise SpecError(f"unexpected character {ch!r}", lineno, start + 1)
        if tokens and tokens[-1].kind != "newline":
            tokens.append(Token("newline", "", lineno, length + 1))
    tokens.append(Token("eof", "", len(text.splitlines()) + 1, 1))
    return tokens


@dataclass(frozen=True)
class RepresentationSpec:
    name: str
    side: str
    dim: int
    matrices: dict[str, tuple[tuple[Fraction, ...], ...]]

    def key(self) -> tuple:
        return (
            self.name,
            self.side,
            self.dim,
            tuple(sorted((g, m) for g, m in self.matrices.items())),
        )


@dataclass
class AlgebraSpec:
    """Parsed algebra description with parameters already substituted."""

    name: Optional[str] = None
    field_name: str = "Q"
    params: dict[str, Fraction] = field(default_factory=dict)
    generators: list[str] = field(default_factory=list)
    relations: list[NCPoly] = field(default_factory=list)
    relation_texts: list[str] = field(default_factory=list)
    representations: list[RepresentationSpec] = field(default_factory=list)
    options: dict[str, int] = field(default_factory=dict)

    @property
    def d(self) -> int:
        return len(self.generators)

    def key(self) -> tuple:
        return (
            self.name,
            self.field_name,
            tuple(sorted(self.params.items())),
            tuple(self.generators),
            tuple(tuple(sorted(p.items())) for p in self.relations),
            tuple(r.key() for r in self.representations),
            tuple(sorted(self.options.items())),
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraSpec) and self.key() == other.key()

    def presentation(self) -> NonhomogeneousPresentation:
        return NonhomogeneousPresentation.from_polynomials(
            self.d, self.relations, self.generators
        )

    def representation_objects(self) -> list[Representation]:
        out = []
        for rs in self.representations:
            mats = tuple(
                Matrix.from_rows([list(row) for row in rs.matrices[g]])
                for g in self.generators
            )
            out.append(Representation(rs.name, rs.side, rs.dim, mats))
        return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.spec = AlgebraSpec()
        self.gen_index: dict[str, int] = {}

    # -- token plumbing ---------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def skip_newlines(self) -> None:
        while self.peek().kind == "newline":
            self.next()

    def expect_sym(self, sym: str) -> Token:
        tok = self.next()
        if tok.kind != "sym" or tok.text != sym:
            raise SpecError(f"expected {sym!r}, found {tok.text or tok.kind!r}", tok.line, tok.col)
        return tok

    def expect_ident(self, what: str = "identifier") -> Token:
        tok = self.next()
        if tok.kind != "ident":
            raise SpecError(f"expected {what}, found {tok.text or tok.kind!r}", tok.line, tok.col)
        return tok

    def expect_end_of_line(self) -> None:
        tok = self.next()
        if tok.kind not in ("newline", "eof"):
            raise SpecError(f"unexpected {tok.text!r} at end of line", tok.line, tok.col)

    def at_section_start(self) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and tok.text in SECTION_KEYWORDS

    # -- sections ----------------------------------------------------------

    def parse(self) -> AlgebraSpec:
        self.skip_newlines()
        while self.peek().kind != "eof":
            tok = self.next()
            if tok.kind != "ident" or tok.text not in SECTION_KEYWORDS:
                raise SpecError(
                    f"expected a section keyword, found {tok.text or tok.kind!r}",
                    tok.line,
                    tok.col,
                )
            getattr(self, f"_section_{tok.text}")(tok)
            self.skip_newlines()
        if not self.spec.generators:
            raise SpecError("no generators declared", self.peek().line, 1)
        return self.spec

    def _section_name(self, kw: Token) -> None:
        tok = self.expect_ident("a name")
        self.spec.name = tok.text
        self.expect_end_of_line()

    def _section_field(self, kw: Token) -> None:
        tok = self.expect_ident("a field name")
        if tok.text not in ("Q", "QQ", "rational"):
            raise SpecError(
                f"unsupported field {tok.text!r}: only exact rationals (Q)", tok.line, tok.col
            )
        self.spec.field_name = "Q"
        self.expect_end_of_line()

    def _section_params(self, kw: Token) -> None:
        self.expect_end_of_line()
        self.skip_newlines()
        while self.peek().kind == "ident" and not self.at_section_start():
            name_tok = self.expect_ident("a parameter name")
            self.expect_sym("=")
            value = self._parse_scalar_expr()
            if value == 0:
                raise SpecError(
                    f"parameter {name_tok.text!r} must be a nonzero rational",
                    name_tok.line,
                    name_tok.col,
                )
            if name_tok.text in self.spec.params:
                raise SpecError(
                    f"parameter {name_tok.text!r} bound twice", name_tok.line, name_tok.col
                )
            self.spec.params[name_tok.text] = value
            self.expect_end_of_line()
            self.skip_newlines()

    def _section_generators(self, kw: Token) -> None:
        while self.peek().kind == "ident":
            tok = self.next()
            if tok.text in self.spec.params:
                raise SpecError(
                    f"{tok.text!r} is already a parameter", tok.line, tok.col
                )
            if tok.text in self.gen_index:
                raise SpecError(f"duplicate generator {tok.text!r}", tok.line, tok.col)
            self.gen_index[tok.text] = len(self.spec.generators)
            self.spec.generators.append(tok.text)
        self.expect_end_of_line()
        if not self.spec.generators:
            raise SpecError("empty generator list", kw.line, kw.col)

    def _section_relations(self, kw: Token) -> None:
        self.expect_end_of_line()
        self.skip_newlines()
        while self.peek().kind != "eof" and not self.at_section_start():
            start = self.peek()
            lhs = self._parse_expr()
            eq = self.expect_sym("=")
            rhs = self._parse_expr()
            self.expect_end_of_line()
            poly = _poly_sub(lhs, rhs)
            if not any(c for w, c in poly.items() if len(w) == 2):
                raise SpecError(
                    "relation has no degree-2 part after expansion",
                    start.line,
                    start.col,
                )
            self.spec.relations.append(poly)
            self.spec.relation_texts.append(_render_poly(poly, self.spec.generators) + " = 0")
            self.skip_newlines()

    def _section_representation(self, kw: Token) -> None:
        name = self.expect_ident("a representation name").text
        side_tok = self.expect_ident("left or right")
        if side_tok.text not in ("left", "right"):
            raise SpecError(
                f"representation side must be left or right, found {side_tok.text!r}",
                side_tok.line,
                side_tok.col,
            )
        dim_tok = self.next()
        if dim_tok.kind != "int":
            raise SpecError("expected the module dimension", dim_tok.line, dim_tok.col)
        dim = int(dim_tok.text)
        self.expect_end_of_line()
        self.skip_newlines()
        matrices: dict[str, tuple[tuple[Fraction, ...], ...]] = {}
        while self.peek().kind == "ident" and not self.at_section_start():
            gen_tok = self.expect_ident("a generator name")
            if gen_tok.text not in self.gen_index:
                raise SpecError(
                    f"unknown generator {gen_tok.text!r} in representation",
                    gen_tok.line,
                    gen_tok.col,
                )
            if gen_tok.text in matrices:
                raise SpecError(
                    f"matrix for {gen_tok.text!r} given twice", gen_tok.line, gen_tok.col
                )
            self.expect_sym("=")
            matrices[gen_tok.text] = self._parse_matrix(dim)
            self.expect_end_of_line()
            self.skip_newlines()
        missing = [g for g in self.spec.generators if g not in matrices]
        if missing:
            raise SpecError(
                f"representation {name!r} lacks matrices for {', '.join(missing)}",
                kw.line,
                kw.col,
            )
        self.spec.representations.append(
            RepresentationSpec(name, side_tok.text, dim, matrices)
        )

    def _section_options(self, kw: Token) -> None:
        self.expect_end_of_line()
        self.skip_newlines()
        while self.peek().kind == "ident" and not self.at_section_start():
            name_tok = self.expect_ident("an option name")
            if name_tok.text not in KNOWN_OPTIONS:
                raise SpecError(
                    f"unknown option {name_tok.text!r}", name_tok.line, name_tok.col
                )
            self.expect_sym("=")
            val_tok = self.next()
            if val_tok.kind != "int":
                raise SpecError("option values are integers", val_tok.line, val_tok.col)
            self.spec.options[name_tok.text] = int(val_tok.text)
            self.expect_end_of_line()
            self.skip_newlines()

    def _parse_matrix(self, dim: int) -> tuple[tuple[Fraction, ...], ...]:
        open_tok = self.expect_sym("[")
        rows: list[tuple[Fraction, ...]] = []
        if dim == 0:
            self.expect_sym("]")
            return ()
        while True:
            row = [self._parse_scalar_expr()]
            while self.peek().kind == "sym" and self.peek().text == ",":
                self.next()
                row.append(self._parse_scalar_expr())
            if len(row) != dim:
                raise SpecError(
                    f"matrix row has {len(row)} entries, expected {dim}",
                    open_tok.line,
                    open_tok.col,
                )
            rows.append(tuple(row))
            tok = self.next()
            if tok.kind == "sym" and tok.text == ";":
                continue
            if tok.kind == "sym" and tok.text == "]":
                break
            raise SpecError("expected ';' or ']' in matrix", tok.line, tok.col)
        if len(rows) != dim:
            raise SpecError(
                f"matrix has {len(rows)} rows, expected {dim}", open_tok.line, open_tok.col
            )
        return tuple(rows)

    # -- expressions ---------------------------------------------------------

    def _parse_scalar_expr(self) -> Fraction:
        tok = self.peek()
        poly = self._parse_expr()
        deg = max((len(w) for w in poly), default=0)
        if deg > 0:
            raise SpecError("expected a scalar expression", tok.line, tok.col)
        return poly.get((), _ZERO)

    def _parse_expr(self) -> NCPoly:
        acc = self._parse_term()
        while self.peek().kind == "sym" and self.peek().text in "+-":
            op = self.next()
            rhs = self._parse_term()
            acc = _poly_add(acc, rhs) if op.text == "+" else _poly_sub(acc, rhs)
        return acc

    def _parse_term(self) -> NCPoly:
        acc = self._parse_factor()
        while self.peek().kind == "sym" and self.peek().text == "*":
            op = self.next()
            rhs = self._parse_factor()
            acc = _poly_mul(acc, rhs, op)
        return acc

    def _parse_factor(self) -> NCPoly:
        tok = self.peek()
        if tok.kind == "sym" and tok.text in "+-":
            self.next()
            inner = self._parse_factor()
            return inner if tok.text == "+" else _poly_neg(inner)
        return self._parse_atom()

    def _parse_atom(self) -> NCPoly:
        tok = self.next()
        if tok.kind == "int":
            value = Fraction(int(tok.text))
            if self.peek().kind == "sym" and self.peek().text == "/":
                self.next()
                den = self.next()
                if den.kind != "int":
                    raise SpecError("expected a denominator", den.line, den.col)
                if int(den.text) == 0:
                    raise SpecError("zero denominator", den.line, den.col)
                value /= int(den.text)
            return {(): value} if value else {}
        if tok.kind == "ident":
            if tok.text in self.spec.params:
                value = self.spec.params[tok.text]
                exp = self._parse_exponent()
                return {(): value**exp}
            if tok.text in self.gen_index:
                if self.peek().kind == "sym" and self.peek().text == "^":
                    raise SpecError(
                        f"generators cannot carry exponents; write explicit products",
                        tok.line,
                        tok.col,
                    )
                return {(self.gen_index[tok.text],): _ONE}
            raise SpecError(f"unknown identifier {tok.text!r}", tok.line, tok.col)
        if tok.kind == "sym" and tok.text == "(":
            inner = self._parse_expr()
            self.expect_sym(")")
            return inner
        raise SpecError(
            f"expected a number, identifier or parenthesis, found {tok.text or tok.kind!r}",
            tok.line,
            tok.col,
        )

    def _parse_exponent(self) -> int:
        if self.peek().kind == "sym" and self.peek().text == "^":
            self.next()
            sign = 1
            if self.peek().kind == "sym" and self.peek().text == "-":
                self.next()
                sign = -1
            tok = self.next()
            if tok.kind != "int":
                raise SpecError("expected an integer exponent", tok.line, tok.col)
            return sign * int(tok.text)
        return 1


def _poly_add(a: NCPoly, b: NCPoly) -> NCPoly:
    out = dict(a)
    for w, c in b.items():
        nw = out.get(w, _ZERO) + c
        if nw:
            out[w] = nw
        elif w in out:
            del out[w]
    return out


def _poly_neg(a: NCPoly) -> NCPoly:
    return {w: -c for w, c in a.items()}


def _poly_sub(a: NCPoly, b: NCPoly) -> NCPoly:
    return _poly_add(a, _poly_neg(b))


def _poly_mul(a: NCPoly, b: NCPoly, op: Token) -> NCPoly:
    out: NCPoly = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            if len(w) > 2:
                raise SpecError(
                    "product of degree > 2 after expansion", op.line, op.col
                )
            nw = out.get(w, _ZERO) + ca * cb
            if nw:
                out[w] = nw
            elif w in out:
                del out[w]
    return out


def parse_spec(text: str) -> AlgebraSpec:
    """Parse an algebra spec file; raises :class:`SpecError` with location."""
    return _Parser(text).parse()


def _render_scalar(c: Fraction) -> str:
    return str(c)


def _render_poly(poly: NCPoly, names: list[str]) -> str:
    if not poly:
        return "0"
    items = sorted(poly.items(), key=lambda it: (-len(it[0]), it[0]))
    parts: list[str] = []
    for w, c in items:
        mono = "*".join(names[i] for i in w)
        if not mono:
            body = _render_scalar(abs(c))
        elif abs(c) == 1:
            body = mono
        else:
            body = f"{_render_scalar(abs(c))}*{mono}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)


def spec_to_text(spec: AlgebraSpec) -> str:
    """Canonical emission; re-parsing yields an equal AlgebraSpec."""
    lines: list[str] = []
    if spec.name:
        lines.append(f"name {spec.name}")
    lines.append(f"field {spec.field_name}")
    if spec.params:
        lines.append("params")
        for k, v in spec.params.items():
            lines.append(f"    {k} = {_render_scalar(v)}")
    lines.append("generators " + " ".join(spec.generators))
    if spec.relations:
        lines.append("relations")
        for poly in spec.relations:
            lines.append(f"    {_render_poly(poly, spec.generators)} = 0")
    for rep in spec.representations:
        lines.append(f"representation {rep.name} {rep.side} {rep.dim}")
        for g in spec.generators:
            rows = "; ".join(
                ", ".join(_render_scalar(c) for c in row) for row in rep.matrices[g]
            )
            lines.append(f"    {g} = [{rows}]")
    if spec.options:
        lines.append("options")
        for k, v in sorted(spec.options.items()):
            lines.append(f"    {k} = {v}")
    return "\n".join(lines) + "\n"
