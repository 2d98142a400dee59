"""Parser and printer for coordinate-check scripts (``.ccs``).

A script is a sequence of ``;``-terminated statements; ``#`` starts a line
comment::

    ring R = Q[x,y,z] / (x^2 + y^2 + z^2 - 1);
    ring B = R[U,V,W];
    let s = x*U + y*V + z*W;
    let g = z*V - y*W;
    let phi = {U -> U - x*s, V -> V - y*s, W -> W - z*s};
    let I = ideal(x, y);
    check residual g stably-polynomial=true;
    check retraction phi;

Nested presentations flatten: the variables of ``R[U,V,W]`` are those of
``R`` followed by ``U, V, W``, and the relations of ``R`` are inherited.
``let`` statements bind in the most recently declared ring.  An optional
``order lex | degrevlex | block(ORDER, k, ORDER)`` clause ends a ring
declaration; the default is degrevlex.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple, Union

from .errors import ParseError, ShadowingError, UndeclaredIdentifierError, UnknownVariableError
from .poly import DEGREVLEX, LEX, MonomialOrder, Polynomial, RingPresentation, block_order

RESERVED = frozenset({"ring", "let", "check", "ideal", "Q"})
MAX_EXPONENT = 1000

CHECK_KINDS = (
    "residual",
    "corollary-b",
    "field-coordinate-2var",
    "lnd",
    "fpf",
    "groebner",
    "unit-ideal",
    "retraction",
)

OPTION_TYPES = {
    "generic-asserted": bool,
    "stably-polynomial": bool,
    "lnd-bound": int,
    "slice-degree": int,
    "bound": int,
    "t-vars": tuple,
    "x-vars": tuple,
}

KIND_OPTIONS = {
    "residual": {"generic-asserted", "stably-polynomial", "t-vars", "x-vars", "lnd-bound", "slice-degree"},
    "corollary-b": {"generic-asserted", "t-vars", "x-vars", "lnd-bound", "slice-degree"},
    "field-coordinate-2var": {"lnd-bound", "slice-degree"},
    "lnd": {"bound", "t-vars", "x-vars"},
    "fpf": {"t-vars", "x-vars"},
    "groebner": set(),
    "unit-ideal": set(),
    "retraction": set(),
}

REQUIRED_OPTIONS = {"corollary-b": {"t-vars"}}

# what a subject of each kind may be bound to
KIND_SUBJECTS = {
    "residual": ("poly",),
    "corollary-b": ("poly",),
    "field-coordinate-2var": ("poly",),
    "lnd": ("map", "poly"),
    "fpf": ("map", "poly"),
    "groebner": ("ideal", "poly"),
    "unit-ideal": ("ideal", "poly"),
    "retraction": ("map",),
}

_NAME = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_WORD = re.compile(r"[A-Za-z0-9][A-Za-z0-9_]*(?:-[A-Za-z0-9_]+)*")
_INT = re.compile(r"[0-9]+")


@dataclass(frozen=True)
class Extension:
    variables: Tuple[str, ...]
    relations: Tuple[Polynomial, ...] = ()


@dataclass(frozen=True)
class RingDecl:
    name: str
    base: str
    extensions: Tuple[Extension, ...]
    order: Optional[MonomialOrder] = None
    ring: Optional[RingPresentation] = field(default=None, compare=False, repr=False)
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class IdealLiteral:
    generators: Tuple[Polynomial, ...]
    ring: Optional[RingPresentation] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class MapLiteral:
    images: Tuple[Tuple[str, Polynomial], ...]
    ring: Optional[RingPresentation] = field(default=None, compare=False, repr=False)

    def as_dict(self) -> Dict[str, Polynomial]:
        return dict(self.images)


Value = Union[Polynomial, IdealLiteral, MapLiteral]


@dataclass(frozen=True)
class LetBinding:
    name: str
    value: Value
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class CheckDirective:
    kind: str
    subject: str
    options: Tuple[Tuple[str, Any], ...] = ()
    ring: Optional[RingPresentation] = field(default=None, compare=False, repr=False)
    line: int = field(default=0, compare=False)
    column: int = field(default=0, compare=False)

    def option(self, name: str, default=None):
        for k, v in self.options:
            if k == name:
                return v
        return default

    def __str__(self):
        return format_statement(self).rstrip(";")


Statement = Union[RingDecl, LetBinding, CheckDirective]


@dataclass(frozen=True)
class Script:
    statements: Tuple[Statement, ...]
    rings: Dict[str, RingPresentation] = field(default_factory=dict, compare=False, repr=False)
    bindings: Dict[str, Value] = field(default_factory=dict, compare=False, repr=False)

    @property
    def directives(self) -> Tuple[CheckDirective, ...]:
        return tuple(s for s in self.statements if isinstance(s, CheckDirective))

    @property
    def current_ring(self) -> Optional[RingPresentation]:
        for s in reversed(self.statements):
            if isinstance(s, RingDecl):
                return s.ring
        return None


def _value_kind(value) -> str:
    if isinstance(value, Polynomial):
        return "poly"
    if isinstance(value, IdealLiteral):
        return "ideal"
    return "map"


class _Parser:
    def __init__(self, text: str, rings=None, bindings=None, ring=None):
        self.text = text.replace("−", "-")
        self.pos = 0
        self.rings: Dict[str, RingPresentation] = dict(rings or {})
        self.bindings: Dict[str, Value] = dict(bindings or {})
        self.ring: Optional[RingPresentation] = ring

    # low-level scanning

    def where(self, pos=None) -> Tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        column = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, column

    def error(self, message, cls=ParseError, pos=None):
        line, column = self.where(pos)
        return cls(message, line, column)

    def skip(self):
        text = self.text
        n = len(text)
        while self.pos < n:
            ch = text[self.pos]
            if ch.isspace():
                self.pos += 1
            elif ch == "#":
                nl = text.find("\n", self.pos)
                self.pos = n if nl < 0 else nl + 1
            else:
                break

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def at(self, s: str) -> bool:
        self.skip()
        return self.text.startswith(s, self.pos)

    def accept(self, s: str) -> bool:
        if self.at(s):
            self.pos += len(s)
            return True
        return False

    def expect(self, s: str):
        if not self.accept(s):
            found = self.peek() or "end of input"
            raise self.error(f"expected {s!r}, found {found!r}")

    def match(self, regex, what: str) -> str:
        self.skip()
        m = regex.match(self.text, self.pos)
        if not m:
            found = self.peek() or "end of input"
            raise self.error(f"expected {what}, found {found!r}")
        self.pos = m.end()
        return m.group()

    def name(self) -> str:
        return self.match(_NAME, "a name")

    def peek_name(self) -> Optional[str]:
        self.skip()
        m = _NAME.match(self.text, self.pos)
        return m.group() if m else None

    def integer(self) -> int:
        return int(self.match(_INT, "an integer"))

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    # statements

    def script(self) -> Script:
        statements = []
        while not self.at_end():
            statements.append(self.statement())
        return Script(tuple(statements), self.rings, self.bindings)

    def statement(self) -> Statement:
        self.skip()
        start = self.pos
        word = self.peek_name()
        if word == "ring":
            self.name()
            return self.ring_decl(start)
        if word == "let":
            self.name()
            return self.let_binding(start)
        if word == "check":
            self.name()
            return self.check(start)
        raise self.error("expected 'ring', 'let' or 'check'")

    def _new_name(self, what: str) -> str:
        self.skip()
        pos = self.pos
        name = self.name()
        if name in RESERVED:
            raise self.error(f"{name!r} is reserved", pos=pos)
        if name in self.rings or name in self.bindings:
            raise self.error(f"{what} {name!r} shadows an earlier declaration", ShadowingError, pos)
        if any(name in r for r in self.rings.values()):
            raise self.error(f"{what} {name!r} shadows a ring variable", ShadowingError, pos)
        return name

    def ring_decl(self, start) -> RingDecl:
        name = self._new_name("ring")
        self.expect("=")
        base, extensions, order, ring = self.ring_expr()
        self.expect(";")
        self.rings[name] = ring
        self.ring = ring
        line, column = self.where(start)
        return RingDecl(name, base, extensions, order, ring, line, column)

    def ring_expr(self):
        self.skip()
        base_pos = self.pos
        base = self.name()
        if base == "Q":
            ring = None
        elif base in self.rings:
            ring = self.rings[base]
        else:
            raise self.error(f"undeclared ring {base!r}", UndeclaredIdentifierError, base_pos)
        extensions = []
        while self.at("["):
            ring, ext = self.extension(ring)
            extensions.append(ext)
        if not extensions:
            raise self.error("expected '[' after the base ring")
        order = None
        if self.peek_name() == "order":
            self.name()
            self.skip()
            pos = self.pos
            order = self.order_spec()
            if not order.fits(ring.nvars):
                raise self.error(f"order {order} does not fit {ring.nvars} variables", pos=pos)
            ring = ring.with_order(order)
        return base, tuple(extensions), order, ring

    def extension(self, ring):
        self.expect("[")
        names = []
        while True:
            self.skip()
            pos = self.pos
            v = self.name()
            if v in RESERVED:
                raise self.error(f"{v!r} is reserved", pos=pos)
            if v in names or (ring is not None and v in ring):
                raise self.error(f"variable {v!r} is declared twice", ShadowingError, pos)
            if v in self.bindings or v in self.rings:
                raise self.error(f"variable {v!r} shadows an earlier declaration", ShadowingError, pos)
            names.append(v)
            if not self.accept(","):
                break
        self.expect("]")
        if ring is None:
            ring = RingPresentation(names)
        else:
            ring = ring.extend(names)
        relations = []
        if self.at("/"):
            self.expect("/")
            self.expect("(")
            saved, self.ring = self.ring, ring
            try:
                relations.append(self.poly())
                while self.accept(","):
                    relations.append(self.poly())
            finally:
                self.ring = saved
            self.expect(")")
            ring = ring.quotient(relations)
        return ring, Extension(tuple(names), tuple(relations))

    def order_spec(self) -> MonomialOrder:
        word = self.name()
        if word == "lex":
            return LEX
        if word == "degrevlex":
            return DEGREVLEX
        if word == "block":
            self.expect("(")
            first = self.order_spec()
            self.expect(",")
            split = self.integer()
            self.expect(",")
            second = self.order_spec()
            self.expect(")")
            return block_order(first, split, second)
        raise self.error(f"unknown monomial order {word!r}")

    def _need_ring(self):
        if self.ring is None:
            raise self.error("no ring declared yet", UndeclaredIdentifierError)

    def let_binding(self, start) -> LetBinding:
        name = self._new_name("binding")
        self.expect("=")
        self._need_ring()
        if self.at("{"):
            value = self.map_literal()
        elif self.peek_name() == "ideal":
            self.name()
            self.expect("(")
            gens = []
            if not self.at(")"):
                gens.append(self.poly())
                while self.accept(","):
                    gens.append(self.poly())
            self.expect(")")
            value = IdealLiteral(tuple(gens), self.ring)
        else:
            value = self.poly()
        self.expect(";")
        self.bindings[name] = value
        line, column = self.where(start)
        return LetBinding(name, value, line, column)

    def map_literal(self) -> MapLiteral:
        self.expect("{")
        images = []
        seen = set()
        if not self.at("}"):
            while True:
                self.skip()
                pos = self.pos
                v = self.name()
                if v not in self.ring:
                    raise self.error(f"{v!r} is not a variable of the current ring", UndeclaredIdentifierError, pos)
                if v in seen:
                    raise self.error(f"variable {v!r} mapped twice", pos=pos)
                seen.add(v)
                self.expect("->")
                images.append((v, self.poly()))
                if not self.accept(","):
                    break
        self.expect("}")
        return MapLiteral(tuple(images), self.ring)

    def check(self, start) -> CheckDirective:
        self.skip()
        kpos = self.pos
        kind = self.match(_WORD, "a check kind")
        if kind not in CHECK_KINDS:
            raise self.error(f"unknown check kind {kind!r}", pos=kpos)
        self.skip()
        spos = self.pos
        subject = self.name()
        ring = self._subject_ring(kind, subject, spos)
        options = []
        seen = set()
        while not self.at(";"):
            self.skip()
            opos = self.pos
            key = self.match(_WORD, "an option")
            if key not in KIND_OPTIONS[kind]:
                raise self.error(f"option {key!r} is not valid for 'check {kind}'", pos=opos)
            if key in seen:
                raise self.error(f"option {key!r} given twice", pos=opos)
            seen.add(key)
            options.append((key, self.option_value(key, ring)))
        missing = REQUIRED_OPTIONS.get(kind, set()) - seen
        if missing:
            raise self.error(f"'check {kind}' requires option(s) {', '.join(sorted(missing))}", pos=kpos)
        self.expect(";")
        line, column = self.where(start)
        return CheckDirective(kind, subject, tuple(options), ring, line, column)

    def _subject_ring(self, kind, subject, pos):
        allowed = KIND_SUBJECTS[kind]
        if subject in self.bindings:
            value = self.bindings[subject]
            vk = _value_kind(value)
            if vk not in allowed:
                raise self.error(f"'check {kind}' cannot take a {vk} binding", pos=pos)
            return value.ring
        if self.ring is not None and subject in self.ring and "poly" in allowed:
            return self.ring
        raise self.error(f"undeclared identifier {subject!r}", UndeclaredIdentifierError, pos)

    def option_value(self, key, ring):
        kind = OPTION_TYPES[key]
        if not self.accept("="):
            if kind is bool:
                return True
            raise self.error(f"option {key!r} needs a value")
        self.skip()
        pos = self.pos
        if kind is bool:
            word = self.name()
            if word not in ("true", "false"):
                raise self.error(f"option {key!r} expects true or false", pos=pos)
            return word == "true"
        if kind is int:
            return self.integer()
        items = [self.name()]
        while self.accept(","):
            items.append(self.name())
        for item in items:
            is_var = ring is not None and item in ring
            if key == "x-vars" and not is_var:
                raise self.error(f"{item!r} is not a variable", UndeclaredIdentifierError, pos)
            if key == "t-vars" and not is_var:
                value = self.bindings.get(item)
                if not isinstance(value, Polynomial):
                    raise self.error(f"undeclared identifier {item!r}", UndeclaredIdentifierError, pos)
        return tuple(items)

    # polynomial expressions

    def poly(self) -> Polynomial:
        self._need_ring()
        negate = False
        if self.accept("-"):
            negate = True
        else:
            self.accept("+")
        result = self.term()
        if negate:
            result = -result
        while True:
            if self.accept("+"):
                result = result + self.term()
            elif self.at("-") and not self.at("->"):
                self.pos += 1
                result = result - self.term()
            else:
                return result

    def _starts_factor(self) -> bool:
        ch = self.peek()
        return bool(ch) and (ch.isalnum() or ch == "(")

    def term(self) -> Polynomial:
        result = self.power()
        while True:
            if self.at("**"):
                raise self.error("unexpected '**'")
            if self.accept("*"):
                result = result * self.power()
            elif self.at("/"):
                self.pos += 1
                self.skip()
                pos = self.pos
                d = self.rational()
                if not d:
                    raise self.error("division by zero", pos=pos)
                result = result / d
            elif self._starts_factor():
                result = result * self.power()
            else:
                return result

    def power(self) -> Polynomial:
        if self.at("-") and not self.at("->"):
            # unary minus binds looser than ^: x*-y^2 is x*(-(y^2))
            self.pos += 1
            return -self.power()
        base = self.atom()
        if self.accept("^"):
            self.skip()
            pos = self.pos
            e = self.integer()
            if e > MAX_EXPONENT:
                raise self.error(f"exponent {e} exceeds {MAX_EXPONENT}", pos=pos)
            base = base ** e
        return base

    def rational(self) -> Fraction:
        num = self.integer()
        return Fraction(num)

    def atom(self) -> Polynomial:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.poly()
            self.expect(")")
            return inner
        if ch.isdigit():
            value = Fraction(self.integer())
            if self.at("/") and self._digit_after_slash():
                self.expect("/")
                self.skip()
                pos = self.pos
                den = self.integer()
                if not den:
                    raise self.error("division by zero", pos=pos)
                value /= den
            return self.ring.constant(value)
        if ch.isalpha():
            pos = self.pos
            name = self.name()
            return self.resolve(name, pos)
        raise self.error(f"expected a polynomial, found {ch or 'end of input'!r}")

    def _digit_after_slash(self) -> bool:
        i = self.pos + 1
        while i < len(self.text) and self.text[i] in " \t":
            i += 1
        return i < len(self.text) and self.text[i].isdigit()

    def resolve(self, name: str, pos) -> Polynomial:
        if name in self.ring:
            return self.ring.gen(name)
        value = self.bindings.get(name)
        if isinstance(value, Polynomial):
            try:
                return self.ring.convert(value)
            except UnknownVariableError:
                raise self.error(
                    f"binding {name!r} uses variables outside the current ring",
                    UndeclaredIdentifierError,
                    pos,
                ) from None
        if value is not None:
            raise self.error(f"{name!r} is not a polynomial", pos=pos)
        raise self.error(f"undeclared identifier {name!r}", UndeclaredIdentifierError, pos)


def parse(text: str) -> Script:
    """Parse a script; raises :class:`ParseError` (with line/column) on bad input."""
    return _Parser(text).script()


def parse_polynomial(text: str, ring: RingPresentation, bindings: Optional[Dict[str, Value]] = None) -> Polynomial:
    p = _Parser(text, bindings=bindings, ring=ring)
    value = p.poly()
    if not p.at_end():
        raise p.error(f"unexpected {p.peek()!r} after polynomial")
    return value


def parse_ring(text: str, rings: Optional[Dict[str, RingPresentation]] = None) -> RingPresentation:
    """Parse a ring expression such as ``Q[x,y,z]/(x^2+y^2+z^2-1)[U,V,W] order lex``."""
    p = _Parser(text, rings=rings)
    ring = p.ring_expr()[3]
    if not p.at_end():
        raise p.error(f"unexpected {p.peek()!r} after ring expression")
    return ring


def _format_value(value: Value) -> str:
    if isinstance(value, Polynomial):
        return str(value)
    if isinstance(value, IdealLiteral):
        return "ideal(" + ", ".join(str(g) for g in value.generators) + ")"
    return "{" + ", ".join(f"{v} -> {p}" for v, p in value.images) + "}"


def _format_option(key, value) -> str:
    if isinstance(value, bool):
        return f"{key}={'true' if value else 'false'}"
    if isinstance(value, tuple):
        return f"{key}={','.join(value)}"
    return f"{key}={value}"


def format_statement(s: Statement) -> str:
    if isinstance(s, RingDecl):
        out = f"ring {s.name} = {s.base}"
        for ext in s.extensions:
            out += "[" + ",".join(ext.variables) + "]"
            if ext.relations:
                out += " / (" + ", ".join(str(r) for r in ext.relations) + ")"
        if s.order is not None:
            out += f" order {s.order}"
        return out + ";"
    if isinstance(s, LetBinding):
        return f"let {s.name} = {_format_value(s.value)};"
    parts = [f"check {s.kind} {s.subject}"] + [_format_option(k, v) for k, v in s.options]
    return " ".join(parts) + ";"


def print_script(script: Script) -> str:
    """Canonical text of a script; ``parse(print_script(s)) == s``."""
    if not script.statements:
        return ""
    return "\n".join(format_statement(s) for s in script.statements) + "\n"
