"""Exact sparse multivariate polynomials over the rationals.

Polynomials live over a :class:`VarTable` and store their terms as a map from
exponent tuples to nonzero :class:`fractions.Fraction` coefficients.  No
floating point is involved anywhere in this module.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Sequence, Tuple

Monomial = Tuple[int, ...]

_NAME_RE = re.compile(r"[a-z][a-zA-Z0-9]*\Z")


class PolynomialSyntaxError(ValueError):
    """Raised by :func:`parse` on malformed input; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class VarTable:
    """Ordered, immutable list of variable names."""

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        for name in names:
            if not _NAME_RE.match(name):
                raise ValueError(f"invalid variable name {name!r}")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {names}")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(names)})

    def __setattr__(self, key, value):
        raise AttributeError("VarTable is immutable")

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, VarTable) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"VarTable({list(self.names)!r})"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None


class MonomialOrder:
    """A monomial order: ``lex``, ``grevlex`` or ``block`` elimination.

    ``block`` with ``k`` compares the first ``k`` variables first (by the
    ``inner`` order, grevlex by default) and breaks ties on the remaining
    variables with the same inner order.  Larger sort key means larger
    monomial.
    """

    __slots__ = ("kind", "k", "inner")

    def __init__(self, kind: str = "grevlex", k: int = 0, inner: str = "grevlex"):
        if kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if inner not in ("lex", "grevlex"):
            raise ValueError(f"unknown inner order {inner!r}")
        if kind == "block" and k < 0:
            raise ValueError("block size must be non-negative")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "k", k if kind == "block" else 0)
        object.__setattr__(self, "inner", inner if kind == "block" else kind)

    def __setattr__(self, key, value):
        raise AttributeError("MonomialOrder is immutable")

    @classmethod
    def lex(cls) -> "MonomialOrder":
        return cls("lex")

    @classmethod
    def grevlex(cls) -> "MonomialOrder":
        return cls("grevlex")

    @classmethod
    def block(cls, k: int, inner: str = "grevlex") -> "MonomialOrder":
        return cls("block", k, inner)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MonomialOrder) and (self.kind, self.k, self.inner) == (
            other.kind,
            other.k,
            other.inner,
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.k, self.inner))

    def __repr__(self) -> str:
        if self.kind == "block":
            return f"MonomialOrder.block({self.k}, inner={self.inner!r})"
        return f"MonomialOrder.{self.kind}()"

    def key(self, m: Monomial):
        if self.kind == "lex":
            return m
        if self.kind == "grevlex":
            return _grevlex_key(m)
        head, tail = m[: self.k], m[self.k :]
        inner = _grevlex_key if self.inner == "grevlex" else tuple
        return (inner(head), inner(tail))


def _grevlex_key(m: Monomial):
    return (sum(m), tuple(-e for e in reversed(m)))


_GREVLEX = MonomialOrder.grevlex()


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        # exact binary value of the float, never a decimal approximation
        return Fraction(c)
    return Fraction(c)


class Polynomial:
    """Immutable sparse polynomial with rational coefficients.

    Terms are kept in descending grevlex order internally; :func:`format`
    prints them in descending lex order.
    """

    __slots__ = ("vars", "_terms", "_hash")

    def __init__(self, vars: VarTable, terms: Mapping[Monomial, object] | None = None):
        clean: Dict[Monomial, Fraction] = {}
        n = len(vars)
        for mono, coeff in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != n:
                raise ValueError(f"monomial {mono} does not match {n} variables")
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            c = _as_fraction(coeff)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        ordered = dict(sorted(clean.items(), key=lambda t: _grevlex_key(t[0]), reverse=True))
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "_terms", ordered)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, key, value):
        raise AttributeError("Polynomial is immutable")

    @classmethod
    def _raw(cls, vars: VarTable, terms: Dict[Monomial, Fraction]) -> "Polynomial":
        """Wrap an already-clean term dict without re-validating it."""
        p = object.__new__(cls)
        ordered = dict(sorted(terms.items(), key=lambda t: _grevlex_key(t[0]), reverse=True))
        object.__setattr__(p, "vars", vars)
        object.__setattr__(p, "_terms", ordered)
        object.__setattr__(p, "_hash", None)
        return p

    # constructors -----------------------------------------------------------
    @classmethod
    def zero(cls, vars: VarTable) -> "Polynomial":
        return cls._raw(vars, {})

    @classmethod
    def constant(cls, vars: VarTable, c) -> "Polynomial":
        c = _as_fraction(c)
        return cls._raw(vars, {(0,) * len(vars): c} if c else {})

    @classmethod
    def variable(cls, vars: VarTable, name: str) -> "Polynomial":
        mono = [0] * len(vars)
        mono[vars.index(name)] = 1
        return cls._raw(vars, {tuple(mono): Fraction(1)})

    # inspection -------------------------------------------------------------
    @property
    def terms(self) -> Dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def degree(self, name: str) -> int:
        i = self.vars.index(name)
        return max((m[i] for m in self._terms), default=-1)

    def variables(self) -> Tuple[str, ...]:
        """Names of the variables actually occurring in ``self``."""
        used = set()
        for m in self._terms:
            used.update(i for i, e in enumerate(m) if e)
        return tuple(self.vars.names[i] for i in sorted(used))

    def coefficient(self, mono: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    # arithmetic -------------------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if self.vars != other.vars:
            raise ValueError(f"VarTable mismatch: {self.vars} vs {other.vars}")

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, float)):
            return Polynomial.constant(self.vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.vars, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(self, -other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return add(other, -self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = Polynomial.constant(self.vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> "Polynomial":
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.vars)
        return Polynomial._raw(self.vars, {m: v * c for m, v in self._terms.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.vars == other.vars and self._terms == other._terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.vars, frozenset(self._terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        return f"Polynomial({format(self)!r})"

    def __str__(self) -> str:
        return format(self)

    def rename(self, vars: VarTable) -> "Polynomial":
        """Re-express ``self`` over another table containing all used variables."""
        perm = [vars.index(n) for n in self.vars.names]
        out = {}
        for m, c in self._terms.items():
            new = [0] * len(vars)
            for i, e in enumerate(m):
                if e:
                    new[perm[i]] = e
            out[tuple(new)] = c
        return Polynomial._raw(vars, out)

    def substitute(self, values: Mapping[str, object]) -> "Polynomial":
        """Substitute rational constants for some variables (kept in the table)."""
        idx = {self.vars.index(k): _as_fraction(v) for k, v in values.items()}
        out: Dict[Monomial, Fraction] = {}
        for m, c in self._terms.items():
            new = list(m)
            for i, v in idx.items():
                if m[i]:
                    c = c * v ** m[i]
                    new[i] = 0
            if c:
                key = tuple(new)
                out[key] = out.get(key, Fraction(0)) + c
        return Polynomial._raw(self.vars, {m: c for m, c in out.items() if c})


def add(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    out = dict(a._terms)
    for m, c in b._terms.items():
        s = out.get(m, 0) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return Polynomial._raw(a.vars, out)


def mul(a: Polynomial, b: Polynomial) -> Polynomial:
    a._check(b)
    out: Dict[Monomial, Fraction] = {}
    for ma, ca in a._terms.items():
        for mb, cb in b._terms.items():
            m = tuple(x + y for x, y in zip(ma, mb))
            out[m] = out.get(m, 0) + ca * cb
    return Polynomial._raw(a.vars, {m: c for m, c in out.items() if c})


def leading_term(p: Polynomial, order: MonomialOrder = _GREVLEX) -> Tuple[Monomial, Fraction]:
    """Return ``(monomial, coefficient)`` of the largest term of ``p`` under ``order``."""
    if not p:
        raise ValueError("zero polynomial has no leading term")
    key = order.key
    mono = max(p._terms, key=key)
    return mono, p._terms[mono]


def differentiate(p: Polynomial, var: str) -> Polynomial:
    i = p.vars.index(var)
    out = {}
    for m, c in p._terms.items():
        e = m[i]
        if e:
            out[m[:i] + (e - 1,) + m[i + 1 :]] = c * e
    return Polynomial._raw(p.vars, out)


def evaluate(p: Polynomial, point: Mapping[str, object]) -> Fraction:
    """Exact value of ``p`` at a rational point.

    Only the variables occurring in ``p`` need to be supplied.
    """
    values = []
    for i, name in enumerate(p.vars.names):
        if name in point:
            values.append(_as_fraction(point[name]))
        else:
            values.append(None)
    total = Fraction(0)
    for m, c in p._terms.items():
        t = c
        for i, e in enumerate(m):
            if e:
                v = values[i]
                if v is None:
                    raise KeyError(f"missing value for variable {p.vars.names[i]!r}")
                t *= v**e
        total += t
    return total


# text format ---------------------------------------------------------------

def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format(p: Polynomial) -> str:  # noqa: A001 - mirrors parse()
    """Canonical text form, terms in descending lex order."""
    if not p:
        return "0"
    names = p.vars.names
    pieces = []
    for m in sorted(p._terms, reverse=True):
        c = p._terms[m]
        factors = [
            name if e == 1 else f"{name}^{e}" for name, e in zip(names, m) if e
        ]
        mag = abs(c)
        if not factors:
            body = _format_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_format_coeff(mag)] + factors)
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(("+ " if c > 0 else "- ") + body)
    return " ".join(pieces)


_TOKEN_RE = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[a-z][a-zA-Z0-9]*)|(?P<op>[-+*/^]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


def parse(text: str, vars: VarTable) -> Polynomial:
    """Parse the polynomial text grammar.

    ``poly := term (('+'|'-') term)*`` with terms built from an optional
    rational coefficient ``int('/'uint)?`` and ``var('^'uint)?`` factors
    joined by ``*``.  A single leading sign is accepted so that the output of
    :func:`format` round-trips.
    """
    tokens = _tokenize(text)
    pos = 0
    n = len(vars)

    def peek():
        return tokens[pos]

    def take(kind=None, value=None):
        nonlocal pos
        tok = tokens[pos]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            got = tok[1] or "end of input"
            raise PolynomialSyntaxError(f"expected {want}, got {got!r}", tok[2])
        pos += 1
        return tok

    def factor_or_coeff(coeff: Fraction, mono: list, allow_coeff: bool):
        tok = peek()
        if tok[0] == "int":
            if not allow_coeff:
                raise PolynomialSyntaxError("coefficient must lead the term", tok[2])
            num = int(take("int")[1])
            if peek()[:2] == ("op", "/"):
                take("op", "/")
                den_tok = take("int")
                den = int(den_tok[1])
                if den == 0:
                    raise PolynomialSyntaxError("zero denominator", den_tok[2])
                return coeff * Fraction(num, den)
            return coeff * num
        if tok[0] == "name":
            take("name")
            if tok[1] not in vars:
                raise PolynomialSyntaxError(f"unknown variable {tok[1]!r}", tok[2])
            e = 1
            if peek()[0] == "op" and peek()[1] == "^":
                take("op", "^")
                e = int(take("int")[1])
            mono[vars.index(tok[1])] += e
            return coeff
        raise PolynomialSyntaxError(f"expected coefficient or variable, got {tok[1] or 'end of input'!r}", tok[2])

    def term(sign: int):
        mono = [0] * n
        coeff = factor_or_coeff(Fraction(sign), mono, True)
        while peek()[0] == "op" and peek()[1] == "*":
            take("op", "*")
            coeff = factor_or_coeff(coeff, mono, False)
        return tuple(mono), coeff

    out: Dict[Monomial, Fraction] = {}
    sign = 1
    if peek()[0] == "op" and peek()[1] in "+-":
        sign = -1 if take("op")[1] == "-" else 1
    while True:
        mono, coeff = term(sign)
        out[mono] = out.get(mono, Fraction(0)) + coeff
        tok = peek()
        if tok[0] == "end":
            break
        if tok[0] == "op" and tok[1] in "+-":
            take("op")
            sign = -1 if tok[1] == "-" else 1
            continue
        raise PolynomialSyntaxError(f"unexpected token {tok[1]!r}", tok[2])
    return Polynomial(vars, out)


def polys(text: str, vars: VarTable) -> list:
    """Parse several polynomials separated by ``;`` or newlines."""
    parts = [s for s in re.split(r"[;\n]", text) if s.strip() and not s.strip().startswith("#")]
    return [parse(s, vars) for s in parts]
