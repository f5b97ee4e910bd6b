"""Buchberger's algorithm, normal forms, ideal membership and elimination."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .exactpoly import Monomial, MonomialOrder, Polynomial, VarTable, leading_term

Terms = Dict[Monomial, Fraction]


class ResourceLimitError(RuntimeError):
    """Buchberger exceeded its S-pair or basis-size budget."""


@dataclass(frozen=True)
class Limits:
    max_pairs: int = 100_000
    max_basis: int = 5_000

    @classmethod
    def from_string(cls, spec: str, base: Optional["Limits"] = None) -> "Limits":
        """Parse ``"pairs=N,basis=M"`` (either key optional)."""
        base = base or cls()
        pairs, basis = base.max_pairs, base.max_basis
        for item in filter(None, (s.strip() for s in spec.split(","))):
            key, _, value = item.partition("=")
            if key == "pairs":
                pairs = int(value)
            elif key == "basis":
                basis = int(value)
            else:
                raise ValueError(f"unknown limit {key!r} in {spec!r}")
        if pairs < 1 or basis < 1:
            raise ValueError("limits must be positive")
        return cls(pairs, basis)

    @classmethod
    def from_env(cls) -> "Limits":
        spec = os.environ.get("RIGIDLAB_LIMITS")
        return cls.from_string(spec) if spec else cls()


@dataclass(frozen=True)
class IdealBasis:
    generators: Tuple[Polynomial, ...]
    order: MonomialOrder
    reduced: bool = False
    stats: dict = field(default_factory=dict, compare=False)

    @property
    def vars(self) -> VarTable:
        return self.generators[0].vars

    def __iter__(self):
        return iter(self.generators)

    def __len__(self) -> int:
        return len(self.generators)

    def is_unit(self) -> bool:
        return any(len(g) == 1 and not any(next(iter(g.terms))) for g in self.generators)


# term-dict helpers -------------------------------------------------------------

def _lead(f: Terms, key) -> Monomial:
    return max(f, key=key)


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _monic(f: Terms, key) -> Terms:
    lc = f[_lead(f, key)]
    if lc == 1:
        return f
    return {m: c / lc for m, c in f.items()}


def _sub_multiple(f: Terms, g: Terms, shift: Monomial, c: Fraction) -> None:
    """In place: ``f -= c * x^shift * g``."""
    for m, gc in g.items():
        t = tuple(x + y for x, y in zip(m, shift))
        v = f.get(t, 0) - c * gc
        if v:
            f[t] = v
        else:
            f.pop(t, None)


def _reduce(f: Terms, basis: Sequence[Terms], lms: Sequence[Monomial], key) -> Terms:
    """Full reduction of ``f`` by monic ``basis``; first divisor in list order wins."""
    f = dict(f)
    rem: Terms = {}
    while f:
        m = _lead(f, key)
        c = f[m]
        for g, lm in zip(basis, lms):
            if _divides(lm, m):
                _sub_multiple(f, g, tuple(x - y for x, y in zip(m, lm)), c / g[lm])
                break
        else:
            rem[m] = c
            del f[m]
    return rem


def _spoly(f: Terms, g: Terms, lf: Monomial, lg: Monomial) -> Terms:
    l = _lcm(lf, lg)
    out: Terms = {}
    _sub_multiple(out, f, tuple(a - b for a, b in zip(l, lf)), -1 / f[lf])
    _sub_multiple(out, g, tuple(a - b for a, b in zip(l, lg)), 1 / g[lg])
    return out


def _check_vars(polys: Sequence[Polynomial]) -> VarTable:
    vars = polys[0].vars
    for p in polys[1:]:
        if p.vars != vars:
            raise ValueError(f"VarTable mismatch: {vars} vs {p.vars}")
    return vars


# public operations ----------------------------------------------------------------

def normal_form(f: Polynomial, basis: IdealBasis | Sequence[Polynomial], order: MonomialOrder | None = None) -> Polynomial:
    """Remainder of ``f`` on division by the basis generators.

    Every term is reduced (not only the leading one); when several generators
    divide a term, the first one in generator order is used.
    """
    if isinstance(basis, IdealBasis):
        order = basis.order if order is None else order
        gens = list(basis.generators)
    else:
        gens = list(basis)
        if order is None:
            raise ValueError("an explicit order is required for a plain generator list")
    gens = [g for g in gens if g]
    if not gens:
        return f
    _check_vars([f] + gens)
    key = order.key
    terms = [dict(g.items()) for g in gens]
    lms = [_lead(t, key) for t in terms]
    return Polynomial._raw(f.vars, _reduce(dict(f.items()), terms, lms, key))


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    key = order.key
    ft, gt = dict(f.items()), dict(g.items())
    return Polynomial._raw(f.vars, _spoly(ft, gt, _lead(ft, key), _lead(gt, key)))


def buchberger(
    gens: Sequence[Polynomial],
    order: MonomialOrder,
    limits: Limits | None = None,
    selection: str = "normal",
) -> IdealBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Pairs are chosen by the normal strategy (smallest lcm first, ties broken
    by index pair) or first-in-first-out with ``selection="fifo"``.  Pairs with
    coprime leading monomials are skipped, as are pairs covered by the chain
    criterion.  Exceeding ``limits`` raises :class:`ResourceLimitError`.
    """
    if not gens:
        raise ValueError("need at least one generator")
    if selection not in ("normal", "fifo"):
        raise ValueError(f"unknown pair selection {selection!r}")
    vars = _check_vars(list(gens))
    limits = limits or Limits.from_env()
    key = order.key

    G: List[Terms] = []
    L: List[Monomial] = []
    pending: Dict[Tuple[int, int], int] = {}  # pair -> insertion stamp
    stamp = 0
    for g in gens:
        if g:
            t = _monic(dict(g.items()), key)
            G.append(t)
            L.append(_lead(t, key))
    if not G:
        return IdealBasis((Polynomial.zero(vars),), order, True)
    for j in range(len(G)):
        for i in range(j):
            pending[(i, j)] = stamp
            stamp += 1

    processed = 0
    skipped = 0
    while pending:
        if selection == "normal":
            pair = min(pending, key=lambda p: (key(_lcm(L[p[0]], L[p[1]])), p))
        else:
            pair = min(pending, key=pending.__getitem__)
        del pending[pair]
        processed += 1
        if processed > limits.max_pairs:
            raise ResourceLimitError(f"S-pair limit of {limits.max_pairs} exceeded")
        i, j = pair
        li, lj = L[i], L[j]
        if all(not (a and b) for a, b in zip(li, lj)):
            skipped += 1
            continue
        lcm = _lcm(li, lj)
        if any(
            k != i
            and k != j
            and _divides(L[k], lcm)
            and (min(i, k), max(i, k)) not in pending
            and (min(j, k), max(j, k)) not in pending
            for k in range(len(G))
        ):
            skipped += 1
            continue
        r = _reduce(_spoly(G[i], G[j], li, lj), G, L, key)
        if r:
            r = _monic(r, key)
            G.append(r)
            L.append(_lead(r, key))
            if len(G) > limits.max_basis:
                raise ResourceLimitError(f"basis size limit of {limits.max_basis} exceeded")
            n = len(G) - 1
            for k in range(n):
                pending[(k, n)] = stamp
                stamp += 1

    basis = _interreduce(G, L, key)
    polys = tuple(Polynomial._raw(vars, t) for t in basis)
    return IdealBasis(polys, order, True, {"pairs": processed, "skipped": skipped, "raw_size": len(G)})


def _interreduce(G: List[Terms], L: List[Monomial], key) -> List[Terms]:
    keep = []
    for i, li in enumerate(L):
        dominated = any(
            j != i and _divides(L[j], li) and (L[j] != li or j < i) for j in range(len(L))
        )
        if not dominated:
            keep.append(i)
    minimal = [G[i] for i in keep]
    lms = [L[i] for i in keep]
    out = []
    for idx, g in enumerate(minimal):
        others = [h for k, h in enumerate(minimal) if k != idx]
        other_lms = [m for k, m in enumerate(lms) if k != idx]
        lead = {lms[idx]: g[lms[idx]]}
        tail = {m: c for m, c in g.items() if m != lms[idx]}
        red = _reduce(tail, others, other_lms, key)
        red.update(lead)
        out.append(_monic(red, key))
    out.sort(key=lambda t: key(_lead(t, key)))
    return out


def is_groebner(basis: IdealBasis) -> bool:
    """Check that every S-polynomial of ``basis`` reduces to zero."""
    gens = [g for g in basis.generators if g]
    for j in range(len(gens)):
        for i in range(j):
            if normal_form(s_polynomial(gens[i], gens[j], basis.order), basis):
                return False
    return True


def ideal_membership(
    f: Polynomial,
    gens: Sequence[Polynomial] | IdealBasis,
    order: MonomialOrder | None = None,
    limits: Limits | None = None,
) -> bool:
    """True iff ``f`` reduces to zero modulo a Groebner basis of ``gens``."""
    if isinstance(gens, IdealBasis):
        basis = gens if gens.reduced else buchberger(list(gens.generators), gens.order, limits)
    else:
        basis = buchberger(list(gens), order or MonomialOrder.grevlex(), limits)
    return not normal_form(f, basis)


def eliminate(
    gens: Sequence[Polynomial],
    drop: Iterable[str],
    limits: Limits | None = None,
    inner: str = "grevlex",
    selection: str = "normal",
) -> IdealBasis:
    """Groebner basis of the elimination ideal ``<gens>`` intersected with the kept variables.

    The computation reorders the variables so the dropped ones form the first
    block of a block order; the result is mapped back to the input
    :class:`VarTable` and carries the inner order, under which it is again a
    reduced Groebner basis.
    """
    gens = list(gens)
    vars = _check_vars(gens)
    drop = set(drop)
    for name in drop:
        vars.index(name)
    dropped = [n for n in vars.names if n in drop]
    kept = [n for n in vars.names if n not in drop]
    work = VarTable(dropped + kept)
    basis = buchberger([g.rename(work) for g in gens], MonomialOrder.block(len(dropped), inner), limits, selection)
    k = len(dropped)
    survivors = [g for g in basis.generators if all(not any(m[:k]) for m in g.terms)]
    back = tuple(g.rename(vars) for g in survivors)
    inner_order = MonomialOrder.grevlex() if inner == "grevlex" else MonomialOrder.lex()
    if not back:
        back = (Polynomial.zero(vars),)
    return IdealBasis(back, inner_order, True, dict(basis.stats))


def leading_monomials(basis: IdealBasis) -> List[Monomial]:
    return [leading_term(g, basis.order)[0] for g in basis.generators if g]
