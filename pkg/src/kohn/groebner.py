"""Groebner bases, ideal membership, radicals and local colength.

Global questions (membership, equality, elimination, radical membership) use
Buchberger's algorithm under a global monomial order.  Local questions at the
origin use standard bases of ``I + m^D`` in the truncated ring R/m^D under a
local degree order; once the truncated colength stabilizes, ``m^D`` lies in
the germ ideal and these answers are exact for the local ring.
"""

from __future__ import annotations

import heapq
import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .algebra import (
    GREVLEX,
    LOCAL,
    GaussianRational,
    MonomialOrder,
    Polynomial,
    block_order,
    monomials_of_degree,
    root_multiplicity,
    squarefree_part,
)
from .domain import CapExceeded, ResourceCaps

__all__ = [
    "Ideal",
    "ColengthReport",
    "RadicalResult",
    "normal_form",
    "buchberger",
    "ideal_member",
    "ideal_equal",
    "eliminate",
    "radical_member",
    "truncated_colength",
    "local_colength",
    "local_member",
    "radical_generators",
    "power_root",
]

EXACT = "EXACT"
MEMBERSHIP_ONLY = "MEMBERSHIP_ONLY"


def _divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: tuple, b: tuple) -> tuple:
    return tuple(x if x > y else y for x, y in zip(a, b))


class _Basis:
    """Basis elements stored as (leading monomial, monic term dict)."""

    def __init__(self, order: MonomialOrder, truncate: int | None):
        self.order = order
        self.truncate = truncate
        self.items: list[tuple[tuple, dict]] = []

    def add(self, terms: dict) -> int:
        lm = max(terms, key=self.order.key)
        inv = terms[lm].inverse()
        if not inv == 1:
            terms = {e: c * inv for e, c in terms.items()}
        self.items.append((lm, terms))
        return len(self.items) - 1


def _truncate(terms: dict, degree: int | None) -> dict:
    if degree is None:
        return dict(terms)
    return {e: c for e, c in terms.items() if sum(e) < degree}


def _reduce(terms: dict, basis: Sequence[tuple[tuple, dict]], order: MonomialOrder,
            truncate: int | None, caps: ResourceCaps, skip: int | None = None) -> dict:
    """Full reduction of ``terms`` by the basis; returns the remainder dict."""
    key = order.key
    p = _truncate(terms, truncate)
    rem: dict = {}
    max_degree = caps.max_degree
    while p:
        m = max(p, key=key)
        if sum(m) > max_degree:
            raise CapExceeded(f"polynomial degree exceeded max_degree={max_degree}")
        c = p[m]
        for idx, (lm, g) in enumerate(basis):
            if idx == skip or not _divides(lm, m):
                continue
            q = tuple(x - y for x, y in zip(m, lm))
            for e, a in g.items():
                t = tuple(x + y for x, y in zip(e, q))
                if truncate is not None and sum(t) >= truncate:
                    continue
                v = p.get(t)
                v = -(a * c) if v is None else v - a * c
                if v:
                    p[t] = v
                else:
                    p.pop(t, None)
            break
        else:
            rem[m] = c
            del p[m]
    return rem


def normal_form(p: Polynomial, basis: Sequence[Polynomial], order: MonomialOrder = GREVLEX,
                caps: ResourceCaps | None = None) -> Polynomial:
    """Remainder of multivariate division of ``p`` by ``basis``."""
    caps = caps or ResourceCaps()
    items = []
    for g in basis:
        p._check(g)
        if not g:
            continue
        lm = g.leading_monomial(order)
        inv = g.terms[lm].inverse()
        items.append((lm, {e: c * inv for e, c in g.terms.items()}))
    return Polynomial._raw(_reduce(p.terms, items, order, None, caps), p.nvars)


def _s_poly(f: tuple[tuple, dict], g: tuple[tuple, dict]) -> dict:
    lf, tf = f
    lg, tg = g
    l = _lcm(lf, lg)
    mf = tuple(x - y for x, y in zip(l, lf))
    mg = tuple(x - y for x, y in zip(l, lg))
    out: dict = {}
    for e, c in tf.items():
        t = tuple(x + y for x, y in zip(e, mf))
        out[t] = c
    for e, c in tg.items():
        t = tuple(x + y for x, y in zip(e, mg))
        v = out.get(t)
        v = -c if v is None else v - c
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def _buchberger_raw(gens: Iterable[dict], nvars: int, order: MonomialOrder,
                    caps: ResourceCaps, truncate: int | None) -> list[tuple[tuple, dict]]:
    basis = _Basis(order, truncate)
    use_criteria = truncate is None
    pairs: list = []
    pending: set = set()
    processed = 0

    def push(i, j):
        lcm = _lcm(basis.items[i][0], basis.items[j][0])
        heapq.heappush(pairs, (sum(lcm), i, j))
        pending.add((i, j))

    def insert(terms):
        idx = basis.add(terms)
        for k in range(idx):
            push(k, idx)

    for g in gens:
        g = _reduce(g, basis.items, order, truncate, caps)
        if g:
            insert(g)
    while pairs:
        _, i, j = heapq.heappop(pairs)
        pending.discard((i, j))
        li, lj = basis.items[i][0], basis.items[j][0]
        if use_criteria:
            if all(not (a and b) for a, b in zip(li, lj)):
                continue
            l = _lcm(li, lj)
            chained = False
            for k, (lk, _) in enumerate(basis.items):
                if k in (i, j) or not _divides(lk, l):
                    continue
                if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                    chained = True
                    break
            if chained:
                continue
        processed += 1
        if processed > caps.max_pairs:
            raise CapExceeded(f"S-pair count exceeded max_pairs={caps.max_pairs}")
        s = _s_poly(basis.items[i], basis.items[j])
        r = _reduce(s, basis.items, order, truncate, caps)
        if r:
            insert(r)
    return _reduce_basis(basis.items, order, truncate, caps)


def _reduce_basis(items, order, truncate, caps) -> list[tuple[tuple, dict]]:
    minimal = []
    for idx, (lm, g) in enumerate(items):
        redundant = False
        for jdx, (lk, _) in enumerate(items):
            if jdx == idx or not _divides(lk, lm):
                continue
            if lk != lm or jdx < idx:
                redundant = True
                break
        if not redundant:
            minimal.append((lm, g))
    reduced = []
    for idx, (lm, g) in enumerate(minimal):
        tail = dict(g)
        del tail[lm]
        tail = _reduce(tail, minimal, order, truncate, caps, skip=idx)
        tail[lm] = g[lm]
        reduced.append((lm, tail))
    reduced.sort(key=lambda item: order.key(item[0]), reverse=True)
    return reduced


def buchberger(generators: Sequence[Polynomial], order: MonomialOrder = GREVLEX,
               caps: ResourceCaps | None = None, truncate: int | None = None) -> list[Polynomial]:
    """Reduced Groebner basis (or truncated standard basis when ``truncate`` is set).

    With ``truncate=D`` the computation takes place in R/m^D and every term of
    degree >= D is dropped.
    """
    caps = caps or ResourceCaps()
    gens = [g for g in generators if g]
    if not gens:
        return []
    nvars = gens[0].nvars
    for g in gens:
        gens[0]._check(g)
    raw = _buchberger_raw((g.terms for g in gens), nvars, order, caps, truncate)
    return [Polynomial._raw(t, nvars) for _, t in raw]


@dataclass
class ColengthReport:
    """Local colength dim O_0/I; ``value`` is None when not stable (infinite or capped)."""

    value: int | None
    truncation_degree: int
    stable: bool
    history: list[int] = field(default_factory=list)

    @property
    def finite(self) -> bool:
        return self.stable and self.value is not None


class Ideal:
    """Finitely generated polynomial ideal with lazily cached bases.

    Bases are computed once per order (or truncation degree) under a lock,
    after which concurrent reads are safe.
    """

    def __init__(self, generators: Iterable[Polynomial], nvars: int | None = None):
        gens = tuple(generators)
        if nvars is None:
            if not gens:
                raise ValueError("nvars is required for an ideal with no generators")
            nvars = gens[0].nvars
        for g in gens:
            if g.nvars != nvars:
                raise ValueError("variable-count mismatch among generators")
        self.generators = tuple(g for g in gens if g)
        self.nvars = nvars
        self._bases: dict = {}
        self._colength: ColengthReport | None = None
        self._lock = threading.RLock()

    @classmethod
    def maximal(cls, nvars: int) -> "Ideal":
        return cls([Polynomial.variable(i, nvars) for i in range(nvars)], nvars)

    @classmethod
    def unit(cls, nvars: int) -> "Ideal":
        return cls([Polynomial.one(nvars)], nvars)

    def is_zero(self) -> bool:
        return not self.generators

    def is_local_unit(self) -> bool:
        """True when some generator is nonzero at the origin (1 in the germ ideal)."""
        return any(g.constant_term() for g in self.generators)

    def groebner(self, order: MonomialOrder = GREVLEX, caps: ResourceCaps | None = None) -> list[Polynomial]:
        key = ("global", order)
        with self._lock:
            if key not in self._bases:
                self._bases[key] = buchberger(self.generators, order, caps)
            return self._bases[key]

    def standard_basis(self, degree: int, caps: ResourceCaps | None = None) -> list[Polynomial]:
        """Standard basis of I + m^degree in R/m^degree (local order)."""
        key = ("local", degree)
        with self._lock:
            if key not in self._bases:
                self._bases[key] = buchberger(self.generators, LOCAL, caps, truncate=degree)
            return self._bases[key]

    def contains_unit(self, caps: ResourceCaps | None = None) -> bool:
        gb = self.groebner(GREVLEX, caps)
        return any(g.is_constant() for g in gb)

    def __add__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.generators + other.generators, self.nvars)

    def __repr__(self):
        gens = ", ".join(str(g) for g in self.generators)
        return f"Ideal<{gens}>"


def ideal_member(p: Polynomial, ideal: Ideal, caps: ResourceCaps | None = None) -> bool:
    if p.nvars != ideal.nvars:
        raise ValueError("variable-count mismatch")
    if not p:
        return True
    gb = ideal.groebner(GREVLEX, caps)
    return not normal_form(p, gb, GREVLEX, caps)


def ideal_equal(a: Ideal, b: Ideal, caps: ResourceCaps | None = None) -> bool:
    if a.nvars != b.nvars:
        raise ValueError("variable-count mismatch")
    return a.groebner(GREVLEX, caps) == b.groebner(GREVLEX, caps)


def eliminate(ideal: Ideal, keep: Iterable[int], caps: ResourceCaps | None = None) -> Ideal:
    """Generators of the intersection of the ideal with the subring in ``keep``."""
    keep = set(keep)
    drop = [i for i in range(ideal.nvars) if i not in keep]
    if not drop:
        return Ideal(ideal.groebner(GREVLEX, caps), ideal.nvars)
    gb = ideal.groebner(block_order(drop), caps)
    return Ideal([g for g in gb if g.variables() <= keep], ideal.nvars)


def radical_member(p: Polynomial, ideal: Ideal, caps: ResourceCaps | None = None) -> bool:
    """True iff some power of p lies in the ideal (Rabinowitsch device)."""
    if p.nvars != ideal.nvars:
        raise ValueError("variable-count mismatch")
    if not p or ideal_member(p, ideal, caps):
        return True
    n = ideal.nvars
    t = Polynomial.variable(n, n + 1)
    gens = [g.extend(1) for g in ideal.generators]
    gens.append(Polynomial.one(n + 1) - t * p.extend(1))
    return Ideal(gens, n + 1).contains_unit(caps)


def power_root(p: Polynomial, ideal: Ideal, limit: int, caps: ResourceCaps | None = None) -> int | None:
    """Smallest k <= limit with p**k in the ideal, by iterated normal forms."""
    if not p:
        return 1
    gb = ideal.groebner(GREVLEX, caps)
    r = normal_form(p, gb, GREVLEX, caps)
    for k in range(1, limit + 1):
        if not r:
            return k
        r = normal_form(r * p, gb, GREVLEX, caps)
    return None


def _count_standard(leading: list[tuple], nvars: int, degree: int) -> int:
    count = 0
    for d in range(degree):
        for e in monomials_of_degree(nvars, d):
            if not any(_divides(lm, e) for lm in leading):
                count += 1
    return count


def truncated_colength(ideal: Ideal, degree: int, caps: ResourceCaps | None = None) -> int:
    """dim R/(I + m^degree), counted as standard monomials."""
    if degree < 1:
        raise ValueError("truncation degree must be at least 1")
    sb = ideal.standard_basis(degree, caps)
    leading = [g.leading_monomial(LOCAL) for g in sb]
    return _count_standard(leading, ideal.nvars, degree)


def local_colength(ideal: Ideal, caps: ResourceCaps | None = None) -> ColengthReport:
    """dim_C O_0/I, found by growing D until two truncations agree."""
    caps = caps or ResourceCaps()
    with ideal._lock:
        if ideal._colength is not None:
            return ideal._colength
        history = [truncated_colength(ideal, 1, caps)]
        report = None
        for d in range(2, caps.max_colength_degree + 1):
            history.append(truncated_colength(ideal, d, caps))
            if history[-1] == history[-2]:
                report = ColengthReport(history[-1], d - 1, True, history)
                break
        if report is None:
            report = ColengthReport(None, caps.max_colength_degree, False, history)
        ideal._colength = report
        return report


def local_member(p: Polynomial, ideal: Ideal, caps: ResourceCaps | None = None) -> bool:
    """Germ membership at the origin; requires the origin to be isolated in V(I)."""
    report = local_colength(ideal, caps)
    if not report.finite:
        raise ValueError("local membership needs an ideal of finite local colength")
    if not p:
        return True
    degree = max(report.truncation_degree, 1)
    sb = ideal.standard_basis(degree, caps)
    items = [(g.leading_monomial(LOCAL), g.terms) for g in sb]
    caps = caps or ResourceCaps()
    return not _reduce(p.terms, items, LOCAL, degree, caps)


@dataclass
class RadicalGenerator:
    """One generator of a radical: ``root`` is the m with poly^m in the source
    (None for generators carried over unchanged)."""

    poly: Polynomial
    root: int | None
    carried: bool = False


@dataclass
class RadicalResult:
    generators: list[RadicalGenerator]
    quality: str
    case: str
    nvars: int

    @property
    def ideal(self) -> Ideal:
        return Ideal([g.poly for g in self.generators], self.nvars)


def radical_generators(ideal: Ideal, caps: ResourceCaps | None = None,
                       pool: Sequence[Polynomial] = (), root_limit: int = 12) -> RadicalResult:
    """Generators of the germ radical of ``ideal`` at the origin.

    Cases: local unit, zero ideal, principal (squarefree part), isolated zero
    (maximal ideal), otherwise enlargement by certified radical members.
    """
    caps = caps or ResourceCaps()
    n = ideal.nvars
    if ideal.is_local_unit():
        return RadicalResult([RadicalGenerator(Polynomial.one(n), 1)], EXACT, "unit", n)
    if ideal.is_zero():
        return RadicalResult([], EXACT, "zero", n)
    gb = ideal.groebner(GREVLEX, caps)
    if len(gb) == 1:
        g = gb[0]
        f = squarefree_part(g)
        root = root_multiplicity(f, g)
        return RadicalResult([RadicalGenerator(f, root)], EXACT, "principal", n)
    report = local_colength(ideal, caps)
    if report.finite:
        bound = max(report.truncation_degree, 1)
        root = None
        variables = [Polynomial.variable(i, n) for i in range(n)]
        for e in range(1, bound + 1):
            if all(local_member(z**e, ideal, caps) for z in variables):
                root = e
                break
        return RadicalResult([RadicalGenerator(z, root) for z in variables], EXACT, "isolated", n)
    out = [RadicalGenerator(g, None, carried=True) for g in ideal.generators]
    seen = {g.monic() for g in ideal.generators}
    candidates = [Polynomial.variable(i, n) for i in range(n)]
    candidates += [squarefree_part(g) for g in ideal.generators]
    candidates += list(pool)
    for c in candidates:
        c = c.monic()
        if not c or c in seen:
            continue
        seen.add(c)
        if ideal_member(c, ideal, caps) or not radical_member(c, ideal, caps):
            continue
        root = power_root(c, ideal, max(root_limit, caps.max_degree), caps)
        if root is None:
            continue
        out.append(RadicalGenerator(c, root))
    return RadicalResult(out, MEMBERSHIP_ONLY, "membership", n)
