"""Effective constants p, q, s of a special domain and the checks relating them.

* s: local colength dim O_0/<F_1..F_N>
* q: smallest q with m^q contained in <F> at the origin
* p: smallest p with |z|^p <= C sum |F_j|; only bracketed here, from below by
  monomial-curve probes and from above by q
* the order of finite type is 2p
"""

from __future__ import annotations

import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import Covector, GaussianRational, Polynomial, jacobian_determinant, monomials_of_degree, ord0, substitute_curve
from .domain import CapExceeded, DomainSpec, ResourceCaps
from .groebner import ColengthReport, Ideal, ideal_member, local_colength, local_member

log = logging.getLogger(__name__)

PROBE_COEFFICIENTS = (
    GaussianRational(1),
    GaussianRational(-1),
    GaussianRational(0, 1),
    GaussianRational(1, 1),
)

INFINITY = math.inf


@dataclass
class Inequality:
    name: str
    holds: bool
    lhs: int
    rhs: int


@dataclass
class InvariantReport:
    s: ColengthReport
    q: int | None
    p_lower: Fraction | float
    p_upper: int | None
    inequalities: list[Inequality] = field(default_factory=list)

    @property
    def type_lower(self):
        return 2 * self.p_lower

    @property
    def type_upper(self):
        return None if self.p_upper is None else 2 * self.p_upper

    @property
    def agreement(self) -> bool:
        return self.p_upper is not None and math.ceil(self.p_lower) == self.p_upper

    @property
    def complete(self) -> bool:
        return self.s.finite and self.q is not None


def spec_ideal(spec: DomainSpec) -> Ideal:
    return Ideal(spec.F, spec.n)


def compute_s(spec: DomainSpec, caps: ResourceCaps | None = None) -> ColengthReport:
    return local_colength(spec_ideal(spec), caps)


def compute_q(spec: DomainSpec, caps: ResourceCaps | None = None) -> int:
    """Smallest q with every degree-q monomial in the germ ideal <F>."""
    ideal = spec_ideal(spec)
    s = local_colength(ideal, caps)
    if not s.finite:
        raise CapExceeded("q needs a finite colength s (origin not isolated or caps too small)")
    n = spec.n
    for q in range(1, max(s.value, 1) + 1):
        if all(local_member(Polynomial.monomial(e), ideal, caps) for e in monomials_of_degree(n, q)):
            return q
    raise AssertionError(f"no q <= s = {s.value} found; the bound q <= s failed")


def _initial_forms_single(F: Sequence[Polynomial], a: tuple) -> list[int] | None:
    """Weighted orders when every weighted initial form is a single term
    (so no choice of nonzero coefficients can cancel); otherwise None."""
    orders = []
    for f in F:
        weights = [sum(x * y for x, y in zip(a, e)) for e in f.terms]
        w = min(weights)
        if weights.count(w) > 1:
            return None
        orders.append(w)
    return orders


def _random_coefficient(rng: random.Random) -> GaussianRational:
    while True:
        c = GaussianRational(Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                             Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
        if c:
            return c


def probe_p_lower(spec: DomainSpec, exponent_cap: int, trials: int = 8, seed: int = 0):
    """Lower bound for p: max of min_j ord(F_j o phi) / min_i a_i over curves
    phi(t) = (c_1 t^a_1, ..., c_n t^a_n) with 1 <= a_i <= exponent_cap."""
    if exponent_cap < 1:
        raise ValueError("exponent cap must be positive")
    rng = random.Random(seed)
    n = spec.n
    best = Fraction(0)
    for a in itertools.product(range(1, exponent_cap + 1), repeat=n):
        if math.gcd(*a) != 1:
            continue  # a scaled curve gives the same ratio
        denom = min(a)
        single = _initial_forms_single(spec.F, a)
        if single is not None:
            best = max(best, Fraction(min(single), denom))
            continue
        coefficient_sets = itertools.chain(
            itertools.product(PROBE_COEFFICIENTS, repeat=n),
            ([_random_coefficient(rng) for _ in range(n)] for _ in range(trials)),
        )
        for c in coefficient_sets:
            order = min(ord0(substitute_curve(f, a, c)) for f in spec.F)
            if order == INFINITY:
                return INFINITY
            best = max(best, Fraction(order, denom))
    return best


def default_probe_cap(spec: DomainSpec) -> int:
    return max(1, min(8, max(f.total_degree() for f in spec.F)))


def p_bracket(spec: DomainSpec, caps: ResourceCaps | None = None,
              exponent_cap: int | None = None, trials: int = 8) -> tuple:
    """(probe lower bound, q): p lies in [ceil(lower), q]."""
    cap = exponent_cap or default_probe_cap(spec)
    return probe_p_lower(spec, cap, trials), compute_q(spec, caps)


def finite_type_bracket(spec: DomainSpec, caps: ResourceCaps | None = None,
                        exponent_cap: int | None = None, trials: int = 8) -> tuple:
    lower, upper = p_bracket(spec, caps, exponent_cap, trials)
    return 2 * lower, 2 * upper


def verify_inequalities(report: InvariantReport, n: int) -> list[Inequality]:
    """p <= q, q <= (n+2)p, q <= s, s <= C(n+q-1, q-1) with p in bracket form."""
    if not report.complete or report.p_lower == INFINITY:
        raise ValueError("inequalities need finite s, q and p bounds")
    q, s = report.q, report.s.value
    p_lo = math.ceil(report.p_lower)
    p_hi = report.p_upper
    binom = math.comb(n + q - 1, q - 1)
    return [
        Inequality("p <= q", p_lo <= q, p_lo, q),
        Inequality("q <= (n+2)p", q <= (n + 2) * p_hi, q, (n + 2) * p_hi),
        Inequality("q <= s", q <= s, q, s),
        Inequality("s <= C(n+q-1, q-1)", s <= binom, s, binom),
    ]


def compute_invariants(spec: DomainSpec, caps: ResourceCaps | None = None,
                       exponent_cap: int | None = None, trials: int = 8) -> InvariantReport:
    caps = caps or ResourceCaps()
    s = compute_s(spec, caps)
    cap = exponent_cap or default_probe_cap(spec)
    lower = probe_p_lower(spec, cap, trials)
    if not s.finite:
        return InvariantReport(s, None, lower, None)
    q = compute_q(spec, caps)
    report = InvariantReport(s, q, lower, q)
    report.inequalities = verify_inequalities(report, spec.n)
    for ineq in report.inequalities:
        if not ineq.holds:
            log.error("inequality %s violated: %s vs %s", ineq.name, ineq.lhs, ineq.rhs)
    return report


def effective_nullstellensatz_check(f: Polynomial, ideal: Ideal, d: int,
                                    caps: ResourceCaps | None = None) -> bool:
    """Whether f^(d^2) lies in the ideal, given f(0) = 0 and colength <= d."""
    if f.constant_term():
        raise ValueError("f must vanish at the origin")
    report = local_colength(ideal, caps)
    if not report.finite or report.value > d:
        raise ValueError(f"colength {report.value} is not bounded by d = {d}")
    power = f ** (d * d)
    if ideal_member(power, ideal, caps):
        return True
    result = local_member(power, ideal, caps)
    if not result:
        log.error("f^(d^2) not in the ideal for f = %s, d = %d", f, d)
    return result


def skoda_jacobian_check(f: Polynomial, caps: ResourceCaps | None = None) -> bool:
    """Certify f^(n+1) in <df/dz_1, ..., df/dz_n>; False means NOT CERTIFIED."""
    if not f:
        raise ValueError("f must be nonzero")
    if f.constant_term():
        raise ValueError("f must vanish at the origin")
    n = f.nvars
    jac = Ideal([f.partial(j) for j in range(n)], n)
    power = f ** (n + 1)
    if ideal_member(power, jac, caps):
        return True
    if local_colength(jac, caps).finite:
        return local_member(power, jac, caps)
    return False


def skoda_division_check(rho: Polynomial, g: Sequence[Polynomial],
                         caps: ResourceCaps | None = None) -> bool:
    """Whether rho * det(dg) lies in <g_1, ..., g_n>."""
    g = list(g)
    n = rho.nvars
    if len(g) != n:
        raise ValueError(f"need exactly {n} functions g_j, got {len(g)}")
    jac = jacobian_determinant([Covector.gradient(h) for h in g])
    return ideal_member(rho * jac, Ideal(g, n), caps)
