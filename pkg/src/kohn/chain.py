"""Kohn's multiplier chain M_1 -> J_1 -> I_1 -> M_2 -> ... on special domains.

Every generator carries an assigned order of subellipticity and a provenance
record; orders can be replayed from provenance with :func:`replay_order`.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import Covector, Polynomial, jacobian_determinant
from .domain import CapExceeded, DomainSpec, ResourceCaps
from .groebner import EXACT, Ideal, ideal_equal, ideal_member, radical_generators, radical_member

SIU_DIRECT = "siu"
HERMITIAN = "hermitian"

RUNNING = "RUNNING"
SUCCESS = "SUCCESS"
STALLED = "STALLED"
CAP_EXCEEDED = "CAP_EXCEEDED"

INDEXING_NOTE = (
    "strict indexing M_k -> J_k -> I_k -> M_(k+1): covectors built from I_k "
    "first appear in M_(k+1)"
)


# -- order rules -------------------------------------------------------------


def order_init_r() -> Fraction:
    return Fraction(1)


def order_init_sigma() -> Fraction:
    return Fraction(1, 2)


def order_gradient(eps: Fraction) -> Fraction:
    return eps / 2


def order_determinant(orders: Sequence[Fraction]) -> Fraction:
    return min(orders)


def order_radical(eps: Fraction, root: int) -> Fraction:
    if root < 1:
        raise ValueError("root must be a positive integer")
    return eps / root


@dataclass(frozen=True)
class Provenance:
    rule: str
    sources: tuple[str, ...] = ()
    root: int | None = None

    def as_dict(self) -> dict:
        out = {"rule": self.rule, "from": list(self.sources)}
        if self.root is not None:
            out["root"] = self.root
        return out


@dataclass(frozen=True)
class OrderedGenerator:
    label: str
    payload: Polynomial | Covector | None
    order: Fraction
    provenance: Provenance


def replay_order(label: str, registry: dict[str, OrderedGenerator]) -> Fraction:
    """Recompute a generator's order from its provenance tree."""
    gen = registry[label]
    prov = gen.provenance
    rule = prov.rule
    if rule == "INIT_R":
        return order_init_r()
    if rule == "INIT_SIGMA":
        return order_init_sigma()
    sources = [replay_order(s, registry) for s in prov.sources]
    if rule == "GRADIENT":
        return order_gradient(sources[0])
    if rule == "DETERMINANT":
        return order_determinant(sources)
    if rule == "CARRIED":
        return sources[0]
    if rule == "RADICAL":
        return order_radical(min(sources), prov.root)
    raise ValueError(f"unknown provenance rule {rule!r}")


# -- state --------------------------------------------------------------------


@dataclass
class StepRecord:
    k: int
    M: list[OrderedGenerator]
    J: list[OrderedGenerator]
    I: list[OrderedGenerator]
    radical_quality: str
    radical_case: str


@dataclass
class ChainState:
    spec: DomainSpec
    convention: str
    step: int
    M: list[OrderedGenerator]
    I: list[OrderedGenerator]
    r: OrderedGenerator
    status: str = RUNNING
    radical_quality: str = EXACT
    radical_case: str = ""
    J: list[OrderedGenerator] = field(default_factory=list)
    registry: dict[str, OrderedGenerator] = field(default_factory=dict)

    def register(self, gens: Sequence[OrderedGenerator]):
        for g in gens:
            self.registry[g.label] = g


@dataclass
class ChainReport:
    spec: DomainSpec
    convention: str
    steps: list[StepRecord]
    status: str
    final_order: Fraction | None
    registry: dict[str, OrderedGenerator]
    notes: list[str] = field(default_factory=list)

    def ideal(self, name: str) -> Ideal:
        """Look up 'J2', 'I1', ... as an :class:`Ideal`."""
        kind, k = name[0].upper(), name[1:]
        if kind not in "JI" or not k.isdigit():
            raise KeyError(f"unknown ideal name {name!r}")
        k = int(k)
        n = self.spec.n
        if kind == "I" and k == 0:
            return Ideal([], n)
        for step in self.steps:
            if step.k == k:
                gens = step.J if kind == "J" else step.I
                return Ideal([g.payload for g in gens], n)
        raise KeyError(f"{name} was not materialized (chain stopped after {len(self.steps)} steps)")


# -- steps ----------------------------------------------------------------


def _dedup(gens: list[OrderedGenerator], key) -> list[OrderedGenerator]:
    """Keep one generator per key, preferring the larger order, then the earlier."""
    best: dict = {}
    order_of_first: list = []
    for g in gens:
        k = key(g.payload)
        if k not in best:
            best[k] = g
            order_of_first.append(k)
        elif g.order > best[k].order:
            best[k] = g
    return [best[k] for k in order_of_first]


def _poly_key(p: Polynomial) -> Polynomial:
    return p.monic()


def _cov_key(c: Covector) -> Covector:
    return c.normalized()


def init_chain(spec: DomainSpec, convention: str = SIU_DIRECT) -> ChainState:
    """Populate M_1 (order 1/2 each) and I_0 = <>; r is recorded at order 1."""
    n = spec.n
    if convention == SIU_DIRECT:
        rows = [Covector.gradient(f) for f in spec.F]
    elif convention == HERMITIAN:
        grads = [Covector.gradient(f) for f in spec.F]
        rows = []
        for j in range(n):
            acc = Covector([Polynomial.zero(n)] * n)
            for f, df in zip(spec.F, grads):
                acc = acc + df.scale(f.partial(j).conjugate())
            rows.append(acc)
    else:
        raise ValueError(f"unknown convention {convention!r}")
    r = OrderedGenerator("r", None, order_init_r(), Provenance("INIT_R"))
    M = []
    for row in rows:
        if row.is_zero():
            continue
        M.append(OrderedGenerator("", row.normalized(), order_init_sigma(), Provenance("INIT_SIGMA")))
    M = _dedup(M, _cov_key)
    M = [OrderedGenerator(f"M1.{i}", g.payload, g.order, g.provenance) for i, g in enumerate(M)]
    state = ChainState(spec=spec, convention=convention, step=1, M=M, I=[], r=r)
    state.register([r, *M])
    return state


def _det(rows: tuple[OrderedGenerator, ...]) -> tuple[Polynomial, Fraction, tuple[str, ...]]:
    det = jacobian_determinant([g.payload for g in rows])
    return det, order_determinant([g.order for g in rows]), tuple(g.label for g in rows)


def determinant_step(state: ChainState, threads: int = 1) -> list[OrderedGenerator]:
    """J_k: carried I_(k-1) generators plus all n x n determinants of M_k."""
    k, n = state.step, state.spec.n
    carried = [
        OrderedGenerator("", g.payload, g.order, Provenance("CARRIED", (g.label,)))
        for g in state.I
    ]
    subsets = list(itertools.combinations(state.M, n))
    if threads > 1 and len(subsets) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            dets = list(pool.map(_det, subsets))
    else:
        dets = [_det(s) for s in subsets]
    new = [
        OrderedGenerator("", det.monic(), order, Provenance("DETERMINANT", labels))
        for det, order, labels in dets
        if det
    ]
    new.sort(key=lambda g: (str(g.payload), g.provenance.sources))
    gens = _dedup(carried + new, _poly_key)
    J = [OrderedGenerator(f"J{k}.{i}", g.payload, g.order, g.provenance) for i, g in enumerate(gens)]
    state.J = J
    state.register(J)
    return J


def radical_step(state: ChainState, caps: ResourceCaps | None = None) -> list[OrderedGenerator]:
    """I_k from J_k; a generator from an m-th root of a witness of order e gets order e/m."""
    k, n = state.step, state.spec.n
    J = state.J
    ideal = Ideal([g.payload for g in J], n)
    result = radical_generators(ideal, caps, pool=state.spec.F)
    by_key = {}
    for g in J:
        key = _poly_key(g.payload)
        if key not in by_key or g.order > by_key[key].order:
            by_key[key] = g
    eps_all = min((g.order for g in J), default=None)
    all_labels = tuple(g.label for g in J)
    out = []
    for rg in result.generators:
        f = rg.poly.monic()
        same = by_key.get(_poly_key(f))
        if rg.carried:
            out.append(OrderedGenerator("", f, same.order, Provenance("CARRIED", (same.label,))))
            continue
        if result.case == "unit":
            units = [g for g in J if g.payload.constant_term()]
            witness = max(units, key=lambda g: g.order)
            eps, sources = witness.order, (witness.label,)
        elif result.case == "principal":
            gb = ideal.groebner(caps=caps)[0]
            matches = [g for g in J if g.payload.is_constant_multiple_of(gb)]
            if matches:
                witness = max(matches, key=lambda g: g.order)
                eps, sources = witness.order, (witness.label,)
            else:
                eps, sources = eps_all, all_labels
        else:
            eps, sources = eps_all, all_labels
        if rg.root is None:
            raise CapExceeded("root exponent search for the radical exceeded its bound")
        gen = OrderedGenerator("", f, order_radical(eps, rg.root), Provenance("RADICAL", sources, rg.root))
        if same is not None and same.order >= gen.order:
            gen = OrderedGenerator("", f, same.order, Provenance("CARRIED", (same.label,)))
        out.append(gen)
    out = _dedup(out, _poly_key)
    I = [OrderedGenerator(f"I{k}.{i}", g.payload, g.order, g.provenance) for i, g in enumerate(out)]
    state.I = I
    state.radical_quality = result.quality
    state.register(I)
    state.radical_case = result.case
    return I


def gradient_step(state: ChainState) -> list[OrderedGenerator]:
    """M_(k+1) = M_k plus the gradients of the generators of I_k (order halves)."""
    k = state.step
    existing = {_cov_key(g.payload): g for g in state.M}
    additions = []
    for f in state.I:
        d = Covector.gradient(f.payload)
        if d.is_zero():
            continue
        d = d.normalized()
        order = order_gradient(f.order)
        old = existing.get(d)
        if old is not None and old.order >= order:
            continue
        additions.append(OrderedGenerator("", d, order, Provenance("GRADIENT", (f.label,))))
    additions = _dedup(additions, _cov_key)
    labelled = [
        OrderedGenerator(f"M{k + 1}.{i}", g.payload, g.order, g.provenance)
        for i, g in enumerate(additions)
    ]
    replaced = {_cov_key(g.payload) for g in labelled}
    M = [g for g in state.M if _cov_key(g.payload) not in replaced] + labelled
    state.M = M
    state.register(labelled)
    return M


def run_chain(spec: DomainSpec, caps: ResourceCaps | None = None,
              convention: str = SIU_DIRECT, threads: int = 1) -> ChainReport:
    """Iterate determinant -> radical -> gradient until the unit ideal appears,
    the ideal chain stalls, or a cap is hit."""
    caps = caps or ResourceCaps()
    state = init_chain(spec, convention)
    steps: list[StepRecord] = []
    notes = [INDEXING_NOTE]
    final_order = None
    status = CAP_EXCEEDED
    n = spec.n
    try:
        while state.step <= caps.max_steps:
            previous = Ideal([g.payload for g in state.I], n)
            M_now = list(state.M)
            determinant_step(state, threads)
            radical_step(state, caps)
            steps.append(
                StepRecord(state.step, M_now, list(state.J), list(state.I),
                           state.radical_quality, state.radical_case)
            )
            current = Ideal([g.payload for g in state.I], n)
            if current.is_local_unit():
                status = SUCCESS
                units = [g for g in state.I if g.payload.constant_term()]
                final_order = max(g.order for g in units)
                break
            if ideal_equal(current, previous, caps):
                status = STALLED
                break
            gradient_step(state)
            state.step += 1
        else:
            notes.append(f"max_steps={caps.max_steps} reached")
    except CapExceeded as exc:
        status = CAP_EXCEEDED
        notes.append(str(exc))
    state.status = status
    return ChainReport(spec, convention, steps, status, final_order, dict(state.registry), notes)


def non_effectiveness_witness(source: DomainSpec | ChainReport, candidate: Polynomial,
                              caps: ResourceCaps | None = None) -> bool:
    """True iff ``candidate`` is outside J_2 yet in its radical, so a genuine
    root extraction was needed between J_2 and I_2."""
    report = source if isinstance(source, ChainReport) else run_chain(source, caps)
    J2 = report.ideal("J2")
    if not candidate:
        return False
    if ideal_member(candidate, J2, caps):
        return False
    return radical_member(candidate, J2, caps)
