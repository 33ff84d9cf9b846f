"""Input data shared by the chain and invariant computations."""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import Polynomial


class CapExceeded(RuntimeError):
    """A resource cap was hit; enlarge the caps or abort."""


@dataclass
class ResourceCaps:
    """Limits that turn runaway computations into explicit errors."""

    max_degree: int = 60
    max_pairs: int = 20_000
    max_colength_degree: int = 40
    max_steps: int = 12


@dataclass(frozen=True)
class DomainSpec:
    """The special domain Re(w) + sum_j |F_j(z_1..z_n)|^2 < 0."""

    n: int
    F: tuple[Polynomial, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        object.__setattr__(self, "F", tuple(self.F))
        if not self.F:
            raise ValueError("at least one F_j is required")
        for j, f in enumerate(self.F, start=1):
            if f.nvars != self.n:
                raise ValueError(f"F_{j} has {f.nvars} variables, expected {self.n}")
            if not f:
                raise ValueError(f"F_{j} is the zero polynomial")
            if f.constant_term():
                raise ValueError(f"F must vanish at the origin: F_{j} = {f}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"z{i + 1}" for i in range(self.n)))
