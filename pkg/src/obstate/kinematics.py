"""Minkowski four-vectors, Mandelstam invariants and external-leg factors.

Metric signature is (+, -, -, -). Mandelstam variables follow the
all-plus convention s = (p1+p2)^2, t = (p1+p3)^2, u = (p1+p4)^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import ArityMismatch, OnShellPole

ON_SHELL_RTOL = 1e-12


@dataclass(frozen=True)
class FourVector:
    t: float
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(c) for c in self.components()):
            raise ValueError(f"non-finite four-vector component in {self.components()}")

    def components(self) -> tuple[float, float, float, float]:
        return (self.t, self.x, self.y, self.z)

    def __add__(self, other: FourVector) -> FourVector:
        return FourVector(*(a + b for a, b in zip(self.components(), other.components())))

    def __sub__(self, other: FourVector) -> FourVector:
        return FourVector(*(a - b for a, b in zip(self.components(), other.components())))

    def __neg__(self) -> FourVector:
        return FourVector(-self.t, -self.x, -self.y, -self.z)

    def __mul__(self, c: float) -> FourVector:
        return FourVector(*(c * a for a in self.components()))

    __rmul__ = __mul__

    def square(self) -> float:
        return minkowski_dot(self, self)

    @classmethod
    def parse(cls, text: str) -> FourVector:
        """Parse ``"E,px,py,pz"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"expected 4 comma-separated components, got {text!r}")
        return cls(*(float(p) for p in parts))


class MandelstamSet(NamedTuple):
    s: float
    t: float
    u: float


def minkowski_dot(a: FourVector, b: FourVector) -> float:
    return a.t * b.t - a.x * b.x - a.y * b.y - a.z * b.z


def mandelstam(p1: FourVector, p2: FourVector, p3: FourVector, p4: FourVector) -> MandelstamSet:
    return MandelstamSet((p1 + p2).square(), (p1 + p3).square(), (p1 + p4).square())


def _inverse_factor(p: FourVector, m0_sq: float, rtol: float) -> float:
    d = p.square() - m0_sq
    if abs(d) < rtol * abs(m0_sq):
        raise OnShellPole(f"p^2 = {p.square()} is on shell for m0^2 = {m0_sq}")
    return d


def propagator(p: FourVector, m0_sq: float, rtol: float = ON_SHELL_RTOL) -> float:
    """Free propagator ``1/(p^2 - m0^2)``."""
    return 1.0 / _inverse_factor(p, m0_sq, rtol)


def _legs(n: int, momenta: Sequence[FourVector]) -> list[tuple[FourVector, int]]:
    """External legs as ``(momentum, multiplicity)`` pairs."""
    momenta = list(momenta)
    if n == 2:
        if len(momenta) != 1:
            raise ArityMismatch(f"n=2 takes 1 momentum, got {len(momenta)}")
        return [(momenta[0], 2)]
    if n == 4:
        if len(momenta) != 3:
            raise ArityMismatch(f"n=4 takes 3 momenta (p, q, l), got {len(momenta)}")
        p, q, l = momenta
        return [(p, 1), (q, 1), (l, 1), (p + q - l, 1)]
    raise ArityMismatch(f"external kernels exist for n in {{2, 4}}, got n={n}")


def external_kernel_f0(n: int, momenta: Sequence[FourVector], m0_sq: float) -> float:
    """Momentum-space external kernel at fixed plane-wave momenta.

    n=2: ``1/(p^2 - m0^2)^2``. n=4: the product of the four external
    propagators with the fourth momentum ``p + q - l``.
    """
    value = 1.0
    for p, mult in _legs(n, momenta):
        value *= propagator(p, m0_sq) ** mult
    return value


def amputate(n: int, value: complex, momenta: Sequence[FourVector], m0_sq: float) -> complex:
    """Multiply ``value`` by the inverse external propagators."""
    out = value
    for p, mult in _legs(n, momenta):
        out *= (p.square() - m0_sq) ** mult
    return out
