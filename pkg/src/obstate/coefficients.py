"""Closed-form dimensional-regularization coefficients for phi^4 theory.

Only the orders with printed closed forms are available: the vacuum bubble
(n=0, p=1), the one-loop self-energy finite part (n=2, p=1) and the one-loop
four-point function (n=4, p=2). Logarithm arguments are kept exactly as
printed, including the dimensionally odd ``ln(m0^2)`` and ``ln(mu)`` terms.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import NegativeLoops, NoClosedForm, OutOfRealDomain

EULER_GAMMA = 0.57721566490153286061

PI = math.pi


def loop_count(n: int, p: int) -> int:
    """Number of loops L(n, p) = p - n/2 + 1 at perturbative order p."""
    if n < 0 or n % 2:
        raise ValueError(f"n must be a non-negative even integer, got {n}")
    if p < 0:
        raise ValueError(f"p must be non-negative, got {p}")
    loops = p - n // 2 + 1
    if loops < 0:
        raise NegativeLoops(f"L({n},{p}) = {loops} < 0")
    return loops


@dataclass(frozen=True)
class PhysParams:
    m0_sq: float
    mu: float
    lambda0: float = 0.0

    def __post_init__(self):
        if not (self.m0_sq > 0 and math.isfinite(self.m0_sq)):
            raise ValueError(f"m0_sq must be positive and finite, got {self.m0_sq}")
        if not (self.mu > 0 and math.isfinite(self.mu)):
            raise ValueError(f"mu must be positive and finite, got {self.mu}")


@dataclass(frozen=True)
class BetaTable:
    """Coefficients beta_k^(n,p) keyed by pole order k (coefficient of eps^-k)."""

    n: int
    p: int
    betas: dict[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        loops = loop_count(self.n, self.p)
        bad = [k for k in self.betas if not 0 <= k <= loops]
        if bad:
            raise ValueError(f"pole orders {bad} outside 0..{loops}")

    @property
    def loops(self) -> int:
        return loop_count(self.n, self.p)

    def __getitem__(self, k: int) -> complex:
        return self.betas[k]

    def to_json(self) -> dict:
        out: dict = {"n": self.n, "p": self.p, "loops": self.loops}
        for k in sorted(self.betas, reverse=True):
            out[f"beta_{k}"] = _json_number(self.betas[k])
        return out

    @classmethod
    def from_json(cls, data: dict) -> BetaTable:
        betas = {}
        for key, val in data.items():
            if key.startswith("beta_"):
                if isinstance(val, (list, tuple)):
                    val = complex(val[0], val[1])
                betas[int(key[5:])] = val
        return cls(int(data["n"]), int(data["p"]), betas)


def _json_number(z):
    z = complex(z)
    if z.imag == 0:
        return z.real
    return [z.real, z.imag]


def beta_0_1(params: PhysParams) -> BetaTable:
    """Vacuum bubble at first order: (beta_2, beta_1, beta_0)."""
    m2, mu, g = params.m0_sq, params.mu, EULER_GAMMA
    pref = m2**2 / (64 * PI**4)
    b2 = pref
    b1 = pref * (g - 1 + math.log(m2 / (4 * PI * mu)))
    ln4pi = math.log(4 * PI)
    b0 = (
        m2**2
        / (24 * 64 * PI**4)
        * (
            18
            - 24 * g
            + 12 * g**2
            + PI**2
            + 12 * (math.log(m2) ** 2 - ln4pi**2 + math.log(mu) ** 2)
            + 24 * (1 - g + ln4pi) * math.log(4 * PI * mu / m2)
        )
    )
    return BetaTable(0, 1, {2: b2, 1: b1, 0: b0})


def beta_2_1(params: PhysParams) -> float:
    """Finite part of the one-loop self-energy, as printed.

    Its mu-derivative is ``m0^2 / (4 pi^2 mu)``; the RG chain instead uses
    ``m0^2 / (8 pi^2 mu)`` (see :mod:`obstate.rgflow`).
    """
    m2, mu = params.m0_sq, params.mu
    return m2 / (16 * PI**2) * (1 - EULER_GAMMA + 2 * math.log(4 * PI * mu**2 / m2))


def channel_term(z: float, m0_sq: float) -> float:
    """``w ln((w+1)/(w-1))`` with ``w = sqrt(1 + 4 m0^2 / z)``, real branch only.

    The logarithm is real only for ``w > 1``, which for ``m0^2 > 0`` means
    ``z > 0``; every other channel value raises :class:`OutOfRealDomain`.
    """
    if z == 0:
        raise OutOfRealDomain("Mandelstam channel value is zero")
    arg = 1 + 4 * m0_sq / z
    if not arg > 0:
        raise OutOfRealDomain(f"1 + 4 m0^2/z = {arg} <= 0 for z = {z}")
    w = math.sqrt(arg)
    if w == 1:
        raise OutOfRealDomain(f"sqrt(1 + 4 m0^2/z) = 1 for z = {z}")
    if w < 1:
        raise OutOfRealDomain(f"(w+1)/(w-1) < 0 for z = {z} (w = {w})")
    return w * math.log((w + 1) / (w - 1))


def beta_4_2(params: PhysParams, s: float, t: float, u: float) -> BetaTable:
    """One-loop four-point coefficients (beta_1, beta_0) at Mandelstam (s, t, u)."""
    m2, mu = params.m0_sq, params.mu
    channels = sum(channel_term(z, m2) for z in (s, t, u))
    b1 = 1 / (32 * PI**2)
    b0 = 0.5 * 3 / (32 * PI**2) * (
        math.log(mu**2) - EULER_GAMMA + 2 + math.log(4 * PI * mu**2 / m2) - channels / 3
    )
    return BetaTable(4, 2, {1: b1, 0: b0})


def beta_table(n: int, p: int, params: PhysParams, mandelstam=None) -> BetaTable:
    """Dispatch to the closed form available for ``(n, p)``."""
    if (n, p) == (0, 1):
        return beta_0_1(params)
    if (n, p) == (2, 1):
        return BetaTable(2, 1, {0: beta_2_1(params)})
    if (n, p) == (4, 2):
        if mandelstam is None:
            raise ValueError("n=4, p=2 needs Mandelstam variables s, t, u")
        s, t, u = mandelstam
        return beta_4_2(params, s, t, u)
    loop_count(n, p)
    raise NoClosedForm(f"no closed-form coefficients for n={n}, p={p}")


class SeriesKind(enum.Enum):
    MASS_SERIES = "mass"
    COUPLING_SERIES = "coupling"
    VACUUM_SERIES = "vacuum"


_I_POWERS = (1 + 0j, 1j, -1 + 0j, -1j)

# exponent of i attached to each kind, as (constant, multiple of p)
_EXTRA_I = {
    SeriesKind.MASS_SERIES: (1, 2),
    SeriesKind.COUPLING_SERIES: (2, 2),
    SeriesKind.VACUUM_SERIES: (0, 2),
}


def order_phase(kind: SeriesKind, p: int) -> complex:
    """Pure phase ``(-i)^p i^(a + b p)`` multiplying ``lambda0^p beta_0`` at order p.

    Computed from exact powers of i, so the result is one of 1, i, -1, -i.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    a, b = _EXTRA_I[SeriesKind(kind)]
    # (-i)^p = (-1)^p i^p
    sign = -1 if p % 2 else 1
    return sign * _I_POWERS[(p + a + b * p) % 4]
