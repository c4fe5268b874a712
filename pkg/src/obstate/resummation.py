"""Resummations built from the finite (projected) coefficients.

Geometric series for the dressed propagator, order-by-order sums for the
mass shift and the renormalized coupling, and the exponentiation of
connected vacuum bubbles. Planck's constant is set to 1.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .coefficients import SeriesKind, order_phase
from .errors import DivergentRatioWarning, OnShellPole
from .kinematics import ON_SHELL_RTOL


class Resummed(NamedTuple):
    partial: complex
    closed: complex
    divergent: bool = False

    @property
    def abs_error(self) -> float:
        return abs(self.partial - self.closed)

    def to_json(self) -> dict:
        return {
            "partial": [self.partial.real, self.partial.imag],
            "closed": [self.closed.real, self.closed.imag],
            "abs_error": self.abs_error,
            "divergent": self.divergent,
        }


class RatioTest(NamedTuple):
    ratios: list[float]
    converging: bool


@dataclass(frozen=True)
class VacuumConfig:
    time_extent_2T: float
    volume_V: float
    max_connected_order: int = 1
    max_cluster_order: int = 20

    def __post_init__(self):
        if not (self.time_extent_2T > 0 and self.volume_V > 0):
            raise ValueError("time extent and volume must be positive")
        if self.max_connected_order < 1 or self.max_cluster_order < 0:
            raise ValueError("truncation orders must satisfy P >= 1, K >= 0")

    @property
    def spacetime_volume(self) -> float:
        return self.time_extent_2T * self.volume_V


def _series_terms(terms: Sequence[complex]) -> list[complex]:
    out = [complex(t) for t in terms]
    if not out:
        raise ValueError("series truncation needs at least one term")
    return out


def dressed_propagator(p_sq: float, m0_sq: float, M: complex, K_terms: int) -> Resummed:
    """Partial geometric sum ``sum_{k<=K} M^k/(p^2-m0^2)^(k+1)`` and ``1/(p^2-m0^2-M)``.

    ``divergent`` is set (and a :class:`DivergentRatioWarning` issued) when
    ``|M/(p^2-m0^2)| >= 1``; the closed form is still returned.
    """
    d = p_sq - m0_sq
    if abs(d) < ON_SHELL_RTOL * abs(m0_sq) or d == 0:
        raise OnShellPole(f"p^2 = {p_sq} is on shell for m0^2 = {m0_sq}")
    ratio = M / d
    divergent = abs(ratio) >= 1
    if divergent:
        warnings.warn(f"|M/(p^2-m0^2)| = {abs(ratio):.3g} >= 1", DivergentRatioWarning, stacklevel=2)

    partial = 0j
    term = complex(1 / d)
    for _ in range(K_terms + 1):
        partial += term
        term *= ratio

    denom = d - M
    if denom == 0:
        raise OnShellPole("dressed propagator evaluated at its pole p^2 = m0^2 + M")
    return Resummed(partial, 1 / denom, divergent)


def dressed_pole(m0_sq: float, M: complex) -> complex:
    """Location in p^2 of the dressed propagator pole, ``m0^2 + M``."""
    return m0_sq + M


def mass_shift(lambda0: float, beta0_list: Sequence[complex]) -> complex:
    """``sum_p phase_p lambda0^p beta_0^(2,p)`` with ``beta0_list[0]`` at p = 1."""
    return sum(
        (order_phase(SeriesKind.MASS_SERIES, p) * lambda0**p * b for p, b in enumerate(_series_terms(beta0_list), 1)),
        0j,
    )


def dressed_mass(m0_sq: float, lambda0: float, beta0_list: Sequence[complex]) -> complex:
    return m0_sq + mass_shift(lambda0, beta0_list)


def coupling(lambda0: float, beta0_4_list: Sequence[complex]) -> complex:
    """Renormalized coupling; ``beta0_4_list[0]`` is beta_0^(4,2) (p=1 is the bare vertex)."""
    corr = sum(
        (order_phase(SeriesKind.COUPLING_SERIES, p) * lambda0**p * b for p, b in enumerate(_series_terms(beta0_4_list), 2)),
        0j,
    )
    return lambda0 + corr


def vacuum_R1(lambda0: float, beta0_0_list: Sequence[complex]) -> complex:
    """Sum of connected vacuum bubbles per unit spacetime volume."""
    return sum(
        (order_phase(SeriesKind.VACUUM_SERIES, p) * lambda0**p * b for p, b in enumerate(_series_terms(beta0_0_list), 1)),
        0j,
    )


def vacuum_exponentiate(R1: complex, st_volume_2TV: float, K: int) -> Resummed:
    """Cluster sum ``sum_{k<=K} (-i 2TV R1)^k / k!`` against ``exp(-i 2TV R1)``.

    The 1/k! removes the k! orderings of k identical connected pieces.
    """
    if K < 0:
        raise ValueError(f"K must be >= 0, got {K}")
    arg = -1j * st_volume_2TV * R1
    partial = 0j
    term = 1 + 0j
    for k in range(K + 1):
        partial += term
        term *= arg / (k + 1)
    return Resummed(partial, cmath.exp(arg))


def vacuum_amplitude(cfg: VacuumConfig, lambda0: float, beta0_0_list: Sequence[complex]) -> Resummed:
    terms = _series_terms(beta0_0_list)[: cfg.max_connected_order]
    return vacuum_exponentiate(vacuum_R1(lambda0, terms), cfg.spacetime_volume, cfg.max_cluster_order)


def vacuum_energy_density(R1: complex) -> complex:
    """E0/V for T -> infinity, which is R1 itself."""
    return complex(R1)


def vacuum_energy(R1: complex, volume_V: float, time_extent_2T: float = math.inf, overlap_sq: float = 1.0) -> complex:
    """``E0 = V R1 - (i/2T) ln |<Omega|Omega_0>|^2``; the log term vanishes as T grows."""
    energy = volume_V * complex(R1)
    if math.isfinite(time_extent_2T):
        energy += -1j / time_extent_2T * math.log(overlap_sq)
    return energy


def ratio_test(beta0_seq: Sequence[complex], lambda0: float) -> RatioTest:
    """Successive ratios ``|b_{p+1}|/|b_p|``; converging when the last is below ``1/|lambda0|``.

    A zero denominator yields ``inf`` for that entry and marks the test as
    not converging.
    """
    terms = _series_terms(beta0_seq)
    if len(terms) < 2:
        raise ValueError("ratio test needs at least two terms")
    ratios = []
    for a, b in zip(terms, terms[1:]):
        ratios.append(abs(b) / abs(a) if a != 0 else math.inf)
    bound = math.inf if lambda0 == 0 else 1 / abs(lambda0)
    converging = all(math.isfinite(r) for r in ratios) and ratios[-1] < bound
    return RatioTest(ratios, converging)
