"""Internal states as products of loop factors.

Each internal loop contributes a pair of integrated normalizations
``(rho_D, rho_ND)``; the diagonal part carries the Dirac delta evaluated at
coincident points, i.e. the pole ``1/(pi eps)``. The trace of an internal
state is therefore the Laurent polynomial

    prod_i (rho_D_i / (pi eps) + rho_ND_i)

whose eps^0 coefficient depends only on the non-diagonal normalizations.
:func:`project` removes every diagonal component (the finite-part projector)
and :func:`complement_Q` removes every non-diagonal one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .coefficients import loop_count
from .errors import DegenerateGamma, RootFindFailure
from .laurent import LaurentSeries, mul

PI = math.pi

RESIDUAL_TOL = 1e-12
MAX_ITERATIONS = 500


def _finite(z: complex) -> bool:
    return math.isfinite(z.real) and math.isfinite(z.imag)


@dataclass(frozen=True)
class LoopFactor:
    rho_D: complex
    rho_ND: complex

    def __post_init__(self):
        d, nd = complex(self.rho_D), complex(self.rho_ND)
        if not (_finite(d) and _finite(nd)):
            raise ValueError(f"loop factor must be finite, got ({d}, {nd})")
        object.__setattr__(self, "rho_D", d)
        object.__setattr__(self, "rho_ND", nd)

    def series(self) -> LaurentSeries:
        """``rho_D/(pi eps) + rho_ND`` as a Laurent series."""
        return LaurentSeries(-1, (self.rho_D / PI, self.rho_ND))

    def to_json(self) -> dict:
        return {
            "rho_D": [self.rho_D.real, self.rho_D.imag],
            "rho_ND": [self.rho_ND.real, self.rho_ND.imag],
        }

    @classmethod
    def from_json(cls, data: dict) -> LoopFactor:
        return cls(_complex_from_json(data["rho_D"]), _complex_from_json(data["rho_ND"]))


def _complex_from_json(v) -> complex:
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return complex(v)


@dataclass(frozen=True)
class InternalState:
    """Loop-factor product for ``n`` external points at order ``p``."""

    n: int
    p: int
    factors: tuple[LoopFactor, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        loops = loop_count(self.n, self.p)
        if loops < 1:
            raise ValueError(f"internal state needs at least one loop, L({self.n},{self.p}) = {loops}")
        if len(factors) != loops:
            raise ValueError(f"expected {loops} loop factors for (n={self.n}, p={self.p}), got {len(factors)}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def from_factors(cls, factors: Iterable[LoopFactor | tuple], n: int = 0) -> InternalState:
        """Infer ``p`` from the number of factors: ``p = L + n/2 - 1``."""
        fs = tuple(f if isinstance(f, LoopFactor) else LoopFactor(*f) for f in factors)
        if not fs:
            raise ValueError("need at least one loop factor")
        return cls(n, len(fs) + n // 2 - 1, fs)

    @property
    def loops(self) -> int:
        return len(self.factors)

    def to_json(self) -> dict:
        return {"n": self.n, "p": self.p, "factors": [f.to_json() for f in self.factors]}

    @classmethod
    def from_json(cls, data: dict) -> InternalState:
        return cls(int(data["n"]), int(data["p"]), tuple(LoopFactor.from_json(f) for f in data["factors"]))


@dataclass(frozen=True)
class GammaVector:
    """``gammas[k]`` is the coefficient of ``eps**-k``, ``k = 0..L``."""

    gammas: tuple[complex, ...]

    def __post_init__(self):
        gs = tuple(complex(g) for g in self.gammas)
        if len(gs) < 2:
            raise ValueError("a GammaVector needs L + 1 >= 2 entries")
        object.__setattr__(self, "gammas", gs)

    @property
    def loops(self) -> int:
        return len(self.gammas) - 1

    @classmethod
    def from_series(cls, series: LaurentSeries, loops: int | None = None) -> GammaVector:
        if loops is None:
            loops = max(-series.min_order, 1)
        return cls(tuple(series.coefficient(-k) for k in range(loops + 1)))

    def to_series(self) -> LaurentSeries:
        return LaurentSeries(-self.loops, tuple(reversed(self.gammas)))


class GaugeChoice(enum.Enum):
    """How the free normalizations of an underdetermined factorization are fixed.

    ``UNIT_ND`` sets ``rho_ND = 1`` on every factor but the first, which absorbs
    the overall scale. Factors for roots at zero necessarily have
    ``rho_ND = 0`` and are placed first.
    """

    UNIT_ND = "unit_nd"


def trace_internal(state: InternalState) -> LaurentSeries:
    result = LaurentSeries.constant(1)
    for f in state.factors:
        result = mul(result, f.series(), max_order=0)
    return result


def gammas(state: InternalState) -> GammaVector:
    return GammaVector.from_series(trace_internal(state), state.loops)


def project(state: InternalState) -> InternalState:
    """Finite-part projector: zero every diagonal normalization."""
    return InternalState(state.n, state.p, tuple(LoopFactor(0, f.rho_ND) for f in state.factors))


def complement_Q(state: InternalState) -> InternalState:
    """Complementary map: zero every non-diagonal normalization."""
    return InternalState(state.n, state.p, tuple(LoopFactor(f.rho_D, 0) for f in state.factors))


def mean_value(internal: LaurentSeries, external_value: complex) -> LaurentSeries:
    """Mean value of the observable: internal trace times ``Tr(rho_ext O_ext)``."""
    return internal.scale(external_value)


def indetermination_count(loops: int) -> int:
    """Free normalizations left after matching all gamma coefficients: ``2L - (L+1)``."""
    if loops < 1:
        raise ValueError(f"need L >= 1, got {loops}")
    return loops - 1


# -- root finding ----------------------------------------------------------


def _polyval(coeffs: Sequence[complex], x: complex) -> complex:
    # coeffs in ascending order
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _relative_residual(coeffs: Sequence[complex], x: complex) -> float:
    scale = sum(abs(c) * abs(x) ** k for k, c in enumerate(coeffs))
    if scale == 0:
        return 0.0
    return abs(_polyval(coeffs, x)) / scale


def companion_roots(coeffs: Sequence[complex]) -> np.ndarray:
    """Roots of ``sum coeffs[k] x**k`` from the companion-matrix eigenvalues."""
    c = np.asarray(coeffs, dtype=complex)
    m = len(c) - 1
    if m < 1:
        return np.empty(0, dtype=complex)
    comp = np.zeros((m, m), dtype=complex)
    comp[1:, :-1] = np.eye(m - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    return np.linalg.eigvals(comp)


def durand_kerner(
    coeffs: Sequence[complex],
    start: Sequence[complex] | None = None,
    tol: float = RESIDUAL_TOL,
    max_iter: int = MAX_ITERATIONS,
) -> np.ndarray:
    """Simultaneous Weierstrass iteration for all roots.

    Stops once every root has relative residual below ``tol``; raises
    :class:`RootFindFailure` if that does not happen within ``max_iter`` sweeps.
    """
    m = len(coeffs) - 1
    lead = complex(coeffs[-1])
    if m < 1:
        return np.empty(0, dtype=complex)
    if start is None:
        radius = 1 + max(abs(c / lead) for c in coeffs[:-1])
        roots = [radius * (0.4 + 0.9j) ** k for k in range(m)]
    else:
        roots = [complex(r) for r in start]
    def sweep():
        biggest = 0.0
        for i in range(m):
            denom = lead
            for j in range(m):
                if j != i:
                    diff = roots[i] - roots[j]
                    denom *= diff if diff != 0 else 1e-14
            step = _polyval(coeffs, roots[i]) / denom
            roots[i] -= step
            biggest = max(biggest, abs(step) / max(1.0, abs(roots[i])))
        return biggest

    converged = False
    for _ in range(max_iter):
        if all(_relative_residual(coeffs, r) <= tol for r in roots):
            converged = True
            break
        sweep()
    converged = converged or all(_relative_residual(coeffs, r) <= tol for r in roots)
    if converged:
        # clustered roots pass the residual test early; keep polishing while steps shrink
        prev = math.inf
        for _ in range(max_iter):
            kept = list(roots)
            size = sweep()
            if size >= prev:
                roots[:] = kept
                break
            if size == 0:
                break
            prev = size
        return np.array(roots)
    worst = max(_relative_residual(coeffs, r) for r in roots)
    raise RootFindFailure(f"Durand-Kerner did not converge in {max_iter} iterations (residual {worst:.3g})")


def polynomial_roots(coeffs: Sequence[complex], method: str = "companion") -> np.ndarray:
    """Roots of an ascending-order polynomial with nonzero leading coefficient.

    ``method="companion"`` uses eigenvalues and falls back to Durand-Kerner
    polishing when any residual exceeds the tolerance.
    """
    if method == "durand-kerner":
        return durand_kerner(coeffs)
    if method != "companion":
        raise ValueError(f"unknown root-finding method {method!r}")
    roots = companion_roots(coeffs)
    if all(_relative_residual(coeffs, r) <= RESIDUAL_TOL for r in roots):
        return roots
    return durand_kerner(coeffs, start=roots)


def factor_from_gammas(
    g: GammaVector,
    gauge: GaugeChoice = GaugeChoice.UNIT_ND,
    n: int = 0,
    method: str = "companion",
) -> InternalState:
    """Recover loop factors whose trace reproduces ``g``.

    With ``x = 1/eps`` the trace is the polynomial ``sum_k gamma_k x**k`` and
    each loop factor is a linear polynomial ``rho_D x / pi + rho_ND``. Each
    nonzero root ``r`` gives ``(-pi/r, 1)``, each zero root gives ``(pi, 0)``
    and every missing degree (``gamma_L = 0``) gives the constant ``(0, 1)``;
    the lowest nonzero gamma is then multiplied into the first factor.
    """
    if GaugeChoice(gauge) is not GaugeChoice.UNIT_ND:
        raise ValueError(f"unsupported gauge {gauge}")
    coeffs = list(g.gammas)
    nonzero = [k for k, c in enumerate(coeffs) if c != 0]
    if not nonzero:
        raise DegenerateGamma("gamma vector is identically zero")
    low, degree = nonzero[0], nonzero[-1]

    reduced = coeffs[low : degree + 1]
    roots = polynomial_roots(reduced, method=method) if len(reduced) > 1 else []

    factors = [LoopFactor(PI, 0) for _ in range(low)]
    factors += [LoopFactor(-PI / r, 1) for r in roots]
    factors += [LoopFactor(0, 1) for _ in range(g.loops - degree)]

    scale = coeffs[low]
    first = factors[0]
    factors[0] = LoopFactor(first.rho_D * scale, first.rho_ND * scale)
    return InternalState.from_factors(factors, n=n)
