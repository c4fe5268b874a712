"""Lorentzian representation of the Dirac delta and the regularized trace.

For a one-dimensional state with kernel ``rho_D(x) delta(x - x') +
rho_ND(x, x')``, replacing the delta by the Lorentzian of width eps and
taking the trace evaluates it at coincident points, ``1/(pi eps)``:

    Tr(rho) = (1/(pi eps)) * int rho_D(x) dx + int rho_ND(x, x) dx
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import QuadratureNonConvergence


@dataclass(frozen=True)
class KernelPair:
    rho_D_fn: Callable[[float], float]
    rho_ND_diag_fn: Callable[[float], float]


@dataclass(frozen=True)
class QuadratureConfig:
    window: float = 50.0
    rtol: float = 1e-8
    max_depth: int = 50

    def __post_init__(self):
        if not (self.window > 0 and self.rtol > 0 and self.max_depth > 0):
            raise ValueError("window, rtol and max_depth must be positive")


def lorentzian_delta(x: float, eps: float) -> float:
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return eps / (math.pi * (x * x + eps * eps))


def gaussian_kernels() -> KernelPair:
    """``exp(-x^2)`` for both parts; each integrates to sqrt(pi)."""
    g = lambda x: math.exp(-x * x)  # noqa: E731
    return KernelPair(g, g)


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, rtol: float = 1e-8, max_depth: int = 50) -> float:
    """Adaptive Simpson quadrature with Richardson correction.

    An interval is accepted when its two half-interval estimates agree with
    the whole-interval estimate to within ``15 * tol``; the tolerance is
    relative to a coarse estimate of the integral of ``|f|``. Raises
    :class:`QuadratureNonConvergence` if an interval still disagrees at
    ``max_depth``.
    """
    if a == b:
        return 0.0
    n_probe = 64
    h = (b - a) / n_probe
    scale = sum(abs(f(a + (i + 0.5) * h)) for i in range(n_probe)) * abs(h)
    tol = rtol * scale if scale > 0 else rtol

    fa, fm, fb = f(a), f((a + b) / 2), f(b)
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    # explicit stack instead of recursion: (a, b, fa, fm, fb, whole, tol, depth)
    stack = [(a, b, fa, fm, fb, whole, tol, 0)]
    total = 0.0
    while stack:
        lo, hi, flo, fmid, fhi, est, eps, depth = stack.pop()
        mid = (lo + hi) / 2
        lm, rm = (lo + mid) / 2, (mid + hi) / 2
        flm, frm = f(lm), f(rm)
        left = (mid - lo) / 6 * (flo + 4 * flm + fmid)
        right = (hi - mid) / 6 * (fmid + 4 * frm + fhi)
        diff = left + right - est
        # depth < 4 forces a few splits so narrow peaks are not skipped
        if depth >= 4 and abs(diff) <= 15 * eps:
            total += left + right + diff / 15
            continue
        if depth >= max_depth:
            raise QuadratureNonConvergence(f"no convergence on [{lo}, {hi}] at depth {depth} (diff {diff:.3g})")
        stack.append((lo, mid, flo, flm, fmid, left, eps / 2, depth + 1))
        stack.append((mid, hi, fmid, frm, fhi, right, eps / 2, depth + 1))
    return total


def integrated_normalizations(kernels: KernelPair, quad: QuadratureConfig = QuadratureConfig()) -> tuple[float, float]:
    """``(int rho_D, int rho_ND(x, x))`` over ``[-window, window]``."""
    w = quad.window
    rho_D = adaptive_simpson(kernels.rho_D_fn, -w, w, quad.rtol, quad.max_depth)
    rho_ND = adaptive_simpson(kernels.rho_ND_diag_fn, -w, w, quad.rtol, quad.max_depth)
    return rho_D, rho_ND


def trace_closed_form(rho_D: float, rho_ND: float, eps: float) -> float:
    return rho_D / (math.pi * eps) + rho_ND


def trace_regularized(kernels: KernelPair, eps: float, quad: QuadratureConfig = QuadratureConfig()) -> float:
    """Trace with the delta regularized at width ``eps``, by quadrature.

    The diagonal kernel is weighted by the Lorentzian at zero separation,
    the non-diagonal one enters through its diagonal slice.
    """
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    w = quad.window
    peak = lorentzian_delta(0.0, eps)
    diag = adaptive_simpson(lambda x: kernels.rho_D_fn(x) * peak, -w, w, quad.rtol, quad.max_depth)
    off = adaptive_simpson(kernels.rho_ND_diag_fn, -w, w, quad.rtol, quad.max_depth)
    return diag + off
