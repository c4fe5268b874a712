"""One-loop renormalization-group running of the bare mass and coupling.

With t = ln(mu) the flow equations are autonomous:

    d m0^2 / dt   = lambda0 m0^2 / (8 pi^2)
    d lambda0 / dt = 3 lambda0^2 / (16 pi^2)

The coupling sign is the one whose solution diverges at the Landau pole
``mu_S exp(16 pi^2 / (3 lambda_S))``; it follows from the mu-derivative of
the one-loop four-point coefficient, 3/(16 pi^2 mu).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .coefficients import EULER_GAMMA
from .errors import LandauPole, LandauPoleCrossed

PI = math.pi
MASS_RATE = 1 / (8 * PI**2)
COUPLING_RATE = 3 / (16 * PI**2)
BLOWUP_THRESHOLD = 1e6
POLE_ATOL = 1e-12


class Method(enum.Enum):
    RK4 = "rk4"
    EULER = "euler"


@dataclass(frozen=True)
class RGPoint:
    mu: float
    m0_sq: float
    lambda0: float


@dataclass(frozen=True)
class RGConfig:
    mu_S: float
    m_S_sq: float
    lambda_S: float
    step_count: int = 1000
    method: Method = Method.RK4

    def __post_init__(self):
        if not self.mu_S > 0:
            raise ValueError(f"mu_S must be positive, got {self.mu_S}")
        if not self.m_S_sq > 0:
            raise ValueError(f"m_S_sq must be positive, got {self.m_S_sq}")
        if self.step_count < 1:
            raise ValueError(f"step_count must be >= 1, got {self.step_count}")
        object.__setattr__(self, "method", Method(self.method))


# -- closed forms -------------------------------------------------------------


def mass_closed_form(cfg: RGConfig, mu: float) -> float:
    """``m_S^2 (mu/mu_S)^(lambda_S / 8 pi^2)``, coupling frozen at lambda_S."""
    return cfg.m_S_sq * (mu / cfg.mu_S) ** (cfg.lambda_S * MASS_RATE)


def coupling_closed_form(cfg: RGConfig, mu: float) -> float:
    denom = 1 - COUPLING_RATE * cfg.lambda_S * math.log(mu / cfg.mu_S)
    if abs(denom) < POLE_ATOL:
        raise LandauPole(f"running coupling diverges at mu = {mu}")
    return cfg.lambda_S / denom


def mass_running_closed_form(cfg: RGConfig, mu: float) -> float:
    """Exact mass solution when the coupling runs as well.

    Integrating ``lambda0(t) / (8 pi^2)`` gives
    ``m_S^2 (1 - 3 lambda_S ln(mu/mu_S) / (16 pi^2))^(-2/3)``.
    """
    denom = 1 - COUPLING_RATE * cfg.lambda_S * math.log(mu / cfg.mu_S)
    if abs(denom) < POLE_ATOL:
        raise LandauPole(f"running coupling diverges at mu = {mu}")
    return cfg.m_S_sq * denom ** (-MASS_RATE / COUPLING_RATE)


def landau_pole_scale(cfg: RGConfig) -> float:
    """Scale where the one-loop coupling diverges (``inf`` for zero coupling)."""
    if cfg.lambda_S == 0:
        return math.inf
    try:
        return cfg.mu_S * math.exp(1 / (COUPLING_RATE * cfg.lambda_S))
    except OverflowError:
        return math.inf


# -- integration --------------------------------------------------------------


def flow_rhs(y, pi=PI):
    """Derivatives of ``(m0^2, lambda0)`` with respect to ln(mu).

    Only uses field arithmetic, so arbitrary-precision number types work
    when ``pi`` is passed at matching precision.
    """
    m2, lam = y
    return (lam * m2 / (8 * pi**2), 3 * lam**2 / (16 * pi**2))


def _rk4_step(f, y, h):
    k1 = f(y)
    k2 = f(tuple(a + h / 2 * b for a, b in zip(y, k1)))
    k3 = f(tuple(a + h / 2 * b for a, b in zip(y, k2)))
    k4 = f(tuple(a + h * b for a, b in zip(y, k3)))
    return tuple(a + h / 6 * (b1 + 2 * b2 + 2 * b3 + b4) for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4))


def _euler_step(f, y, h):
    return tuple(a + h * b for a, b in zip(y, f(y)))


_STEPPERS = {Method.RK4: _rk4_step, Method.EULER: _euler_step}


def integrate_log_scale(
    y0: Sequence,
    t0,
    t1,
    steps: int,
    method: Method = Method.RK4,
    rhs: Callable = flow_rhs,
    threshold: float = BLOWUP_THRESHOLD,
) -> list[tuple]:
    """Fixed-step integration in t = ln(mu); returns ``[(t, y), ...]``.

    Raises :class:`LandauPoleCrossed` as soon as ``|lambda0|`` exceeds
    ``threshold`` or stops being a number.
    """
    step = _STEPPERS[Method(method)]
    h = (t1 - t0) / steps
    y = tuple(y0)
    out = [(t0, y)]
    for i in range(1, steps + 1):
        y = step(rhs, y, h)
        t = t0 + i * h
        lam = y[1]
        if lam != lam or abs(lam) > threshold:
            raise LandauPoleCrossed(
                f"|lambda0| exceeded {threshold:g} at ln(mu) = {float(t):.6g} (step {i})",
                mu=math.exp(float(t)),
                step=i,
                trajectory=out,
            )
        out.append((t, y))
    return out


def flow_integrate(cfg: RGConfig, mu_end: float) -> list[RGPoint]:
    """Integrate from ``mu_S`` to ``mu_end`` with ``cfg.step_count`` fixed steps."""
    if not mu_end > 0:
        raise ValueError(f"mu_end must be positive, got {mu_end}")
    try:
        raw = integrate_log_scale(
            (cfg.m_S_sq, cfg.lambda_S),
            math.log(cfg.mu_S),
            math.log(mu_end),
            cfg.step_count,
            cfg.method,
        )
    except LandauPoleCrossed as exc:
        exc.trajectory = [RGPoint(math.exp(t), m2, lam) for t, (m2, lam) in exc.trajectory]
        raise
    return [RGPoint(math.exp(t), m2, lam) for t, (m2, lam) in raw]


def trajectory_rows(cfg: RGConfig, points: Sequence[RGPoint]) -> list[dict]:
    """Trajectory plus closed forms, one dict per point (CSV/JSON payload)."""
    return [
        {
            "mu": pt.mu,
            "m0_sq": pt.m0_sq,
            "lambda0": pt.lambda0,
            "lambda_closed": coupling_closed_form(cfg, pt.mu),
            "m0_sq_closed": mass_closed_form(cfg, pt.mu),
        }
        for pt in points
    ]


# -- mu-invariance of the dressed mass ---------------------------------------


def self_energy_finite_rg(m0_sq: float, mu: float) -> float:
    """One-loop finite self-energy with mu-derivative ``m0^2 / (8 pi^2 mu)``.

    This is the normalization the mass flow equation is built on; it carries
    a single ``ln(4 pi mu^2 / m0^2)`` where the printed coefficient in
    :func:`obstate.coefficients.beta_2_1` carries two.
    """
    return m0_sq / (16 * PI**2) * (1 - EULER_GAMMA + math.log(4 * PI * mu**2 / m0_sq))


def dressed_mass_sq(cfg: RGConfig, mu: float) -> float:
    """``m^2 = m0^2(mu) - lambda0(mu) * beta_0^(2,1)(m0^2(mu), mu)`` along the exact flow."""
    m2 = mass_running_closed_form(cfg, mu)
    lam = coupling_closed_form(cfg, mu)
    return m2 - lam * self_energy_finite_rg(m2, mu)


def invariance_residual(cfg: RGConfig, mu: float, rel_step: float = 1e-3) -> float:
    """Dimensionless ``|d m^2 / d mu| * mu / m^2`` from a central difference in ln(mu).

    The order-lambda0 pieces cancel, so the residual scales as lambda0^2.
    """
    if not mu > 0:
        raise ValueError(f"mu must be positive, got {mu}")
    up = dressed_mass_sq(cfg, mu * math.exp(rel_step))
    down = dressed_mass_sq(cfg, mu * math.exp(-rel_step))
    return abs(up - down) / (2 * rel_step) / abs(dressed_mass_sq(cfg, mu))
