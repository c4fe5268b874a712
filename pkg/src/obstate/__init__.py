"""Observable-state renormalization calculus for phi^4 theory.

Laurent series in the dimensional-regularization parameter, internal states
built from loop factors and their finite-part projector, closed-form one-
and two-vertex coefficients, resummations, and one-loop RG running.
"""

from .coefficients import (
    EULER_GAMMA,
    BetaTable,
    PhysParams,
    SeriesKind,
    beta_0_1,
    beta_2_1,
    beta_4_2,
    loop_count,
    order_phase,
)
from .errors import ObstateError
from .kinematics import FourVector, MandelstamSet, amputate, external_kernel_f0, mandelstam, minkowski_dot, propagator
from .laurent import LaurentSeries, evaluate, finite_part, pole_part
from .rgflow import RGConfig, RGPoint, coupling_closed_form, flow_integrate, invariance_residual, mass_closed_form
from .states import (
    GammaVector,
    GaugeChoice,
    InternalState,
    LoopFactor,
    complement_Q,
    factor_from_gammas,
    indetermination_count,
    mean_value,
    project,
    trace_internal,
)

__version__ = "0.1.0"
