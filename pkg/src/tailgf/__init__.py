"""Extendable branching processes in continuous time.

Offspring laws with two positive fixed points of the generating function
(one at or below 1, one at or above it), their tail generating functions,
the transition functional F_t(s) by three independent routes, exact-law
Monte Carlo with a killing state, and the long-time limit laws: survival
expansions, quasi-stationary laws, critical refinements, near-critical
killing-time limits, and the supercritical martingale limit.
"""

from .errors import (
    BracketError,
    ConstraintError,
    DivergenceError,
    DomainError,
    ExtractionError,
    InsufficientEventsError,
    NotExtendableError,
    NumericalError,
    QuadratureError,
    RegimeError,
    TailgfError,
)
from .laws import (
    FiniteSupport,
    HarrisYule,
    ModifiedLinearFractional,
    Moments,
    MutationStopped,
    OffspringLaw,
    PowerFractional,
    Trifurcation,
    hermite_divided_difference,
    mlf_critical,
    mlf_from_shape,
    moments,
    series_tail_gf,
    tail_gf,
    xlogx_integral,
    xlogx_is_finite,
    xlogx_moment,
)
from .lawspec import family_from_spec, law_from_spec, law_to_spec, load_family, load_law
from .profiles import (
    ExtendableProfile,
    Regime,
    fixed_points,
    get_profile,
    phi,
    profile,
    require_regime,
)
from .kernels import (
    Integrability,
    KernelMode,
    PsiKernel,
    get_kernel,
    integrable_to_r,
    koenigs,
    psi,
    psi_integral,
    psi_integral_segment,
    slowly_varying_L,
)
from .transition import (
    Method,
    TransitionResult,
    F_closed,
    F_implicit,
    F_ode,
    absorption,
    tail_gf_of_F,
    transition,
)
from .simulate import (
    Outcomes,
    PgfEstimate,
    SimConfig,
    TerminationSample,
    WEstimate,
    estimate_pgf,
    estimate_termination,
    estimate_w,
    sample_offspring,
    sampling_plan,
    simulate,
)
from .limits import (
    CriticalExpansion,
    K,
    NearCriticalFamily,
    SurvivalExpansion,
    TerminationLimit,
    WTransform,
    YaglomLaw,
    critical_expansion,
    mlf_defect_family,
    mlf_yaglom_pi,
    near_critical_consistency,
    near_critical_params,
    phi_functional,
    psi_tilde,
    scaled_family,
    survival_expansion,
    termination_limit,
    w_transform,
    w_transform_classical,
    yaglom,
)
from .acceptance import CRITERION_NAMES, CriterionResult, run_all, run_criterion

__version__ = "0.1.0"
