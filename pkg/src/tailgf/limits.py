"""Long-time limit laws of extendable branching processes.

Contents:

  * `survival_expansion` -- two-term exponential expansion of P(T > t) for
    defective extendable laws (r > 1), driven by the Koenigs coordinate K;
  * `yaglom` -- the quasi-stationary law of Z_t conditioned on t < T < inf,
    with probability generating function (K(s) - K(0)) / (K(1) - K(0)), its
    coefficients, and its geometric-with-power tail constants;
  * `critical_expansion` -- the 1/t and 1/t^2 terms of 1 - F_t(s) for
    critical laws, plus the coefficient sequence h_k of the associated
    generating function;
  * `termination_limit` / `near_critical_params` / `near_critical_consistency`
    -- limit laws of the killing time along families of laws approaching
    criticality, in all three regimes;
  * `w_transform` / `w_transform_classical` -- the Laplace transform of the
    martingale limit W for supercritical laws, by the product form in the
    kernel integral and by the classical logarithmic integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import (
    ConstraintError,
    DivergenceError,
    DomainError,
    ExtractionError,
    RegimeError,
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
)
from .laws import (
    FiniteSupport,
    ModifiedLinearFractional,
    OffspringLaw,
    moments,
    tail_gf,
    xlogx_is_finite,
)
from .numerics import adaptive_quadrature, cauchy_coefficients, richardson_two_point, solve_monotone
from .profiles import ExtendableProfile, Regime, get_profile
from .transition import tail_gf_of_F

__all__ = [
    "K",
    "SurvivalExpansion",
    "survival_expansion",
    "YaglomLaw",
    "yaglom",
    "mlf_yaglom_pi",
    "CriticalExpansion",
    "critical_expansion",
    "NearCriticalFamily",
    "scaled_family",
    "mlf_defect_family",
    "TerminationLimit",
    "termination_limit",
    "psi_tilde",
    "phi_functional",
    "near_critical_params",
    "near_critical_consistency",
    "WTransform",
    "w_transform",
    "w_transform_classical",
]


def K(prof: ExtendableProfile, kernel: PsiKernel, s):
    """Koenigs coordinate K(s); see `tailgf.kernels.koenigs`."""
    if kernel.prof != prof:
        raise ConstraintError("profile does not match the kernel")
    return koenigs(kernel, s)


# ---------------------------------------------------------------------------
# survival expansion and the quasi-stationary law
# ---------------------------------------------------------------------------


def _require_two_sided(prof: ExtendableProfile) -> None:
    if prof.is_critical:
        raise RegimeError("needs a non-critical law")
    if prof.r <= 1.0 + 1e-12:
        raise RegimeError("needs r > 1 (law with killing or q = 1)")
    if not math.isfinite(prof.beta):
        raise RegimeError("needs f'(r) < inf")


@dataclass(frozen=True)
class SurvivalExpansion:
    t: float
    first_term: float
    second_term: float
    k0: float
    k1: float
    alpha: float

    @property
    def total(self) -> float:
        return self.first_term + self.second_term


def survival_expansion(prof: ExtendableProfile, kernel: PsiKernel, t: float) -> SurvivalExpansion:
    """Two-term expansion of P(T > t): survival of either kind of death.

    P(T > t) = (K(1) - K(0)) e^{-alpha t}
             - (f''(q) / (2 alpha)) (K(1)^2 - K(0)^2) e^{-2 alpha t} + o(e^{-2 alpha t}),

    the quadratic term coming from inverting the Koenigs coordinate:
    K^{-1}(y) = q + y - (K''(q)/2) y^2 + ... with K''(q)/2 = f''(q)/(2 alpha).
    """
    _require_two_sided(prof)
    k0 = koenigs(kernel, 0.0)
    k1 = koenigs(kernel, 1.0)
    e = math.exp(-prof.alpha * t)
    f2q = kernel.law.derivative(prof.q, 2)
    first = (k1 - k0) * e
    second = -(f2q / (2.0 * prof.alpha)) * (k1 * k1 - k0 * k0) * e * e
    return SurvivalExpansion(t, first, second, k0, k1, prof.alpha)


@dataclass(frozen=True)
class YaglomLaw:
    """Quasi-stationary law pi of Z_t given t < T < inf (or survival, q = 1)."""

    pi: np.ndarray  # pi[k-1] = P(Y = k), k = 1..n
    k0: float
    k1: float
    tail_constant: Optional[float]
    tail_exponent: float
    r: float
    kernel: PsiKernel = field(repr=False)

    def pgf(self, s) -> float:
        return (koenigs(self.kernel, s) - self.k0) / (self.k1 - self.k0)


def yaglom(prof: ExtendableProfile, kernel: PsiKernel, n: int) -> YaglomLaw:
    """First n probabilities of the quasi-stationary law, by contour
    extraction of the generating function (K(s) - K(0)) / (K(1) - K(0)).

    The tail satisfies pi_k ~ c k^{gamma - 1} r^{-k} (up to a slowly varying
    factor when the kernel is not integrable at r); the reported constant
    c = (r-q)^{1+gamma} e^{-I} r^{-gamma} / ((K(1)-K(0)) Gamma(gamma)) with
    I the kernel integral from q to r, or None when that integral diverges.
    """
    _require_two_sided(prof)
    if n < 1:
        raise DomainError("need n >= 1")
    k0 = koenigs(kernel, 0.0)
    k1 = koenigs(kernel, 1.0)
    span = k1 - k0

    def gen(z: complex) -> complex:
        return (koenigs(kernel, z) - k0) / span

    rho = 0.95 * prof.r
    coeffs = cauchy_coefficients(gen, n, rho, certificate_tol=1e-9)
    if abs(coeffs[0]) > 1e-8:
        raise ExtractionError(f"generating function has nonzero constant term {coeffs[0]!r}")
    tail_c: Optional[float]
    if integrable_to_r(kernel) is not Integrability.DIVERGENT:
        try:
            corr = math.exp(-psi_integral(kernel, prof.q, prof.r))
        except DivergenceError:
            corr = None
        if corr is None:
            tail_c = None
        else:
            tail_c = (
                (prof.r - prof.q) ** (1.0 + prof.gamma)
                * corr
                * prof.r ** (-prof.gamma)
                / (span * math.gamma(prof.gamma))
            )
    else:
        tail_c = None
    return YaglomLaw(
        pi=coeffs[1:].copy(),
        k0=k0,
        k1=k1,
        tail_constant=tail_c,
        tail_exponent=prof.gamma - 1.0,
        r=prof.r,
        kernel=kernel,
    )


def mlf_yaglom_pi(prof: ExtendableProfile, k: int) -> float:
    """Exact quasi-stationary probabilities for modified linear-fractional
    laws:  pi_k = c_k * prod_{i=1}^{k-1}(1 - (1-gamma)/i) * r^{-k}."""
    q, r, g = prof.q, prof.r, prof.gamma
    denom = q + (1.0 - q) * (1.0 - 1.0 / r) ** (-g)
    c_k = (r - q + (1.0 - g) * q / k) / denom
    log_prod = math.lgamma(k - 1 + g) - math.lgamma(g) - math.lgamma(k)
    return c_k * math.exp(log_prod - k * math.log(r))


# ---------------------------------------------------------------------------
# critical long-time expansion
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalExpansion:
    """1 - F_t(s) = c1/t + c2 log(m2 t)/t^2 - A(s)/(m2^2 t^2) + o(1/t^2)."""

    m2: float
    m3: float
    lead: float  # c1 = 1/m2
    log_coeff: float  # c2 = m3/m2^3
    const_coeff: float  # A(0)/m2^2
    h: np.ndarray  # h[k-1], k = 1..n: coefficients of the A-series
    kernel: PsiKernel = field(repr=False)

    def A(self, s: float) -> float:
        m = self
        if not 0.0 <= s < 1.0:
            raise DomainError("need s in [0, 1)")
        return (
            1.0 / (1.0 - s)
            - (m.m3 / m.m2) * math.log(1.0 - s)
            - m.m2 * psi_integral(m.kernel, s, 1.0)
        )

    def tail_probability(self, t: float, s: float = 0.0) -> float:
        return (
            self.lead / t
            + self.log_coeff * math.log(self.m2 * t) / t**2
            - self.A(s) / (self.m2**2 * t**2)
        )


def critical_expansion(law: OffspringLaw, n: int = 0) -> CriticalExpansion:
    """Coefficients of the long-time critical expansion; requires a critical
    law with f'''(1) < inf and finite third-order x log x moment."""
    prof = get_profile(law)
    if not prof.is_critical:
        raise RegimeError("critical expansion needs a critical law")
    kernel = get_kernel(law)
    m = moments(law)
    if not math.isfinite(m.m3):
        raise RegimeError("needs f'''(1) < inf")
    if xlogx_is_finite(law, 1.0, 3) is False:
        raise DivergenceError("sum p_k k^3 log k diverges; expansion unavailable")
    m2, m3 = m.m2, m.m3
    a0 = 1.0 - m2 * psi_integral(kernel, 0.0, 1.0)

    if n > 0:
        def gen(z: complex) -> complex:
            one_minus = 1.0 - z
            val = (
                z / (one_minus * m2 * m2)
                + (m3 / m2**3) * (-np.log(one_minus))
                + psi_integral_segment(kernel, 0.0, z) / (m2 * m2)
            )
            return val

        coeffs = cauchy_coefficients(gen, n, 0.9, certificate_tol=1e-9)
        h = coeffs[1:].copy()
    else:
        h = np.zeros(0)
    return CriticalExpansion(
        m2=m2,
        m3=m3,
        lead=1.0 / m2,
        log_coeff=m3 / m2**3,
        const_coeff=a0 / m2**2,
        h=h,
        kernel=kernel,
    )


# ---------------------------------------------------------------------------
# near-critical families and termination-time limits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NearCriticalFamily:
    """A defect path eps -> law(eps) degenerating to `limit_law` at eps = 0.

    `d` is the limit of (1 - q_eps)/(r_eps - 1) for families whose limit law
    is critical (1 for the built-in constructions).
    """

    builder: Callable[[float], OffspringLaw]
    limit_law: OffspringLaw
    d: Optional[float] = None

    def law_at(self, eps: float) -> OffspringLaw:
        if not 0.0 < eps < 0.5:
            raise DomainError(f"need 0 < eps < 0.5, got {eps!r}")
        return self.builder(eps)


def scaled_family(base: OffspringLaw, d: Optional[float] = None) -> NearCriticalFamily:
    """The family f_eps = (1 - eps) f for a finite-support base law."""
    coeffs = base.coefficients
    if coeffs is None:
        raise ConstraintError("scaled families need a finite-support base law")
    base_coeffs = tuple(float(c) for c in coeffs)

    def build(eps: float) -> FiniteSupport:
        scaled = tuple((1.0 - eps) * c for c in base_coeffs)
        return FiniteSupport(scaled, 1.0 - (1.0 - eps) * sum(base_coeffs))

    if d is None and _limit_is_critical(base):
        d = 1.0
    return NearCriticalFamily(build, base, d)


def mlf_defect_family(p0: float, p1: float, p: float, d: Optional[float] = None) -> NearCriticalFamily:
    """Modified linear-fractional laws with the defect as the path parameter."""
    limit = ModifiedLinearFractional(p0, p1, 0.0, p)

    def build(eps: float) -> ModifiedLinearFractional:
        return ModifiedLinearFractional(p0, p1, eps, p)

    if d is None and _limit_is_critical(limit):
        d = 1.0
    return NearCriticalFamily(build, limit, d)


def _limit_is_critical(law: OffspringLaw) -> bool:
    try:
        return get_profile(law).is_critical
    except Exception:
        return False


def near_critical_params(family: NearCriticalFamily, eps: float) -> dict:
    """Profile of the law at eps together with the first-order predictions
    from the limit law's moments, and their relative deviations."""
    law = family.law_at(eps)
    prof = get_profile(law)
    m = moments(family.limit_law)
    out = {
        "eps": eps,
        "q": prof.q,
        "r": prof.r,
        "alpha": prof.alpha,
        "beta": prof.beta,
        "gamma": prof.gamma,
        "regime": prof.regime.value,
        "limit_m1": m.m1,
    }
    pred = {}
    if m.m1 < 1.0 - 1e-10:
        pred["one_minus_q"] = eps / (1.0 - m.m1)
        out["one_minus_q"] = 1.0 - prof.q
    elif m.m1 > 1.0 + 1e-10:
        pred["r_minus_one"] = eps / (m.m1 - 1.0)
        out["r_minus_one"] = prof.r - 1.0
    else:
        d = family.d
        if d is None or not 0.0 < d < math.inf:
            d = (1.0 - prof.q) / (prof.r - 1.0)
        pred["one_minus_q"] = math.sqrt(d * eps / m.m2)
        pred["r_minus_one"] = math.sqrt(eps / (m.m2 * d))
        pred["alpha"] = math.sqrt(m.m2 * eps) * (math.sqrt(d) + 1.0 / math.sqrt(d))
        out["one_minus_q"] = 1.0 - prof.q
        out["r_minus_one"] = prof.r - 1.0
        out["d_eps"] = (1.0 - prof.q) / (prof.r - 1.0)
    out["predicted"] = pred
    out["rel_dev"] = {
        key: abs(out[key] - val) / abs(val) for key, val in pred.items() if key in out
    }
    return out


@dataclass(frozen=True)
class TerminationLimit:
    """Limit law of the killing time T1 (given T1 < inf) along a family.

    `cdf` is the limiting distribution function in the variable u; `u_of_t`
    maps physical time to u at a given eps.  Kinds:

      * "nearly_subcritical":  u = t, exponential with rate 1 - m1;
      * "nearly_supercritical": u = beta_eps t - log(1/(r_eps - 1)) - log(1 - q),
        cdf(u) = Phi(u) solving log Phi + int_{1-(1-q)Phi}^1 psi~ = u;
      * "nearly_critical": d = 0 gives u = (r_eps - 1) m2 t, cdf 1 - e^{-u};
        0 < d < inf gives u = alpha_eps t, cdf (e^u - 1)/(e^u + d);
        d = inf gives u = alpha_eps (t - log(d_eps)/beta_eps), logistic cdf.
    """

    kind: str
    cdf: Callable[[float], float]
    u_of_t: Callable[[float, float], float]
    notes: dict


def psi_tilde(limit_law: OffspringLaw, x: float) -> float:
    """The drift-corrected kernel of the supercritical limit law,

        psi~(x) = f4(q,1,1,x)/phi(x) + (m1 - 1)/((1-q)(x-q) phi(x)),

    finite at 1 but carrying a simple pole at q with residue (m1-1)/alpha
    (the log-scale substitution in `phi_functional` absorbs it).  Modified
    linear-fractional laws use the rational closed form (their f4/phi ratio
    is the constant p/(1-p))."""
    prof = get_profile(limit_law)
    if prof.regime is not Regime.SUPERCRITICAL:
        raise RegimeError("needs a supercritical limit law (q < 1 = r)")
    q = prof.q
    m1 = moments(limit_law).m1
    if isinstance(limit_law, ModifiedLinearFractional):
        p = limit_law.p
        c = (1.0 - limit_law.p1) * p + limit_law.tail_mass * (1.0 - p)
        return p / (1.0 - p) + (m1 - 1.0) * (1.0 - p * x) / ((1.0 - q) * (x - q) * c)
    ph = tail_gf(limit_law, (q, 1.0, x))
    top = tail_gf(limit_law, (q, 1.0, 1.0, x))
    return top / ph + (m1 - 1.0) / ((1.0 - q) * (x - q) * ph)


def _psi_tilde_shifted(limit_law: OffspringLaw, q: float, m1: float, t: float) -> float:
    """t * psi~(q + t), computed without ever forming (x - q).

    Bounded on t in (0, 1-q]; the log substitution x = q + e^y turns
    int psi~ dx into int of this at t = e^y, which a bisection quadrature
    can resolve (in x it cannot place nodes closer than ulp(q) to the pole).
    """
    x = q + t
    if isinstance(limit_law, ModifiedLinearFractional):
        p = limit_law.p
        c = (1.0 - limit_law.p1) * p + limit_law.tail_mass * (1.0 - p)
        return t * p / (1.0 - p) + (m1 - 1.0) * (1.0 - p * x) / ((1.0 - q) * c)
    ph = tail_gf(limit_law, (q, 1.0, x))
    top = tail_gf(limit_law, (q, 1.0, 1.0, x))
    return t * top / ph + (m1 - 1.0) / ((1.0 - q) * ph)


def phi_functional(limit_law: OffspringLaw, u: float, method: str = "auto") -> float:
    """Phi(u): the limiting conditional distribution function of the killing
    time for nearly-supercritical families, solving

        log Phi + int_{1-(1-q)Phi}^1 psi~(x) dx = u,

    strictly increasing from 0 to 1.  `method` is "quadrature" (numerical
    kernel integral), "closed" (modified linear-fractional laws only, where
    the integral collapses to -(1/gamma) log(1 - Phi)), or "auto"."""
    prof = get_profile(limit_law)
    if prof.regime is not Regime.SUPERCRITICAL:
        raise RegimeError("needs a supercritical limit law (q < 1 = r)")
    q = prof.q
    is_mlf = isinstance(limit_law, ModifiedLinearFractional)
    if method == "auto":
        method = "closed" if is_mlf else "quadrature"
    if method == "closed":
        if not is_mlf:
            raise DomainError("closed form only for modified linear-fractional laws")
        gamma = prof.gamma
        if abs(gamma - 1.0) <= 1e-14:
            return 1.0 / (1.0 + math.exp(-u))
        if abs(gamma - 0.5) <= 1e-14:
            # log Phi - 2 log(1 - Phi) = u  =>  quadratic in Phi
            return 1.0 + 0.5 * math.exp(-u) * (1.0 - math.sqrt(1.0 + 4.0 * math.exp(u)))
        def g_closed(p: float) -> float:
            return math.log(p) - math.log1p(-p) / gamma - u
        return solve_monotone(g_closed, 1e-300, 1.0 - 1e-16, xtol=1e-15)
    if method != "quadrature":
        raise DomainError(f"unknown method {method!r}")

    m1 = moments(limit_law).m1
    y_hi = math.log(1.0 - q)

    def g(p: float) -> float:
        # x_lo - q = (1-q)(1-p); integrate psi~ over [x_lo, 1] in y = log(x-q)
        integral, _ = adaptive_quadrature(
            lambda y: _psi_tilde_shifted(limit_law, q, m1, math.exp(y)),
            y_hi + math.log1p(-p),
            y_hi,
            abs_tol=1e-12,
        )
        return math.log(p) + integral - u

    lo = min(0.5, math.exp(u - 40.0))
    while g(lo) >= 0.0:
        lo *= 0.5
        if lo < 1e-280:
            raise DomainError(f"could not bracket Phi({u!r}) from below")
    hi = 1.0 - 1e-15
    return solve_monotone(g, lo, hi, xtol=1e-15)


def termination_limit(family: NearCriticalFamily) -> TerminationLimit:
    """Limit law of the killing time along the family, by regime."""
    limit = family.limit_law
    m = moments(limit)
    if m.m1 < 1.0 - 1e-10:
        rate = 1.0 - m.m1
        return TerminationLimit(
            kind="nearly_subcritical",
            cdf=lambda u: -np.expm1(-rate * np.maximum(u, 0.0)),
            u_of_t=lambda eps, t: t,
            notes={"rate": rate},
        )
    if m.m1 > 1.0 + 1e-10:
        prof_lim = get_profile(limit)
        q = prof_lim.q

        def u_of_t(eps: float, t: float) -> float:
            prof_eps = get_profile(family.law_at(eps))
            return prof_eps.beta * t - math.log(1.0 / (prof_eps.r - 1.0)) - math.log(1.0 - q)

        def cdf(u):
            arr = np.asarray(u, dtype=float)
            if arr.ndim == 0:
                return phi_functional(limit, float(arr))
            return np.array([phi_functional(limit, float(x)) for x in arr])

        return TerminationLimit(
            kind="nearly_supercritical",
            cdf=cdf,
            u_of_t=u_of_t,
            notes={"q": q, "gamma": prof_lim.gamma, "m1": m.m1},
        )

    d = family.d
    if d is None:
        raise ConstraintError("nearly-critical families must carry the ratio d")
    m2 = m.m2

    if d == 0.0:
        def u_of_t(eps: float, t: float) -> float:
            prof_eps = get_profile(family.law_at(eps))
            return (prof_eps.r - 1.0) * m2 * t

        return TerminationLimit(
            kind="nearly_critical",
            cdf=lambda u: -np.expm1(-np.maximum(u, 0.0)),
            u_of_t=u_of_t,
            notes={"d": 0.0},
        )
    if math.isinf(d):
        def u_of_t(eps: float, t: float) -> float:
            prof_eps = get_profile(family.law_at(eps))
            d_eps = (1.0 - prof_eps.q) / (prof_eps.r - 1.0)
            return prof_eps.alpha * (t - math.log(d_eps) / prof_eps.beta)

        return TerminationLimit(
            kind="nearly_critical",
            cdf=lambda u: 1.0 / (1.0 + np.exp(np.minimum(-u, 700.0))),
            u_of_t=u_of_t,
            notes={"d": math.inf},
        )

    def u_of_t(eps: float, t: float) -> float:
        # The exact decay rate alpha_eps ~ sqrt(m2 eps)(sqrt(d) + 1/sqrt(d));
        # using it (rather than its limit form) keeps the map consistent with
        # the law actually simulated at finite eps.
        prof_eps = get_profile(family.law_at(eps))
        return prof_eps.alpha * t

    def cdf(u):
        # (e^u - 1)/(e^u + d) rewritten to avoid overflow for large u
        em = np.exp(-np.maximum(u, 0.0))
        return (1.0 - em) / (1.0 + d * em)

    return TerminationLimit(
        kind="nearly_critical",
        cdf=cdf,
        u_of_t=u_of_t,
        notes={"d": d, "rate_limit_form": f"sqrt(m2 eps) (sqrt(d) + 1/sqrt(d))"},
    )


def near_critical_consistency(
    family: NearCriticalFamily,
    eps: float,
    x_grid,
    t: float,
    s: float,
) -> dict:
    """Continuity checks between the kernel at eps and the critical kernel.

    Returns the largest deviation of psi_eps(x)/alpha_eps from psi11(x) over
    the grid, and the value of the logarithmic-mean factor
    e(t, s) = log(1 + A)/A with A = (r - q) F3_t(q, r, s) / F2_t(q, s),
    which tends to 1 as eps -> 0.
    """
    law_eps = family.law_at(eps)
    prof_eps = get_profile(law_eps)
    if prof_eps.is_critical:
        raise RegimeError("law at eps is critical; nothing to compare")
    kern_eps = get_kernel(law_eps)
    kern_lim = get_kernel(family.limit_law)
    if kern_lim.mode is not KernelMode.CRITICAL:
        raise RegimeError("limit law must be critical for this comparison")

    max_dev = 0.0
    for x in x_grid:
        x = float(x)
        if not 0.0 <= x < prof_eps.r:
            raise DomainError(f"grid point {x!r} outside [0, r_eps)")
        dev = abs(psi(kern_eps, x) / prof_eps.alpha - psi(kern_lim, x))
        max_dev = max(max_dev, dev)

    f2 = tail_gf_of_F(law_eps, t, (prof_eps.q, s))
    f3 = tail_gf_of_F(law_eps, t, (prof_eps.q, prof_eps.r, s))
    a = (prof_eps.r - prof_eps.q) * f3 / f2
    e_val = math.log1p(a) / a if a != 0.0 else 1.0
    return {
        "eps": eps,
        "max_psi_dev": max_dev,
        "e_value": e_val,
        "e_dev": abs(e_val - 1.0),
        "alpha_eps": prof_eps.alpha,
    }


# ---------------------------------------------------------------------------
# the supercritical martingale limit W
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WTransform:
    """Laplace transform eta(rho) = E exp(-rho W) for supercritical laws.

    W = lim Z_t e^{-beta t}; P(W = 0) = q, E W = 1 unless degenerate.  The
    transform solves

        eta - q = (1 - q) ((1 - eta)/rho)^gamma exp{-int_eta^1 psi},

    and degenerates to eta = 1 (W = 0 a.s.) exactly when the offspring law
    has infinite x log x moment.
    """

    q: float
    gamma: float
    degenerate: bool
    mean: float
    second_moment: float
    kernel: PsiKernel = field(repr=False)

    def eta(self, rho: float) -> float:
        if rho < 0.0:
            raise DomainError("need rho >= 0")
        if rho == 0.0:
            return 1.0
        if self.degenerate:
            return 1.0
        return _solve_eta(self.kernel, rho)


def _solve_eta(kernel: PsiKernel, rho: float) -> float:
    prof = kernel.prof
    q, gamma = prof.q, prof.gamma
    log_rho = math.log(rho)

    def g(eta: float) -> float:
        return (
            math.log(eta - q)
            - math.log(1.0 - q)
            - gamma * (math.log(1.0 - eta) - log_rho)
            + psi_integral(kernel, eta, 1.0)
        )

    lo = q + 1e-15 * max(1.0, q)
    hi = 1.0 - 1e-16
    while g(lo) >= 0.0:
        lo = q + 0.25 * (lo - q)
        if lo - q < 1e-300:
            raise DomainError(f"could not bracket eta({rho!r})")
    return solve_monotone(g, lo, hi, xtol=5e-16)


def w_transform(law: OffspringLaw, prof: Optional[ExtendableProfile] = None,
                kernel: Optional[PsiKernel] = None) -> WTransform:
    """Build the Laplace transform of W, with mean and second moment.

    Moments come from Richardson-extrapolated finite differences of eta at
    h = 1e-4; for laws with finite second moment E W^2 = 2 m2 / beta.
    """
    if prof is None:
        prof = get_profile(law)
    if prof.regime is not Regime.SUPERCRITICAL:
        raise RegimeError("W exists only for supercritical laws (q < 1 = r)")
    if kernel is None:
        kernel = get_kernel(law)
    finite = _xlogx_verdict(law)
    if finite is False:
        return WTransform(prof.q, prof.gamma, True, 0.0, 0.0, kernel)

    h = 1e-4
    eta_h = _solve_eta(kernel, h)
    eta_h2 = _solve_eta(kernel, 0.5 * h)
    eta_2h = _solve_eta(kernel, 2.0 * h)
    mean = richardson_two_point((1.0 - eta_h) / h, (1.0 - eta_h2) / (0.5 * h))
    s_h = (eta_2h - 2.0 * eta_h + 1.0) / h**2
    eta_4h = _solve_eta(kernel, 4.0 * h)
    s_2h = (eta_4h - 2.0 * eta_2h + 1.0) / (2.0 * h) ** 2
    second = richardson_two_point(s_2h, s_h)
    return WTransform(prof.q, prof.gamma, False, mean, second, kernel)


def _xlogx_verdict(law: OffspringLaw) -> Optional[bool]:
    hook = getattr(law, "xlogx_finite_hint", None)
    if hook is not None:
        verdict = hook(1.0, 1)
        if verdict is not None:
            return verdict
    try:
        return xlogx_is_finite(law, 1.0, 1)
    except DomainError:
        return None


def w_transform_classical(law: OffspringLaw, prof: Optional[ExtendableProfile],
                          rho: float) -> float:
    """eta(rho) by the classical representation

        eta = 1 - rho exp{ int_eta^1 [ (m1-1)/(f(x)-x) + 1/(1-x) ] dx },

    independent of the kernel machinery (cross-validation route)."""
    if prof is None:
        prof = get_profile(law)
    if prof.regime is not Regime.SUPERCRITICAL:
        raise RegimeError("W exists only for supercritical laws (q < 1 = r)")
    if rho <= 0.0:
        if rho == 0.0:
            return 1.0
        raise DomainError("need rho >= 0")
    q = prof.q

    # The naive integrand (m1-1)/(f(x)-x) + 1/(1-x) cancels catastrophically
    # at both ends.  Divided differences give the same function exactly:
    # f(x)-x = (1-x)(1 - v2(1,x)) and 1 - v2(1,x) = -(x-q) v3(1,q,x), so it
    # equals -v3(1,1,x) / ((x-q) v3(1,q,x)).  Substituting x = q + e^y then
    # absorbs the simple pole into dx, leaving a bounded smooth integrand
    # (quadrature nodes cannot resolve spacings below ulp(q) in x, so the
    # pole must be removed analytically, not just evaluated stably).
    def integrand(y: float) -> float:
        x = q + math.exp(y)
        return -tail_gf(law, (1.0, 1.0, x)) / tail_gf(law, (1.0, q, x))

    y_hi = math.log(1.0 - q)

    def g(eta: float) -> float:
        integral, _ = adaptive_quadrature(integrand, math.log(eta - q), y_hi, abs_tol=1e-12)
        return eta - 1.0 + rho * math.exp(integral)

    lo = prof.q + 1e-14
    hi = 1.0 - 1e-14
    if g(hi) <= 0.0:
        return solve_monotone(g, hi, 1.0 - 1e-16, xtol=5e-16)
    return solve_monotone(g, lo, hi, xtol=5e-16)
