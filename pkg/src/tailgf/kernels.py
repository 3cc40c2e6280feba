"""The correction kernel psi and its integrals.

For a non-critical extendable law with profile (q, r, alpha, beta, gamma) the
kernel is

    psi(x) = [f4(q,q,r,x) - gamma * f4(q,r,r,x)] / f3(q,r,x),

built from tail generating functions of f.  Its integral measures how far the
law is from the modified linear-fractional family, for which psi vanishes
identically.  In the critical case the analogous kernel is

    psi11(x) = f4(1,1,1,x)^2 / (m2^2 f3(1,1,x)) - f5(1,1,1,1,x) / m2^2,

with m2 = f''(1)/2.  Endpoint values:

    psi(q)  = gamma/(r - q) - f''(q) / (2 alpha)
    psi(r)  = 1/(r - q) - gamma f''(r) / (2 beta)      (finite iff f''(r) < inf)
    psi11(1) = m3^2/m2^3 - m4/m2^2                      (m_n = f^(n)(1)/n!)

Integrability of psi up to r is equivalent to finiteness of the weighted
moment sum_k p_k r^k k log k (and of sum_k p_k k^3 log k in the critical
case); see `integrable_to_r`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .errors import DivergenceError, DomainError, RegimeError
from .laws import (
    ModifiedLinearFractional,
    OffspringLaw,
    Trifurcation,
    moments,
    tail_gf,
    xlogx_is_finite,
)
from .numerics import (
    adaptive_quadrature,
    extrapolate_power_tail,
    quadratic_through,
    segment_quadrature,
)
from .profiles import ExtendableProfile, Regime, get_profile

__all__ = [
    "Integrability",
    "PsiKernel",
    "get_kernel",
    "psi",
    "psi_integral",
    "integrable_to_r",
    "slowly_varying_L",
    "koenigs",
]

# Distance from an endpoint inside which direct divided differences lose too
# many digits; values there are interpolated through the endpoint limit.
ENDPOINT_ZONE = 1e-6
# Offsets (from the endpoint) of the interior interpolation nodes.  They sit
# far enough out that divided differences retain ~10 significant digits.
NODE_OFFSETS = (1e-3, 2e-3, 4e-3)
EXACT_TOL = 1e-13


class Integrability(str, Enum):
    INTEGRABLE = "integrable"
    DIVERGENT = "divergent"
    UNKNOWN = "unknown"


class KernelMode(str, Enum):
    NON_CRITICAL = "non_critical"
    CRITICAL = "critical"


@dataclass(frozen=True)
class PsiKernel:
    law: OffspringLaw
    prof: ExtendableProfile
    mode: KernelMode

    @property
    def upper(self) -> float:
        """Right end of the kernel's domain (r, or 1 in the critical case)."""
        return 1.0 if self.mode is KernelMode.CRITICAL else self.prof.r


@lru_cache(maxsize=256)
def get_kernel(law: OffspringLaw) -> PsiKernel:
    prof = get_profile(law)
    mode = KernelMode.CRITICAL if prof.is_critical else KernelMode.NON_CRITICAL
    return PsiKernel(law, prof, mode)


def _is_mlf(law: OffspringLaw) -> bool:
    return isinstance(law, ModifiedLinearFractional)


def _is_exact(law: OffspringLaw) -> bool:
    # Laws with stored coefficients evaluate tail GFs by exact summation, so
    # no endpoint-zone interpolation is ever needed for them.
    return law.coefficients is not None


def _psi_endpoint_q(kernel: PsiKernel) -> float:
    p = kernel.prof
    return p.gamma / (p.r - p.q) - kernel.law.derivative(p.q, 2) / (2.0 * p.alpha)


def _psi_endpoint_r(kernel: PsiKernel) -> float:
    p = kernel.prof
    d2 = kernel.law.derivative(p.r, 2)
    if not math.isfinite(d2):
        raise DivergenceError("psi diverges at r: f''(r) is infinite")
    return 1.0 / (p.r - p.q) - p.gamma * d2 / (2.0 * p.beta)


def _psi11_endpoint(kernel: PsiKernel) -> float:
    law = kernel.law
    m = moments(law)
    m4 = law.derivative(1.0, 4) / 24.0
    if not math.isfinite(m4):
        raise DivergenceError("psi11 diverges at 1: f''''(1) is infinite")
    return m.m3**2 / m.m2**3 - m4 / m.m2**2


def _psi_direct(kernel: PsiKernel, x) -> float:
    law, p = kernel.law, kernel.prof
    num = tail_gf(law, (p.q, p.q, p.r, x)) - p.gamma * tail_gf(law, (p.q, p.r, p.r, x))
    den = tail_gf(law, (p.q, p.r, x))
    return num / den


def _psi11_direct(kernel: PsiKernel, x) -> float:
    law = kernel.law
    m2 = moments(law).m2
    f3 = tail_gf(law, (1.0, 1.0, x))
    f4 = tail_gf(law, (1.0, 1.0, 1.0, x))
    f5 = tail_gf(law, (1.0, 1.0, 1.0, 1.0, x))
    return f4 * f4 / (m2 * m2 * f3) - f5 / (m2 * m2)


def _interp_through_endpoint(kernel: PsiKernel, x: float, endpoint: float, sign: float,
                             endpoint_value: float, direct, span: float) -> float:
    # Polynomial through (endpoint, limit) and three interior nodes; psi is
    # analytic at the endpoint so the cubic error is ~1e-12 over the zone.
    # Offsets shrink when the domain between fixed points is itself narrow.
    scale = min(1.0, 0.2 * span / NODE_OFFSETS[-1])
    pts = [(endpoint, endpoint_value)]
    for off in NODE_OFFSETS:
        xi = endpoint + sign * off * scale
        pts.append((xi, direct(kernel, xi)))
    return quadratic_through(pts, x)


def psi(kernel: PsiKernel, x):
    """Evaluate the correction kernel at x.

    Real x must lie in [0, r] (non-critical) or [0, 1] (critical); the value
    at the right endpoint exists only when the relevant derivative of f is
    finite there.  Complex x is evaluated directly (used for contour
    integration) and must stay inside the convergence disk.
    """
    law, p = kernel.law, kernel.prof
    if _is_mlf(law):
        # Exactly zero for the modified linear-fractional family, in both the
        # non-critical and critical modes.
        return 0.0 if not isinstance(x, complex) else 0.0 + 0.0j
    if isinstance(x, complex):
        if kernel.mode is KernelMode.CRITICAL:
            return _psi11_direct(kernel, x)
        return _psi_direct(kernel, x)

    x = float(x)
    if kernel.mode is KernelMode.CRITICAL:
        if not 0.0 <= x <= 1.0:
            raise DomainError(f"critical kernel needs x in [0, 1], got {x!r}")
        if _is_exact(law):
            return _psi11_direct(kernel, x)
        if abs(x - 1.0) <= EXACT_TOL:
            return _psi11_endpoint(kernel)
        if 1.0 - x < ENDPOINT_ZONE:
            try:
                lim = _psi11_endpoint(kernel)
            except DivergenceError:
                return _psi11_direct(kernel, x)
            return _interp_through_endpoint(kernel, x, 1.0, -1.0, lim, _psi11_direct, 1.0)
        return _psi11_direct(kernel, x)

    if not 0.0 <= x <= p.r:
        raise DomainError(f"kernel needs x in [0, {p.r!r}], got {x!r}")
    if _is_exact(law):
        return _psi_direct(kernel, x)
    if abs(x - p.q) <= EXACT_TOL:
        return _psi_endpoint_q(kernel)
    if abs(x - p.r) <= EXACT_TOL:
        return _psi_endpoint_r(kernel)
    span = p.r - p.q
    if abs(x - p.q) < ENDPOINT_ZONE:
        lim = _psi_endpoint_q(kernel)
        return _interp_through_endpoint(kernel, x, p.q, 1.0, lim, _psi_direct, span)
    if p.r - x < ENDPOINT_ZONE:
        try:
            lim = _psi_endpoint_r(kernel)
        except DivergenceError:
            if p.r - x <= 1e-8:
                raise
            return _psi_direct(kernel, x)
        return _interp_through_endpoint(kernel, x, p.r, -1.0, lim, _psi_direct, span)
    return _psi_direct(kernel, x)


def _trifurcation_w(law: Trifurcation, prof: ExtendableProfile) -> float:
    # f(s) - s = p3 (s - q)(s - r)(s - x3) gives phi(s) = p3 s + w with
    # w = -p3 x3 = p0 / (q r) by Vieta (critical case: w = p0).
    if prof.is_critical:
        return law.p0
    return law.p0 / (prof.q * prof.r)


def _trifurcation_integral(kernel: PsiKernel, a: float, b: float) -> float:
    law, p = kernel.law, kernel.prof
    w = _trifurcation_w(law, p)
    p3 = law.p3
    if kernel.mode is KernelMode.CRITICAL:
        m2 = moments(law).m2
        scale = p3 / (m2 * m2)
    else:
        scale = 1.0 - p.gamma
    return scale * math.log((p3 * b + w) / (p3 * a + w))


def psi_integral(kernel: PsiKernel, a: float, b: float, method: str = "auto") -> float:
    """Integral of psi over [a, b] within the kernel's domain.

    The right endpoint may equal r (or 1); when f''(r) is infinite there the
    integral is computed as an improper limit with power-law extrapolation
    over r - x in {1e-3, 1e-4, 1e-5}, and is -inf when the weighted-moment
    criterion says it diverges.
    """
    upper = kernel.upper
    a, b = float(a), float(b)
    for v in (a, b):
        if not 0.0 <= v <= upper:
            raise DomainError(f"integration limit {v!r} outside [0, {upper!r}]")
    if a == b:
        return 0.0
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0
    if _is_mlf(kernel.law):
        return 0.0
    if isinstance(kernel.law, Trifurcation) and method in ("auto", "closed"):
        return sign * _trifurcation_integral(kernel, a, b)
    if method == "closed":
        raise DomainError("no closed-form kernel integral for this law")

    singular_upper = False
    if b >= upper - EXACT_TOL:
        if kernel.mode is KernelMode.CRITICAL:
            d = kernel.law.derivative(1.0, 4)
        else:
            d = kernel.law.derivative(kernel.prof.r, 2)
        singular_upper = not math.isfinite(d)
    if not singular_upper:
        val, _err = adaptive_quadrature(lambda x: psi(kernel, x), a, b, abs_tol=1e-12)
        return sign * val

    verdict = integrable_to_r(kernel)
    if verdict is Integrability.DIVERGENT:
        return sign * -math.inf
    deltas = (1e-3, 1e-4, 1e-5)
    vals = []
    total = 0.0
    lo = a
    for d in deltas:
        hi = upper - d
        part, _ = adaptive_quadrature(lambda x: psi(kernel, x), lo, hi, abs_tol=1e-12)
        total += part
        vals.append(total)
        lo = hi
    return sign * extrapolate_power_tail(vals, list(deltas))


def psi_integral_segment(kernel: PsiKernel, z0, z1) -> complex:
    """Contour integral of psi along the straight segment from z0 to z1."""
    if _is_mlf(kernel.law):
        return 0.0 + 0.0j
    val, _ = segment_quadrature(lambda z: psi(kernel, z), complex(z0), complex(z1),
                                abs_tol=1e-12)
    return val


def integrable_to_r(kernel: PsiKernel) -> Integrability:
    """Whether |psi| is integrable up to the right end of its domain."""
    try:
        if kernel.mode is KernelMode.CRITICAL:
            finite = xlogx_is_finite(kernel.law, 1.0, 3)
        else:
            finite = xlogx_is_finite(kernel.law, kernel.prof.r, 1)
    except DomainError:
        return Integrability.UNKNOWN
    return Integrability.INTEGRABLE if finite else Integrability.DIVERGENT


def slowly_varying_L(kernel: PsiKernel, x: float) -> float:
    """L(x) = exp(int_0^{upper - x} psi); slowly varying as x -> 0.

    Tends to exp(int_0^upper psi) when psi is integrable up to the endpoint
    and to 0 when that integral diverges.
    """
    upper = kernel.upper
    if not 0.0 < x <= upper:
        raise DomainError(f"need 0 < x <= {upper!r}")
    val = psi_integral(kernel, 0.0, upper - x)
    return math.exp(val) if val != -math.inf else 0.0


def koenigs(kernel: PsiKernel, s):
    """The linearizing coordinate K with K(F_t(s)) = exp(-alpha t) K(s).

    K(s) = (s - q) (r - q)^gamma (r - s)^(-gamma) exp{int_s^q psi},
    normalized so K'(q) = 1.  Defined for s in [0, r); K(q) = 0, K < 0 left
    of q and K > 0 on (q, r).  Non-critical laws only.
    """
    p = kernel.prof
    if kernel.mode is KernelMode.CRITICAL:
        raise RegimeError("Koenigs coordinate needs a non-critical law")
    if isinstance(s, complex):
        import cmath

        corr = psi_integral_segment(kernel, s, p.q)
        return (s - p.q) * (p.r - p.q) ** p.gamma * cmath.exp(
            -p.gamma * cmath.log(p.r - s) + corr
        )
    s = float(s)
    if not 0.0 <= s < p.r:
        raise DomainError(f"Koenigs coordinate needs s in [0, r), got {s!r}")
    if abs(s - p.q) <= EXACT_TOL:
        return 0.0
    corr = math.exp(psi_integral(kernel, s, p.q))
    return (s - p.q) * ((p.r - p.q) / (p.r - s)) ** p.gamma * corr
