"""Fixed points, decay rates, and regime classification for offspring laws.

An offspring generating function f is called (q, r)-extendable when it has a
pair of fixed points 0 <= q <= 1 <= r with q < r, f(q) = q and f(r) = r.  The
extinction probability is q; the second fixed point r bounds the interval on
which the semigroup of the process remains well behaved.  The decay rates

    alpha = 1 - f'(q) > 0      (rate of approach to q from below),
    beta  = f'(r) - 1 > 0      (rate of escape from r),

and their ratio gamma = alpha / beta in (0, 1] control every asymptotic
statement made elsewhere in this package.  The critical case collapses both
fixed points onto 1 and is carried as its own regime with alpha = beta = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .errors import DomainError, NotExtendableError, RegimeError
from .laws import OffspringLaw, PowerFractional, tail_gf
from .numerics import solve_monotone

__all__ = [
    "Regime",
    "ExtendableProfile",
    "fixed_points",
    "profile",
    "get_profile",
    "phi",
]

# A law is treated as critical when f(1) = 1 and f'(1) = 1 within these slacks.
CRITICAL_VALUE_TOL = 1e-12
CRITICAL_SLOPE_TOL = 1e-10


class Regime(str, Enum):
    CRITICAL = "critical"
    SUBCRITICAL_EXTENDABLE = "subcritical_extendable"
    SUPERCRITICAL = "supercritical"
    DEFECTIVE_EXTENDABLE = "defective_extendable"


@dataclass(frozen=True)
class ExtendableProfile:
    """Fixed points and decay rates of an extendable offspring law."""

    q: float
    r: float
    alpha: float
    beta: float
    gamma: float
    regime: Regime

    @property
    def is_critical(self) -> bool:
        return self.regime is Regime.CRITICAL

    def as_dict(self) -> dict:
        return {
            "q": self.q,
            "r": self.r,
            "alpha": self.alpha,
            "beta": self.beta,
            "gamma": self.gamma,
            "regime": self.regime.value,
        }


def _is_critical(law: OffspringLaw) -> bool:
    if law.defect > CRITICAL_VALUE_TOL:
        return False
    if law.radius <= 1.0:
        return False
    return (
        abs(law.evaluate(1.0) - 1.0) <= CRITICAL_VALUE_TOL
        and abs(law.derivative(1.0, 1) - 1.0) <= CRITICAL_SLOPE_TOL
    )


def _lower_fixed_point(law: OffspringLaw) -> float:
    """Smallest root of f(s) = s in [0, 1]."""
    g = lambda s: law.evaluate(s) - s
    if abs(law.coefficient(0)) == 0.0:
        return 0.0
    m1 = law.derivative(1.0, 1) if law.radius > 1.0 else math.inf
    defective = law.defect > CRITICAL_VALUE_TOL
    if not defective and m1 <= 1.0 + CRITICAL_SLOPE_TOL:
        return 1.0
    # Here g(0) = p0 > 0 and g(1) = -defect < 0 or g'(1) = m1 - 1 > 0, so the
    # convexity of g ensures exactly one crossing in (0, 1].
    hi = 1.0
    if not defective:
        # g(1) = 0 is itself a root; step inside so the bracket isolates q < 1.
        hi = 1.0 - 1e-12
        while g(hi) >= 0.0:
            hi = 1.0 - 2.0 * (1.0 - hi)
            if hi <= 0.0:
                return 1.0
    return solve_monotone(g, 0.0, hi, xtol=1e-16)


def _upper_fixed_point(law: OffspringLaw, q: float) -> float:
    """Smallest root of f(s) = s in (max(q, 1), radius), or inf when none exists."""
    if isinstance(law, PowerFractional):
        return law.r
    g = lambda s: law.evaluate(s) - s
    radius = law.radius
    lo = max(q, 1.0)
    g_lo = g(lo)
    if g_lo > 0.0:
        # f already above the diagonal right of the lower fixed point: the
        # only remaining crossing would be q itself (critical-style tangency).
        return math.inf
    if g_lo == 0.0:
        if lo - q > 1e-9:
            # q < 1 and f(1) = 1: the root at 1 is the upper fixed point.
            return lo
        # q = 1 (subcritical): step just inside the gap to look for a second,
        # strictly larger root.
        step = 1e-9
        while True:
            if lo + step >= radius:
                return math.inf
            val = g(lo + step)
            if val < 0.0:
                lo = lo + step
                break
            if val > 0.0:
                return math.inf
            step *= 2.0
    if math.isinf(radius):
        hi = max(2.0, 2.0 * lo)
        for _ in range(200):
            if g(hi) > 0.0:
                break
            hi *= 2.0
        else:
            return math.inf
    else:
        # For laws that blow up at a finite radius, f - s -> +inf there.
        hi = radius
        shrink = 0.5
        for _ in range(200):
            cand = radius - shrink * (radius - lo)
            try:
                if g(cand) > 0.0:
                    hi = cand
                    break
            except OverflowError:
                pass
            shrink *= 0.5
        else:
            return math.inf
    return solve_monotone(g, lo, hi, xtol=1e-15)


def fixed_points(law: OffspringLaw) -> tuple:
    """Return (q, r); r is math.inf when no second fixed point exists."""
    if _is_critical(law):
        return (1.0, 1.0)
    q = _lower_fixed_point(law)
    r = _upper_fixed_point(law, q)
    return (q, r)


def profile(law: OffspringLaw) -> ExtendableProfile:
    """Classify the law and compute its (q, r, alpha, beta, gamma) profile.

    Raises NotExtendableError when f(s) > s on (max(q,1), radius) with no
    second crossing, i.e. when the law is supercritical-with-defect but not
    extendable.
    """
    q, r = fixed_points(law)
    if q == r == 1.0:
        return ExtendableProfile(1.0, 1.0, 0.0, 0.0, 1.0, Regime.CRITICAL)
    if math.isinf(r):
        raise NotExtendableError(
            "no second fixed point: f(s) - s does not vanish again beyond "
            f"q={q!r} within the radius of convergence"
        )
    alpha = 1.0 - law.derivative(q, 1)
    df_r = law.derivative(r, 1)
    beta = df_r - 1.0 if math.isfinite(df_r) else math.inf
    gamma = alpha / beta if math.isfinite(beta) else 0.0
    if alpha <= 0.0:
        raise NotExtendableError(f"f'(q) = {1.0 - alpha!r} >= 1 at the lower fixed point")
    if q >= 1.0 - CRITICAL_VALUE_TOL:
        regime = Regime.SUBCRITICAL_EXTENDABLE
        q = 1.0
    elif r <= 1.0 + CRITICAL_VALUE_TOL:
        regime = Regime.SUPERCRITICAL
        r = 1.0
    else:
        regime = Regime.DEFECTIVE_EXTENDABLE
    return ExtendableProfile(q, r, alpha, beta, gamma, regime)


@lru_cache(maxsize=256)
def get_profile(law: OffspringLaw) -> ExtendableProfile:
    return profile(law)


def phi(law: OffspringLaw, prof: ExtendableProfile, s) -> float:
    """Second-order tail generating function pinned at both fixed points.

    phi(s) = (f(s) - s) / ((q - s)(r - s)), extended continuously to s = q and
    s = r.  Strictly positive on [0, r].  Requires a non-critical profile.
    """
    if prof.is_critical:
        raise RegimeError("phi(q, r, s) needs distinct fixed points; law is critical")
    return tail_gf(law, (prof.q, prof.r, s))


def require_regime(prof: ExtendableProfile, *regimes: Regime) -> None:
    if prof.regime not in regimes:
        allowed = ", ".join(r.value for r in regimes)
        raise RegimeError(f"operation needs regime in {{{allowed}}}; law is {prof.regime.value}")
