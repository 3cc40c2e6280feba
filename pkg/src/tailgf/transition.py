"""The transition functional F_t(s) = E[s^{Z_t} | Z_0 = 1] by three routes.

F_t solves the autonomous flow dF/dt = f(F) - f, F_0 = s, where f is the
offspring generating function (states are counted with the convention that
the killing state contributes s^Delta = 0, so defective laws are handled by
the same flow).  Three independent evaluation routes are provided:

  * `F_ode`      -- direct high-order integration of the flow;
  * `F_implicit` -- root-finding on the time-integrated form of the flow,
                    which for extendable laws separates into a linear part
                    plus the kernel integral, and in the critical case into
                    the second-order expansion plus the critical kernel;
  * `F_closed`   -- closed forms for the families that admit them
                    (quadratic offspring laws and pure k-furcation).

Because the flow is autonomous, derivatives of F_t in s are available
without sensitivity integration:

    F_t'(s)  = (f(F) - F) / (f(s) - s),
    F_t''(s) = F_t'(s) (f'(F) - f'(s)) / (f(s) - s),

with the obvious limits at fixed points.  `tail_gf_of_F` exploits this to
evaluate tail generating functions of F_t itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from scipy.integrate import solve_ivp

from .errors import DomainError, NotExtendableError, RegimeError
from .kernels import KernelMode, PsiKernel, get_kernel, koenigs, psi_integral
from .laws import (
    FiniteSupport,
    HarrisYule,
    ModifiedLinearFractional,
    OffspringLaw,
    hermite_divided_difference,
    moments,
)
from .numerics import solve_monotone
from .profiles import ExtendableProfile, get_profile

__all__ = [
    "Method",
    "TransitionResult",
    "F_closed",
    "F_ode",
    "F_implicit",
    "transition",
    "tail_gf_of_F",
    "absorption",
]

# Beyond this value of alpha * t the flow is inside the linearization region
# of the lower fixed point and the two-term Koenigs expansion is cheaper and
# more accurate than continued integration.
LINEARIZATION_THRESHOLD = 40.0
FIXED_POINT_TOL = 1e-13


class Method(str, Enum):
    ODE = "ode"
    IMPLICIT = "implicit"
    CLOSED = "closed"


@dataclass(frozen=True)
class TransitionResult:
    value: float
    method: Method
    err_estimate: float

    def __float__(self) -> float:
        return self.value


def _quadratic_coeffs(law: OffspringLaw) -> Optional[tuple]:
    """(p0, p1, p2) when f is a quadratic polynomial (possibly defective)."""
    if isinstance(law, ModifiedLinearFractional) and law.p == 0.0:
        return (law.p0, law.p1, law.tail_mass)
    coeffs = law.coefficients
    if coeffs is None:
        return None
    if len(coeffs) > 3 and any(c != 0.0 for c in coeffs[3:]):
        return None
    c = tuple(coeffs) + (0.0, 0.0, 0.0)
    if c[2] == 0.0:
        return None
    return (c[0], c[1], c[2])


def _clip_unit(x: float, lo: float, hi: float) -> float:
    return min(max(x, lo), hi)


def F_closed(law: OffspringLaw, t: float, s: float) -> Optional[TransitionResult]:
    """Closed-form F_t(s) when the law admits one, else None."""
    _validate_ts(law, t, s)
    if t == 0.0:
        return TransitionResult(float(s), Method.CLOSED, 0.0)
    quad = _quadratic_coeffs(law)
    if quad is not None:
        p0, p1, p2 = quad
        disc = (1.0 - p1) ** 2 - 4.0 * p0 * p2
        if disc <= 1e-28:
            # Critical quadratic: f(s) - s = p2 (1 - s)^2.
            u = 1.0 - s
            val = 1.0 - u / (1.0 + p2 * t * u)
            return TransitionResult(val, Method.CLOSED, 4e-16 * (1.0 + p2 * t))
        rate = math.sqrt(disc)
        q = ((1.0 - p1) - rate) / (2.0 * p2)
        r = ((1.0 - p1) + rate) / (2.0 * p2)
        e = math.exp(-rate * t)
        val = (q * (r - s) + r * (s - q) * e) / ((r - s) + (s - q) * e)
        return TransitionResult(val, Method.CLOSED, 4e-16 / max(1e-3, abs(r - s)))
    if isinstance(law, HarrisYule):
        k = float(law.k)
        if s == 0.0:
            return TransitionResult(0.0, Method.CLOSED, 0.0)
        if s == 1.0:
            return TransitionResult(1.0, Method.CLOSED, 0.0)
        log_sk = -k * math.log(s)
        if k * t + log_sk > 500.0:
            return TransitionResult(s * math.exp(-t), Method.CLOSED, 1e-16)
        x = math.exp(k * t) * math.expm1(log_sk) + 1.0
        return TransitionResult(x ** (-1.0 / k), Method.CLOSED, 4e-16)
    return None


def _validate_ts(law: OffspringLaw, t: float, s: float) -> None:
    if t < 0.0 or not math.isfinite(t):
        raise DomainError(f"need t >= 0, got {t!r}")
    if isinstance(s, complex):
        raise DomainError("transition functional takes real s")
    if s < 0.0:
        raise DomainError(f"need s >= 0, got {s!r}")
    try:
        prof = get_profile(law)
        bound = prof.r
    except NotExtendableError:
        bound = law.radius
    if s > bound:
        raise DomainError(f"need s <= {bound!r}, got {s!r}")


def F_ode(law: OffspringLaw, t: float, s: float, *, rtol: float = 1e-11,
          atol: float = 1e-14) -> TransitionResult:
    """F_t(s) by direct integration of the flow (reference route)."""
    _validate_ts(law, t, s)
    s = float(s)
    if t == 0.0:
        return TransitionResult(s, Method.ODE, 0.0)
    prof: Optional[ExtendableProfile]
    try:
        prof = get_profile(law)
    except NotExtendableError:
        prof = None
    if prof is not None and not prof.is_critical:
        if abs(s - prof.q) <= FIXED_POINT_TOL:
            return TransitionResult(prof.q, Method.ODE, 0.0)
        if abs(s - prof.r) <= FIXED_POINT_TOL:
            return TransitionResult(prof.r, Method.ODE, 0.0)
        if prof.alpha * t > LINEARIZATION_THRESHOLD and s < prof.r:
            kernel = get_kernel(law)
            kval = koenigs(kernel, s)
            e = math.exp(-prof.alpha * t)
            f2q = law.derivative(prof.q, 2)
            val = prof.q + kval * e + (f2q / (2.0 * prof.alpha)) * (kval * e) ** 2
            err = abs(kval * e) ** 3 * (1.0 + (f2q / prof.alpha) ** 2)
            return TransitionResult(val, Method.ODE, err + 1e-16)
    target = 1.0 if (prof is not None and prof.is_critical) else None
    if target is None:
        target = prof.q if prof is not None else _lower_target(law)
    if abs(s - target) <= FIXED_POINT_TOL and abs(law.evaluate(s) - s) <= FIXED_POINT_TOL:
        return TransitionResult(s, Method.ODE, 0.0)

    sol = solve_ivp(
        lambda _t, y: [law.evaluate(y[0]) - y[0]],
        (0.0, float(t)),
        [s],
        method="DOP853",
        rtol=rtol,
        atol=atol,
    )
    if not sol.success:
        raise RegimeError(f"flow integration failed: {sol.message}")
    val = float(sol.y[0][-1])
    lo, hi = min(s, target), max(s, target)
    val = _clip_unit(val, lo, hi)
    return TransitionResult(val, Method.ODE, rtol * max(abs(val), 1.0) + atol)


def _lower_target(law: OffspringLaw) -> float:
    from .profiles import fixed_points

    return fixed_points(law)[0]


def _critical_time_of(law: OffspringLaw, kernel: PsiKernel, s: float, F: float,
                      m2: float, m3: float) -> float:
    """The critical implicit relation: time needed to flow from s to F."""
    lead = (F - s) / (m2 * (1.0 - s) * (1.0 - F))
    logterm = (m3 / m2**2) * math.log((1.0 - F) / (1.0 - s))
    return lead - logterm + psi_integral(kernel, s, F)


def F_implicit(law: OffspringLaw, prof: Optional[ExtendableProfile], kernel:
               Optional[PsiKernel], t: float, s: float) -> TransitionResult:
    """F_t(s) by root-finding on the time-integrated flow.

    Non-critical extendable laws are solved in the coordinate
    L = log((F - q)/(s - q)), which is smooth on both sides of q; critical
    laws are solved directly in F.  Requires beta < inf, and in the critical
    case m3 < inf.
    """
    _validate_ts(law, t, s)
    s = float(s)
    if prof is None:
        prof = get_profile(law)
    if kernel is None:
        kernel = get_kernel(law)
    if t == 0.0:
        return TransitionResult(s, Method.IMPLICIT, 0.0)

    if kernel.mode is KernelMode.CRITICAL:
        m = moments(law)
        if not math.isfinite(m.m3):
            raise RegimeError("critical implicit route needs f'''(1) < inf")
        if abs(s - 1.0) <= FIXED_POINT_TOL:
            return TransitionResult(1.0, Method.IMPLICIT, 0.0)
        if s > 1.0 - 1e-9:
            # Too close to the fixed point for the implicit relation; use the
            # quadratic-flow approximation (relative error ~ m3 (1-s) log t).
            u = (1.0 - s) / (1.0 + m.m2 * t * (1.0 - s))
            return TransitionResult(1.0 - u, Method.IMPLICIT,
                                    abs(m.m3) * (1.0 - s) * u * (1.0 + math.log1p(t)))
        g = lambda F: _critical_time_of(law, kernel, s, F, m.m2, m.m3) - t
        hi = 1.0 - 1e-16
        val = solve_monotone(g, s, hi, xtol=1e-16)
        err = 1e-15 + 1e-12 * m.m2 * (1.0 - val) ** 2
        return TransitionResult(val, Method.IMPLICIT, err)

    if not math.isfinite(prof.beta) or prof.gamma == 0.0:
        raise RegimeError("implicit route needs f'(r) < inf")
    q, r, gamma = prof.q, prof.r, prof.gamma
    if abs(s - q) <= FIXED_POINT_TOL:
        return TransitionResult(q, Method.IMPLICIT, 0.0)
    if abs(s - r) <= FIXED_POINT_TOL:
        return TransitionResult(r, Method.IMPLICIT, 0.0)
    if s > r:
        raise DomainError(f"implicit route needs s <= r = {r!r}")
    alpha_t = prof.alpha * t

    def g(L: float) -> float:
        F = q + (s - q) * math.exp(L)
        return (
            L
            + alpha_t
            - gamma * math.log((r - F) / (r - s))
            - psi_integral(kernel, s, F)
        )

    L = solve_monotone(g, -(alpha_t + 2.0), 0.0, xtol=1e-15, expand_down=True)
    val = q + (s - q) * math.exp(L)
    err = abs(val - q) * 1e-13 + 1e-16
    return TransitionResult(val, Method.IMPLICIT, err)


def transition(law: OffspringLaw, t: float, s: float, method: str = "auto"):
    """Dispatch to a transition route; `method="all"` returns every route."""
    if method == "closed":
        res = F_closed(law, t, s)
        if res is None:
            raise DomainError(f"no closed form registered for {type(law).__name__}")
        return res
    if method == "ode":
        return F_ode(law, t, s)
    if method == "implicit":
        return F_implicit(law, None, None, t, s)
    if method == "auto":
        res = F_closed(law, t, s)
        if res is not None:
            return res
        try:
            return F_implicit(law, None, None, t, s)
        except (NotExtendableError, RegimeError):
            return F_ode(law, t, s)
    if method == "all":
        out = {}
        res = F_closed(law, t, s)
        if res is not None:
            out["closed"] = res
        try:
            out["implicit"] = F_implicit(law, None, None, t, s)
        except (NotExtendableError, RegimeError, DomainError):
            pass
        out["ode"] = F_ode(law, t, s)
        return out
    raise ValueError(f"unknown method {method!r}")


class _FlowMap:
    """Adapter exposing s -> F_t(s) with the derivative identities of an
    autonomous flow, for use in confluent divided differences."""

    def __init__(self, law: OffspringLaw, t: float, method: str):
        self.law = law
        self.t = float(t)
        self.method = method
        try:
            self.prof = get_profile(law)
        except NotExtendableError:
            self.prof = None
        self._cache = {}

    def evaluate(self, s: float) -> float:
        key = s
        if key in self._cache:
            return self._cache[key]
        if self.prof is not None:
            p = self.prof
            if p.is_critical and abs(s - 1.0) <= FIXED_POINT_TOL:
                val = 1.0
            elif not p.is_critical and abs(s - p.q) <= FIXED_POINT_TOL:
                val = p.q
            elif not p.is_critical and abs(s - p.r) <= FIXED_POINT_TOL:
                val = p.r
            else:
                val = transition(self.law, self.t, s, self.method).value
        else:
            val = transition(self.law, self.t, s, self.method).value
        self._cache[key] = val
        return val

    def derivative(self, s: float, order: int = 1) -> float:
        law, t = self.law, self.t
        denom = law.evaluate(s) - s
        if abs(denom) > FIXED_POINT_TOL:
            F = self.evaluate(s)
            d1 = (law.evaluate(F) - F) / denom
            if order == 1:
                return d1
            if order == 2:
                return d1 * (law.derivative(F, 1) - law.derivative(s, 1)) / denom
            raise DomainError("flow-map derivatives available up to order 2")
        # s is a fixed point of f, hence of F_t.
        lam = law.derivative(s, 1) - 1.0
        d1 = math.exp(lam * t)
        if order == 1:
            return d1
        if order == 2:
            f2 = law.derivative(s, 2)
            if abs(lam) <= 1e-14:
                return f2 * t  # critical: F''_t(1) = f''(1) t
            return d1 * f2 * (d1 - 1.0) / lam
        raise DomainError("flow-map derivatives available up to order 2")


def tail_gf_of_F(law: OffspringLaw, t: float, points, method: str = "implicit"):
    """Tail generating function of s -> F_t(s) over the given points.

    Coincident points may appear with multiplicity at most 3 (derivatives of
    the flow map are available up to order 2).
    """
    pts = tuple(float(p) for p in points)
    if not pts:
        raise DomainError("at least one argument is required")
    for p in pts:
        _validate_ts(law, t, p)
    flow = _FlowMap(law, t, method)
    if len(pts) == 1:
        return flow.evaluate(pts[0])
    return hermite_divided_difference(flow, pts)


def absorption(law: OffspringLaw, t: float, method: str = "auto") -> dict:
    """P(extinct), P(killed), P(alive) at time t from a single ancestor.

    extinct = {Z_t = 0}; killed = {Z_t = Delta} (only defective laws);
    alive = everything else.  The three values sum to 1.
    """
    f0 = transition(law, t, 0.0, method).value
    f1 = transition(law, t, 1.0, method).value
    p_extinct = _clip_unit(f0, 0.0, 1.0)
    p_killed = _clip_unit(1.0 - f1, 0.0, 1.0)
    p_alive = max(0.0, f1 - f0)
    total = p_extinct + p_killed + p_alive
    return {
        "p_extinct": p_extinct / total,
        "p_killed": p_killed / total,
        "p_alive": p_alive / total,
    }
