"""Offspring laws and tail generating functions.

An offspring law is a probability generating function f(s) = sum_k p_k s^k
whose mass may be deficient: the defect p_delta = 1 - f(1) is the probability
that a splitting particle sends the whole process to the killing state, where
s^Delta = 0 by convention.

The n-argument tail generating function of f,

    v(s_1, ..., s_n) = sum_{i_1..i_n >= 0} v_{i_1+...+i_n+n-1} s_1^{i_1} ... s_n^{i_n},

with v_j = p_j, is symmetric, satisfies the exchange recursion

    v(s_1..s_n) = (v(s_1..s_{n-1}) - v(s_2..s_n)) / (s_1 - s_n),

and coincides with the Newton divided difference of f of order n-1.  Repeated
arguments follow the confluent (Hermite) rule: n extra copies of s insert
(1/n!) d^n/ds^n.  Two evaluation routes are provided: exact summation for laws
with finitely many offspring probabilities (via complete homogeneous symmetric
polynomials) and a confluent divided-difference table for parametric families.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial
from typing import Optional, Sequence, Union

import numpy as np

from .errors import ConstraintError, DivergenceError, DomainError, QuadratureError
from .numerics import adaptive_quadrature, cauchy_coefficients, extrapolate_power_tail

Scalar = Union[float, complex]

#: tolerance scale: arguments closer than this (times max(1, |s|)) are confluent
COINCIDENCE_TOL = 1e-8


# ---------------------------------------------------------------------------
# law variants
# ---------------------------------------------------------------------------


class OffspringLaw:
    """Common interface for offspring laws; subclasses are frozen dataclasses."""

    def evaluate(self, s: Scalar) -> Scalar:
        raise NotImplementedError

    def derivative(self, s: Scalar, order: int = 1) -> Scalar:
        raise NotImplementedError

    def coefficient(self, k: int) -> float:
        raise NotImplementedError

    @property
    def coefficients(self) -> Optional[tuple]:
        """Full coefficient tuple when the support is finite, else None."""
        return None

    @property
    def defect(self) -> float:
        raise NotImplementedError

    @property
    def radius(self) -> float:
        raise NotImplementedError

    def _check_domain(self, s: Scalar, *, allow_radius: bool = False):
        if isinstance(s, complex):
            if abs(s) >= self.radius:
                raise DomainError(f"|s|={abs(s)} outside radius {self.radius}")
            return
        if s < 0.0:
            raise DomainError(f"s={s} is negative")
        if s > self.radius or (s == self.radius and not allow_radius):
            raise DomainError(f"s={s} outside radius {self.radius}")


def _poly_eval(coeffs, s):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * s + c
    return acc


def _poly_derivative(coeffs, s, order):
    if order >= len(coeffs):
        return 0.0
    acc = 0.0
    for k in range(len(coeffs) - 1, order - 1, -1):
        acc = acc * s + coeffs[k] * math.perm(k, order)
    return acc


@dataclass(frozen=True)
class FiniteSupport(OffspringLaw):
    """Finitely many offspring probabilities (p_0, ..., p_K) plus a defect."""

    coeffs: tuple
    defect_mass: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))
        if not self.coeffs:
            raise ConstraintError("coeffs must be nonempty")
        if any(c < 0.0 for c in self.coeffs) or self.defect_mass < 0.0:
            raise ConstraintError("offspring probabilities must be nonnegative")
        total = math.fsum(self.coeffs) + self.defect_mass
        if abs(total - 1.0) > 1e-12:
            raise ConstraintError(f"probabilities must sum to 1 (got {total!r})")
        if len(self.coeffs) > 1 and self.coeffs[1] == 1.0:
            raise ConstraintError("p_1 = 1 is excluded (no branching)")

    @property
    def coefficients(self):
        return self.coeffs

    @property
    def defect(self):
        return self.defect_mass

    @property
    def radius(self):
        return math.inf

    @property
    def degree(self):
        d = len(self.coeffs) - 1
        while d > 0 and self.coeffs[d] == 0.0:
            d -= 1
        return d

    def evaluate(self, s):
        self._check_domain(s)
        return _poly_eval(self.coeffs, s)

    def derivative(self, s, order=1):
        if order == 0:
            return self.evaluate(s)
        self._check_domain(s)
        return _poly_derivative(self.coeffs, s, order)

    def coefficient(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0.0


@dataclass(frozen=True)
class ModifiedLinearFractional(OffspringLaw):
    """p_0 + p_1 s + (1 - p_0 - p_1 - p_delta) s^2 (1-p) / (1 - p s).

    Offspring counts >= 2 are shifted-geometric:
    P(X = 2 + k | 2 <= X < infinity) = (1-p) p^k.
    """

    p0: float
    p1: float
    p_delta: float
    p: float

    def __post_init__(self):
        for name in ("p0", "p1", "p_delta", "p"):
            v = getattr(self, name)
            if not (0.0 <= v < 1.0):
                raise ConstraintError(f"{name}={v} must lie in [0, 1)")
        if self.p0 + self.p1 + self.p_delta >= 1.0:
            raise ConstraintError("p0 + p1 + p_delta must be < 1")

    @property
    def tail_mass(self):
        return 1.0 - self.p0 - self.p1 - self.p_delta

    @property
    def defect(self):
        return self.p_delta

    @property
    def radius(self):
        return 1.0 / self.p if self.p > 0.0 else math.inf

    @property
    def is_critical(self):
        return self.p_delta == 0.0 and abs(self.p1 - (1.0 - self.p0 * (2.0 - self.p))) <= 1e-12

    def evaluate(self, s):
        self._check_domain(s)
        return self.p0 + self.p1 * s + self.tail_mass * s * s * (1.0 - self.p) / (1.0 - self.p * s)

    def derivative(self, s, order=1):
        if order == 0:
            return self.evaluate(s)
        self._check_domain(s, allow_radius=True)
        if not isinstance(s, complex) and s == self.radius:
            return math.inf
        c2 = self.tail_mass
        p = self.p
        if p == 0.0:
            if order == 1:
                return self.p1 + 2.0 * c2 * s
            return 2.0 * c2 if order == 2 else 0.0
        # s^2/(1-ps) = -s/p - 1/p^2 + (1/p^2)/(1-ps)
        u = 1.0 - p * s
        if order == 1:
            return self.p1 + (c2 * (1.0 - p) / p) * (1.0 / (u * u) - 1.0)
        return c2 * (1.0 - p) * factorial(order) * p ** (order - 2) / u ** (order + 1)

    def coefficient(self, k):
        if k == 0:
            return self.p0
        if k == 1:
            return self.p1
        return self.tail_mass * (1.0 - self.p) * self.p ** (k - 2)


@dataclass(frozen=True)
class Trifurcation(OffspringLaw):
    """Cubic law p_0 + p_2 s^2 + p_3 s^3 with implicit defect."""

    p0: float
    p2: float
    p3: float

    def __post_init__(self):
        for name in ("p0", "p2", "p3"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ConstraintError(f"{name}={v} must lie in [0, 1]")
        if self.p3 <= 0.0:
            raise ConstraintError("p3 must be positive")
        if self.p0 + self.p2 + self.p3 > 1.0 + 1e-12:
            raise ConstraintError("p0 + p2 + p3 must not exceed 1")

    @property
    def coefficients(self):
        return (self.p0, 0.0, self.p2, self.p3)

    @property
    def defect(self):
        return max(0.0, 1.0 - self.p0 - self.p2 - self.p3)

    @property
    def radius(self):
        return math.inf

    def evaluate(self, s):
        self._check_domain(s)
        return _poly_eval(self.coefficients, s)

    def derivative(self, s, order=1):
        if order == 0:
            return self.evaluate(s)
        self._check_domain(s)
        return _poly_derivative(self.coefficients, s, order)

    def coefficient(self, k):
        c = self.coefficients
        return c[k] if 0 <= k < len(c) else 0.0


@dataclass(frozen=True)
class PowerFractional(OffspringLaw):
    """f(s) = r - (a (r-s)^{-theta} + (1-a) (r-q)^{-theta})^{-1/theta}.

    Fixed points q and r are the parameters; f'(q) = a, f'(r) = a^{-1/theta},
    and f''(r) = +infinity for theta in (0, 1).
    """

    q: float
    r: float
    a: float
    theta: float

    def __post_init__(self):
        if not (0.0 <= self.q <= 1.0 < self.r < math.inf):
            raise ConstraintError("need 0 <= q <= 1 < r < infinity")
        if not (0.0 < self.a < 1.0):
            raise ConstraintError("a must lie in (0, 1)")
        if not (0.0 < self.theta < 1.0):
            raise ConstraintError("theta must lie in (0, 1)")

    @property
    def _b(self):
        return (1.0 - self.a) * (self.r - self.q) ** (-self.theta)

    @property
    def defect(self):
        if self.q == 1.0:
            return 0.0
        return 1.0 - float(self.evaluate(1.0))

    @property
    def radius(self):
        return self.r

    def _g(self, s):
        return self.a * (self.r - s) ** (-self.theta) + self._b

    def evaluate(self, s):
        self._check_domain(s, allow_radius=True)
        if not isinstance(s, complex) and s == self.r:
            return self.r
        return self.r - self._g(s) ** (-1.0 / self.theta)

    def derivative(self, s, order=1):
        if order == 0:
            return self.evaluate(s)
        self._check_domain(s, allow_radius=True)
        th = self.theta
        a = self.a
        at_radius = not isinstance(s, complex) and s == self.r
        if at_radius:
            if order == 1:
                return a ** (-1.0 / th)
            return math.inf
        g = self._g(s)
        rs = self.r - s
        g1 = a * th * rs ** (-th - 1.0)
        if order == 1:
            return (1.0 / th) * g ** (-1.0 / th - 1.0) * g1
        g2 = a * th * (th + 1.0) * rs ** (-th - 2.0)
        e = -1.0 / th
        if order == 2:
            h2 = e * (e - 1.0) * g ** (e - 2.0) * g1 * g1 + e * g ** (e - 1.0) * g2
            return -h2
        if order == 3:
            g3 = a * th * (th + 1.0) * (th + 2.0) * rs ** (-th - 3.0)
            h3 = (
                e * (e - 1.0) * (e - 2.0) * g ** (e - 3.0) * g1 ** 3
                + 3.0 * e * (e - 1.0) * g ** (e - 2.0) * g1 * g2
                + e * g ** (e - 1.0) * g3
            )
            return -h3
        raise NotImplementedError(
            f"PowerFractional derivatives are implemented up to order 3 (asked {order})"
        )

    def coefficient(self, k):
        return _pf_coefficient_table(self, max(k + 1, 64))[k]


@lru_cache(maxsize=32)
def _pf_coefficient_table(law: "PowerFractional", count: int) -> np.ndarray:
    rho = 0.97 * law.r
    return cauchy_coefficients(law.evaluate, count - 1, rho, certificate_tol=1e-12)


@dataclass(frozen=True)
class HarrisYule(OffspringLaw):
    """Deterministic splitting into k + 1 particles: f(s) = s^{k+1}."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ConstraintError("k must be a positive integer")

    @property
    def coefficients(self):
        return (0.0,) * (self.k + 1) + (1.0,)

    @property
    def defect(self):
        return 0.0

    @property
    def radius(self):
        return math.inf

    def evaluate(self, s):
        self._check_domain(s)
        return s ** (self.k + 1)

    def derivative(self, s, order=1):
        if order == 0:
            return self.evaluate(s)
        self._check_domain(s)
        n = self.k + 1
        if order > n:
            return 0.0
        return math.perm(n, order) * s ** (n - order)

    def coefficient(self, k):
        return 1.0 if k == self.k + 1 else 0.0


@dataclass(frozen=True)
class MutationStopped(OffspringLaw):
    """Kill each child independently with probability mu: f(s) = g(s (1 - mu)).

    The base law must be proper (no defect); the defect of the stopped law is
    1 - g(1 - mu).
    """

    base: OffspringLaw
    mu: float

    def __post_init__(self):
        if not (0.0 <= self.mu < 1.0):
            raise ConstraintError("mu must lie in [0, 1)")
        if self.base.defect > 1e-12:
            raise ConstraintError("base law must have zero defect")

    @property
    def defect(self):
        return 1.0 - float(self.base.evaluate(1.0 - self.mu))

    @property
    def radius(self):
        return self.base.radius / (1.0 - self.mu)

    @property
    def coefficients(self):
        base = self.base.coefficients
        if base is None:
            return None
        return tuple(c * (1.0 - self.mu) ** k for k, c in enumerate(base))

    def evaluate(self, s):
        self._check_domain(s)
        return self.base.evaluate(s * (1.0 - self.mu))

    def derivative(self, s, order=1):
        if order == 0:
            return self.evaluate(s)
        self._check_domain(s)
        shrink = 1.0 - self.mu
        return shrink ** order * self.base.derivative(s * shrink, order)

    def coefficient(self, k):
        return self.base.coefficient(k) * (1.0 - self.mu) ** k


# ---------------------------------------------------------------------------
# tail generating functions
# ---------------------------------------------------------------------------


def series_tail_gf(coeffs: Sequence[float], points: Sequence[Scalar]) -> Scalar:
    """Exact tail GF of a finite series via complete homogeneous symmetric polys.

    Returns exactly 0.0 once the number of arguments exceeds degree + 1.
    """
    pts = list(points)
    n = len(pts)
    if n == 0:
        raise DomainError("at least one argument is required")
    kmax = len(coeffs) - 1
    mmax = kmax - (n - 1)
    if mmax < 0:
        return 0.0
    h = [0.0] * (mmax + 1)
    h[0] = 1.0
    for x in pts:
        for m in range(1, mmax + 1):
            h[m] = h[m] + x * h[m - 1]
    return sum(coeffs[m + n - 1] * h[m] for m in range(mmax + 1))


def _cluster_points(points, tol=COINCIDENCE_TOL):
    clusters = []  # [sum, count, representative]
    for p in points:
        for c in clusters:
            if abs(p - c[2]) <= tol * max(1.0, abs(p), abs(c[2])):
                c[0] += p
                c[1] += 1
                c[2] = c[0] / c[1]
                break
        else:
            clusters.append([p, 1, p])
    return [(c[2], c[1]) for c in clusters]


def hermite_divided_difference(law: OffspringLaw, points: Sequence[Scalar]) -> Scalar:
    """Confluent divided difference of f over the given points (order n-1)."""
    clusters = _cluster_points(points)
    nodes = []
    for rep, mult in clusters:
        nodes.extend([rep] * mult)
    n = len(nodes)
    values = {}
    for rep, _ in clusters:
        values[rep] = law.evaluate(rep)
    col = [values[z] for z in nodes]  # current column: order w divided differences
    result = col[0] if n == 1 else None
    derivs = {}
    for w in range(1, n):
        new = []
        for i in range(n - w):
            j = i + w
            if nodes[i] == nodes[j]:
                key = (nodes[i], w)
                if key not in derivs:
                    d = law.derivative(nodes[i], w)
                    if isinstance(d, float) and math.isinf(d):
                        raise DivergenceError(
                            f"derivative of order {w} diverges at s={nodes[i]}"
                        )
                    derivs[key] = d / factorial(w)
                new.append(derivs[key])
            else:
                new.append((col[i + 1] - col[i]) / (nodes[j] - nodes[i]))
        col = new
    return col[0]


def tail_gf(law: OffspringLaw, points: Sequence[Scalar], method: str = "auto") -> Scalar:
    """n-argument tail generating function v(s_1, ..., s_n).

    method: "auto" (exact series for finite-support laws, divided differences
    otherwise), "series", or "divided_difference".
    """
    pts = tuple(points)
    if not pts:
        raise DomainError("at least one argument is required")
    for p in pts:
        law._check_domain(p, allow_radius=True)
    if method == "auto":
        method = "series" if law.coefficients is not None else "divided_difference"
    if method == "series":
        coeffs = law.coefficients
        if coeffs is None:
            raise DomainError("series route requires a finite-support law")
        return series_tail_gf(coeffs, pts)
    if method == "divided_difference":
        if len(pts) == 1:
            return law.evaluate(pts[0])
        return hermite_divided_difference(law, pts)
    raise ValueError(f"unknown method {method!r}")


# ---------------------------------------------------------------------------
# moments and x log x functionals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Moments:
    """Factorial-scaled derivatives at 1: m1 = f'(1), m2 = f''(1)/2, m3 = f'''(1)/6."""

    m1: float
    m2: float
    m3: float


def moments(law: OffspringLaw) -> Moments:
    return Moments(
        m1=float(law.derivative(1.0, 1)),
        m2=float(law.derivative(1.0, 2)) / 2.0,
        m3=float(law.derivative(1.0, 3)) / 6.0,
    )


def xlogx_is_finite(law: OffspringLaw, a: float, n: int) -> bool:
    """Whether sum_{k>=2} p_k a^k k^n ln k converges (structural verdict)."""
    if isinstance(law, MutationStopped):
        return xlogx_is_finite(law.base, a * (1.0 - law.mu), n)
    if law.coefficients is not None:
        return True
    if isinstance(law, ModifiedLinearFractional):
        return law.p == 0.0 or a * law.p < 1.0
    if isinstance(law, PowerFractional):
        if a < law.r:
            return True
        # p_k r^k ~ C k^{-(2+theta)} up to slow variation
        return n < 1.0 + law.theta
    raise DomainError(f"no structural x log x rule for {type(law).__name__}")


def xlogx_moment(law: OffspringLaw, a: float, n: int) -> float:
    """sum_{k>=2} p_k a^k k^n ln k as an extended real.

    Finiteness is decided structurally; at an algebraically convergent
    boundary (PowerFractional with a = r) the value is a partial sum with a
    power-law tail completion and should be treated as an estimate.
    """
    if a < 0.0 or a > law.radius:
        raise DomainError(f"a={a} outside [0, radius]")
    if not xlogx_is_finite(law, a, n):
        return math.inf
    if isinstance(law, MutationStopped):
        return xlogx_moment(law.base, a * (1.0 - law.mu), n)
    coeffs = law.coefficients
    if coeffs is not None:
        return math.fsum(
            coeffs[k] * a**k * k**n * math.log(k) for k in range(2, len(coeffs))
        )
    if isinstance(law, ModifiedLinearFractional):
        total = 0.0
        k = 2
        while True:
            term = law.coefficient(k) * a**k * k**n * math.log(k)
            total += term
            if k > 4 and term < 1e-18 * max(total, 1e-300):
                return total
            if k > 10_000_000:
                return total
            k += 1
    if isinstance(law, PowerFractional):
        kmax = 400
        table = _pf_coefficient_table(law, kmax + 1)
        partial = math.fsum(
            table[k] * a**k * k**n * math.log(k) for k in range(2, kmax + 1)
        )
        if a < 0.99 * law.r:
            return partial
        # algebraic tail: terms ~ C k^{-s} ln k with s = 2 + theta - n
        s = 2.0 + law.theta - n
        t_last = table[kmax] * a**kmax * kmax**n * math.log(kmax)
        lk = math.log(kmax)
        tail = t_last * kmax * ((s - 1.0) * lk + 1.0) / ((s - 1.0) ** 2 * lk)
        return partial + tail
    raise DomainError(f"no x log x rule for {type(law).__name__}")


def xlogx_integral(law: OffspringLaw, a: float, n: int, method: str = "auto") -> float:
    """integral_0^a v(a, ..., a, x) dx with n+1 leading copies of a.

    Finite iff the matching x log x moment is finite.  method "series" uses
    the exact double sum (finite-support laws only); "quadrature" integrates
    the tail GF adaptively; "auto" prefers the exact sum when available.
    """
    if a < 0.0 or a > law.radius:
        raise DomainError(f"a={a} outside [0, radius]")
    if not xlogx_is_finite(law, a, n):
        return math.inf
    coeffs = law.coefficients
    if method == "auto":
        method = "series" if coeffs is not None else "quadrature"
    if method == "series":
        if coeffs is None:
            raise DomainError("series route requires a finite-support law")
        kmax = len(coeffs) - 1
        total = 0.0
        for j in range(n, kmax):
            cj = comb(j, n) * a ** (j - n)
            for i in range(0, kmax - j):
                total += coeffs[i + j + 1] * cj * a ** (i + 1) / (i + 1)
        return total
    if method != "quadrature":
        raise ValueError(f"unknown method {method!r}")

    head = (a,) * (n + 1)

    def integrand(x):
        return tail_gf(law, head + (x,))

    try:
        value, _ = adaptive_quadrature(integrand, 0.0, a, abs_tol=1e-11)
        return value
    except (DivergenceError, QuadratureError):
        pass
    # integrable endpoint singularity at x = a: improper limit + extrapolation
    deltas = (1e-3, 1e-4, 1e-5)
    vals = []
    for d in deltas:
        v, _ = adaptive_quadrature(integrand, 0.0, a - d, abs_tol=1e-11)
        vals.append(v)
    return extrapolate_power_tail(vals, deltas)


# ---------------------------------------------------------------------------
# shape-parametrized modified linear fractional laws
# ---------------------------------------------------------------------------


def mlf_critical(p0: float, p: float) -> ModifiedLinearFractional:
    """Critical member: f(s) = s + p0 (1-s)^2 / (1 - p s)."""
    return ModifiedLinearFractional(p0, 1.0 - p0 * (2.0 - p), 0.0, p)


def mlf_from_shape(q: float, r: float, alpha: float, gamma: float) -> ModifiedLinearFractional:
    """Construct the unique MLF law with fixed points (q, r) and rates (alpha, alpha/gamma).

    Raises ConstraintError naming the violated inequality; the returned law is
    re-verified against the requested shape to 1e-10.
    """
    if not (0.0 <= q <= 1.0 <= r < math.inf):
        raise ConstraintError("need 0 <= q <= 1 <= r < infinity")
    if not q < r:
        raise ConstraintError("need q < r (critical laws: use mlf_critical)")
    if not (0.0 < alpha < 1.0):
        raise ConstraintError("need 0 < alpha < 1")
    if not (0.0 < gamma <= 1.0):
        raise ConstraintError("need 0 < gamma <= 1")
    bound = 1.0 - gamma + (r - q) ** 2 * gamma / (r * r - gamma * q * q)
    if alpha > bound + 1e-14:
        raise ConstraintError(
            f"need alpha <= 1 - gamma + (r-q)^2 gamma / (r^2 - gamma q^2) = {bound!r}"
        )
    denom = r - gamma * q
    p0 = alpha * q * r / denom
    p1 = 1.0 - alpha * (r * r - gamma * q * q) / denom**2
    if r == 1.0:
        p_delta = 0.0
    else:
        p_delta = alpha * (r - 1.0) * (1.0 - q) / (r - 1.0 + gamma * (1.0 - q))
    p = (1.0 - gamma) / denom
    law = ModifiedLinearFractional(p0, max(p1, 0.0), p_delta, p)
    # round-trip check of the shape
    beta = alpha / gamma
    checks = (
        ("f(q) = q", float(law.evaluate(q)) - q),
        ("f(r) = r", float(law.evaluate(r)) - r),
        ("f'(q) = 1 - alpha", float(law.derivative(q, 1)) - (1.0 - alpha)),
        ("f'(r) = 1 + beta", float(law.derivative(r, 1)) - (1.0 + beta)),
    )
    for name, dev in checks:
        if abs(dev) > 1e-10:
            raise ConstraintError(f"shape round-trip failed: {name} off by {dev!r}")
    return law
