"""Low-level numerical routines shared across the package.

Adaptive Gauss-Kronrod quadrature (real or complex integrands, including
complex segments), trapezoidal Cauchy-integral coefficient extraction with a
node-doubling certificate, monotone root solving on expandable brackets, and
small extrapolation helpers.
"""

from __future__ import annotations

import cmath
import math
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError, ExtractionError, QuadratureError

# (G7, K15) pair; nonnegative abscissae, symmetric about 0.
_K15_NODES = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_K15_WEIGHTS = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
# Gauss-7 weights paired with K15 nodes at odd indices (1, 3, 5, 7).
_G7_WEIGHTS = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


def _gk15(fn, x0, x1):
    """One (G7, K15) panel on [x0, x1]; returns (kronrod, |kronrod - gauss|)."""
    c = 0.5 * (x0 + x1)
    h = 0.5 * (x1 - x0)
    k = 0.0
    g = 0.0
    for i, xi in enumerate(_K15_NODES):
        if xi == 0.0:
            v = fn(c)
            k += _K15_WEIGHTS[i] * v
            g += _G7_WEIGHTS[3] * v
            continue
        vp = fn(c + h * xi)
        vm = fn(c - h * xi)
        k += _K15_WEIGHTS[i] * (vp + vm)
        if i % 2 == 1:
            g += _G7_WEIGHTS[i // 2] * (vp + vm)
    return h * k, abs(h * (k - g))


def adaptive_quadrature(
    fn: Callable[[float], complex],
    a: float,
    b: float,
    *,
    abs_tol: float = 1e-11,
    max_panels: int = 1_000_000,
):
    """Integrate fn over [a, b] by adaptive bisection of (G7, K15) panels.

    Returns (value, err_estimate). Raises QuadratureError (carrying the best
    value and achieved estimate) if the panel budget is exhausted before the
    absolute tolerance is met.
    """
    if a == b:
        return 0.0, 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0
    span = b - a
    total = 0.0
    err = 0.0
    panels = 0
    stack = [(a, b, math.inf)]
    overflow = []  # accepted without refinement once the budget is gone
    while stack:
        x0, x1, parent_e = stack.pop()
        v, e = _gk15(fn, x0, x1)
        panels += 1
        width = x1 - x0
        share = abs_tol * width / span
        floor = 100.0 * np.finfo(float).eps * abs(v)
        # A smooth integrand drops the panel estimate by orders of magnitude
        # per bisection; an estimate stuck near half its parent's means the
        # panel is resolving evaluation noise, which refinement cannot beat.
        # Only panels whose error is ignorable may stall this way -- the
        # dyadic descent toward an integrable singularity also keeps a near
        # constant panel error, but a large one, and must keep refining.
        stalled = (width < 1e-3 * span and e > 0.3 * parent_e
                   and err + e <= 1e-7 * max(1.0, abs(total) + abs(v)))
        if e <= max(share, floor) or width <= 1e-15 * span or stalled:
            total += v
            err += e
        elif panels >= max_panels:
            overflow.append((v, e))
        else:
            mid = 0.5 * (x0 + x1)
            stack.append((x0, mid, e))
            stack.append((mid, x1, e))
    if overflow:
        total += sum(v for v, _ in overflow)
        err += sum(e for _, e in overflow)
        if err > abs_tol:
            raise QuadratureError(
                f"quadrature panel budget exhausted (achieved {err:.3e} > {abs_tol:.3e})",
                value=sign * total,
                err_estimate=err,
            )
    if err > 1e-6 * max(1.0, abs(total)):
        # Stalled panels are tolerated while their noise stays ignorable;
        # past this point the estimate is not trustworthy at any tolerance.
        raise QuadratureError(
            f"quadrature error estimate {err:.3e} too large for result {total:.3e}",
            value=sign * total,
            err_estimate=err,
        )
    return sign * total, err


def segment_quadrature(fn, z0, z1, *, abs_tol: float = 1e-11, max_panels: int = 1_000_000):
    """Integrate fn along the straight segment from z0 to z1 (complex allowed)."""
    if z0 == z1:
        return 0.0 + 0.0j if isinstance(z0, complex) or isinstance(z1, complex) else 0.0, 0.0
    dz = z1 - z0
    if not isinstance(dz, complex):
        return adaptive_quadrature(fn, z0, z1, abs_tol=abs_tol, max_panels=max_panels)
    val, err = adaptive_quadrature(
        lambda tau: fn(z0 + tau * dz) * dz, 0.0, 1.0, abs_tol=abs_tol, max_panels=max_panels
    )
    return val, err


def solve_monotone(
    fn: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    xtol: float = 1e-15,
    expand_down: bool = False,
    max_expand: int = 200,
) -> float:
    """Find the root of a function with a single sign change on [lo, hi].

    With expand_down=True the lower endpoint is pushed further down (doubling
    its distance to hi) until the sign changes, for brackets whose lower bound
    is only known asymptotically.
    """
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0 and expand_down:
        width = hi - lo
        for _ in range(max_expand):
            lo = hi - 2.0 * (hi - lo)
            flo = fn(lo)
            if flo == 0.0:
                return lo
            if flo * fhi < 0.0:
                break
            width *= 2.0
        else:
            raise BracketError("could not establish a sign change while expanding bracket")
    if flo * fhi > 0.0:
        raise BracketError(
            f"no sign change on [{lo!r}, {hi!r}] (f(lo)={flo!r}, f(hi)={fhi!r})"
        )
    return brentq(fn, lo, hi, xtol=xtol, rtol=8.9e-16, maxiter=200)


def cauchy_coefficients(
    fn: Callable[[complex], complex],
    n: int,
    radius: float,
    *,
    certificate_tol: float = 1e-9,
    min_nodes: int = 64,
    max_nodes: int = 1 << 18,
) -> np.ndarray:
    """Power-series coefficients c_0..c_n of fn around 0 by contour averaging.

    Samples fn on the circle of the given radius, averages with the FFT, and
    doubles the node count until two consecutive grids agree within
    certificate_tol on every requested coefficient.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    nodes = min_nodes
    while nodes < 8 * (n + 1):
        nodes *= 2
    # radius**(-k) in log space so large k stays finite
    scale = np.exp(-np.arange(n + 1) * math.log(radius))
    prev = None
    while nodes <= max_nodes:
        theta = 2.0 * np.pi * np.arange(nodes) / nodes
        samples = np.array([fn(radius * cmath.exp(1j * t)) for t in theta], dtype=complex)
        fhat = np.fft.fft(samples) / nodes
        coeffs = fhat[: n + 1].real * scale
        if prev is not None and np.max(np.abs(coeffs - prev)) <= certificate_tol:
            return coeffs
        prev = coeffs
        nodes *= 2
    raise ExtractionError(
        f"coefficient extraction failed node-doubling certificate at {max_nodes} nodes"
    )


def richardson_two_point(d_h: float, d_half: float) -> float:
    """First-order Richardson extrapolation for estimates with O(h) error."""
    return 2.0 * d_half - d_h


def extrapolate_power_tail(values: Sequence[float], deltas: Sequence[float]) -> float:
    """Limit of I(delta) as delta -> 0 assuming I(delta) = I - C delta^theta.

    Requires three values at deltas forming a fixed ratio (e.g. 1e-3, 1e-4,
    1e-5). The exponent theta is inferred from the successive differences.
    """
    i1, i2, i3 = values
    d1, d2, d3 = deltas
    ratio = d1 / d2
    if not math.isclose(ratio, d2 / d3, rel_tol=1e-9):
        raise ValueError("deltas must form a geometric sequence")
    num = i2 - i1
    den = i3 - i2
    if den == 0.0:
        return i3
    q = num / den
    if q <= 1.0:
        # differences not decaying geometrically; fall back to the last value
        return i3
    # q = ratio**theta
    return i3 + den / (q - 1.0)


def quadratic_through(points: Sequence[tuple[float, float]], x: float) -> float:
    """Evaluate the interpolating polynomial through the given (x, y) points."""
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    n = len(xs)
    coef = list(ys)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    acc = coef[-1]
    for i in range(n - 2, -1, -1):
        acc = acc * (x - xs[i]) + coef[i]
    return acc
