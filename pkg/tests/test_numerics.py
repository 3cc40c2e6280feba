import math

import numpy as np
import pytest

from tailgf.errors import BracketError, ExtractionError, QuadratureError
from tailgf.numerics import (
    adaptive_quadrature,
    cauchy_coefficients,
    extrapolate_power_tail,
    quadratic_through,
    richardson_two_point,
    solve_monotone,
)


def test_quadrature_polynomial_exact():
    val, err = adaptive_quadrature(lambda x: 3 * x**2 - 2 * x + 1, 0.0, 2.0, abs_tol=1e-13)
    assert abs(val - (8.0 - 4.0 + 2.0)) < 1e-13
    assert err < 1e-13


def test_quadrature_exponential():
    val, _ = adaptive_quadrature(math.exp, -1.0, 3.0, abs_tol=1e-13)
    assert abs(val - (math.exp(3.0) - math.exp(-1.0))) < 1e-11


def test_quadrature_reversed_limits():
    fwd, _ = adaptive_quadrature(math.sin, 0.0, 2.0)
    rev, _ = adaptive_quadrature(math.sin, 2.0, 0.0)
    assert abs(fwd + rev) < 1e-14


def test_quadrature_moderate_pole_offset():
    # simple pole approached to 1e-6: still resolvable in x-space
    val, _ = adaptive_quadrature(lambda x: 1.0 / (x - 0.25), 0.25 + 1e-6, 1.0, abs_tol=1e-12)
    assert abs(val - math.log(0.75 / 1e-6)) < 1e-10


def test_quadrature_noise_floor_tolerated():
    # jitter far below the signal must not stall refinement into the panel
    # budget; the accepted value still meets a realistic tolerance
    rng = np.random.default_rng(7)
    jitter = rng.standard_normal(4096) * 1e-13

    def noisy_cos(x):
        return math.cos(x) + jitter[int(abs(x) * 1e6) % 4096]

    val, err = adaptive_quadrature(noisy_cos, 0.0, 1.5, abs_tol=1e-12)
    assert abs(val - math.sin(1.5)) < 1e-9
    assert err < 1e-6


def test_quadrature_rejects_nonintegrable():
    with pytest.raises(QuadratureError):
        adaptive_quadrature(lambda x: 1.0 / x, 0.0, 1.0, abs_tol=1e-9)


def test_solve_monotone_root():
    root = solve_monotone(lambda x: x**3 - 2.0, 0.0, 2.0, xtol=1e-15)
    assert abs(root - 2.0 ** (1.0 / 3.0)) < 1e-14


def test_solve_monotone_needs_bracket():
    with pytest.raises(BracketError):
        solve_monotone(lambda x: x + 10.0, 0.0, 1.0)


def test_richardson_two_point():
    # D(h) = L + c h: the two-point form cancels the leading error term
    L, c = 0.7, 3.1
    d = lambda h: L + c * h
    assert abs(richardson_two_point(d(0.1), d(0.05)) - L) < 1e-12


def test_extrapolate_power_tail():
    # I(delta) = I0 + c delta^p with geometric deltas
    I0, c, p = 2.5, 1.3, 0.5
    deltas = (1e-3, 1e-4, 1e-5)
    vals = [I0 + c * d**p for d in deltas]
    assert abs(extrapolate_power_tail(vals, deltas) - I0) < 1e-6


def test_quadratic_through_degree():
    pts = [(0.0, 1.0), (1.0, 0.0), (2.0, 5.0), (3.0, 22.0)]
    # cubic through four points reproduces x^3 - 2x + 1
    f = lambda x: x**3 - 2 * x + 1
    for x, y in pts:
        assert abs(f(x) - y) < 1e-12
    assert abs(quadratic_through(pts, 1.7) - f(1.7)) < 1e-12


def test_cauchy_coefficients_geometric():
    # g(z) = 1/(1 - z/2): coefficients 2^-k, radius 2
    g = lambda z: 1.0 / (1.0 - 0.5 * z)
    coef = cauchy_coefficients(g, n=12, radius=1.2)
    ref = 0.5 ** np.arange(13)
    assert np.max(np.abs(coef - ref)) < 1e-12


def test_cauchy_coefficients_certificate():
    # requesting an unattainable certificate must raise, not silently return
    g = lambda z: 1.0 / (1.0 - z) ** 3
    with pytest.raises(ExtractionError):
        cauchy_coefficients(g, n=8, radius=0.999999, certificate_tol=1e-30, max_nodes=1 << 12)
