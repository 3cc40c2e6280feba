"""Correction kernel psi, its integrals, and the Koenigs coordinate."""

import math

import pytest

from tailgf.errors import DivergenceError, DomainError, RegimeError
from tailgf.laws import (
    FiniteSupport,
    ModifiedLinearFractional,
    PowerFractional,
    Trifurcation,
    mlf_critical,
    moments,
)
from tailgf.kernels import (
    Integrability,
    get_kernel,
    integrable_to_r,
    koenigs,
    psi,
    psi_integral,
    psi_integral_segment,
    slowly_varying_L,
)

TRI = Trifurcation(0.4, 0.3, 0.2)
TRI_CRIT = Trifurcation(0.65, 0.05, 0.3)
PF = PowerFractional(0.5, 2.0, 0.4, 0.5)
MLF = ModifiedLinearFractional(0.3, 0.1, 0.05, 0.4)


def test_mlf_kernel_vanishes():
    for law in (MLF, mlf_critical(0.5, 0.25)):
        k = get_kernel(law)
        for x in (0.0, 0.3, 0.9):
            assert psi(k, x) == 0.0
        assert psi(k, 0.5 + 0.2j) == 0.0 + 0.0j
        assert psi_integral(k, 0.0, min(0.99, k.upper)) == 0.0
        assert psi_integral_segment(k, 0.1, 0.4 + 0.3j) == 0.0 + 0.0j


def test_psi_endpoint_formula_at_q():
    k = get_kernel(TRI)
    p = k.prof
    want = p.gamma / (p.r - p.q) - TRI.derivative(p.q, 2) / (2.0 * p.alpha)
    assert psi(k, p.q) == pytest.approx(want, rel=1e-11)
    # dropping the 1/alpha factor from the curvature term gives a different
    # number; the implemented limit is the one the divided differences confirm
    variant = p.gamma / (p.r - p.q) - TRI.derivative(p.q, 2) / 2.0
    assert abs(psi(k, p.q) - variant) > 1e-3


def test_psi_endpoint_formula_at_r():
    k = get_kernel(TRI)
    p = k.prof
    want = 1.0 / (p.r - p.q) - p.gamma * TRI.derivative(p.r, 2) / (2.0 * p.beta)
    assert psi(k, p.r) == pytest.approx(want, rel=1e-11)


def test_psi_endpoint_continuity_for_interpolated_law():
    # PF has no stored coefficients, so values just inside the endpoint zone
    # come from the interpolation bridge; they must join the limit smoothly
    k = get_kernel(PF)
    q = k.prof.q
    assert psi(k, q + 1e-9) == pytest.approx(psi(k, q), abs=1e-7)


def test_psi_divergence_at_r_when_curvature_blows_up():
    k = get_kernel(PF)
    with pytest.raises(DivergenceError):
        psi(k, k.prof.r)


def test_critical_kernel_endpoint():
    k = get_kernel(TRI_CRIT)
    m = moments(TRI_CRIT)
    # cubic law: fourth derivative vanishes, leaving m3^2 / m2^3
    assert psi(k, 1.0) == pytest.approx(m.m3**2 / m.m2**3, rel=1e-12)
    with pytest.raises(DomainError):
        psi(k, 1.2)


def test_trifurcation_closed_integral_matches_quadrature():
    for law in (TRI, TRI_CRIT):
        k = get_kernel(law)
        a, b = 0.2, min(1.1, k.upper)
        closed = psi_integral(k, a, b)
        quad = psi_integral(k, a, b, method="quadrature")
        assert closed == pytest.approx(quad, rel=1e-10)


def test_psi_integral_telescopes_and_signs():
    k = get_kernel(PF)
    a, b, c = 0.6, 0.9, 1.3
    ab = psi_integral(k, a, b)
    bc = psi_integral(k, b, c)
    assert ab + bc == pytest.approx(psi_integral(k, a, c), rel=1e-10)
    assert psi_integral(k, b, a) == pytest.approx(-ab, rel=1e-13)
    assert psi_integral(k, a, a) == 0.0
    with pytest.raises(DomainError):
        psi_integral(k, 0.0, k.prof.r + 0.1)


def test_psi_integral_improper_at_r():
    # psi itself blows up at r, but the integral converges and telescopes
    k = get_kernel(PF)
    r = k.prof.r
    full = psi_integral(k, 0.5, r)
    part = psi_integral(k, 0.5, 1.5)
    rest = psi_integral(k, 1.5, r)
    assert full == pytest.approx(part + rest, rel=1e-6)
    assert math.isfinite(full)


def test_integrability_verdicts():
    assert integrable_to_r(get_kernel(TRI)) is Integrability.INTEGRABLE
    assert integrable_to_r(get_kernel(PF)) is Integrability.INTEGRABLE
    assert integrable_to_r(get_kernel(MLF)) is Integrability.INTEGRABLE


def test_koenigs_binary_closed_form():
    law = FiniteSupport((0.4, 0.0, 0.4), 0.2)
    k = get_kernel(law)
    for s in (0.0, 0.3, 0.5, 1.0, 1.7):
        want = 1.5 * (s - 0.5) / (2.0 - s)
        assert koenigs(k, s) == pytest.approx(want, abs=1e-13)
    assert koenigs(k, 0.5) == 0.0


def test_koenigs_unit_slope_at_q():
    for law in (TRI, PF):
        k = get_kernel(law)
        q = k.prof.q
        h = 1e-6
        slope = (koenigs(k, q + h) - koenigs(k, q - h)) / (2.0 * h)
        assert slope == pytest.approx(1.0, rel=1e-8)


def test_koenigs_complex_agrees_on_real_axis():
    k = get_kernel(TRI)
    z = koenigs(k, 0.8 + 0.0j)
    assert z.imag == pytest.approx(0.0, abs=1e-12)
    assert z.real == pytest.approx(koenigs(k, 0.8), rel=1e-11)


def test_koenigs_rejects_critical():
    with pytest.raises(RegimeError):
        koenigs(get_kernel(TRI_CRIT), 0.5)


def test_segment_integral_matches_real_integral():
    k = get_kernel(TRI)
    val = psi_integral_segment(k, 0.2, 1.1)
    assert val.imag == pytest.approx(0.0, abs=1e-13)
    assert val.real == pytest.approx(psi_integral(k, 0.2, 1.1), rel=1e-10)


def test_slowly_varying_L():
    k = get_kernel(TRI)
    lim = math.exp(psi_integral(k, 0.0, k.prof.r))
    assert slowly_varying_L(k, 1e-6) == pytest.approx(lim, rel=1e-4)
    assert slowly_varying_L(get_kernel(MLF), 0.5) == 1.0
    with pytest.raises(DomainError):
        slowly_varying_L(k, 0.0)
