"""Fixed-point profiles and the second-order tail GF phi."""

import math

import pytest

from tailgf.errors import NotExtendableError, RegimeError
from tailgf.laws import FiniteSupport, HarrisYule, Trifurcation, mlf_critical
from tailgf.profiles import Regime, get_profile, phi, profile, require_regime

BINARY = FiniteSupport((0.4, 0.0, 0.4), 0.2)
SUPER = FiniteSupport((0.2, 0.0, 0.8))
TRI = Trifurcation(0.4, 0.3, 0.2)


def test_binary_profile():
    p = get_profile(BINARY)
    assert p.q == pytest.approx(0.5, abs=1e-12)
    assert p.r == pytest.approx(2.0, abs=1e-12)
    assert p.alpha == pytest.approx(0.6, abs=1e-12)
    assert p.beta == pytest.approx(0.6, abs=1e-12)
    assert p.gamma == pytest.approx(1.0, abs=1e-12)
    assert p.regime is Regime.DEFECTIVE_EXTENDABLE


def test_trifurcation_profile():
    # f(s) - s = 0.2 (s - 1/2)(s^2 + 2s - 4): upper root sqrt(5) - 1
    p = get_profile(TRI)
    assert p.q == pytest.approx(0.5, abs=1e-12)
    assert p.r == pytest.approx(math.sqrt(5.0) - 1.0, abs=1e-12)
    assert p.alpha == pytest.approx(0.55, abs=1e-12)
    assert p.beta == pytest.approx(2.0 - 0.6 * math.sqrt(5.0), abs=1e-12)
    assert p.gamma == pytest.approx(p.alpha / p.beta, abs=1e-14)


def test_supercritical_upper_point_is_one():
    p = get_profile(SUPER)
    assert (p.q, p.r) == (pytest.approx(0.25, abs=1e-12), 1.0)
    assert p.regime is Regime.SUPERCRITICAL
    assert p.beta == pytest.approx(0.6, abs=1e-12)


def test_subcritical_extendable_profile():
    # f(s) = 0.3 + 0.45 s + 0.25 s^2: roots of f(s) = s at 1 and 1.2
    p = get_profile(FiniteSupport((0.3, 0.45, 0.25)))
    assert p.q == 1.0
    assert p.r == pytest.approx(1.2, abs=1e-9)
    assert p.regime is Regime.SUBCRITICAL_EXTENDABLE
    assert p.alpha == pytest.approx(0.05, abs=1e-12)


def test_critical_profile_collapses():
    p = get_profile(FiniteSupport((0.5, 0.0, 0.5)))
    assert (p.q, p.r) == (1.0, 1.0)
    assert p.regime is Regime.CRITICAL
    assert p.is_critical
    assert get_profile(mlf_critical(0.5, 0.25)).is_critical


def test_harris_yule_profile():
    p = get_profile(HarrisYule(2))
    assert (p.q, p.r) == (0.0, 1.0)
    assert (p.alpha, p.beta, p.gamma) == (1.0, 2.0, 0.5)


def test_linear_law_not_extendable():
    with pytest.raises(NotExtendableError):
        profile(FiniteSupport((0.3, 0.7)))


def test_phi_reconstructs_f_minus_s():
    for law in (BINARY, TRI, SUPER):
        p = get_profile(law)
        for s in (0.0, 0.3, 0.8, 1.0):
            lhs = phi(law, p, s) * (p.q - s) * (p.r - s)
            assert lhs == pytest.approx(law.evaluate(s) - s, abs=1e-13)


def test_phi_endpoint_values():
    for law in (BINARY, TRI):
        p = get_profile(law)
        assert phi(law, p, p.q) == pytest.approx(p.alpha / (p.r - p.q), rel=1e-11)
        assert phi(law, p, p.r) == pytest.approx(p.beta / (p.r - p.q), rel=1e-11)


def test_phi_rejects_critical():
    law = FiniteSupport((0.5, 0.0, 0.5))
    with pytest.raises(RegimeError):
        phi(law, get_profile(law), 0.5)


def test_require_regime():
    p = get_profile(BINARY)
    require_regime(p, Regime.DEFECTIVE_EXTENDABLE, Regime.SUPERCRITICAL)
    with pytest.raises(RegimeError):
        require_regime(p, Regime.CRITICAL)


def test_profile_cache_and_dict():
    assert get_profile(BINARY) is get_profile(BINARY)
    d = get_profile(BINARY).as_dict()
    assert set(d) == {"q", "r", "alpha", "beta", "gamma", "regime"}
    assert d["regime"] == "defective_extendable"
