"""Limit laws: Yaglom, critical expansion, termination limits, and W."""

import math

import numpy as np
import pytest

from tailgf.errors import ConstraintError, DomainError, RegimeError
from tailgf.laws import (
    FiniteSupport,
    HarrisYule,
    Trifurcation,
    mlf_critical,
    mlf_from_shape,
    moments,
)
from tailgf.kernels import get_kernel
from tailgf.limits import (
    NearCriticalFamily,
    critical_expansion,
    mlf_defect_family,
    mlf_yaglom_pi,
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
from tailgf.profiles import get_profile
from tailgf.transition import transition

BINARY = FiniteSupport((0.4, 0.0, 0.4), 0.2)
SUPER = FiniteSupport((0.2, 0.0, 0.8))
TRI = Trifurcation(0.4, 0.3, 0.2)
CRIT_BINARY = FiniteSupport((0.5, 0.0, 0.5))
MLF_SUP_HALF = mlf_from_shape(0.5, 1.0, 0.3, 0.5)
MLF_SUP_ONE = mlf_from_shape(0.5, 1.0, 0.3, 1.0)


# -- Yaglom ------------------------------------------------------------------


def test_yaglom_binary_is_geometric():
    prof = get_profile(BINARY)
    law = yaglom(prof, get_kernel(BINARY), 12)
    for k in range(1, 13):
        assert law.pi[k - 1] == pytest.approx(0.5**k, rel=1e-11)
    assert law.tail_constant == pytest.approx(1.0, rel=1e-11)
    assert law.tail_exponent == pytest.approx(0.0, abs=1e-12)
    assert law.pgf(0.6) == pytest.approx(0.6 / (2.0 - 0.6), rel=1e-12)
    assert np.sum(law.pi) < 1.0 + 1e-12


def test_yaglom_matches_mlf_closed_form():
    law = mlf_from_shape(0.5, 2.0, 0.6, 0.5)
    prof = get_profile(law)
    yl = yaglom(prof, get_kernel(law), 20)
    for k in range(1, 21):
        assert yl.pi[k - 1] == pytest.approx(mlf_yaglom_pi(prof, k), rel=1e-9)


def test_yaglom_rejects_critical():
    prof = get_profile(CRIT_BINARY)
    with pytest.raises(RegimeError):
        yaglom(prof, get_kernel(CRIT_BINARY), 5)


# -- survival expansion ------------------------------------------------------


def test_survival_expansion_two_terms():
    prof = get_profile(TRI)
    ker = get_kernel(TRI)
    # alpha t = 8: the neglected third-order term ~ e^{-24} is resolvable,
    # while at much larger t it would drown in the reference's own error
    t = 8.0 / prof.alpha
    exp2 = survival_expansion(prof, ker, t)
    exact = transition(TRI, t, 1.0).value - transition(TRI, t, 0.0).value
    assert exp2.total == pytest.approx(exact, rel=1e-6)
    # the second term is a genuine improvement over the leading term alone
    assert abs(exp2.total - exact) < 1e-3 * abs(exp2.first_term - exact)
    assert exp2.second_term != 0.0


# -- critical long-time expansion --------------------------------------------


def test_critical_expansion_mlf_coefficients():
    ce = critical_expansion(mlf_critical(0.5, 0.25))
    assert ce.lead == pytest.approx(1.5, rel=1e-12)
    assert ce.log_coeff == pytest.approx(0.75, rel=1e-12)
    assert ce.const_coeff == pytest.approx(2.25, rel=1e-12)


def test_critical_expansion_binary_third_order_residual():
    # 1 - F_t(0) = 2/(2 + t): lead 2, no log term, constant -4, cubic tail 8
    ce = critical_expansion(CRIT_BINARY)
    assert ce.lead == pytest.approx(2.0, rel=1e-13)
    assert ce.log_coeff == 0.0
    assert ce.const_coeff == pytest.approx(4.0, rel=1e-11)
    t = 100.0
    exact = 2.0 / (2.0 + t)
    residual = exact - ce.tail_probability(t, 0.0)
    assert residual * t**3 == pytest.approx(8.0, rel=0.05)


def test_critical_expansion_a_series():
    # quadratic critical law: A(s) = 1/(1-s), so the expanded coefficients of
    # (A - A(0))/m2^2 are identically 1/m2^2 = 4
    ce = critical_expansion(CRIT_BINARY, n=6)
    assert np.allclose(ce.h, 4.0, rtol=1e-9)
    assert ce.A(0.0) == pytest.approx(1.0, rel=1e-11)
    assert ce.A(0.5) == pytest.approx(2.0, rel=1e-10)


def test_critical_expansion_rejects_noncritical():
    with pytest.raises(RegimeError):
        critical_expansion(BINARY)


# -- termination-time limits -------------------------------------------------


def test_termination_nearly_subcritical():
    lim = termination_limit(scaled_family(FiniteSupport((0.3, 0.45, 0.25))))
    assert lim.kind == "nearly_subcritical"
    assert lim.notes["rate"] == pytest.approx(0.05, abs=1e-13)
    u = np.array([-1.0, 0.0, 10.0, 100.0])
    c = lim.cdf(u)
    assert c.shape == u.shape
    assert c[0] == 0.0 and c[1] == 0.0
    assert c[2] == pytest.approx(-math.expm1(-0.5), rel=1e-12)
    assert lim.u_of_t(0.01, 7.3) == 7.3  # physical time is already the scale


def test_termination_nearly_supercritical():
    lim = termination_limit(scaled_family(SUPER))
    assert lim.kind == "nearly_supercritical"
    grid = np.array([-3.0, 0.0, 2.0])
    vals = lim.cdf(grid)
    assert vals.shape == grid.shape
    assert np.all(np.diff(vals) > 0.0)
    assert vals[1] == pytest.approx(phi_functional(SUPER, 0.0), rel=1e-12)


def test_termination_nearly_critical_d_one():
    lim = termination_limit(scaled_family(CRIT_BINARY))
    assert lim.kind == "nearly_critical"
    assert lim.notes["d"] == 1.0
    u = np.array([0.0, 1.0, 50.0, 1000.0])
    c = lim.cdf(u)
    # (e^u - 1)/(e^u + 1) = tanh(u/2), safely saturating at 1
    assert np.allclose(c, np.tanh(u / 2.0), rtol=1e-12)
    eps = 1e-3
    prof_eps = get_profile(scaled_family(CRIT_BINARY).law_at(eps))
    assert lim.u_of_t(eps, 4.0) == pytest.approx(prof_eps.alpha * 4.0, rel=1e-12)


def test_termination_nearly_critical_extreme_d():
    zero = termination_limit(scaled_family(CRIT_BINARY, d=0.0))
    assert np.allclose(zero.cdf(np.array([0.5, 2.0])),
                       -np.expm1(np.array([-0.5, -2.0])), rtol=1e-12)
    inf = termination_limit(scaled_family(CRIT_BINARY, d=math.inf))
    u = np.array([-800.0, 0.0, 800.0])
    c = inf.cdf(u)
    assert c[1] == pytest.approx(0.5, abs=1e-12)
    assert c[0] == pytest.approx(0.0, abs=1e-12) and c[2] == pytest.approx(1.0)


def test_termination_requires_d_for_critical_families():
    fam = NearCriticalFamily(
        builder=lambda eps: FiniteSupport(((1.0 - eps) / 2.0, 0.0, (1.0 - eps) / 2.0), eps),
        limit_law=CRIT_BINARY,
        d=None,
    )
    with pytest.raises(ConstraintError):
        termination_limit(fam)


# -- Phi and psi~ -------------------------------------------------------------


def test_phi_functional_dual_routes():
    for law in (MLF_SUP_HALF, MLF_SUP_ONE):
        for u in (-2.0, 0.0, 1.5, 6.0):
            closed = phi_functional(law, u, method="closed")
            quad = phi_functional(law, u, method="quadrature")
            assert closed == pytest.approx(quad, abs=1e-12)


def test_phi_functional_equation_gamma_half():
    # log Phi - 2 log(1 - Phi) = u, i.e. e^{-u} Phi = (1 - Phi)^2
    for u in (-1.0, 0.0, 2.0):
        p = phi_functional(MLF_SUP_HALF, u, method="closed")
        assert math.exp(-u) * p == pytest.approx((1.0 - p) ** 2, rel=1e-12)
    # the tempting explicit form 1 - e^{-u} sqrt(e^u - 1/4) does not satisfy
    # the functional equation (and is not even real for u < ln 4)
    u = 0.5
    wrong = 1.0 - math.exp(-u) * math.sqrt(math.exp(u) - 0.25)
    assert abs(math.exp(-u) * wrong - (1.0 - wrong) ** 2) > 0.05


def test_phi_functional_gamma_one_is_logistic():
    for u in (-3.0, 0.0, 4.0):
        val = phi_functional(MLF_SUP_ONE, u)
        assert val == pytest.approx(1.0 / (1.0 + math.exp(-u)), rel=1e-12)


def test_phi_functional_needs_supercritical():
    with pytest.raises(RegimeError):
        phi_functional(CRIT_BINARY, 0.0)


def test_psi_tilde_mlf_vs_divided_differences():
    from tailgf.laws import tail_gf

    law = MLF_SUP_HALF
    prof = get_profile(law)
    q = prof.q
    m1 = moments(law).m1
    for x in (0.55, 0.7, 0.95):
        ph = tail_gf(law, (q, 1.0, x), method="divided_difference")
        top = tail_gf(law, (q, 1.0, 1.0, x), method="divided_difference")
        generic = top / ph + (m1 - 1.0) / ((1.0 - q) * (x - q) * ph)
        assert psi_tilde(law, x) == pytest.approx(generic, rel=1e-9)


def test_psi_tilde_pole_and_endpoint():
    # simple pole at q with residue (m1 - 1)/alpha; finite value at 1, where
    # the quartic tail GF of a quadratic law vanishes, leaving
    # (m1 - 1)/((1-q)^2 phi(1)) = 4/3 for the (0.2, 0, 0.8) law
    law = SUPER
    q = 0.25
    for dx in (1e-5, 1e-7):
        assert dx * psi_tilde(law, q + dx) == pytest.approx(1.0, rel=1e-4)
    assert psi_tilde(law, 1.0) == pytest.approx(4.0 / 3.0, rel=1e-10)
    assert psi_tilde(law, 0.999999999) == pytest.approx(4.0 / 3.0, rel=1e-6)


# -- near-critical parameter scalings ----------------------------------------


def test_near_critical_params_balanced_binary():
    fam = scaled_family(CRIT_BINARY)
    out = near_critical_params(fam, 1e-5)
    # gap predictions sqrt(d eps / m2) carry O(sqrt(eps)) relative error
    assert out["rel_dev"]["one_minus_q"] < 0.003
    assert out["rel_dev"]["r_minus_one"] < 0.003
    assert out["rel_dev"]["alpha"] < 1e-3
    coarse = near_critical_params(fam, 1e-3)
    shrink = coarse["rel_dev"]["one_minus_q"] / out["rel_dev"]["one_minus_q"]
    assert shrink == pytest.approx(10.0, rel=0.3)  # error ~ sqrt(eps)


def test_near_critical_params_supercritical_family():
    out = near_critical_params(scaled_family(SUPER), 1e-4)
    assert "r_minus_one" in out["predicted"]
    assert out["rel_dev"]["r_minus_one"] < 0.01


def test_mlf_defect_family_builder():
    fam = mlf_defect_family(0.3, 0.1, 0.4)
    law = fam.law_at(0.01)
    assert law.p_delta == 0.01
    assert fam.limit_law.p_delta == 0.0
    with pytest.raises(DomainError):
        fam.law_at(0.7)


# -- the martingale limit W ---------------------------------------------------


def test_w_transform_gamma_one_closed_form():
    w = w_transform(SUPER)
    q = 0.25
    for rho in (0.1, 0.7, 3.0, 40.0):
        want = q + (1.0 - q) ** 2 / (rho + 1.0 - q)
        assert w.eta(rho) == pytest.approx(want, rel=1e-12)
    assert w.eta(0.0) == 1.0
    assert not w.degenerate


def test_w_transform_harris_yule_closed_form():
    w = w_transform(HarrisYule(2))  # gamma = 1/2
    for rho in (0.3, 2.0, 12.0):
        assert w.eta(rho) == pytest.approx(1.0 / math.sqrt(1.0 + 2.0 * rho), rel=1e-12)


def test_w_transform_moments():
    w = w_transform(SUPER)
    assert w.mean == pytest.approx(1.0, rel=1e-6)
    assert w.second_moment == pytest.approx(8.0 / 3.0, rel=1e-5)  # 2 m2 / beta


def test_w_transform_classical_route_agrees():
    for law in (SUPER, HarrisYule(2)):
        w = w_transform(law)
        for rho in (0.4, 5.0):
            assert w_transform_classical(law, None, rho) == pytest.approx(
                w.eta(rho), abs=1e-12
            )


def test_w_transform_degenerate_hook():
    class HintedLaw(FiniteSupport):
        def xlogx_finite_hint(self, a, n):
            return False

    law = HintedLaw((0.2, 0.0, 0.8))
    w = w_transform(law)
    assert w.degenerate
    assert w.mean == 0.0
    assert w.eta(3.0) == 1.0


def test_w_transform_requires_supercritical():
    with pytest.raises(RegimeError):
        w_transform(BINARY)  # defective-extendable, r = 2
    with pytest.raises(RegimeError):
        w_transform_classical(CRIT_BINARY, None, 1.0)
