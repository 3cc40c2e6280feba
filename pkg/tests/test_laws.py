"""Offspring laws and tail generating functions."""

import math

import numpy as np
import pytest

from tailgf.errors import ConstraintError, DomainError
from tailgf.laws import (
    FiniteSupport,
    HarrisYule,
    ModifiedLinearFractional,
    MutationStopped,
    PowerFractional,
    Trifurcation,
    mlf_critical,
    mlf_from_shape,
    moments,
    series_tail_gf,
    tail_gf,
    xlogx_integral,
    xlogx_is_finite,
    xlogx_moment,
)

BINARY = FiniteSupport((0.4, 0.0, 0.4), 0.2)  # fixed points 1/2 and 2
SUPER = FiniteSupport((0.2, 0.0, 0.8))  # fixed points 1/4 and 1


def test_finite_support_eval_and_derivatives():
    s = 0.7
    assert BINARY.evaluate(s) == pytest.approx(0.4 + 0.4 * s * s, abs=1e-15)
    assert BINARY.derivative(s, 1) == pytest.approx(0.8 * s, abs=1e-15)
    assert BINARY.derivative(s, 2) == pytest.approx(0.8, abs=1e-15)
    assert BINARY.derivative(s, 3) == 0.0
    assert BINARY.defect == pytest.approx(0.2, abs=1e-15)
    assert BINARY.radius == math.inf


def test_finite_support_validation():
    with pytest.raises(ConstraintError):
        FiniteSupport((0.3, 0.3))  # mass 0.6 != 1
    with pytest.raises(ConstraintError):
        FiniteSupport((0.5, -0.1, 0.6))
    with pytest.raises(ConstraintError):
        FiniteSupport((0.0, 1.0))  # deterministic single offspring


def test_tail_gf_single_point_is_f():
    for s in (0.0, 0.3, 1.0, 1.7):
        assert tail_gf(BINARY, (s,)) == pytest.approx(BINARY.evaluate(s), abs=1e-15)


def test_tail_gf_unit_value_at_fixed_point_pair():
    # v(q, r) = (f(r) - f(q)) / (r - q) = 1 whenever both arguments are fixed
    assert tail_gf(BINARY, (0.5, 2.0)) == pytest.approx(1.0, abs=1e-14)
    assert tail_gf(SUPER, (0.25, 1.0)) == pytest.approx(1.0, abs=1e-14)


def test_tail_gf_permutation_symmetry():
    law = Trifurcation(0.4, 0.3, 0.2)
    pts = (0.1, 0.8, 1.3, 0.5)
    base = tail_gf(law, pts)
    for perm in ((0.8, 0.5, 0.1, 1.3), (1.3, 0.1, 0.5, 0.8)):
        assert tail_gf(law, perm) == pytest.approx(base, rel=1e-13)


def test_tail_gf_divided_difference_recursion():
    law = Trifurcation(0.4, 0.3, 0.2)
    pts = (0.2, 0.55, 0.9, 1.4)
    lhs = tail_gf(law, pts) * (pts[-1] - pts[0])
    rhs = tail_gf(law, pts[1:]) - tail_gf(law, pts[:-1])
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_tail_gf_confluent_arguments():
    # repeated arguments converge to derivative values
    for law in (BINARY, Trifurcation(0.4, 0.3, 0.2)):
        for a in (0.3, 0.9):
            assert tail_gf(law, (a, a)) == pytest.approx(law.derivative(a, 1), rel=1e-12)
            assert tail_gf(law, (a, a, a)) == pytest.approx(
                law.derivative(a, 2) / 2.0, rel=1e-12
            )


def test_tail_gf_series_matches_divided_difference():
    law = Trifurcation(0.4, 0.3, 0.2)
    pts = (0.2, 0.7, 1.1)
    s = tail_gf(law, pts, method="series")
    d = tail_gf(law, pts, method="divided_difference")
    assert s == pytest.approx(d, rel=1e-13)


def test_series_annihilates_past_degree():
    # cubic law: any five-argument tail GF is identically zero
    law = Trifurcation(0.4, 0.3, 0.2)
    assert tail_gf(law, (0.1, 0.4, 0.9, 1.2, 1.5)) == 0.0
    assert series_tail_gf((0.4, 0.1, 0.3, 0.2), (1.0,) * 5) == 0.0


def test_mlf_coefficients_are_shifted_geometric():
    law = ModifiedLinearFractional(0.3, 0.1, 0.05, 0.4)
    tail = law.tail_mass
    assert law.coefficient(0) == pytest.approx(0.3)
    assert law.coefficient(1) == pytest.approx(0.1)
    for k in range(2, 8):
        assert law.coefficient(k) == pytest.approx(tail * 0.6 * 0.4 ** (k - 2), rel=1e-14)
    assert law.defect == pytest.approx(0.05, abs=1e-15)
    assert law.radius == pytest.approx(2.5)  # 1/p
    with pytest.raises(DomainError):
        law.evaluate(2.5 + 1e-9)


def test_moments_factorial_scaling():
    m = moments(SUPER)
    assert m.m1 == pytest.approx(1.6, abs=1e-15)
    assert m.m2 == pytest.approx(0.8, abs=1e-15)
    assert m.m3 == 0.0
    cubic = HarrisYule(2)  # f(s) = s^3
    mc = moments(cubic)
    assert (mc.m1, mc.m2, mc.m3) == (3.0, 3.0, 1.0)


def test_mlf_critical_shape():
    law = mlf_critical(0.5, 0.25)
    assert law.is_critical
    assert law.derivative(1.0, 1) == pytest.approx(1.0, abs=1e-14)
    for s in (0.0, 0.4, 0.9):
        target = s + 0.5 * (1.0 - s) ** 2 / (1.0 - 0.25 * s)
        assert law.evaluate(s) == pytest.approx(target, rel=1e-14)


def test_mlf_from_shape_round_trip():
    law = mlf_from_shape(0.5, 2.0, 0.6, 1.0)
    assert law.evaluate(0.5) == pytest.approx(0.5, abs=1e-12)
    assert law.evaluate(2.0) == pytest.approx(2.0, abs=1e-12)
    assert law.derivative(0.5, 1) == pytest.approx(0.4, abs=1e-12)
    assert law.derivative(2.0, 1) == pytest.approx(1.6, abs=1e-12)


def test_mlf_from_shape_rejects_steep_alpha():
    with pytest.raises(ConstraintError):
        mlf_from_shape(0.5, 2.0, 0.95, 0.3)
    with pytest.raises(ConstraintError):
        mlf_from_shape(0.5, 0.9, 0.6, 1.0)  # r < 1


def test_harris_yule_is_pure_power():
    law = HarrisYule(2)
    assert law.coefficients == (0.0, 0.0, 0.0, 1.0)
    for s in (0.2, 0.8):
        assert law.evaluate(s) == pytest.approx(s**3, abs=1e-16)
    assert law.defect == 0.0


def test_power_fractional_fixed_points_and_blowup():
    law = PowerFractional(0.5, 2.0, 0.4, 0.5)
    assert law.evaluate(0.5) == pytest.approx(0.5, abs=1e-14)
    assert law.evaluate(2.0) == pytest.approx(2.0, abs=1e-14)
    assert law.derivative(2.0, 2) == math.inf  # second derivative blows up at r
    assert law.coefficients is None
    assert law.radius == 2.0
    assert all(law.coefficient(k) > 0.0 for k in range(2, 10))


def test_xlogx_series_matches_quadrature():
    for law in (SUPER, Trifurcation(0.4, 0.3, 0.2)):
        a = law.radius if law.radius < math.inf else 1.5
        a = min(a, 1.5)
        s = xlogx_integral(law, a, 1, method="series")
        q = xlogx_integral(law, a, 1, method="quadrature")
        assert q == pytest.approx(s, rel=1e-9)


def test_xlogx_boundary_divergence_mlf():
    law = ModifiedLinearFractional(0.3, 0.1, 0.0, 0.4)
    r = law.radius
    assert xlogx_is_finite(law, 0.99 * r, 1)
    assert not xlogx_is_finite(law, r, 1)  # p_k r^k stops decaying
    assert xlogx_moment(law, r, 1) == math.inf
    assert xlogx_integral(law, r, 1) == math.inf


def test_xlogx_moment_partial_sum():
    # single mass at k = 2: p2 * a^2 * 2^1 * ln 2
    val = xlogx_moment(SUPER, 1.0, 1)
    assert val == pytest.approx(1.6 * math.log(2.0), rel=1e-14)


def test_mutation_stopped_composition():
    base = FiniteSupport((0.2, 0.0, 0.8))
    mu = 0.1
    law = MutationStopped(base, mu)
    for s in (0.0, 0.5, 1.0):
        assert law.evaluate(s) == pytest.approx(base.evaluate(s * 0.9), rel=1e-14)
    assert law.defect == pytest.approx(1.0 - base.evaluate(0.9), rel=1e-14)
    assert law.radius == pytest.approx(base.radius)
    assert law.coefficient(2) == pytest.approx(0.8 * 0.9**2, rel=1e-14)


def test_mutation_stopped_requires_proper_base():
    with pytest.raises(ConstraintError):
        MutationStopped(BINARY, 0.1)  # base already defective
    with pytest.raises(ConstraintError):
        MutationStopped(FiniteSupport((0.2, 0.0, 0.8)), 1.0)
