"""Monte Carlo simulator with killing state, and its estimators."""

import math

import numpy as np
import pytest

from tailgf import _simkernel as sk
from tailgf.errors import (
    ConstraintError,
    DomainError,
    InsufficientEventsError,
    RegimeError,
)
from tailgf.laws import FiniteSupport, ModifiedLinearFractional, Trifurcation
from tailgf.profiles import get_profile
from tailgf.simulate import (
    Outcomes,
    SimConfig,
    estimate_pgf,
    estimate_termination,
    estimate_w,
    sample_offspring,
    simulate,
)
from tailgf.transition import transition

BINARY = FiniteSupport((0.4, 0.0, 0.4), 0.2)


def test_simulation_is_deterministic():
    cfg = SimConfig(BINARY, query_times=(1.0, 2.0), horizon=3.0, replicates=400, seed=9)
    a = simulate(cfg)
    b = simulate(cfg)
    assert np.array_equal(a.status, b.status)
    assert np.array_equal(a.z_at, b.z_at)
    assert np.array_equal(a.t_killed, b.t_killed, equal_nan=True)


def test_python_kernel_matches_compiled():
    cfg = SimConfig(BINARY, query_times=(1.0,), horizon=2.0, replicates=200, seed=3)
    fast = simulate(cfg)
    slow = simulate(cfg, force_python=True)
    assert np.array_equal(fast.status, slow.status)
    assert np.array_equal(fast.z_at, slow.z_at)
    assert np.array_equal(fast.z_horizon, slow.z_horizon)


def test_sample_offspring_frequencies():
    law = ModifiedLinearFractional(0.3, 0.1, 0.05, 0.4)
    n = 200_000
    draws = sample_offspring(law, n, seed=11)
    assert np.array_equal(draws, sample_offspring(law, n, seed=11, force_python=True))
    freq = {k: np.count_nonzero(draws == k) / n for k in (-1, 0, 1, 2, 3)}
    se = 1.0 / math.sqrt(n)
    assert freq[-1] == pytest.approx(0.05, abs=4 * se)  # killing state
    assert freq[0] == pytest.approx(0.30, abs=4 * se)
    assert freq[1] == pytest.approx(0.10, abs=4 * se)
    for k in (2, 3):
        assert freq[k] == pytest.approx(law.coefficient(k), abs=4 * se)


def test_streams_are_independent():
    a = sample_offspring(BINARY, 1000, seed=5, stream=0)
    b = sample_offspring(BINARY, 1000, seed=5, stream=1)
    assert not np.array_equal(a, b)


def test_estimate_pgf_tracks_transition():
    t, s = 1.5, 0.4
    cfg = SimConfig(BINARY, query_times=(t,), horizon=2.0, replicates=60_000, seed=2)
    est = estimate_pgf(simulate(cfg), t, s)
    want = transition(BINARY, t, s).value
    assert abs(est.value - want) < 4.0 * est.stderr
    assert est.n_capped == 0


def test_estimate_pgf_validates():
    cfg = SimConfig(BINARY, query_times=(1.0,), horizon=2.0, replicates=100, seed=1)
    out = simulate(cfg)
    with pytest.raises(DomainError):
        estimate_pgf(out, 0.5, 0.4)  # unrecorded time
    with pytest.raises(DomainError):
        estimate_pgf(out, 1.0, 1.5)


def test_estimate_termination_needs_kills():
    proper = FiniteSupport((0.2, 0.0, 0.8))
    out = simulate(SimConfig(proper, horizon=5.0, replicates=300, seed=4))
    with pytest.raises(InsufficientEventsError):
        estimate_termination(out)
    killed = simulate(SimConfig(BINARY, horizon=30.0, replicates=4000, seed=4))
    sample = estimate_termination(killed)
    assert sample.n >= 100
    # empirical CDF is usable as a vectorized callable
    grid = np.linspace(0.0, 30.0, 7)
    cdf = sample.cdf(grid)
    assert cdf.shape == grid.shape
    assert np.all(np.diff(cdf) >= 0.0)


def test_estimate_w_regime_checks():
    crit = FiniteSupport((0.5, 0.0, 0.5))
    out = simulate(SimConfig(crit, horizon=5.0, replicates=200, seed=6))
    with pytest.raises(RegimeError):
        estimate_w(out, get_profile(crit))
    sup = FiniteSupport((0.2, 0.0, 0.8))
    prof = get_profile(sup)
    short = simulate(SimConfig(sup, horizon=5.0, replicates=200, seed=6))
    with pytest.raises(DomainError):
        estimate_w(short, prof)  # beta * horizon = 3 < 8


def test_estimate_w_mean_near_one():
    sup = FiniteSupport((0.2, 0.0, 0.8))
    prof = get_profile(sup)
    out = simulate(SimConfig(sup, horizon=16.0, replicates=8000, seed=7,
                             max_population=50_000_000))
    est = estimate_w(out, prof)
    # E W = 1 for proper supercritical laws with finite x log x moment
    assert abs(est.mean - 1.0) < 5.0 * est.stderr_mean
    assert est.n_capped == 0


def test_summary_counts_partition_replicates():
    cfg = SimConfig(BINARY, horizon=8.0, replicates=1200, seed=8)
    out = simulate(cfg)
    s = out.summary()
    assert s["extinct"] + s["killed"] + s["alive"] + s["capped"] == out.n == 1200
    assert s["killed"] > 0 and s["extinct"] > 0
    # empirical masses track the absorption probabilities at the horizon
    from tailgf.transition import absorption

    theory = absorption(BINARY, 8.0)
    band = 4.0 * math.sqrt(0.25 / out.n)
    assert s["killed"] / out.n == pytest.approx(theory["p_killed"], abs=band)
    assert s["extinct"] / out.n == pytest.approx(theory["p_extinct"], abs=band)


def test_config_validation():
    with pytest.raises(ConstraintError):
        SimConfig(BINARY, query_times=(2.0, 1.0))
    with pytest.raises(ConstraintError):
        SimConfig(BINARY, query_times=(3.0,), horizon=2.0)
    with pytest.raises(ConstraintError):
        SimConfig(BINARY, replicates=0)
    with pytest.raises(ConstraintError):
        SimConfig(BINARY, initial_population=5, max_population=5)


def test_killed_replicates_record_times():
    out = simulate(SimConfig(BINARY, horizon=12.0, replicates=800, seed=10))
    killed = out.status == sk.KILLED
    assert np.all(np.isfinite(out.t_killed[killed]))
    assert np.all(out.t_killed[killed] <= 12.0)
    assert np.all(out.z_horizon[killed] == sk.GRAVE)
    extinct = out.status == sk.EXTINCT
    assert np.all(out.z_horizon[extinct] == 0)
