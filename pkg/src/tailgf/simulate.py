"""Monte Carlo simulation of extendable branching processes.

The process starts from `initial_population` particles; each particle lives
an Exp(1) time (so a population of z waits Exp(1)/z for its next event) and
is then replaced by a draw from the offspring law.  A draw of the killing
state sends the whole process to the graveyard, recorded separately from
extinction.  Replicates are simulated on independent, replicate-indexed RNG
streams, so results are independent of thread count and batching.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _simkernel as sk
from ._simkernel import ALIVE, CAPPED, EXTINCT, GRAVE, KILLED, MODE_MLF, MODE_TABLE
from .errors import ConstraintError, DomainError, InsufficientEventsError, RegimeError
from .laws import (
    ModifiedLinearFractional,
    MutationStopped,
    OffspringLaw,
    PowerFractional,
)
from .profiles import ExtendableProfile, Regime

__all__ = [
    "SimConfig",
    "Outcomes",
    "simulate",
    "sample_offspring",
    "estimate_pgf",
    "estimate_termination",
    "estimate_w",
    "PgfEstimate",
    "TerminationSample",
    "WEstimate",
]

_MASK64 = (1 << 64) - 1
# Probability tables longer than this (or truncating worse than 1e-12) are
# refused rather than sampled with unquantified bias.
_MAX_TABLE = 4096
_TRUNCATION_TOL = 1e-12


@dataclass(frozen=True)
class SimConfig:
    law: OffspringLaw
    query_times: tuple = ()
    horizon: float = 10.0
    replicates: int = 1000
    seed: int = 1
    max_population: int = 10_000_000
    initial_population: int = 1

    def __post_init__(self):
        times = tuple(float(t) for t in self.query_times)
        object.__setattr__(self, "query_times", times)
        if any(t < 0 for t in times) or list(times) != sorted(times):
            raise ConstraintError("query_times must be sorted and nonnegative")
        if times and times[-1] > self.horizon:
            raise ConstraintError("horizon must cover every query time")
        if not (self.horizon > 0 and math.isfinite(self.horizon)):
            raise ConstraintError("horizon must be positive and finite")
        if self.replicates < 1:
            raise ConstraintError("need at least one replicate")
        if self.initial_population < 1:
            raise ConstraintError("need at least one ancestor")
        if self.max_population <= self.initial_population:
            raise ConstraintError("max_population must exceed initial_population")


class Outcomes:
    """Struct-of-arrays record of simulated replicates."""

    def __init__(self, config: SimConfig, status, t_extinct, t_killed, z_at, z_horizon):
        self.config = config
        self.status = status
        self.t_extinct = t_extinct
        self.t_killed = t_killed
        self.z_at = z_at
        self.z_horizon = z_horizon

    @property
    def n(self) -> int:
        return self.status.shape[0]

    def count(self, code: int) -> int:
        return int(np.count_nonzero(self.status == code))

    def summary(self) -> dict:
        return {
            "replicates": self.n,
            "extinct": self.count(EXTINCT),
            "killed": self.count(KILLED),
            "alive": self.count(ALIVE),
            "capped": self.count(CAPPED),
            "horizon": self.config.horizon,
            "seed": self.config.seed,
        }


def _mlf_table(law: ModifiedLinearFractional) -> np.ndarray:
    return np.array(
        [law.p0, law.p0 + law.p1, 1.0 - law.p_delta, law.p], dtype=np.float64
    )


def _finite_table(coeffs: Sequence[float]) -> np.ndarray:
    cdf = np.cumsum(np.asarray(coeffs, dtype=np.float64))
    return cdf


def sampling_plan(law: OffspringLaw):
    """Return (mode, table) for the kernel sampler, or raise RegimeError."""
    if isinstance(law, ModifiedLinearFractional):
        return MODE_MLF, _mlf_table(law)
    if isinstance(law, MutationStopped) and isinstance(
        law.base, ModifiedLinearFractional
    ):
        # Thinning a modified linear-fractional law yields another one.
        base, mu = law.base, law.mu
        p_new = base.p * (1.0 - mu)
        p1_new = base.p1 * (1.0 - mu)
        c2_new = base.tail_mass * (1.0 - base.p) * (1.0 - mu) ** 2 / (1.0 - p_new)
        pd_new = 1.0 - base.p0 - p1_new - c2_new
        conv = ModifiedLinearFractional(base.p0, p1_new, max(pd_new, 0.0), p_new)
        if abs(conv.evaluate(0.7) - law.evaluate(0.7)) > 1e-12:
            raise RegimeError("thinned law failed the linear-fractional identity")
        return MODE_MLF, _mlf_table(conv)
    coeffs = law.coefficients
    if coeffs is None and isinstance(law, PowerFractional):
        from .laws import _pf_coefficient_table

        tab = _pf_coefficient_table(law, _MAX_TABLE)
        kept = np.asarray(tab, dtype=np.float64)
        residual = 1.0 - law.defect - float(np.sum(kept))
        if abs(residual) > _TRUNCATION_TOL:
            raise RegimeError(
                "offspring tail does not truncate within "
                f"{_MAX_TABLE} terms (residual {residual:.2e}); sampling refused"
            )
        coeffs = tuple(kept)
    if coeffs is None:
        raise RegimeError(f"no sampling plan for {type(law).__name__}")
    if len(coeffs) > _MAX_TABLE:
        raise RegimeError("finite support too large to tabulate")
    return MODE_TABLE, _finite_table(coeffs)


def _thread_count() -> int:
    env = os.environ.get("TAILGF_THREADS", "")
    if env.strip():
        try:
            n = int(env)
        except ValueError as exc:
            raise ConstraintError(f"TAILGF_THREADS must be an integer, got {env!r}") from exc
    else:
        n = os.cpu_count() or 1
    return max(1, min(n, 64))


def simulate(config: SimConfig, *, force_python: bool = False) -> Outcomes:
    """Run all replicates of the configured experiment."""
    mode, table = sampling_plan(config.law)
    n = config.replicates
    n_q = len(config.query_times)
    qtimes = np.asarray(config.query_times, dtype=np.float64)
    status = np.empty(n, dtype=np.int8)
    t_extinct = np.full(n, np.nan)
    t_killed = np.full(n, np.nan)
    z_at = np.empty((n, n_q), dtype=np.int64)
    z_horizon = np.empty(n, dtype=np.int64)
    seed64 = np.uint64(config.seed & _MASK64)
    args_tail = (
        config.initial_population,
        float(config.horizon),
        config.max_population,
        mode,
        table,
        qtimes,
        status,
        t_extinct,
        t_killed,
        z_at,
        z_horizon,
    )

    use_python = force_python or not sk.HAVE_NUMBA
    threads = 1 if use_python else _thread_count()
    runner = sk.py_run_block if use_python else sk.run_block
    if threads == 1 or n < 2048:
        runner(seed64, 0, n, *args_tail)
    else:
        block = max(1024, -(-n // (threads * 8)))
        bounds = [(lo, min(lo + block, n)) for lo in range(0, n, block)]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(runner, seed64, lo, hi, *args_tail) for lo, hi in bounds
            ]
            for fut in futures:
                fut.result()
    return Outcomes(config, status, t_extinct, t_killed, z_at, z_horizon)


def sample_offspring(
    law: OffspringLaw, n: int, seed: int, stream: int = 0, *, force_python: bool = False
) -> np.ndarray:
    """n draws from one replicate stream; -1 encodes the killing state."""
    mode, table = sampling_plan(law)
    out = np.empty(n, dtype=np.int64)
    seed64 = np.uint64(seed & _MASK64)
    if force_python or not sk.HAVE_NUMBA:
        sk.py_draw_block(seed64, stream, n, mode, table, out)
    else:
        sk.draw_block(seed64, stream, n, mode, table, out)
    return out


@dataclass(frozen=True)
class PgfEstimate:
    value: float
    stderr: float
    n: int
    n_capped: int


def _time_index(config: SimConfig, t: float) -> int:
    for i, qt in enumerate(config.query_times):
        if abs(qt - t) <= 1e-12:
            return i
    raise DomainError(f"time {t!r} is not one of the recorded query times")


def estimate_pgf(outcomes: Outcomes, t: float, s: float) -> PgfEstimate:
    """Empirical E[s^{Z_t}] with the killing state contributing 0.

    Capped replicates are excluded from the average and counted separately;
    a nonzero count means the estimate is biased by population truncation.
    """
    if not 0.0 <= s <= 1.0:
        raise DomainError("pgf estimates need s in [0, 1]")
    col = outcomes.z_at[:, _time_index(outcomes.config, t)]
    capped = col == sk.CAPMARK
    n_capped = int(np.count_nonzero(capped))
    good = col[~capped]
    vals = np.where(good >= 0, np.power(float(s), good.clip(min=0).astype(np.float64)), 0.0)
    n = vals.size
    if n < 2:
        raise InsufficientEventsError("need at least two uncapped replicates")
    value = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / math.sqrt(n))
    return PgfEstimate(value, stderr, n, n_capped)


class TerminationSample:
    """Killing times of replicates terminated within the horizon."""

    def __init__(self, times: np.ndarray, n_total: int):
        self.times = np.sort(times)
        self.n_total = n_total

    @property
    def n(self) -> int:
        return self.times.size

    def cdf(self, t) -> np.ndarray:
        idx = np.searchsorted(self.times, np.asarray(t, dtype=float), side="right")
        return idx / self.n

    def ks_distance(self, ref_cdf) -> float:
        ref = np.asarray(ref_cdf(self.times), dtype=float)
        n = self.n
        upper = np.arange(1, n + 1) / n - ref
        lower = ref - np.arange(0, n) / n
        return float(max(upper.max(), lower.max()))


def estimate_termination(outcomes: Outcomes) -> TerminationSample:
    """Empirical law of the killing time, conditional on being killed within
    the horizon (a lower-truncated version of conditioning on killing ever
    happening; the difference vanishes as the horizon grows)."""
    times = outcomes.t_killed[outcomes.status == KILLED]
    times = times[np.isfinite(times)]
    if times.size < 100:
        raise InsufficientEventsError(
            f"only {times.size} killed replicates; need at least 100"
        )
    return TerminationSample(times, outcomes.n)


@dataclass(frozen=True)
class WEstimate:
    mean: float
    second_moment: float
    stderr_mean: float
    n: int
    n_capped: int
    samples: np.ndarray = field(repr=False, default=None)


def estimate_w(outcomes: Outcomes, prof: ExtendableProfile) -> WEstimate:
    """Estimate W = lim Z_t e^{-beta t} from populations at the horizon.

    Requires a supercritical law and beta * horizon >= 8 so that the horizon
    population is deep in the exponential-growth regime.
    """
    if prof.regime is not Regime.SUPERCRITICAL:
        raise RegimeError("W estimation needs a supercritical law")
    horizon = outcomes.config.horizon
    if prof.beta * horizon < 8.0:
        raise DomainError(
            f"beta * horizon = {prof.beta * horizon:.3g} < 8; grow the horizon"
        )
    z = outcomes.z_horizon
    capped = z == sk.CAPMARK
    n_capped = int(np.count_nonzero(capped))
    keep = (~capped) & (z != sk.GRAVE)
    w = z[keep].astype(np.float64) * math.exp(-prof.beta * horizon)
    n = w.size
    if n < 2:
        raise InsufficientEventsError("need at least two usable replicates")
    mean = float(np.mean(w))
    second = float(np.mean(w**2))
    stderr = float(np.std(w, ddof=1) / math.sqrt(n))
    return WEstimate(mean, second, stderr, n, n_capped, w)
