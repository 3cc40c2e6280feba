"""Event-loop kernels for the branching simulator.

Compiled with numba when available; the pure-Python fallback (`.py_func` on
the jitted functions, or the functions themselves when numba is absent) has
bit-identical semantics because all RNG state arithmetic is carried in
uint64 with wraparound.

RNG: each replicate owns a splitmix64 stream whose state is derived from
(seed, replicate index), so results do not depend on how replicates are
batched across threads.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(fn):
            return fn

        return deco


GOLD = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_ONE = np.uint64(1)
_INV53 = float(2.0**-53)

# replicate status codes
EXTINCT = 0
KILLED = 1
ALIVE = 2
CAPPED = 3

# population snapshot markers
GRAVE = -1
CAPMARK = -2

# offspring sampling plans
MODE_TABLE = 0  # finite support: cumulative probabilities
MODE_MLF = 1  # modified linear-fractional: inverse geometric tail


@njit(cache=True, nogil=True)
def _mix(x):
    x = (x ^ (x >> _S30)) * _MIX1
    x = (x ^ (x >> _S27)) * _MIX2
    return x ^ (x >> _S31)


@njit(cache=True, nogil=True)
def _stream_init(seed, rep):
    a = _mix(np.uint64(seed) + GOLD)
    b = _mix(np.uint64(rep) + GOLD)
    return _mix(a ^ b)


@njit(cache=True, nogil=True)
def _u01(x):
    # strictly positive uniform on (0, 1], safe under log()
    return float((_mix(x) >> _S11) + _ONE) * _INV53


@njit(cache=True, nogil=True)
def _sample(mode, table, u):
    """Draw an offspring count; -1 encodes the killing state."""
    if mode == MODE_TABLE:
        for k in range(table.shape[0]):
            if u <= table[k]:
                return k
        return -1
    # MODE_MLF: table = [p0, p0 + p1, 1 - p_delta, p]
    if u <= table[0]:
        return 0
    if u <= table[1]:
        return 1
    if u > table[2]:
        return -1
    p = table[3]
    if p <= 0.0:
        return 2
    v = (u - table[1]) / (table[2] - table[1])
    return 2 + int(math.log(v) / math.log(p))


@njit(cache=True, nogil=True)
def run_block(seed, lo, hi, z0, horizon, cap, mode, table, qtimes,
              status, t_ext, t_kill, z_at, z_h):
    """Simulate replicates [lo, hi); writes one row per replicate.

    Snapshots are right-continuous: the population recorded at a query time
    is the value that holds immediately after any event at that instant.
    """
    n_q = qtimes.shape[0]
    for rep in range(lo, hi):
        state = _stream_init(seed, rep)
        z = z0
        t = 0.0
        qi = 0
        while True:
            if z == 0:
                status[rep] = EXTINCT
                t_ext[rep] = t
                for k in range(qi, n_q):
                    z_at[rep, k] = 0
                z_h[rep] = 0
                break
            state = state + GOLD
            u = _u01(state)
            tn = t - math.log(u) / z
            while qi < n_q and qtimes[qi] < tn:
                z_at[rep, qi] = z
                qi += 1
            if tn > horizon:
                status[rep] = ALIVE
                z_h[rep] = z
                break
            t = tn
            state = state + GOLD
            k = _sample(mode, table, _u01(state))
            if k < 0:
                status[rep] = KILLED
                t_kill[rep] = t
                for j in range(qi, n_q):
                    z_at[rep, j] = GRAVE
                z_h[rep] = GRAVE
                break
            z = z + k - 1
            if z >= cap:
                status[rep] = CAPPED
                for j in range(qi, n_q):
                    z_at[rep, j] = CAPMARK
                z_h[rep] = CAPMARK
                break


@njit(cache=True, nogil=True)
def draw_block(seed, rep, n, mode, table, out):
    """n offspring draws from one replicate stream (for distribution tests)."""
    state = _stream_init(seed, rep)
    for i in range(n):
        state = state + GOLD
        out[i] = _sample(mode, table, _u01(state))


def py_run_block(*args):
    """Pure-Python reference path (identical semantics, numpy wraparound)."""
    fn = run_block.py_func if HAVE_NUMBA else run_block
    with np.errstate(over="ignore"):
        fn(*args)


def py_draw_block(*args):
    fn = draw_block.py_func if HAVE_NUMBA else draw_block
    with np.errstate(over="ignore"):
        fn(*args)
