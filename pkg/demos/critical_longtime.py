"""
Critical laws: the long-time expansion beyond Kolmogorov's 1/t
==============================================================

For a critical law with enough moments,

    1 - F_t(s) = 1/(m2 t) + (m3/m2^3) log(m2 t)/t^2 - A(s)/(m2^2 t^2) + o(1/t^2),

where m2 = f''(1)/2, m3 = f'''(1)/6 and A collects a kernel integral.  The
leading term is the classical extinction-rate asymptotic; the log term only
appears when the third moment is nonzero.
"""

import math

import numpy as np

from tailgf.laws import FiniteSupport, Trifurcation, mlf_critical
from tailgf.limits import critical_expansion
from tailgf.transition import transition

# ---------------------------------------------------------------------------
# a law with an exact flow: the balanced binary
# ---------------------------------------------------------------------------

binary = FiniteSupport((0.5, 0.0, 0.5))
ce = critical_expansion(binary)
print(f"balanced binary: lead = {ce.lead}, log coeff = {ce.log_coeff},"
      f" constant = {ce.const_coeff}")
print("exact flow 1 - F_t(0) = 2/(2 + t); expansion error is O(1/t^3):")
for t in (10.0, 100.0, 1000.0):
    exact = 2.0 / (2.0 + t)
    approx = ce.tail_probability(t, 0.0)
    print(f"  t = {t:6.0f}: exact {exact:.9e}  expansion {approx:.9e}"
          f"  t^3 * diff = {(exact - approx) * t**3:.3f}")

# ---------------------------------------------------------------------------
# a skewed law: the log term is real and the residual shrinks like 1/t^2
# ---------------------------------------------------------------------------

skew = mlf_critical(0.5, 0.25)
ce = critical_expansion(skew)
print(f"\nskewed mlf: lead = {ce.lead}, log coeff = {ce.log_coeff},"
      f" constant = {ce.const_coeff}")
print("residual after removing lead and log terms, times t^2 -> -constant:")
for t in (1e2, 1e4, 1e6):
    exact = 1.0 - transition(skew, t, 0.0).value
    resid = exact - ce.lead / t - ce.log_coeff * math.log(ce.m2 * t) / t**2
    print(f"  t = {t:8.0e}: residual * t^2 = {resid * t * t:+.6f}")

# ---------------------------------------------------------------------------
# a non-linear-fractional critical law needs the kernel integral inside A
# ---------------------------------------------------------------------------

tri = Trifurcation(0.65, 0.05, 0.3)
ce = critical_expansion(tri, n=5)
print(f"\ncritical trifurcation: lead = {ce.lead:.10f},"
      f" log coeff = {ce.log_coeff:.8f}, constant = {ce.const_coeff:.8f}")
print("first A-series coefficients:", np.round(ce.h, 6))
t = 1e5
exact = 1.0 - transition(tri, t, 0.0).value
pred = ce.tail_probability(t, 0.0)
print(f"at t = 1e5: exact tail {exact:.12e} vs expansion {pred:.12e}"
      f" (rel dev {abs(exact - pred)/exact:.1e})")
