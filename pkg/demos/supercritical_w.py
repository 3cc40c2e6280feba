"""
The martingale limit W of a supercritical process
=================================================

For a supercritical law (q < 1 = r), Z_t e^{-beta t} converges to a random
variable W with P(W = 0) = q and E W = 1, unless the x log x moment is
infinite, in which case W degenerates to 0.  The Laplace transform
eta(rho) = E e^{-rho W} solves a fixed-point equation in the Koenigs
coordinate; a classical integral representation provides an independent
route to the same function.
"""

import math

from tailgf.laws import FiniteSupport, HarrisYule, moments
from tailgf.limits import w_transform, w_transform_classical
from tailgf.profiles import get_profile

# ---------------------------------------------------------------------------
# two laws with known closed forms
# ---------------------------------------------------------------------------

sup = FiniteSupport((0.2, 0.0, 0.8))  # q = 1/4, gamma = 1
yule = HarrisYule(2)  # f(s) = s^3, q = 0, gamma = 1/2

w_sup = w_transform(sup)
w_yule = w_transform(yule)

print("eta(rho) three ways (kernel equation / classical integral / closed form):")
for rho in (0.25, 1.0, 4.0):
    a = w_sup.eta(rho)
    b = w_transform_classical(sup, None, rho)
    c = 0.25 + 0.5625 / (rho + 0.75)  # q + (1-q)^2/(rho + 1 - q) for gamma = 1
    print(f"  binary  rho = {rho:5.2f}: {a:.15f} / {b:.15f} / {c:.15f}")
for rho in (0.25, 1.0, 4.0):
    a = w_yule.eta(rho)
    b = w_transform_classical(yule, None, rho)
    c = 1.0 / math.sqrt(1.0 + 2.0 * rho)  # triple splitting
    print(f"  yule    rho = {rho:5.2f}: {a:.15f} / {b:.15f} / {c:.15f}")

# ---------------------------------------------------------------------------
# moments out of the transform
# ---------------------------------------------------------------------------

m = moments(sup)
prof = get_profile(sup)
print(f"\nbinary law: E W = {w_sup.mean:.9f} (theory 1),"
      f" E W^2 = {w_sup.second_moment:.9f} (theory 2 m2/beta = {2*m.m2/prof.beta:.9f})")
print(f"mass at zero: P(W = 0) = q = {w_sup.q}")

# ---------------------------------------------------------------------------
# the x log x dichotomy
# ---------------------------------------------------------------------------

# laws can advertise an infinite x log x moment through a hint hook; the
# transform then degenerates to eta = 1, i.e. W = 0 almost surely
class StressTestLaw(FiniteSupport):
    def xlogx_finite_hint(self, a, n):
        return False


w_deg = w_transform(StressTestLaw((0.2, 0.0, 0.8)))
print(f"\nhinted infinite x log x moment: degenerate = {w_deg.degenerate},"
      f" eta(anything) = {w_deg.eta(3.0)}, E W = {w_deg.mean}")
