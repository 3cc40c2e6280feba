"""
Offspring laws and tail generating functions
============================================

Every offspring law f(s) = sum p_k s^k in the package exposes the same
surface: evaluation, derivatives, coefficients, a defect mass p_Delta
(probability of jumping to the killing state), and the n-argument tail
generating functions

    v(s_1, ..., s_n) = divided difference of f over the nodes,

which are the symmetric functions the rest of the package is built on.
"""

import numpy as np

from tailgf.laws import (
    FiniteSupport,
    HarrisYule,
    ModifiedLinearFractional,
    PowerFractional,
    Trifurcation,
    moments,
    tail_gf,
    xlogx_integral,
    xlogx_moment,
)

# ---------------------------------------------------------------------------
# a small zoo
# ---------------------------------------------------------------------------

binary = FiniteSupport((0.4, 0.0, 0.4), 0.2)  # defective: 20% killing mass
mlf = ModifiedLinearFractional(0.3, 0.1, 0.05, 0.4)  # geometric tail
tri = Trifurcation(0.4, 0.3, 0.2)  # cubic with implicit defect
pf = PowerFractional(0.5, 2.0, 0.4, 0.5)  # algebraic tail, no coefficients
yule = HarrisYule(2)  # f(s) = s^3

for law in (binary, mlf, tri, pf, yule):
    m = moments(law)
    print(f"{type(law).__name__:26s} f(0.5) = {law.evaluate(0.5):.6f}"
          f"   defect = {law.defect:.4f}   mean = {m.m1:.4f}")

# ---------------------------------------------------------------------------
# tail GFs: symmetric, recursive, and exact for stored coefficients
# ---------------------------------------------------------------------------

pts = (0.2, 0.7, 1.1)
print("\nv(0.2, 0.7, 1.1) for the cubic law:")
print("  series route            ", tail_gf(tri, pts, method="series"))
print("  divided-difference route", tail_gf(tri, pts, method="divided_difference"))
print("  permuted arguments      ", tail_gf(tri, (1.1, 0.2, 0.7)))

# repeated arguments pick up derivatives: v(a, a) = f'(a), v(a,a,a) = f''(a)/2
a = 0.8
print(f"\nconfluent nodes at a = {a}:")
print("  v(a, a)    =", tail_gf(tri, (a, a)), "   f'(a)    =", tri.derivative(a, 1))
print("  v(a, a, a) =", tail_gf(tri, (a, a, a)), "   f''(a)/2 =",
      tri.derivative(a, 2) / 2.0)

# a degree-3 law has identically zero tail GFs once five nodes are supplied
print("\nfive-node tail GF of the cubic (exact zero):",
      tail_gf(tri, (0.1, 0.4, 0.9, 1.2, 1.5)))

# both fixed points as arguments always give v(q, r) = 1
print("v(q, r) at the binary fixed points 1/2, 2:", tail_gf(binary, (0.5, 2.0)))

# ---------------------------------------------------------------------------
# x log x functionals, two ways
# ---------------------------------------------------------------------------

# the weighted moment sum p_k a^k k^n log k and the equivalent integral of a
# tail GF agree; both decide whether various limit laws degenerate
for law in (tri, FiniteSupport((0.2, 0.0, 0.8))):
    s_val = xlogx_integral(law, 1.0, 1, method="series")
    q_val = xlogx_integral(law, 1.0, 1, method="quadrature")
    print(f"\n{type(law).__name__}: integral route {q_val:.12f} vs series {s_val:.12f}")
    print("  moment sum:", xlogx_moment(law, 1.0, 1))
