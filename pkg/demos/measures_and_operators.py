"""
Atomic measures and the adjoint operators
=========================================

Build a couple of atomic measures, push them through T*, S* and the cosine
family C_n*, and check the algebra numerically.
"""

# %%
import numpy as np

from cosine_dynamics import (AtomicMeasure, adjoint_S, adjoint_T, apply_function_operator,
                             build_example, cosine, duality_pairing, total_variation)
from cosine_dynamics.dynamics import PiecewiseLinear

# %%
# A measure is a list of (position, mass) atoms. Coincident atoms merge and
# zero masses vanish, so equality is plain array equality.
m = AtomicMeasure.from_atoms([(0.0, 1.0), (0.5, -2.0), (0.0, 0.25)])
print(m, "TV =", total_variation(m))

# %%
# The example system: shift by one, weight 4 on the left, 2 on the right and
# a linear ramp on [-1, 1].
sys = build_example()
print("w(-1), w(0), w(1) =", sys.weight([-1.0, 0.0, 1.0]))

# %%
# One step forward moves the atom at 0 to 1 with mass w(0) = 3; one step back
# moves it to -1 with mass 1/w(-1) = 1/4. The cosine step averages the two.
d0 = AtomicMeasure.dirac(0.0)
print("T* d0  =", adjoint_T(sys, d0, 1))
print("S* d0  =", adjoint_S(sys, d0, 1))
print("C1* d0 =", cosine(sys, d0, 1), "TV", total_variation(cosine(sys, d0, 1)))

# %%
# d'Alembert: 2 C_m* C_n* = C_{m+n}* + C_{m-n}*.
for mm, n in [(3, 1), (5, 2), (6, 6)]:
    lhs = 2.0 * cosine(sys, cosine(sys, m, n), mm)
    rhs = cosine(sys, m, mm + n) + cosine(sys, m, mm - n)
    print(f"m={mm} n={n}  TV(lhs - rhs) = {total_variation(lhs - rhs):.2e}")

# %%
# Duality with the function side: <T*^n m, f> equals sum of masses times T^n f.
f = PiecewiseLinear([(-2.0, 1.0), (0.0, -1.0), (3.0, 2.0)])
for n in (1, 4, 9):
    lhs = duality_pairing(adjoint_T(sys, m, n), f)
    rhs = float(np.dot(m.masses, apply_function_operator(sys, f, m.positions, n, "forward")))
    print(f"n={n}  <T*^n m, f> = {lhs:+.6f}   <m, T^n f> = {rhs:+.6f}")
