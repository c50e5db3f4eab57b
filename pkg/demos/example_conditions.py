"""
Decay conditions on the example system
======================================

Sampled sup-products over the window [-5, 5], the three limit conditions,
the per-index partition check and the divergence of the plain forward
product at a single point.
"""

# %%
from cosine_dynamics import (AtomicMeasure, CompactWindow, build_example, check_corollary,
                             check_forward_divergence, check_theorem_partition,
                             corollary_family, sup_product)
from cosine_dynamics.scenarios import constant_system

sys = build_example()
K = CompactWindow(-5.0, 5.0)

# %%
# Forward products are largest at the left end (weight 4 there), backward
# products at the right end. Their product still decays by 1/2 per step.
for n in (1, 5, 10, 20):
    f = sup_product(sys, K, n, "forward")
    b = sup_product(sys, K, n, "backward")
    print(f"n={n:2d}  sup fwd = {f:.4g}  sup bwd = {b:.4g}  product = {f * b:.4g}")

# %%
report = check_corollary(sys, K, horizon=60, tol=1e-6)
print("verdicts:", report.verdicts, "overall:", report.overall)
print("a_n for the last five n:", [f"{v:.3g}" for v in report.values["a"][-5:]])

# %%
# The isometric control never decays.
control = check_corollary(constant_system(1.0), K, horizon=60, tol=1e-6)
print("w == 1:", control.verdicts, control.overall)

# %%
# Per-index check with A = D = empty and E = K for the n-step systems.
systems, schemes = corollary_family(sys, 60, "e-equals-k", K)
mu, nu = AtomicMeasure.dirac(-2.0), AtomicMeasure.dirac(2.0)
thm = check_theorem_partition(systems, mu, nu, K, 1e-3, schemes)
print("all eight inequalities hold from n0 =", thm.n0)

# %%
# Meanwhile the forward product at t = 0 blows up: 3 * 2**(n-1).
print("forward product at 0 exceeds 1e6 at n =", check_forward_divergence(sys, 0.0, 1e6, 30))
