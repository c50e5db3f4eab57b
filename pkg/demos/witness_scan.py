"""
Witness scan
============

For mu = delta at -2 and nu = delta at 2, build phi near mu and lambda > 0
with lambda * C_n*(phi) near nu, for every n up to a horizon.
"""

# %%
from cosine_dynamics import (AtomicMeasure, BallSpec, CompactWindow, PartitionScheme,
                             build_example, build_witness, certify_proof_bounds, scan_witnesses)
from cosine_dynamics.scenarios import constant_system
from cosine_dynamics.witness import bookkeeping_holds

sys = build_example()
K = CompactWindow(-5.0, 5.0)
mu, nu = AtomicMeasure.dirac(-2.0), AtomicMeasure.dirac(2.0)
ball_mu, ball_nu = BallSpec(mu, 0.25), BallSpec(nu, 0.25)

# %%
# A single witness. With E = K the whole of nu is pulled back by S*.
scheme = PartitionScheme.corollary(K, "e-equals-k")
r = build_witness(sys, 12, mu, nu, K, scheme, ball_mu, ball_nu)
print("phi =", r.phi)
print(f"lambda = {r.lam:.4g}  dist(phi, mu) = {r.dist_phi_to_mu:.3g}  "
      f"dist(lambda C*phi, nu) = {r.dist_scaled_cosine_to_nu:.3g}  success = {r.success}")
print("norm bounds certified:", certify_proof_bounds(r, sys, 12, scheme, K, mu, nu))
print("distance estimates hold:", bookkeeping_holds(r))

# %%
# Scan both specializations. Only the backward case sees decay here.
for case in ("e-equals-k", "d-equals-k"):
    scan = scan_witnesses(sys, mu, nu, K, ball_mu, ball_nu, horizon=200, case=case)
    print(f"{case}: N = {scan.N}")

# %%
scan = scan_witnesses(constant_system(1.0), mu, nu, K, ball_mu, ball_nu, horizon=100)
print("w == 1: N =", scan.N)
