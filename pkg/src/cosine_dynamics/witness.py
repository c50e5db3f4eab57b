"""Constructive semi-transitivity witnesses.

Given balls around nonzero measures mu and nu and a partition A, D, E of a
window K, build

    mu~  = mu restricted to K \\ A,   nu~ = nu on D,   nu~~ = nu on E,
    a    = |T* mu~| + |S* mu~|,      b  = |T* nu~| + |S* nu~~|,
    phi  = mu~ + 2 sqrt(a)/sqrt(b) * (T* nu~ + S* nu~~),
    lam  = sqrt(b)/sqrt(a),

so that phi stays near mu while lam * C*(phi) lands near nu once the
weight products are small. T*, S* are those of the index system; for the
n-step specialization that is (alpha^n, w_n), i.e. T*^n and S*^n.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .conditions import DEFAULT_GRID_STEP, PartitionScheme, fmt, sup_product
from .dynamics import (CosineSystem, adjoint_S, adjoint_T, backward_weight_product, cosine,
                       forward_weight_product)
from .measure import (AtomicMeasure, CompactWindow, linear_combine, restrict, scale,
                      total_variation, tv_distance)

NORM_KEYS = ("T_mu", "S_mu", "T_nu_D", "S_nu_E", "T2_nu_D", "S2_nu_E")

# relative slack when comparing a recorded norm with its sup-based bound
_BOUND_RTOL = 1e-9


class DegenerateWitness(ValueError):
    """The construction divides by zero: no mass survives outside A."""


@dataclass(frozen=True)
class BallSpec:
    center: AtomicMeasure
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")

    def contains(self, m: AtomicMeasure) -> bool:
        # open ball
        return tv_distance(m, self.center) < self.radius


def proof_epsilon(delta: float, mu_norm: float, nu_norm: float) -> float:
    """min{delta/4, delta^2/(64 |mu| |nu|), delta/(8 |nu|)}."""
    if not (delta > 0 and mu_norm > 0 and nu_norm > 0):
        raise ValueError("delta and both norms must be positive")
    return min(delta / 4, delta ** 2 / (64 * mu_norm * nu_norm), delta / (8 * nu_norm))


@dataclass
class WitnessReport:
    n: int
    epsilon_used: float
    phi: AtomicMeasure
    lam: float
    dist_phi_to_mu: float
    dist_scaled_cosine_to_nu: float
    norm_bounds: dict
    success: bool
    radius_mu: float
    radius_nu: float
    # right-hand sides of the two distance estimates, kept so a violated
    # estimate can be localized
    phi_bound: float = math.nan
    target_bound: float = math.nan
    mu_rest_error: float = 0.0
    nu_rest_error: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def a(self) -> float:
        return self.norm_bounds["T_mu"] + self.norm_bounds["S_mu"]

    @property
    def b(self) -> float:
        return self.norm_bounds["T_nu_D"] + self.norm_bounds["S_nu_E"]

    def to_dict(self) -> dict:
        return {"n": self.n, "epsilon_used": self.epsilon_used,
                "phi": self.phi.to_dict()["atoms"], "lambda": self.lam,
                "dist_phi_to_mu": self.dist_phi_to_mu,
                "dist_scaled_cosine_to_nu": self.dist_scaled_cosine_to_nu,
                "norm_bounds": dict(self.norm_bounds), "success": self.success,
                "radius_mu": self.radius_mu, "radius_nu": self.radius_nu,
                "phi_bound": self.phi_bound, "target_bound": self.target_bound}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def construct_witness(step_sys: CosineSystem, mu: AtomicMeasure, nu: AtomicMeasure,
                      window: CompactWindow, scheme: PartitionScheme,
                      ball_mu: BallSpec, ball_nu: BallSpec, index: int = 1) -> WitnessReport:
    """Witness for one index, given that index's own system (alpha_z, w_z)."""
    if not mu or not nu:
        raise ValueError("mu and nu must be nonzero")
    for name, m in (("mu", mu), ("nu", nu)):
        if not window.supports(m):
            raise ValueError(f"{name} has atoms outside the window")
    for name, ball, m in (("mu", ball_mu, mu), ("nu", ball_nu, nu)):
        if ball.center != m:
            raise ValueError(f"ball_{name} must be centred at {name}")

    mu_t = restrict(mu, scheme.rest)
    nu_d = restrict(nu, scheme.D)
    nu_e = restrict(nu, scheme.E)

    T_mu = adjoint_T(step_sys, mu_t, 1)
    S_mu = adjoint_S(step_sys, mu_t, 1)
    T_nu = adjoint_T(step_sys, nu_d, 1)
    S_nu = adjoint_S(step_sys, nu_e, 1)
    norms = {
        "T_mu": total_variation(T_mu),
        "S_mu": total_variation(S_mu),
        "T_nu_D": total_variation(T_nu),
        "S_nu_E": total_variation(S_nu),
        "T2_nu_D": total_variation(adjoint_T(step_sys, nu_d, 2)),
        "S2_nu_E": total_variation(adjoint_S(step_sys, nu_e, 2)),
    }
    a = norms["T_mu"] + norms["S_mu"]
    b = norms["T_nu_D"] + norms["S_nu_E"]
    if a == 0 or b == 0:
        raise DegenerateWitness(
            "no mass of mu outside A" if a == 0 else "no mass of nu in D or E")

    coef = 2.0 * math.sqrt(a) / math.sqrt(b)
    phi = linear_combine(1.0, mu_t, coef, linear_combine(1.0, T_nu, 1.0, S_nu))
    lam = math.sqrt(b) / math.sqrt(a)
    target = scale(cosine(step_sys, phi, 1), lam)

    dist_phi = tv_distance(phi, mu)
    dist_target = tv_distance(target, nu)
    mu_err = tv_distance(mu, mu_t)
    nu_err = tv_distance(linear_combine(1.0, nu_d, 1.0, nu_e), nu)
    root_ab = math.sqrt(a) * math.sqrt(b)
    delta = min(ball_mu.radius, ball_nu.radius)
    return WitnessReport(
        n=index,
        epsilon_used=proof_epsilon(delta, total_variation(mu), total_variation(nu)),
        phi=phi, lam=lam,
        dist_phi_to_mu=dist_phi, dist_scaled_cosine_to_nu=dist_target,
        norm_bounds=norms,
        success=bool(dist_phi < ball_mu.radius and dist_target < ball_nu.radius),
        radius_mu=ball_mu.radius, radius_nu=ball_nu.radius,
        phi_bound=mu_err + 2.0 * root_ab,
        target_bound=0.5 * root_ab + norms["T2_nu_D"] + norms["S2_nu_E"] + nu_err,
        mu_rest_error=mu_err, nu_rest_error=nu_err,
        extras={"operand_norms": {"phi": total_variation(phi) + total_variation(mu),
                                  "target": total_variation(target) + total_variation(nu)}},
    )


def build_witness(sys: CosineSystem, n: int, mu: AtomicMeasure, nu: AtomicMeasure,
                  window: CompactWindow, scheme: PartitionScheme,
                  ball_mu: BallSpec, ball_nu: BallSpec) -> WitnessReport:
    """Witness for the n-step system (alpha^n, prod_{j<n} w o alpha^j)."""
    return construct_witness(sys.power(n), mu, nu, window, scheme, ball_mu, ball_nu, index=n)


def proof_bounds(step_sys: CosineSystem, scheme: PartitionScheme, mu: AtomicMeasure,
                 nu: AtomicMeasure, grid_step: float = DEFAULT_GRID_STEP) -> dict:
    """Sup-based upper bounds for the six recorded norms."""
    mu_n, nu_n = total_variation(mu), total_variation(nu)
    rest = scheme.rest

    def sup(region, k, direction):
        return sup_product(step_sys, region, k, direction, grid_step)

    return {
        "T_mu": sup(rest, 1, "forward") * mu_n,
        "S_mu": sup(rest, 1, "backward") * mu_n,
        "T_nu_D": sup(scheme.D, 1, "forward") * nu_n,
        "S_nu_E": sup(scheme.E, 1, "backward") * nu_n,
        "T2_nu_D": sup(scheme.D, 2, "forward") * nu_n,
        "S2_nu_E": sup(scheme.E, 2, "backward") * nu_n,
    }


def certify_proof_bounds(report: WitnessReport, sys: CosineSystem, n: int,
                         scheme: PartitionScheme, window: CompactWindow,
                         mu: AtomicMeasure, nu: AtomicMeasure,
                         grid_step: float = DEFAULT_GRID_STEP,
                         step_sys: CosineSystem | None = None) -> bool:
    """Check every recorded norm against its sup-based bound.

    The sample grid contains the atoms' own positions whenever they are
    lattice points or breakpoints; to make the comparison grid-independent
    the bounds are also evaluated on the atoms themselves.
    """
    step_sys = sys.power(n) if step_sys is None else step_sys
    bounds = proof_bounds(step_sys, scheme, mu, nu, grid_step)
    bounds = _with_atom_sups(bounds, step_sys, scheme, mu, nu)
    return all(report.norm_bounds[k] <= bounds[k] * (1 + _BOUND_RTOL) for k in NORM_KEYS)


def _with_atom_sups(bounds, step_sys, scheme, mu, nu):
    """Raise each bound to at least the value at the relevant atoms.

    A sampled sup may miss an atom lying between grid points; the true sup
    over the set is at least the value there.
    """
    mu_n, nu_n = total_variation(mu), total_variation(nu)
    specs = {
        "T_mu": (mu, scheme.rest, forward_weight_product, 1, mu_n),
        "S_mu": (mu, scheme.rest, backward_weight_product, 1, mu_n),
        "T_nu_D": (nu, scheme.D, forward_weight_product, 1, nu_n),
        "S_nu_E": (nu, scheme.E, backward_weight_product, 1, nu_n),
        "T2_nu_D": (nu, scheme.D, forward_weight_product, 2, nu_n),
        "S2_nu_E": (nu, scheme.E, backward_weight_product, 2, nu_n),
    }
    out = dict(bounds)
    for key, (m, region, product, k, norm) in specs.items():
        pos = m.positions[region(m.positions)] if m else m.positions
        if pos.size:
            out[key] = max(out[key], float(product(step_sys, pos, k).max()) * norm)
    return out


def bookkeeping_holds(report: WitnessReport, rtol: float = 1e-9,
                      ulps: float | None = 4.0) -> tuple[bool, bool]:
    """The two distance estimates: |phi - mu| and |lam C*(phi) - nu|.

    Each distance is a difference of measures whose masses can be far larger
    than the distance itself, so its rounding error is a few ulps of the
    operand norms rather than of the bound. ``ulps`` sets that absolute
    floor; ``ulps=None`` compares with the relative slack alone.
    """
    norms = report.extras.get("operand_norms", {})

    def floor(key):
        if ulps is None:
            return 0.0
        return ulps * np.finfo(float).eps * norms.get(key, 0.0)

    ok_phi = report.dist_phi_to_mu <= report.phi_bound * (1 + rtol) + floor("phi")
    ok_target = (report.dist_scaled_cosine_to_nu
                 <= report.target_bound * (1 + rtol) + floor("target"))
    return bool(ok_phi), bool(ok_target)


@dataclass
class ScanResult:
    reports: list
    N: int | None
    case: str
    horizon: int

    @property
    def found(self) -> bool:
        return self.N is not None

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "lambda", "dist_phi", "dist_target", "success"])
        for r in self.reports:
            writer.writerow([r.n, fmt(r.lam), fmt(r.dist_phi_to_mu),
                             fmt(r.dist_scaled_cosine_to_nu), int(r.success)])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"case": self.case, "horizon": self.horizon, "N": self.N,
                "reports": [r.to_dict() for r in self.reports]}


def scan_witnesses(sys: CosineSystem, mu: AtomicMeasure, nu: AtomicMeasure,
                   window: CompactWindow, ball_mu: BallSpec, ball_nu: BallSpec,
                   horizon: int, case="e-equals-k") -> ScanResult:
    """Build witnesses for n = 1..horizon and find the least N with success on [N, horizon].

    ``case`` is 'd-equals-k', 'e-equals-k', or a mapping n -> PartitionScheme.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if isinstance(case, str):
        scheme = PartitionScheme.corollary(window, case)
        schemes = {n: scheme for n in range(1, horizon + 1)}
        label = case
    else:
        schemes = dict(case)
        label = "custom"
    reports = [build_witness(sys, n, mu, nu, window, schemes[n], ball_mu, ball_nu)
               for n in range(1, horizon + 1)]
    N = None
    for r in reversed(reports):
        if not r.success:
            break
        N = r.n
    return ScanResult(reports, N, label, horizon)
