"""Sup-of-weight-product quantities over compact windows and the checks built on them.

Suprema are taken over a deterministic sample grid (see :func:`sample_grid`).
Products of piecewise-linear factors only change shape where some factor
hits a breakpoint, so the grid always contains every breakpoint pulled back
through the relevant iterates of alpha, the endpoints of each component of
the region, and a uniform lattice ``k * grid_step`` inside it.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .dynamics import (CocycleWeight, CosineSystem, _log_weight, backward_weight_product,
                       forward_weight_product)
from .measure import AtomicMeasure, CompactWindow, restrict, total_variation
from .sets import IntervalSet, as_set

DEFAULT_GRID_STEP = 1e-3

HOLDS = "HOLDS"
FAILS = "FAILS"
INCONCLUSIVE = "INCONCLUSIVE"

# relative slack for monotonicity tests on computed sequences
_MONO_RTOL = 1e-12


# ---------------------------------------------------------------------------
# grids and suprema
# ---------------------------------------------------------------------------

def _pulled_nodes(sys: CosineSystem, depth: int, direction: str) -> np.ndarray:
    nodes = np.asarray(sys.weight.nodes, dtype=float)
    if not nodes.size or depth < 1:
        return np.empty(0)
    if direction == "forward":
        # factor j is w(alpha^j t); it kinks where alpha^j t is a node
        steps = -np.arange(depth)
    else:
        steps = np.arange(1, depth + 1)
    return sys.alpha.iterate(nodes[None, :], steps[:, None]).ravel()


def sample_grid(sys: CosineSystem, region, depth: int, direction: str,
                grid_step: float = DEFAULT_GRID_STEP) -> np.ndarray:
    """Sorted sample points of ``region`` for products of up to ``depth`` factors."""
    _check_direction(direction)
    if grid_step <= 0:
        raise ValueError("grid_step must be positive")
    region = as_set(region)
    bounds = region.bounds()
    if bounds is None:
        return np.empty(0)
    lo, hi = bounds
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("suprema are only taken over bounded regions")
    k = np.arange(math.ceil(lo / grid_step), math.floor(hi / grid_step) + 1)
    pts = np.concatenate((k * grid_step, _pulled_nodes(sys, depth, direction),
                          region.closure_points(), [lo, hi]))
    pts = pts[(pts >= lo) & (pts <= hi)]
    return np.unique(pts[region.in_closure(pts)])


def _check_direction(direction):
    if direction not in ("forward", "backward"):
        raise ValueError(f"direction must be 'forward' or 'backward', got {direction!r}")


def log_products(sys: CosineSystem, pts: np.ndarray, depths, direction: str) -> np.ndarray:
    """Row i holds log of the depths[i]-step product at every sample point.

    n-step systems delegate to their base system with k*n factors. For a
    translation with a piecewise-linear weight the orbit t + j*b meets the
    non-constant part of w for only a few j, so tail factors are counted
    rather than evaluated; otherwise the orbit matrix is summed directly.
    """
    pts = np.asarray(pts, dtype=float)
    depths = np.asarray(depths, dtype=int).reshape(-1)
    if isinstance(sys.weight, CocycleWeight):
        return log_products(sys.weight.base, pts, depths * sys.weight.n, direction)
    alpha = sys.alpha
    xs = np.asarray(getattr(sys.weight, "xs", ()), dtype=float)
    if alpha.is_translation and alpha.b != 0 and xs.size and hasattr(sys.weight, "left_tail"):
        return _log_products_translation(sys, pts, depths, direction)
    depth = int(depths.max())
    if direction == "forward":
        steps, sign = np.arange(depth), 1.0
    else:
        steps, sign = -np.arange(1, depth + 1), -1.0
    orbit = alpha.iterate(pts[None, :], steps[:, None])
    cum = sign * np.cumsum(_log_weight(sys.weight, orbit), axis=0)
    return cum[depths - 1]


def _log_products_translation(sys, pts, depths, direction):
    w = sys.weight
    b = sys.alpha.b
    x0, xl = w.xs[0], w.xs[-1]
    # indices j with x0 <= t + j*b <= xl form the integer interval [j_lo, j_hi]
    if b > 0:
        j_lo, j_hi = np.ceil((x0 - pts) / b), np.floor((xl - pts) / b)
        below_tail, above_tail = w.left_tail, w.right_tail
    else:
        j_lo, j_hi = np.ceil((xl - pts) / b), np.floor((x0 - pts) / b)
        below_tail, above_tail = w.right_tail, w.left_tail
    log_below, log_above = math.log(below_tail), math.log(above_tail)
    width = int(np.max(j_hi - j_lo, initial=-1)) + 1
    out = np.empty((depths.size, pts.size))
    for i, d in enumerate(depths):
        if direction == "forward":
            first, last, sign = 0, int(d) - 1, 1.0
        else:
            first, last, sign = -int(d), -1, -1.0
        # j in [first, last] split into j < j_lo, ramp, j > j_hi
        n_below = np.clip(j_lo - first, 0, last - first + 1)
        n_above = np.clip(last - j_hi, 0, last - first + 1)
        total = n_below * log_below + n_above * log_above
        if width > 0:
            js = j_lo[None, :] + np.arange(width)[:, None]
            inside = (js <= j_hi[None, :]) & (js >= first) & (js <= last)
            vals = np.where(inside, w.log(pts[None, :] + js * b), 0.0)
            total = total + vals.sum(axis=0)
        out[i] = sign * total
    return out


def log_sup_product(sys: CosineSystem, region, n: int, direction: str,
                    grid_step: float = DEFAULT_GRID_STEP) -> float:
    """log of :func:`sup_product`; ``-inf`` for an empty region."""
    pts = sample_grid(sys, region, n, direction, grid_step)
    if not pts.size:
        return -math.inf
    return float(log_products(sys, pts, [n], direction)[0].max())


def sup_product(sys: CosineSystem, region, n: int, direction: str,
                grid_step: float = DEFAULT_GRID_STEP) -> float:
    """Sampled supremum of the n-step forward or backward weight product.

    Parameters
    ----------
    sys : CosineSystem
    region : CompactWindow, IntervalSet or (lo, hi)
        Bounded set to take the supremum over. The supremum over an empty
        set is 0.
    n : int
        Number of factors.
    direction : {'forward', 'backward'}
        ``prod_{j=0}^{n-1} w(alpha^j t)`` or ``prod_{j=1}^{n} 1/w(alpha^-j t)``.
    grid_step : float
        Lattice spacing of the uniform part of the sample grid.
    """
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    pts = sample_grid(sys, region, n, direction, grid_step)
    if not pts.size:
        return 0.0
    best = pts[int(np.argmax(log_products(sys, pts, [n], direction)[0]))]
    product = forward_weight_product if direction == "forward" else backward_weight_product
    return float(product(sys, best, n))


@dataclass
class SupProductCurve:
    window: object
    direction: str
    ns: list
    values: list
    sample_count: int
    grid_step: float

    @property
    def log_values(self):
        return [math.log(v) if v > 0 else -math.inf for v in self.values]


def sup_product_curve(sys: CosineSystem, region, ns, direction: str,
                      grid_step: float = DEFAULT_GRID_STEP) -> SupProductCurve:
    """Suprema for several step counts on one shared grid (built for max(ns))."""
    ns = [int(n) for n in ns]
    depth = max(ns)
    pts = sample_grid(sys, region, depth, direction, grid_step)
    if pts.size:
        best = pts[np.argmax(log_products(sys, pts, ns, direction), axis=1)]
        product = forward_weight_product if direction == "forward" else backward_weight_product
        with np.errstate(over="ignore", under="ignore"):
            values = [float(product(sys, t, n)) for t, n in zip(best, ns)]
    else:
        values = [0.0] * len(ns)
    return SupProductCurve(region, direction, ns, values, int(pts.size), grid_step)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class ConditionReport:
    """Per-index values of the checked quantities plus verdicts.

    ``params`` records everything needed to recompute the verdicts.
    """

    kind: str
    ns: list
    values: dict
    verdicts: dict
    overall: str
    params: dict = field(default_factory=dict)
    all_hold: list | None = None
    holds_indices: list | None = None
    n0: int | None = None

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "params": self.params, "ns": list(self.ns),
             "values": {k: list(v) for k, v in self.values.items()},
             "verdicts": dict(self.verdicts), "overall": self.overall}
        if self.all_hold is not None:
            d["all_hold"] = list(self.all_hold)
            d["holds_indices"] = list(self.holds_indices)
            d["n0"] = self.n0
        return d

    def to_json(self) -> str:
        return json.dumps(_jsonable(self.to_dict()), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if self.kind == "corollary":
            cols = ["a", "b", "c"]
            writer.writerow(["n"] + [f"value_{c}" for c in cols])
        else:
            cols = list(self.values)
            writer.writerow(["n"] + cols + ["all_hold"])
        for i, n in enumerate(self.ns):
            row = [n] + [fmt(self.values[c][i]) for c in cols]
            if self.kind != "corollary":
                row.append(int(self.all_hold[i]))
            writer.writerow(row)
        return buf.getvalue()


def fmt(x: float) -> str:
    """17 significant digits, round-trippable."""
    return f"{x:.17g}"


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


# ---------------------------------------------------------------------------
# the three limit conditions
# ---------------------------------------------------------------------------

def _nonincreasing(v):
    return all(b <= a * (1 + _MONO_RTOL) for a, b in zip(v, v[1:]))


def _nondecreasing(v):
    return all(b >= a * (1 - _MONO_RTOL) for a, b in zip(v, v[1:]))


def limit_verdict(values, tol: float) -> str:
    """Finite-horizon proxy for ``values -> 0``.

    HOLDS when the last value is below ``tol`` and the last quarter is
    non-increasing. FAILS when the last quarter shows no decay at all
    (non-decreasing while staying at or above ``tol``) or sits above
    ``1/tol``. Anything else is INCONCLUSIVE.
    """
    q = max(2, math.ceil(len(values) / 4))
    tail = list(values[-q:])
    if tail[-1] < tol and _nonincreasing(tail):
        return HOLDS
    if (min(tail) >= tol and _nondecreasing(tail)) or min(tail) > 1.0 / tol:
        return FAILS
    return INCONCLUSIVE


def _mixed(f: float, b: float) -> float:
    """f * b, falling back to log-space when a factor is out of float range."""
    prod = f * b
    if math.isfinite(prod) and (prod > 0 or f == 0 or b == 0):
        if math.isfinite(f) and math.isfinite(b):
            return prod
    if f == 0 or b == 0:
        return 0.0
    return math.exp(min(math.log(f) + math.log(b), 709.0))


def check_corollary(sys: CosineSystem, window, horizon: int, tol: float,
                    grid_step: float = DEFAULT_GRID_STEP) -> ConditionReport:
    """Evaluate the three limit conditions for n = 1..horizon.

    (a) sup fwd(n) * sup bwd(n), (b) sup fwd(2n), (c) sup bwd(2n). The
    overall verdict is HOLDS when (a) holds together with (b) or (c).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if int(horizon) != horizon or horizon < 4:
        raise ValueError("horizon must be an integer >= 4")
    horizon = int(horizon)
    ns = list(range(1, horizon + 1))
    all_ns = list(range(1, 2 * horizon + 1))
    fwd = sup_product_curve(sys, window, all_ns, "forward", grid_step)
    bwd = sup_product_curve(sys, window, all_ns, "backward", grid_step)
    a = [_mixed(fwd.values[n - 1], bwd.values[n - 1]) for n in ns]
    b = [fwd.values[2 * n - 1] for n in ns]
    c = [bwd.values[2 * n - 1] for n in ns]
    verdicts = {k: limit_verdict(v, tol) for k, v in (("a", a), ("b", b), ("c", c))}
    if verdicts["a"] == HOLDS and HOLDS in (verdicts["b"], verdicts["c"]):
        overall = HOLDS
    elif verdicts["a"] == FAILS or (verdicts["b"] == FAILS and verdicts["c"] == FAILS):
        overall = FAILS
    else:
        overall = INCONCLUSIVE
    w = CompactWindow(*as_set(window).bounds())
    params = {"window": [w.lo, w.hi], "horizon": horizon, "tol": tol,
              "grid_step": grid_step,
              "sample_count": {"forward": fwd.sample_count, "backward": bwd.sample_count}}
    return ConditionReport("corollary", ns, {"a": a, "b": b, "c": c}, verdicts, overall, params)


# ---------------------------------------------------------------------------
# partition schemes and the general sufficient condition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PartitionScheme:
    """Sets A, D, E inside a window K with D, E partitioning K minus A."""

    A: IntervalSet
    D: IntervalSet
    E: IntervalSet
    window: CompactWindow

    def __post_init__(self):
        K = as_set(self.window)
        for name in ("A", "D", "E"):
            if not getattr(self, name).issubset(K):
                raise ValueError(f"{name} must lie inside the window")
        if not self.D.isdisjoint(self.E):
            raise ValueError("D and E must be disjoint")
        if (self.D | self.E) != (K - self.A):
            raise ValueError("D and E must cover the window minus A")

    @property
    def rest(self) -> IntervalSet:
        """Complement of A inside the window."""
        return as_set(self.window) - self.A

    @classmethod
    def corollary(cls, window: CompactWindow, case: str) -> "PartitionScheme":
        """The two specializations: 'd-equals-k' (A=E=empty) or 'e-equals-k' (A=D=empty)."""
        K = as_set(window)
        empty = IntervalSet.empty()
        case = case.replace("_", "-").lower()
        if case == "d-equals-k":
            return cls(empty, K, empty, window)
        if case == "e-equals-k":
            return cls(empty, empty, K, window)
        raise ValueError(f"unknown case {case!r}")

    def to_dict(self) -> dict:
        return {"A": self.A.to_list(), "D": self.D.to_list(), "E": self.E.to_list(),
                "window": [self.window.lo, self.window.hi]}

    @classmethod
    def from_dict(cls, d: dict) -> "PartitionScheme":
        return cls(IntervalSet.from_list(d["A"]), IntervalSet.from_list(d["D"]),
                   IntervalSet.from_list(d["E"]), CompactWindow(*d["window"]))


THEOREM_CONDITIONS = (
    "mu_A", "nu_A",
    "fwd_rest*fwd_D", "fwd_rest*bwd_E", "bwd_rest*fwd_D", "bwd_rest*bwd_E",
    "fwd2_D", "bwd2_E",
)


def theorem_quantities(sys: CosineSystem, mu: AtomicMeasure, nu: AtomicMeasure,
                       scheme: PartitionScheme,
                       grid_step: float = DEFAULT_GRID_STEP) -> dict:
    """Left-hand sides of the eight partition inequalities for one index system.

    ``sys`` is the index's own system (alpha_z, w_z): one-step forward sups
    are sups of w_z, one-step backward sups are sups of 1/w_z(alpha_z^-1 t).
    """
    rest = scheme.rest
    fwd_rest = sup_product(sys, rest, 1, "forward", grid_step)
    bwd_rest = sup_product(sys, rest, 1, "backward", grid_step)
    fwd_D = sup_product(sys, scheme.D, 1, "forward", grid_step)
    bwd_E = sup_product(sys, scheme.E, 1, "backward", grid_step)
    return {
        "mu_A": total_variation(restrict(mu, scheme.A)),
        "nu_A": total_variation(restrict(nu, scheme.A)),
        "fwd_rest*fwd_D": fwd_rest * fwd_D,
        "fwd_rest*bwd_E": fwd_rest * bwd_E,
        "bwd_rest*fwd_D": bwd_rest * fwd_D,
        "bwd_rest*bwd_E": bwd_rest * bwd_E,
        "fwd2_D": sup_product(sys, scheme.D, 2, "forward", grid_step),
        "bwd2_E": sup_product(sys, scheme.E, 2, "backward", grid_step),
    }


def check_theorem_partition(sys_family: Mapping[int, CosineSystem], mu: AtomicMeasure,
                            nu: AtomicMeasure, window: CompactWindow, eps: float,
                            schemes: Mapping[int, PartitionScheme],
                            grid_step: float = DEFAULT_GRID_STEP) -> ConditionReport:
    """Evaluate the partition inequalities for every index and collect the set F.

    ``n0`` is the least index such that every listed index from it on
    satisfies all eight inequalities, the finite-horizon stand-in for
    "all sufficiently large n".
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    for name, m in (("mu", mu), ("nu", nu)):
        if not window.supports(m):
            raise ValueError(f"{name} has atoms outside the window")
    ns = sorted(sys_family)
    if set(ns) != set(schemes):
        raise ValueError("sys_family and schemes must share the same index set")
    values = {k: [] for k in THEOREM_CONDITIONS}
    all_hold = []
    for n in ns:
        q = theorem_quantities(sys_family[n], mu, nu, schemes[n], grid_step)
        for k in THEOREM_CONDITIONS:
            values[k].append(q[k])
        all_hold.append(all(q[k] < eps for k in THEOREM_CONDITIONS))
    verdicts = {k: HOLDS if all(v < eps for v in values[k]) else FAILS
                for k in THEOREM_CONDITIONS}
    holds_indices = [n for n, ok in zip(ns, all_hold) if ok]
    n0 = None
    for i in range(len(ns) - 1, -1, -1):
        if not all_hold[i]:
            break
        n0 = ns[i]
    overall = HOLDS if n0 is not None else FAILS
    params = {"window": [window.lo, window.hi], "eps": eps, "grid_step": grid_step,
              "indices": ns, "tail_proxy": "all listed n >= n0"}
    return ConditionReport("theorem", ns, values, verdicts, overall, params,
                           all_hold=all_hold, holds_indices=holds_indices, n0=n0)


def corollary_family(sys: CosineSystem, horizon: int, case: str, window: CompactWindow):
    """(systems, schemes) for the n-step specialization, n = 1..horizon."""
    scheme = PartitionScheme.corollary(window, case)
    ns = range(1, int(horizon) + 1)
    return {n: sys.power(n) for n in ns}, {n: scheme for n in ns}


# ---------------------------------------------------------------------------
# divergence of the forward product
# ---------------------------------------------------------------------------

def check_forward_divergence(sys: CosineSystem, t: float, threshold: float,
                             horizon: int) -> int | None:
    """First n <= horizon with prod_{j<n} w(alpha^j t) > threshold, else None."""
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    pts = sys.alpha.iterate(float(t), np.arange(horizon))
    cum = np.cumsum(_log_weight(sys.weight, pts))
    log_thr = math.log(threshold)
    # log-space screen, exact product decides near the boundary
    for idx in np.flatnonzero(cum > log_thr - 1e-9):
        n = int(idx) + 1
        if float(forward_weight_product(sys, float(t), n)) > threshold:
            return n
    return None
