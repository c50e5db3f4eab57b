"""Weighted composition dynamics on the line and their adjoints on atomic measures.

A :class:`CosineSystem` bundles an invertible affine map ``alpha`` with a
positive weight ``w``. On functions it generates

    T f = w * (f o alpha),            S = T^{-1},

and on measures the adjoints act atom by atom::

    T*^n : (t, c) -> (alpha^n(t),  c * prod_{j=0}^{n-1} w(alpha^j(t)))
    S*^n : (t, c) -> (alpha^-n(t), c / prod_{j=1}^{n}  w(alpha^-j(t)))

with the cosine family C_n* = (T*^n + S*^n) / 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measure import AtomicMeasure, linear_combine

# exp() of log-products beyond this stays finite in float64
_LOG_SAFE = 700.0


# ---------------------------------------------------------------------------
# homeomorphisms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Affine:
    """The map t -> a*t + b with closed-form integer iterates.

    ``a == 1`` is a translation. Iterates use
    alpha^n(t) = a^n t + b (a^n - 1)/(a - 1), valid for negative n as well,
    so no error accumulates through repeated composition.
    """

    a: float = 1.0
    b: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("affine coefficients must be finite")
        if self.a == 0:
            raise ValueError("affine slope must be nonzero to be invertible")

    @classmethod
    def translation(cls, b: float) -> "Affine":
        return cls(1.0, b)

    @property
    def is_translation(self) -> bool:
        return self.a == 1.0

    def __call__(self, t):
        return self.iterate(t, 1)

    def inverse(self, t):
        return self.iterate(t, -1)

    def iterate(self, t, n):
        t = np.asarray(t, dtype=float)
        n = np.asarray(n)
        if self.is_translation:
            return t + n * self.b
        an = np.power(self.a, n.astype(float))
        return an * t + self.b * (an - 1.0) / (self.a - 1.0)

    def power(self, n: int) -> "Affine":
        """alpha^n as a single affine map (negative n gives inverse powers)."""
        n = int(n)
        if self.is_translation:
            return Affine(1.0, n * self.b)
        an = self.a ** n
        return Affine(an, self.b * (an - 1.0) / (self.a - 1.0))

    def to_dict(self) -> dict:
        if self.is_translation:
            return {"kind": "translation", "b": self.b}
        return {"kind": "affine", "a": self.a, "b": self.b}

    @classmethod
    def from_dict(cls, d: dict) -> "Affine":
        kind = d.get("kind")
        if kind == "translation":
            return cls.translation(float(d["b"]))
        if kind == "affine":
            return cls(float(d["a"]), float(d["b"]))
        raise ValueError(f"unknown homeomorphism kind {kind!r}")


Homeomorphism = Affine


# ---------------------------------------------------------------------------
# piecewise-linear functions and weights
# ---------------------------------------------------------------------------

class PiecewiseLinear:
    """Continuous piecewise-linear function with constant tails.

    Linear interpolation between ``breakpoints`` (x strictly increasing);
    ``left_tail`` for t <= x_0 and ``right_tail`` for t >= x_last. The tails
    must agree with the end breakpoints so the function is continuous. With
    no breakpoints the function is the constant ``left_tail``.
    """

    def __init__(self, breakpoints=(), left_tail=None, right_tail=None):
        bp = np.asarray(breakpoints, dtype=float).reshape(-1, 2)
        xs, ys = bp[:, 0].copy(), bp[:, 1].copy()
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise ValueError("breakpoints must be finite")
        if np.any(np.diff(xs) <= 0):
            raise ValueError("breakpoint x values must be strictly increasing")
        if left_tail is None:
            if not xs.size:
                raise ValueError("a function without breakpoints needs left_tail")
            left_tail = ys[0]
        if right_tail is None:
            right_tail = ys[-1] if xs.size else left_tail
        left_tail, right_tail = float(left_tail), float(right_tail)
        if xs.size:
            if left_tail != ys[0] or right_tail != ys[-1]:
                raise ValueError("continuity: tails must equal the first/last breakpoint values")
        elif left_tail != right_tail:
            raise ValueError("continuity: a function without breakpoints needs equal tails")
        xs.flags.writeable = False
        ys.flags.writeable = False
        self.xs, self.ys = xs, ys
        self.left_tail, self.right_tail = left_tail, right_tail

    @classmethod
    def constant(cls, c: float):
        return cls((), c, c)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if not self.xs.size:
            return np.full(t.shape, self.left_tail)
        return np.interp(t, self.xs, self.ys)

    @property
    def nodes(self) -> np.ndarray:
        """Points where the slope may change."""
        return self.xs

    @property
    def breakpoints(self):
        return list(zip(self.xs.tolist(), self.ys.tolist()))

    @property
    def sup(self) -> float:
        return float(max(self.left_tail, self.right_tail, *self.ys))

    @property
    def inf(self) -> float:
        return float(min(self.left_tail, self.right_tail, *self.ys))

    def to_dict(self) -> dict:
        return {"breakpoints": [list(p) for p in self.breakpoints],
                "left_tail": self.left_tail, "right_tail": self.right_tail}

    @classmethod
    def from_dict(cls, d: dict):
        return cls(d.get("breakpoints", ()), d["left_tail"], d["right_tail"])

    def __eq__(self, other):
        return (type(self) is type(other) and np.array_equal(self.xs, other.xs)
                and np.array_equal(self.ys, other.ys)
                and self.left_tail == other.left_tail and self.right_tail == other.right_tail)

    def __hash__(self):
        return hash((self.xs.tobytes(), self.ys.tobytes(), self.left_tail, self.right_tail))

    def __repr__(self):
        return (f"{type(self).__name__}(breakpoints={self.breakpoints}, "
                f"left_tail={self.left_tail}, right_tail={self.right_tail})")


class WeightFunction(PiecewiseLinear):
    """Strictly positive piecewise-linear weight (so both w and 1/w are bounded)."""

    def __init__(self, breakpoints=(), left_tail=None, right_tail=None):
        super().__init__(breakpoints, left_tail, right_tail)
        if np.any(self.ys <= 0) or self.left_tail <= 0 or self.right_tail <= 0:
            raise ValueError("positivity: weight values must be strictly positive")

    def log(self, t):
        return np.log(self(t))


class CocycleWeight:
    """The n-step weight w_n(t) = prod_{j<n} w(alpha^j(t)) of a base system."""

    def __init__(self, base: "CosineSystem", n: int):
        if n < 1:
            raise ValueError("cocycle length must be >= 1")
        self.base = base
        self.n = int(n)

    def __call__(self, t):
        return forward_weight_product(self.base, t, self.n)

    def log(self, t):
        return log_forward_weight_product(self.base, t, self.n)

    @property
    def nodes(self) -> np.ndarray:
        base_nodes = np.asarray(self.base.weight.nodes, dtype=float)
        if not base_nodes.size:
            return base_nodes
        js = -np.arange(self.n)
        return np.unique(self.base.alpha.iterate(base_nodes[None, :], js[:, None]))

    @property
    def sup(self) -> float:
        return self.base.weight.sup ** self.n

    @property
    def inf(self) -> float:
        return self.base.weight.inf ** self.n

    def __repr__(self):
        return f"CocycleWeight(n={self.n}, base={self.base!r})"


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CosineSystem:
    alpha: Affine
    weight: WeightFunction

    def power(self, n: int) -> "CosineSystem":
        """System (alpha^n, w_n) whose adjoint is T*^n."""
        return CosineSystem(self.alpha.power(n), CocycleWeight(self, n))

    def to_dict(self) -> dict:
        return {"alpha": self.alpha.to_dict(), "weight": self.weight.to_dict()}

    @classmethod
    def from_dict(cls, d: dict) -> "CosineSystem":
        return cls(Affine.from_dict(d["alpha"]), WeightFunction.from_dict(d["weight"]))


def _log_weight(weight, pts):
    log = getattr(weight, "log", None)
    return log(pts) if log is not None else np.log(weight(pts))


def _check_steps(n):
    if int(n) != n or n < 1:
        raise ValueError(f"step count must be a positive integer, got {n!r}")


def _orbit(alpha, t, steps):
    t = np.asarray(t, dtype=float)
    return alpha.iterate(t[None, ...], steps.reshape((-1,) + (1,) * t.ndim))


def log_forward_weight_product(sys: CosineSystem, t, n: int):
    """log prod_{j=0}^{n-1} w(alpha^j(t)), summed in log-space."""
    _check_steps(n)
    pts = _orbit(sys.alpha, t, np.arange(n))
    return _log_weight(sys.weight, pts).sum(axis=0)


def log_backward_weight_product(sys: CosineSystem, t, n: int):
    """log prod_{j=1}^{n} 1/w(alpha^-j(t))."""
    _check_steps(n)
    pts = _orbit(sys.alpha, t, -np.arange(1, n + 1))
    return -_log_weight(sys.weight, pts).sum(axis=0)


def _product(sys, t, steps, sign):
    pts = _orbit(sys.alpha, t, steps)
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        vals = sys.weight(pts)
        if np.all(np.isfinite(vals)) and np.all(vals > 0):
            logs = np.log(vals).sum(axis=0)
        else:
            logs = _log_weight(sys.weight, pts).sum(axis=0)
            vals = None
        if vals is not None and np.all(np.abs(logs) < _LOG_SAFE):
            # direct product keeps single factors bit-exact
            out = np.prod(vals, axis=0)
            return out if sign > 0 else 1.0 / out
        return np.exp(sign * logs)


def forward_weight_product(sys: CosineSystem, t, n: int):
    """prod_{j=0}^{n-1} w(alpha^j(t)); ``t`` may be an array."""
    _check_steps(n)
    return _product(sys, t, np.arange(n), +1)


def backward_weight_product(sys: CosineSystem, t, n: int):
    """prod_{j=1}^{n} 1/w(alpha^-j(t)); ``t`` may be an array."""
    _check_steps(n)
    return _product(sys, t, -np.arange(1, n + 1), -1)


# ---------------------------------------------------------------------------
# operators
# ---------------------------------------------------------------------------

def adjoint_T(sys: CosineSystem, m: AtomicMeasure, n: int = 1) -> AtomicMeasure:
    if n == 0:
        return m
    _check_steps(n)
    if not m:
        return m
    return AtomicMeasure(sys.alpha.iterate(m.positions, n),
                         m.masses * forward_weight_product(sys, m.positions, n))


def adjoint_S(sys: CosineSystem, m: AtomicMeasure, n: int = 1) -> AtomicMeasure:
    if n == 0:
        return m
    _check_steps(n)
    if not m:
        return m
    return AtomicMeasure(sys.alpha.iterate(m.positions, -n),
                         m.masses * backward_weight_product(sys, m.positions, n))


def cosine(sys: CosineSystem, m: AtomicMeasure, n: int) -> AtomicMeasure:
    """C_n* m = (T*^n m + S*^n m) / 2, with C_0* the identity."""
    if n == 0:
        return m
    return linear_combine(0.5, adjoint_T(sys, m, n), 0.5, adjoint_S(sys, m, n))


def apply_function_operator(sys: CosineSystem, f, t, n: int, direction: str = "forward"):
    """Pointwise value of (T^n f)(t) or (S^n f)(t)."""
    if direction == "forward":
        return forward_weight_product(sys, t, n) * f(sys.alpha.iterate(t, n))
    if direction == "backward":
        return backward_weight_product(sys, t, n) * f(sys.alpha.iterate(t, -n))
    raise ValueError(f"direction must be 'forward' or 'backward', got {direction!r}")


def duality_pairing(m: AtomicMeasure, f) -> float:
    """<m, f> = sum of mass * f(position)."""
    if not m:
        return 0.0
    return float(np.dot(m.masses, np.asarray(f(m.positions), dtype=float)))
