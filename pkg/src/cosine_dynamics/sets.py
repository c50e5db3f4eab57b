"""Finite unions of intervals on the real line, with exact Boolean algebra.

A set is described by sorted cut points p_1 < ... < p_k and a membership
flag for each of the 2k+1 cells they induce::

    (-inf, p_1), {p_1}, (p_1, p_2), {p_2}, ..., {p_k}, (p_k, inf)

Any finite union of intervals (open, closed or half-open, bounded or not)
is exactly representable, and union, intersection and complement reduce
to elementwise logic on a common refinement of the cut points.
"""

from __future__ import annotations

import numpy as np


class IntervalSet:
    __slots__ = ("cuts", "cells")

    def __init__(self, cuts=(), cells=(False,)):
        cuts = np.asarray(cuts, dtype=float).reshape(-1)
        cells = np.asarray(cells, dtype=bool).reshape(-1)
        if cells.size != 2 * cuts.size + 1:
            raise ValueError("need exactly 2*len(cuts)+1 cell flags")
        if cuts.size and np.any(np.diff(cuts) <= 0):
            raise ValueError("cut points must be strictly increasing")
        self.cuts, self.cells = _simplify(cuts, cells)

    # -- constructors -------------------------------------------------------

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls()

    @classmethod
    def everything(cls) -> "IntervalSet":
        return cls((), (True,))

    @classmethod
    def interval(cls, lo: float, hi: float, closed: str = "left") -> "IntervalSet":
        """Single interval. ``closed`` is one of 'left', 'right', 'both', 'neither'."""
        if closed not in ("left", "right", "both", "neither"):
            raise ValueError(f"bad closed={closed!r}")
        left = closed in ("left", "both")
        right = closed in ("right", "both")
        if lo > hi or (lo == hi and not (left and right)):
            return cls.empty()
        if lo == hi:
            return cls((lo,), (False, True, False))
        return cls((lo, hi), (False, left, True, right, False))

    @classmethod
    def closed(cls, lo: float, hi: float) -> "IntervalSet":
        return cls.interval(lo, hi, "both")

    @classmethod
    def half_open(cls, lo: float, hi: float) -> "IntervalSet":
        return cls.interval(lo, hi, "left")

    @classmethod
    def union_of(cls, pieces) -> "IntervalSet":
        """Union of ``(lo, hi)`` half-open pairs or ready-made sets."""
        out = cls.empty()
        for piece in pieces:
            if not isinstance(piece, IntervalSet):
                piece = cls.half_open(*piece)
            out = out | piece
        return out

    # -- algebra ------------------------------------------------------------

    def _on(self, cuts):
        """Cell flags of this set expressed over a refinement of its cuts."""
        points = self(cuts)
        # the gap right of a fine cut sits inside coarse gap 2*(#coarse cuts <= cut)
        left_edges = np.concatenate(([-np.inf], cuts))
        gaps = self.cells[2 * np.searchsorted(self.cuts, left_edges, side="right")]
        out = np.empty(2 * cuts.size + 1, dtype=bool)
        out[0::2] = gaps
        out[1::2] = points
        return out

    def _binary(self, other, op):
        cuts = np.union1d(self.cuts, other.cuts)
        return IntervalSet(cuts, op(self._on(cuts), other._on(cuts)))

    def __or__(self, other):
        return self._binary(other, np.logical_or)

    def __and__(self, other):
        return self._binary(other, np.logical_and)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a & ~b)

    def __invert__(self):
        return IntervalSet(self.cuts, ~self.cells)

    complement = __invert__

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return np.array_equal(self.cuts, other.cuts) and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.cuts.tobytes(), self.cells.tobytes()))

    def is_empty(self) -> bool:
        return not self.cells.any()

    def isdisjoint(self, other) -> bool:
        return (self & other).is_empty()

    def issubset(self, other) -> bool:
        return (self - other).is_empty()

    # -- queries ------------------------------------------------------------

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if not self.cuts.size:
            return np.full(t.shape, bool(self.cells[0]))
        idx = np.searchsorted(self.cuts, t)
        safe = np.minimum(idx, self.cuts.size - 1)
        on_cut = self.cuts[safe] == t
        return np.where(on_cut, self.cells[2 * safe + 1], self.cells[2 * idx])

    contains = __call__

    def closure_points(self) -> np.ndarray:
        """Cut points lying in the closure of the set."""
        near = self.cells[0:-1:2] | self.cells[1::2] | self.cells[2::2]
        return self.cuts[near]

    def in_closure(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        inside = self(t)
        if self.cuts.size:
            inside = inside | np.isin(t, self.closure_points())
        return inside

    def bounds(self):
        """(inf, sup) of the set, or None when empty."""
        if self.is_empty():
            return None
        lo = -np.inf if self.cells[0] else self.closure_points()[0]
        hi = np.inf if self.cells[-1] else self.closure_points()[-1]
        return float(lo), float(hi)

    def intervals(self):
        """Maximal components as ``(lo, hi, left_closed, right_closed)``."""
        edges = np.concatenate(([-np.inf], self.cuts, [np.inf]))
        n_cells = self.cells.size
        out = []
        start = None
        for i in range(n_cells):
            if not self.cells[i]:
                continue
            if i % 2:
                lo, hi, closed = edges[(i + 1) // 2], edges[(i + 1) // 2], True
            else:
                lo, hi, closed = edges[i // 2], edges[i // 2 + 1], False
            if start is None:
                start = (lo, closed)
            if i + 1 == n_cells or not self.cells[i + 1]:
                out.append((float(start[0]), float(hi), start[1], closed))
                start = None
        return out

    def __repr__(self):
        if self.is_empty():
            return "IntervalSet.empty()"
        parts = []
        for lo, hi, lc, rc in self.intervals():
            parts.append(f"{'[' if lc else '('}{lo!r}, {hi!r}{']' if rc else ')'}")
        return "IntervalSet(" + " U ".join(parts) + ")"

    def to_list(self):
        return [[lo, hi, lc, rc] for lo, hi, lc, rc in self.intervals()]

    @classmethod
    def from_list(cls, items) -> "IntervalSet":
        out = cls.empty()
        for item in items:
            if len(item) == 2:
                out = out | cls.half_open(float(item[0]), float(item[1]))
            else:
                lo, hi, lc, rc = item
                closed = {(True, True): "both", (True, False): "left",
                          (False, True): "right", (False, False): "neither"}[(bool(lc), bool(rc))]
                out = out | cls.interval(float(lo), float(hi), closed)
        return out


def _simplify(cuts, cells):
    """Drop cut points that separate nothing."""
    if not cuts.size:
        return cuts.copy(), cells.copy()
    left = cells[0:-1:2]
    point = cells[1::2]
    right = cells[2::2]
    keep = ~((left == point) & (point == right))
    new_cuts = cuts[keep]
    flags = [cells[0]]
    for i in np.flatnonzero(keep):
        flags.append(point[i])
        flags.append(right[i])
    return new_cuts.copy(), np.asarray(flags, dtype=bool)


def as_set(region) -> IntervalSet:
    """Coerce a window, a set, or an ``(lo, hi)`` pair to an IntervalSet."""
    if isinstance(region, IntervalSet):
        return region
    if hasattr(region, "lo") and hasattr(region, "hi"):
        return IntervalSet.closed(region.lo, region.hi)
    lo, hi = region
    return IntervalSet.closed(float(lo), float(hi))
