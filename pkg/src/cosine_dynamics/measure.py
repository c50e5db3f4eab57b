"""Finitely-atomic signed measures on the real line.

A measure is stored as two parallel float arrays (positions, masses) in
canonical form: positions strictly increasing, no zero masses. Every
operation returns a new measure; instances are never mutated.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np


@dataclass(frozen=True)
class Atom:
    position: float
    mass: float


class AtomicMeasure:
    """Signed combination of point masses, kept in canonical form.

    Parameters
    ----------
    positions, masses : array_like
        Atom locations and signed coefficients. Coincident positions are
        merged by adding masses and zero masses are dropped.
    merge_tol : float, optional
        Positions closer than this (after sorting) are treated as one
        atom. The default 0 merges only exactly equal positions.
    """

    __slots__ = ("positions", "masses")

    def __init__(self, positions=(), masses=(), merge_tol: float = 0.0):
        pos = np.asarray(positions, dtype=float).reshape(-1)
        mass = np.asarray(masses, dtype=float).reshape(-1)
        if pos.shape != mass.shape:
            raise ValueError("positions and masses must have the same length")
        pos, mass = _canonical(pos, mass, merge_tol)
        pos.flags.writeable = False
        mass.flags.writeable = False
        self.positions = pos
        self.masses = mass

    @classmethod
    def from_atoms(cls, atoms: Iterable, merge_tol: float = 0.0) -> "AtomicMeasure":
        pairs = [(a.position, a.mass) if isinstance(a, Atom) else tuple(a) for a in atoms]
        if not pairs:
            return cls()
        pos, mass = zip(*pairs)
        return cls(pos, mass, merge_tol=merge_tol)

    @classmethod
    def dirac(cls, position: float, mass: float = 1.0) -> "AtomicMeasure":
        return cls([position], [mass])

    @property
    def atoms(self) -> list[Atom]:
        return [Atom(float(p), float(m)) for p, m in zip(self.positions, self.masses)]

    def __len__(self):
        return len(self.positions)

    def __bool__(self):
        return len(self.positions) > 0

    def __iter__(self):
        return iter(self.atoms)

    def __eq__(self, other):
        if not isinstance(other, AtomicMeasure):
            return NotImplemented
        return (np.array_equal(self.positions, other.positions)
                and np.array_equal(self.masses, other.masses))

    def __hash__(self):
        return hash((self.positions.tobytes(), self.masses.tobytes()))

    def __repr__(self):
        inner = ", ".join(f"({p!r}, {m!r})" for p, m in
                          zip(self.positions.tolist(), self.masses.tolist()))
        return f"AtomicMeasure([{inner}])"

    def __add__(self, other):
        return linear_combine(1.0, self, 1.0, other)

    def __sub__(self, other):
        return linear_combine(1.0, self, -1.0, other)

    def __neg__(self):
        return scale(self, -1.0)

    def __mul__(self, c):
        return scale(self, c)

    __rmul__ = __mul__

    def __call__(self, pred) -> float:
        """Measure of a set given as a position predicate."""
        return float(self.masses[_mask(pred, self.positions)].sum())

    def total_variation(self) -> float:
        return total_variation(self)

    def to_dict(self) -> dict:
        return {"atoms": [[p, m] for p, m in
                          zip(self.positions.tolist(), self.masses.tolist())]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


@dataclass(frozen=True)
class CompactWindow:
    """Closed interval [lo, hi] standing in for a compact set."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise ValueError("window endpoints must be finite")
        if self.lo > self.hi:
            raise ValueError(f"window needs lo <= hi, got [{self.lo}, {self.hi}]")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return (t >= self.lo) & (t <= self.hi)

    contains = __call__

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def supports(self, m: AtomicMeasure) -> bool:
        """True when every atom of ``m`` lies in the window."""
        return bool(np.all(self(m.positions)))


def _canonical(pos, mass, merge_tol):
    if pos.size == 0:
        return np.empty(0), np.empty(0)
    if not (np.all(np.isfinite(pos)) and np.all(np.isfinite(mass))):
        raise ValueError("atom positions and masses must be finite")
    order = np.argsort(pos, kind="stable")
    pos, mass = pos[order], mass[order]
    # group label increments where the gap to the previous atom exceeds merge_tol
    if merge_tol > 0:
        new_group = np.diff(pos) > merge_tol
    else:
        new_group = np.diff(pos) != 0
    starts = np.concatenate(([0], np.flatnonzero(new_group) + 1))
    merged_mass = np.add.reduceat(mass, starts)
    merged_pos = pos[starts]
    keep = merged_mass != 0
    return merged_pos[keep].copy(), merged_mass[keep].copy()


def _mask(pred, positions):
    if pred is None:
        return np.ones(positions.shape, dtype=bool)
    try:
        mask = np.asarray(pred(positions), dtype=bool)
    except (TypeError, ValueError):
        mask = None
    if mask is None or mask.shape != positions.shape:
        # scalar-only predicate
        mask = np.array([bool(pred(float(p))) for p in positions], dtype=bool)
    return mask


def normalize(m: AtomicMeasure, merge_tol: float = 0.0) -> AtomicMeasure:
    """Canonical form of ``m``; measures are already kept canonical on
    construction, so this only matters with a positive ``merge_tol``."""
    if merge_tol <= 0:
        return m
    return AtomicMeasure(m.positions, m.masses, merge_tol=merge_tol)


def total_variation(m: AtomicMeasure) -> float:
    return math.fsum(np.abs(m.masses))


def restrict(m: AtomicMeasure, pred: Callable | None) -> AtomicMeasure:
    """Keep the atoms whose position satisfies ``pred``.

    ``pred`` maps an array of positions to a boolean mask (scalar predicates
    are also accepted). ``None`` stands for the whole line.
    """
    keep = _mask(pred, m.positions)
    return AtomicMeasure(m.positions[keep], m.masses[keep])


def scale(m: AtomicMeasure, c: float) -> AtomicMeasure:
    return AtomicMeasure(m.positions, c * m.masses)


def linear_combine(a: float, m1: AtomicMeasure, b: float, m2: AtomicMeasure,
                   merge_tol: float = 0.0) -> AtomicMeasure:
    return AtomicMeasure(np.concatenate((m1.positions, m2.positions)),
                         np.concatenate((a * m1.masses, b * m2.masses)),
                         merge_tol=merge_tol)


def tv_distance(m1: AtomicMeasure, m2: AtomicMeasure, merge_tol: float = 0.0) -> float:
    return total_variation(linear_combine(1.0, m1, -1.0, m2, merge_tol=merge_tol))

