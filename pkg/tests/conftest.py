import numpy as np
import pytest

from cosine_dynamics import (Affine, AtomicMeasure, CompactWindow, CosineSystem,
                             PiecewiseLinear, WeightFunction, build_example)

# filled by tests/test_acceptance.py, printed at the end of the session
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# ---------------------------------------------------------------------------
# independent oracles
# ---------------------------------------------------------------------------

def example_w(t, M=4.0, delta=1.0):
    """The three-branch example weight written out branch by branch."""
    t = np.asarray(t, dtype=float)
    return np.where(t <= -1, M,
                    np.where(t >= 1, 1 + delta, M + (t + 1) / 2 * (1 + delta - M)))


def brute_forward(w, shift, t, n):
    """prod_{j<n} w(t + j*shift) by an explicit loop."""
    out = np.ones_like(np.asarray(t, dtype=float))
    for j in range(n):
        out = out * w(t + j * shift)
    return out


def brute_backward(w, shift, t, n):
    out = np.ones_like(np.asarray(t, dtype=float))
    for j in range(1, n + 1):
        out = out / w(t - j * shift)
    return out


def dense_grid(lo, hi, step=1e-4):
    k = int(round((hi - lo) / step))
    return np.linspace(lo, hi, k + 1)


def rel_tv_error(lhs: AtomicMeasure, rhs: AtomicMeasure, scale: float | None = None) -> float:
    diff = np.abs((lhs - rhs).masses).sum()
    if scale is None:
        scale = max(np.abs(lhs.masses).sum(), np.abs(rhs.masses).sum())
    return diff / scale if scale > 0 else diff


# ---------------------------------------------------------------------------
# random generators (numpy RNG; dyadic values keep orbit positions exact)
# ---------------------------------------------------------------------------

def random_weight(rng, k=None, lo=0.3, hi=3.0, span=6.0):
    k = rng.integers(1, 6) if k is None else k
    xs = np.sort(rng.choice(np.arange(-span * 8, span * 8 + 1), size=k, replace=False)) / 8.0
    ys = rng.uniform(lo, hi, size=k)
    return WeightFunction(list(zip(xs, ys)))


def random_function(rng, k=None):
    """Piecewise-linear test function allowing sign changes."""
    k = rng.integers(1, 7) if k is None else k
    xs = np.sort(rng.choice(np.arange(-80, 81), size=k, replace=False)) / 8.0
    ys = rng.uniform(-2, 2, size=k)
    return PiecewiseLinear(list(zip(xs, ys)))


def random_alpha(rng, dyadic=True):
    kind = rng.integers(0, 4)
    b = rng.integers(-16, 17) / 8.0
    if kind <= 1:
        return Affine.translation(b if b != 0 else 1.0)
    if dyadic:
        return Affine(float(rng.choice([0.5, 2.0, -1.0])), b)
    return Affine(float(rng.uniform(0.6, 1.4)), float(rng.uniform(-2, 2)))


def random_system(rng, dyadic=True):
    return CosineSystem(random_alpha(rng, dyadic), random_weight(rng))


def random_measure(rng, k=None, span=8.0, dyadic=True):
    k = rng.integers(1, 7) if k is None else k
    if dyadic:
        pos = rng.choice(np.arange(-span * 64, span * 64 + 1), size=k, replace=False) / 64.0
    else:
        pos = rng.uniform(-span, span, size=k)
    mass = rng.uniform(-3, 3, size=k)
    return AtomicMeasure(pos, mass)


# ---------------------------------------------------------------------------
# fixtures
# ---------------------------------------------------------------------------

@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture
def example():
    return build_example()


@pytest.fixture
def window():
    return CompactWindow(-5.0, 5.0)


@pytest.fixture
def unit_shift():
    return CosineSystem(Affine.translation(1.0), WeightFunction.constant(1.0))
