"""Named scenarios and the JSON file formats for systems, measures and run configs."""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

from .dynamics import Affine, CosineSystem, WeightFunction
from .measure import AtomicMeasure, CompactWindow


class ParseError(ValueError):
    """Input is not well-formed (bad JSON, wrong shape, non-finite number)."""


class ValidationError(ValueError):
    """Input parses but violates an invariant. ``field`` names the culprit."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


# ---------------------------------------------------------------------------
# the piecewise example
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExampleParams:
    M: float = 4.0
    delta: float = 1.0

    def __post_init__(self):
        if not (self.M > 0 and self.delta > 0):
            raise ValidationError("params", "M and delta must be positive")
        if self.delta < 1:
            raise ValidationError("delta", f"need delta >= 1, got {self.delta}")
        if self.M < 2 + 2 * self.delta:
            raise ValidationError("M", f"need M >= 2 + 2*delta = {2 + 2 * self.delta}, got {self.M}")


def example_weight(params: ExampleParams) -> WeightFunction:
    """M left of -1, 1+delta right of 1, linear in between."""
    M, d = params.M, params.delta
    return WeightFunction([(-1.0, M), (1.0, 1.0 + d)], M, 1.0 + d)


def build_example(params: ExampleParams | None = None) -> CosineSystem:
    """The shift t -> t+1 with the three-branch weight; M=4, delta=1 by default."""
    params = ExampleParams() if params is None else params
    return CosineSystem(Affine.translation(1.0), example_weight(params))


def constant_system(c: float = 1.0, shift: float = 1.0) -> CosineSystem:
    """w == c under a translation; c = 1 is the isometric control."""
    return CosineSystem(Affine.translation(shift), WeightFunction.constant(c))


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def _reject_constant(name):
    raise ParseError(f"non-finite number {name} is not allowed")


def parse_json(text: str):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except ParseError:
        raise
    except (json.JSONDecodeError, TypeError) as exc:
        raise ParseError(f"malformed JSON: {exc}") from None


def _read(path) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise ParseError(f"{where}: non-finite number")
    return x


def _object(value, where: str) -> dict:
    if not isinstance(value, dict):
        raise ParseError(f"{where}: expected an object")
    return value


def _pairs(value, where: str) -> list:
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected an array")
    out = []
    for i, item in enumerate(value):
        if not isinstance(item, list) or len(item) != 2:
            raise ParseError(f"{where}[{i}]: expected a [number, number] pair")
        out.append((_number(item[0], f"{where}[{i}][0]"), _number(item[1], f"{where}[{i}][1]")))
    return out


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# ---------------------------------------------------------------------------
# measures
# ---------------------------------------------------------------------------

def measure_from_dict(d) -> AtomicMeasure:
    d = _object(d, "measure")
    if "atoms" not in d:
        raise ParseError("measure: missing key 'atoms'")
    return AtomicMeasure.from_atoms(_pairs(d["atoms"], "atoms"))


def parse_measure(text: str) -> AtomicMeasure:
    return measure_from_dict(parse_json(text))


def dumps_measure(m: AtomicMeasure) -> str:
    return _dump(m.to_dict())


def load_measure(path) -> AtomicMeasure:
    return parse_measure(_read(path))


def save_measure(m: AtomicMeasure, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_measure(m))


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------

def system_from_dict(d) -> CosineSystem:
    d = _object(d, "system")
    for key in ("alpha", "weight"):
        if key not in d:
            raise ParseError(f"system: missing key {key!r}")
    alpha = _object(d["alpha"], "alpha")
    kind = alpha.get("kind")
    if kind == "translation":
        a, b = 1.0, _number(alpha.get("b"), "alpha.b")
    elif kind == "affine":
        a, b = _number(alpha.get("a"), "alpha.a"), _number(alpha.get("b"), "alpha.b")
        if a == 0:
            raise ValidationError("alpha.a", "slope must be nonzero (invertibility)")
    else:
        raise ParseError(f"alpha.kind: expected 'translation' or 'affine', got {kind!r}")

    weight = _object(d["weight"], "weight")
    bps = _pairs(weight.get("breakpoints", []), "weight.breakpoints")
    left = _number(weight.get("left_tail"), "weight.left_tail")
    right = _number(weight.get("right_tail"), "weight.right_tail")
    for i, (x, y) in enumerate(bps):
        if y <= 0:
            raise ValidationError(f"weight.breakpoints[{i}]", f"positivity: value {y} is not > 0")
        if i and x <= bps[i - 1][0]:
            raise ValidationError(f"weight.breakpoints[{i}]", "x values must be strictly increasing")
    for name, v in (("left_tail", left), ("right_tail", right)):
        if v <= 0:
            raise ValidationError(f"weight.{name}", f"positivity: value {v} is not > 0")
    try:
        w = WeightFunction(bps, left, right)
    except ValueError as exc:
        raise ValidationError("weight", str(exc)) from None
    return CosineSystem(Affine(a, b), w)


def parse_system(text: str) -> CosineSystem:
    return system_from_dict(parse_json(text))


def dumps_system(sys: CosineSystem) -> str:
    return _dump(sys.to_dict())


def load_system(path) -> CosineSystem:
    return parse_system(_read(path))


def save_system(sys: CosineSystem, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_system(sys))


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------

@dataclass
class RunConfig:
    """Everything one command needs. Relative paths resolve against ``base_dir``."""

    system: str | None = None
    measures: list = field(default_factory=list)
    window: tuple = (-5.0, 5.0)
    horizon: int = 60
    tol: float = 1e-6
    radius: float = 0.25
    case: str = "e-equals-k"
    grid_step: float = 1e-3
    out: str | None = None
    base_dir: str = "."

    def __post_init__(self):
        self.validate()

    def validate(self):
        if int(self.horizon) != self.horizon or self.horizon < 1:
            raise ValidationError("horizon", "must be an integer >= 1")
        self.horizon = int(self.horizon)
        for name in ("tol", "radius", "grid_step"):
            if not getattr(self, name) > 0:
                raise ValidationError(name, "must be positive")
        lo, hi = self.window
        if lo > hi:
            raise ValidationError("window", "need lo <= hi")
        if self.case.replace("_", "-").lower() not in ("d-equals-k", "e-equals-k"):
            raise ValidationError("case", f"unknown case {self.case!r}")

    @property
    def compact_window(self) -> CompactWindow:
        return CompactWindow(float(self.window[0]), float(self.window[1]))

    def resolve(self, path: str) -> str:
        return path if os.path.isabs(path) else os.path.join(self.base_dir, path)

    def load_system(self) -> CosineSystem:
        if self.system is None:
            raise ValidationError("system", "no system file given")
        return load_system(self.resolve(self.system))

    def load_measures(self) -> list:
        return [load_measure(self.resolve(p)) for p in self.measures]


def run_config_from_dict(d, base_dir: str = ".") -> RunConfig:
    d = _object(d, "config")
    kwargs = {"base_dir": base_dir}
    if "system" in d:
        kwargs["system"] = str(d["system"])
    if "measures" in d:
        if not isinstance(d["measures"], list):
            raise ParseError("measures: expected an array of paths")
        kwargs["measures"] = [str(p) for p in d["measures"]]
    if "window" in d:
        w = d["window"]
        if not isinstance(w, list) or len(w) != 2:
            raise ParseError("window: expected [lo, hi]")
        kwargs["window"] = (_number(w[0], "window[0]"), _number(w[1], "window[1]"))
    if "horizon" in d:
        kwargs["horizon"] = _number(d["horizon"], "horizon")
    for name in ("tol", "radius", "grid_step"):
        if name in d:
            kwargs[name] = _number(d[name], name)
    for name in ("case", "out"):
        if name in d:
            kwargs[name] = str(d[name])
    return RunConfig(**kwargs)


def load_run_config(path) -> RunConfig:
    base = os.path.dirname(os.path.abspath(path))
    return run_config_from_dict(parse_json(_read(path)), base_dir=base)
