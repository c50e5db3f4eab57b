import json

import numpy as np
import pytest

from cosine_dynamics import (AtomicMeasure, ExampleParams, ParseError, ValidationError,
                             build_example, load_measure, load_run_config, load_system,
                             save_measure, save_system)
from cosine_dynamics.scenarios import (constant_system, dumps_system, parse_measure,
                                       parse_system, run_config_from_dict)

from conftest import example_w


def test_example_values():
    sys = build_example()
    assert sys.weight(-1.0) == 4.0 and sys.weight(1.0) == 2.0 and sys.weight(0.0) == 3.0
    assert sys.weight(-10.0) == 4.0 and sys.weight(10.0) == 2.0
    assert sys.alpha(0.5) == 1.5


@pytest.mark.parametrize("M, delta", [(4, 1), (6, 2), (10, 1.5), (7.5, 1)])
def test_example_matches_branch_formula(M, delta):
    sys = build_example(ExampleParams(M, delta))
    t = np.linspace(-4, 4, 801)
    assert np.allclose(sys.weight(t), example_w(t, M, delta), rtol=1e-15, atol=0)
    assert sys.weight.sup == M
    assert sys.weight.inf == 1 + delta


@pytest.mark.parametrize("M, delta, field", [(3, 1, "M"), (4, 0.5, "delta"), (-1, 1, "params")])
def test_example_rejects_bad_params(M, delta, field):
    with pytest.raises(ValidationError) as info:
        ExampleParams(M, delta)
    assert info.value.field == field


def test_system_roundtrip_is_byte_stable(tmp_path):
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_system(build_example(), p1)
    save_system(load_system(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert load_system(p1) == build_example()
    sys = constant_system(0.5, shift=-2)
    assert parse_system(dumps_system(sys)) == sys


def test_measure_roundtrip_is_byte_stable(tmp_path):
    m = AtomicMeasure.from_atoms([(-2.5, 1.0), (0.1, -3.25), (7.0, 1e-300)])
    p1, p2 = tmp_path / "m.json", tmp_path / "n.json"
    save_measure(m, p1)
    save_measure(load_measure(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()
    assert load_measure(p1) == m


def _system_dict(**weight):
    w = {"breakpoints": [[-1, 4], [1, 2]], "left_tail": 4, "right_tail": 2}
    w.update(weight)
    return {"alpha": {"kind": "translation", "b": 1}, "weight": w}


def test_zero_weight_value_names_positivity():
    with pytest.raises(ValidationError) as info:
        parse_system(json.dumps(_system_dict(breakpoints=[[-1, 4], [1, 0]], right_tail=0)))
    assert "positivity" in str(info.value)
    assert info.value.field == "weight.breakpoints[1]"


def test_system_validation_errors():
    with pytest.raises(ValidationError, match="continuity"):
        parse_system(json.dumps(_system_dict(left_tail=5)))
    with pytest.raises(ValidationError, match="alpha.a"):
        parse_system(json.dumps({"alpha": {"kind": "affine", "a": 0, "b": 1},
                                 "weight": _system_dict()["weight"]}))
    with pytest.raises(ParseError, match="alpha.kind"):
        parse_system(json.dumps({"alpha": {"kind": "rotation"}, "weight": {}}))
    with pytest.raises(ParseError):
        parse_system("{not json")


def test_measure_parse_errors():
    with pytest.raises(ParseError):
        parse_measure('{"atoms": [[0, NaN]]}')
    with pytest.raises(ParseError):
        parse_measure('{"atoms": [[0, Infinity]]}')
    with pytest.raises(ParseError, match="atoms"):
        parse_measure('{"positions": []}')
    with pytest.raises(ParseError):
        parse_measure('{"atoms": [[0, 1, 2]]}')
    with pytest.raises(ParseError):
        parse_measure('{"atoms": [["a", 1]]}')
    assert parse_measure('{"atoms": []}') == AtomicMeasure()
    with pytest.raises(ParseError):
        load_measure("/nonexistent/measure.json")


def test_run_config(tmp_path):
    save_system(build_example(), tmp_path / "sys.json")
    save_measure(AtomicMeasure.dirac(-2.0), tmp_path / "mu.json")
    cfg_path = tmp_path / "run.json"
    cfg_path.write_text(json.dumps({"system": "sys.json", "measures": ["mu.json"],
                                    "window": [-5, 5], "horizon": 20, "tol": 1e-9}))
    cfg = load_run_config(cfg_path)
    assert cfg.horizon == 20 and cfg.tol == 1e-9 and cfg.radius == 0.25
    assert cfg.compact_window.lo == -5
    assert cfg.load_system() == build_example()
    assert cfg.load_measures() == [AtomicMeasure.dirac(-2.0)]


@pytest.mark.parametrize("bad, field", [({"horizon": 0}, "horizon"), ({"tol": 0}, "tol"),
                                        ({"window": [3, 1]}, "window"),
                                        ({"case": "x"}, "case"), ({"radius": -1}, "radius")])
def test_run_config_validation(bad, field):
    with pytest.raises(ValidationError) as info:
        run_config_from_dict(bad)
    assert info.value.field == field


def test_run_config_parse_errors():
    with pytest.raises(ParseError):
        run_config_from_dict({"window": [1]})
    with pytest.raises(ParseError):
        run_config_from_dict({"tol": "small"})
