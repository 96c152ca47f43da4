import math
import os
from pathlib import Path

import pytest

import coopmac

SCENARIOS = Path(os.environ.get("COOPMAC_SOURCE_DIR", Path(__file__).parents[2])) / "scenarios"


def test_uniform_grid_size_and_probabilities():
    e = coopmac.uniform_grid([0.1, 0.2], [0.3, 0.4])
    assert len(e) == 16
    assert math.isclose(sum(e.probs), 1.0)
    assert e.gains[0].s10 == pytest.approx(0.1)


def test_rate_bounds_example():
    e = coopmac.uniform_grid([1.0], [2.0])
    b = coopmac.rate_bounds(e, [[0, 0, 1, 0, 0, 1]])
    # Only common signals: log A = log(1 + 1 + 1 + 2).
    assert b.mean_log_a == pytest.approx(math.log(5.0))


def test_optimize_single_state():
    e = coopmac.uniform_grid([0.3], [0.6])
    r = coopmac.optimize(e, (1.0, 1.0), max_iters=300)
    assert r["iterations"] == 300
    assert len(r["objective"]) == 300
    assert r["best_value"] >= max(r["objective"]) - 1e-15
    assert coopmac.min_gap(e, r["policy"]) < 0.05


def test_projection_and_hull():
    x = coopmac.project_user([2.0, -1.0, 0.5], [0.5, 0.25, 0.25], 0.5)
    assert min(x) >= 0.0
    assert 0.5 * x[0] + 0.25 * x[1] + 0.25 * x[2] == pytest.approx(0.5)
    assert coopmac.convex_hull([(1, 0), (0, 1), (0.4, 0.4)]) == [(0, 1), (1, 0)]


def test_errors_are_value_errors():
    e = coopmac.uniform_grid([0.3], [0.6])
    with pytest.raises(ValueError):
        coopmac.optimize(e, (0.0, 0.0))
    with pytest.raises(coopmac.InvalidInput):
        coopmac.rayleigh(-1.0, 0.6, 10, 1)


def test_scenario_round_trip(tmp_path):
    assert len(coopmac.load_scenario(SCENARIOS / "rayleigh_paper.scn")) == 1000
    scn = tmp_path / "small.scn"
    scn.write_text("direct_values = 0.1, 0.2\ninter_values = 0.3, 0.4\nmax_iters = 50\n")
    text = coopmac.solve(scn, (2.0, 1.0), tmp_path / "out")
    assert "iterations = 50" in text
    assert (tmp_path / "out" / "policy.csv").read_text().startswith("index,")
    bad = tmp_path / "bad.scn"
    bad.write_text("budget1 = -1\n")
    with pytest.raises(coopmac.ValidationError):
        coopmac.load_scenario(bad)
