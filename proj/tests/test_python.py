"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import stratmob


def test_project_matches_hand_values():
    # four households weighted 100/200/300/400 over six occupations
    codes = ["10", "11", "12", "13", "14", "15"]
    incidence = np.array(
        [
            [1, 1, 1, 0, 0, 0],
            [1, 1, 0, 1, 1, 0],
            [0, 0, 0, 0, 1, 1],
            [1, 1, 1, 1, 1, 1],
        ],
        dtype=float,
    )
    weights = [100.0, 200.0, 300.0, 400.0]
    U, V = stratmob.project(incidence, weights, codes)
    assert U[0, 1] == pytest.approx(700.0)
    assert V[0, 1] == pytest.approx(3.0 / 7.0, abs=1e-12)
    assert V[2, 5] == pytest.approx(1.0 / 7.0, abs=1e-12)
    assert V[4, 5] == pytest.approx(1.0 / 9.0, abs=1e-12)


def test_geodesics_and_louvain():
    codes = ["a", "b", "c", "d", "e", "f"]
    V = np.zeros((6, 6))
    for i, j in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]:
        V[i, j] = V[j, i] = 1.0
    D = stratmob.geodesics(V, codes)
    assert D[0, 1] == pytest.approx(1.0)
    assert math.isinf(D[0, 3])

    assignment, modularity = stratmob.louvain(V, codes, seed=3)
    assert modularity == pytest.approx(0.5)
    assert assignment[0] == assignment[1] == assignment[2]
    assert assignment[3] == assignment[4] == assignment[5]
    assert assignment[0] != assignment[3]
    assert stratmob.adjusted_rand_index(list(assignment), [0, 0, 0, 1, 1, 1]) == pytest.approx(1.0)


def test_ols_recovers_a_line():
    x = np.arange(10, dtype=float)
    X = np.column_stack([np.ones(10), x])
    y = 2.0 * x
    result = stratmob.ols(X, y, ["intercept", "x"])
    assert result["coef"][1] == pytest.approx(2.0, abs=1e-10)
    assert result["r2"] == pytest.approx(1.0)


def test_layout_stays_in_frame():
    codes = ["a", "b", "c"]
    V = np.zeros((3, 3))
    V[0, 1] = V[1, 0] = 1.0
    V[1, 2] = V[2, 1] = 1.0
    x, y = stratmob.layout(V, codes, width=200.0, height=100.0, seed=1)
    assert len(x) == len(y) == 3
    assert all(0.0 <= v <= 200.0 for v in x)
    assert all(0.0 <= v <= 100.0 for v in y)


def test_generate_and_run_pipeline(tmp_path):
    info = stratmob.generate_synth(
        str(tmp_path), households=300, occupations=16, blocks=4, seed=7
    )
    assert info["planted_beta"] == pytest.approx(3.0)
    assert (tmp_path / "synth.csv").exists()

    out = tmp_path / "out"
    stratmob.run_pipeline(
        str(tmp_path / "synth.csv"),
        str(out),
        min_households=2,
        deterministic=True,
    )
    expected = {
        "manifest.txt",
        "diagnostics.txt",
        "edges.csv",
        "distances.csv",
        "communities.csv",
        "positions.csv",
        "network.svg",
        "mobility.csv",
        "regressions.txt",
    }
    assert {p.name for p in out.iterdir()} == expected

    with pytest.raises(Exception):
        stratmob.run_pipeline(str(tmp_path / "missing.csv"), str(tmp_path / "out2"))
