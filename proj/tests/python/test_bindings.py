"""Smoke tests for the python bindings: each major operation round-trips
through the extension module and matches the library's documented behavior."""

import math

import pytest

import covop


def test_graph_and_spectrum():
    g = covop.Graph(3, [(0, 1), (1, 2)])
    assert g.node_count() == 3
    assert g.edges() == [(0, 1), (1, 2)]
    assert g.connected()
    spec = covop.smallest_eigenpairs(g, 3, covop.Laplacian.combinatorial)
    # Path on three nodes: combinatorial Laplacian spectrum {0, 1, 3}.
    assert spec.eigenvalues[0] == pytest.approx(0.0, abs=1e-9)
    assert spec.lambda2() == pytest.approx(1.0, abs=1e-8)
    assert spec.lambda3() == pytest.approx(3.0, abs=1e-8)

    coords = covop.spectral_drawing(g)
    xs = [x for x, _ in coords]
    assert xs[0] < xs[1] < xs[2] or xs[0] > xs[1] > xs[2]


def test_discovery_matches_known_room_values():
    mdp = covop.load_grid(covop.data_directory() + "/ninebynine.map")
    g = covop.graph_from_mdp(mdp)
    opts = covop.covering_options(g, 4, mdp)
    assert len(opts) == 4
    # Mirrored pairs between opposite corners of the open room.
    assert (opts.options[0].initiation, opts.options[0].termination) == (0, 80)
    assert (opts.options[1].initiation, opts.options[1].termination) == (80, 0)
    log = opts.discovery_log
    assert log[0].lambda2_before == pytest.approx(0.120614758428, abs=1e-8)
    assert log[1].lambda2_after == pytest.approx(0.192506791368, abs=1e-8)
    assert opts.augmented_graph.edge_count() == g.edge_count() + 2


def test_option_policies_execute():
    mdp = covop.grid_from_text("S..\n...\n..G\n")
    opt = covop.option_policy(mdp, 0, 8)
    assert opt.initiation == 0
    assert opt.termination == 8
    assert opt.length == 4
    s = 0
    for _ in range(10):
        if s == 8:
            break
        action = opt.policy[s]
        assert action >= 0
        s = mdp.outcomes(s, action)[0][0]
    assert s == 8


def test_cover_time_estimation_is_deterministic():
    g = covop.Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    a = covop.estimate_cover_time(g, 50, seed=7)
    b = covop.estimate_cover_time(g, 50, seed=7)
    assert a.per_start_mean == b.per_start_mean
    assert a.max_over_starts >= a.avg_over_starts > 0
    exact = covop.exact_cover_times(g)
    assert len(exact) == 4
    # The 4-cycle is vertex-transitive: identical exact cover time everywhere.
    assert max(exact) == pytest.approx(min(exact), abs=1e-9)


def test_q_learning_runs_and_repeats():
    mdp = covop.grid_from_text("S..\n...\n..G\n")
    g = covop.graph_from_mdp(mdp)
    opts = covop.covering_options(g, 2, mdp)
    first = covop.q_learning(mdp, opts, episodes=20, max_steps=30, seed=3)
    again = covop.q_learning(mdp, opts, episodes=20, max_steps=30, seed=3)
    assert len(first.curve.episode_reward) == 20
    assert first.curve.episode_reward == again.curve.episode_reward
    assert sum(first.curve.episode_reward) > 0


def test_run_experiment_writes_files(tmp_path):
    config = "domain.name = grid\ndiscover.options = 2\n"
    written = covop.run_experiment("discover", config, out=str(tmp_path))
    assert sorted(p.rsplit("/", 1)[1] for p in written) == [
        "discovery_log.csv",
        "options.txt",
    ]
    loaded = covop.load_option_set(str(tmp_path / "options.txt"))
    assert len(loaded) == 2


def test_errors_translate_to_python_exceptions():
    with pytest.raises(ValueError, match="unknown config key"):
        covop.run_experiment("discover", "bogus = 1\n")
    with pytest.raises(RuntimeError, match="connected"):
        covop.smallest_eigenpairs(covop.Graph(2), 2)
    with pytest.raises(OSError, match="cannot open"):
        covop.load_grid("definitely/not/here.map")
