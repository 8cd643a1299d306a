
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bsgame.channel import NetworkParams, draw_channels, params_from_snr
from bsgame.core import utility
from bsgame.selection import (
    ConvergenceError,
    EnumerationCapError,
    adjacency_matrices,
    all_potentials,
    all_utilities,
    best_response_selection,
    enumerate_ne,
    graph_distance,
    is_selection_ne,
    max_ne_bound,
    profile_from_index,
    profile_index,
    random_profile,
    run_selection_dynamics,
    selection_power,
)

from conftest import FIG2_W
from oracles import full_power, ne_set_bruteforce, potential_of, pure_table


def test_index_layout_player0_least_significant():
    assert profile_index([1, 0, 0], 2) == 1
    assert profile_index([0, 0, 1], 2) == 4
    assert profile_from_index(5, 3, 2).tolist() == [1, 0, 1]


@given(K=st.integers(1, 7), S=st.integers(1, 4), data=st.data())
def test_index_bijection(K, S, data):
    i = data.draw(st.integers(0, S**K - 1))
    assert profile_index(profile_from_index(i, K, S), S) == i


def test_index_out_of_range():
    with pytest.raises(ValueError):
        profile_from_index(8, 3, 2)


def test_graph_distance():
    assert graph_distance(5, 5, 3, 2) == 0
    i = profile_index([0, 1, 2, 0], 3)
    j = profile_index([0, 2, 1, 0], 3)
    assert graph_distance(i, j, 4, 3) == 2 == graph_distance(j, i, 4, 3)
    dists = [graph_distance(i, j, 3, 2) for i in range(8) for j in range(8) if i != j]
    assert min(dists) == 1 and max(dists) == 3


@pytest.mark.parametrize("K,S,bound", [(3, 2, 4), (1, 5, 1), (5, 3, 81)])
def test_max_ne_bound(K, S, bound):
    assert max_ne_bound(K, S) == bound


def test_max_ne_bound_overflow():
    with pytest.raises(OverflowError):
        max_ne_bound(100, 3)


def test_vectorized_tables_match_bruteforce(fig2_params):
    g = draw_channels(fig2_params, 3)
    table = pure_table(g, fig2_params)
    phi = all_potentials(g, fig2_params)
    u = all_utilities(g, fig2_params)
    for a, ua in table.items():
        i = profile_index(a, 3)
        np.testing.assert_allclose(u[i], ua, rtol=1e-12)
        assert phi[i] == pytest.approx(potential_of(a, g, fig2_params), abs=1e-12)


def test_single_player_ne_is_argmax():
    rng = np.random.default_rng(0)
    for t in range(20):
        params = params_from_snr(1, 4, rng.dirichlet(np.ones(4)), 10.0)
        g = draw_channels(params, t)
        rep = enumerate_ne(g, params)
        expect = np.argmax(params.w * np.log2(1 + params.p_max * g.gains[0] / params.sigma2))
        assert rep.ne_indices == [int(expect)]


def test_k3_s2_ne_count_within_bound():
    params = params_from_snr(3, 2, None, 10.0)
    for t in range(100):
        rep = enumerate_ne(draw_channels(params, t), params)
        assert 1 <= rep.count <= 4


@pytest.mark.parametrize("seed", range(10))
def test_enumerate_matches_bruteforce(fig2_params, seed):
    g = draw_channels(fig2_params, seed)
    rep = enumerate_ne(g, fig2_params)
    expected, table = ne_set_bruteforce(g, fig2_params)
    assert {tuple(a.tolist()) for a in rep.assignments()} == expected
    assert list(rep.potentials) == sorted(rep.potentials, reverse=True)
    for a, u in zip(rep.assignments(), rep.utilities):
        np.testing.assert_allclose(u, table[tuple(a.tolist())], rtol=1e-12)


def test_enumerate_flags_tied_potentials():
    # two identical players on symmetric BSs: swapping them leaves phi unchanged
    params = params_from_snr(2, 2, None, 10.0)
    rep = enumerate_ne(np.ones((2, 2)), params)
    assert not rep.is_unique_potential
    assert enumerate_ne(draw_channels(params, 1), params).is_unique_potential


def test_enumeration_cap():
    params = params_from_snr(5, 3, FIG2_W, 10.0)
    with pytest.raises(EnumerationCapError, match="cap of 100"):
        enumerate_ne(draw_channels(params, 0), params, cap=100)


def test_adjacency_k3_s2():
    params = params_from_snr(3, 2, None, 10.0)
    g = draw_channels(params, 5)
    A, A_hat = adjacency_matrices(g, params)
    assert A.shape == (8, 8)
    assert np.array_equal(A, A.T)
    assert np.all(np.diag(A) == 0)
    assert np.all(A.sum(axis=1) == 3)
    phi = all_potentials(g, params)
    assert not A_hat[int(np.argmax(phi))].any()


@pytest.mark.parametrize("K,S", [(3, 2), (4, 3), (5, 3), (6, 2)])
def test_adjacency_sinks_equal_enumeration(K, S):
    for t in range(5):
        params = params_from_snr(K, S, None, 10.0)
        g = draw_channels(params, (K, S, t))
        A, A_hat = adjacency_matrices(g, params)
        sinks = np.flatnonzero(A_hat.sum(axis=1) == 0).tolist()
        assert sorted(enumerate_ne(g, params).ne_indices) == sinks
        # off-diagonal degree of every vertex is K(S-1)
        assert np.all(A.sum(axis=1) == K * (S - 1))


def test_adjacency_cap():
    params = params_from_snr(13, 2, None, 10.0)
    with pytest.raises(EnumerationCapError):
        adjacency_matrices(np.ones((13, 2)), params)


def test_best_response_larger_gain():
    params = NetworkParams(1, 2, (0.5, 0.5), 1.0, 1.0, 10.0)
    assert best_response_selection(np.array([[1.0, 3.0]]), params, [0], 0).tolist() == [1]


def test_best_response_fixed_point():
    params = NetworkParams(1, 2, (0.5, 0.5), 1.0, 1.0, 10.0)
    assert best_response_selection(np.array([[1.0, 3.0]]), params, [1], 0).tolist() == [1]


def test_best_response_keeps_current_on_tie():
    params = params_from_snr(1, 3, None, 10.0)
    g = np.array([[2.0, 2.0, 2.0]])
    assert best_response_selection(g, params, [2], 0).tolist() == [2]


def test_best_response_matches_bruteforce():
    rng = np.random.default_rng(1)
    for t in range(40):
        params = params_from_snr(4, 3, rng.dirichlet(np.ones(3)), 10.0)
        g = draw_channels(params, t)
        a = rng.integers(3, size=4)
        k = int(rng.integers(4))
        vals = []
        for s in range(3):
            b = a.copy()
            b[k] = s
            vals.append(utility(full_power(b, params), g, params, k))
        new = best_response_selection(g, params, a, k)
        assert vals[new[k]] == pytest.approx(max(vals), abs=1e-12)
        if new[k] != a[k]:
            assert potential_of(new, g, params) > potential_of(a, g, params)


def test_full_power_dominates():
    rng = np.random.default_rng(2)
    params = params_from_snr(4, 3, None, 10.0)
    g = draw_channels(params, 4)
    for _ in range(30):
        a = rng.integers(3, size=4)
        k = int(rng.integers(4))
        p = full_power(a, params)
        lower = p.copy()
        lower[k, a[k]] = rng.uniform(0, params.p_max)
        assert utility(p, g, params, k) >= utility(lower, g, params, k)


def test_dynamics_from_ne_makes_no_change(fig2_params):
    g = draw_channels(fig2_params, 2)
    ne = enumerate_ne(g, fig2_params).assignments()[0]
    for schedule in ("round_robin", "random"):
        a, traj = run_selection_dynamics(g, fig2_params, ne, schedule, seed=1)
        assert traj.num_changes == 0
        assert a.tolist() == ne.tolist()
    _, traj = run_selection_dynamics(g, fig2_params, ne, "round_robin")
    assert len(traj.steps) == fig2_params.K + 1


def test_dynamics_trajectory_properties(fig2_params):
    g = draw_channels(fig2_params, 7)
    ne = {tuple(a.tolist()) for a in enumerate_ne(g, fig2_params).assignments()}
    ends = set()
    for seed in range(30):
        start = random_profile(5, 3, (99, seed))
        a, traj = run_selection_dynamics(g, fig2_params, start, "random", seed=seed)
        assert tuple(a.tolist()) in ne
        phis = traj.change_potentials()
        assert all(b > a for a, b in zip(phis, phis[1:]))
        assert traj.num_changes <= 3**5
        assert traj.indices[-1] == profile_index(a, 3)
        ends.add(tuple(a.tolist()))
    assert ends <= ne


def test_dynamics_different_walks_reach_different_ne(fig2_params):
    # find an instance with several NE and check walks land on more than one
    for t in range(50):
        g = draw_channels(fig2_params, t)
        if enumerate_ne(g, fig2_params).count >= 2:
            break
    ends = set()
    for seed in range(60):
        a, _ = run_selection_dynamics(g, fig2_params, random_profile(5, 3, seed), "random", seed=seed)
        ends.add(tuple(a.tolist()))
    assert len(ends) >= 2


def test_dynamics_errors(fig2_params):
    g = draw_channels(fig2_params, 0)
    with pytest.raises(ValueError):
        run_selection_dynamics(g, fig2_params, [0] * 5, "random")
    with pytest.raises(ValueError):
        run_selection_dynamics(g, fig2_params, [0] * 5, "sideways", seed=0)
    with pytest.raises(ValueError):
        run_selection_dynamics(g, fig2_params, [0, 0, 0, 0, 3], "round_robin")
    with pytest.raises(ConvergenceError) as err:
        run_selection_dynamics(g, fig2_params, [0] * 5, "round_robin", max_steps=2)
    assert len(err.value.trajectory.steps) == 3


def test_trajectory_csv(fig2_params):
    g = draw_channels(fig2_params, 0)
    _, traj = run_selection_dynamics(g, fig2_params, [0] * 5, "round_robin")
    lines = traj.to_csv().splitlines()
    assert lines[0] == "step,player,profile_index,potential,changed"
    assert len(lines) == len(traj.steps) + 1


def test_is_selection_ne_agrees_with_enumeration(fig2_params):
    g = draw_channels(fig2_params, 12)
    ne = set(enumerate_ne(g, fig2_params).ne_indices)
    for i in range(3**5):
        assert is_selection_ne(g, fig2_params, profile_from_index(i, 5, 3)) == (i in ne)


def test_selection_power():
    params = params_from_snr(3, 2, None, 10.0)
    np.testing.assert_array_equal(selection_power([1, 0, 1], params),
                                  [[0, 10.0], [10.0, 0], [0, 10.0]])
