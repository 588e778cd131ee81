import numpy as np
import pytest

from basslab.analytic import f_circle, pair_survival_two_sided_line
from basslab.network import Network, build_circle, build_hybrid_circle_ray, build_line
from basslab.oracle import (
    HARD_CAP,
    MasterSolution,
    StateDistribution,
    build_generator,
    exact_f,
    exact_marginals,
    marginal_report,
    solve_master,
    survival,
)
from conftest import independent_survival, two_node_chain_survival

T = np.linspace(0.0, 20.0, 21)


class TestSmallExactCases:
    def test_single_node(self):
        net = Network(n=1, p=np.array([0.17]), edges=())
        marg = exact_marginals(net, T)
        assert np.max(np.abs(marg[0] - (1.0 - np.exp(-0.17 * T)))) < 1e-10

    def test_initial_state_is_point_mass_on_empty_set(self):
        sol = solve_master(build_circle(3, 0.1, 0.3), np.array([0.0, 1.0]))
        dist = sol[0]
        assert dist.time == 0.0
        assert dist.prob([]) == pytest.approx(1.0, abs=1e-12)
        assert dist.prob([0]) == pytest.approx(0.0, abs=1e-12)

    def test_edgeless_network_factorizes(self):
        p = np.array([0.05, 0.11, 0.23, 0.4])
        net = Network(n=4, p=p, edges=())
        sol = solve_master(net, T)
        for nodes in ([0], [1, 3], [0, 1, 2, 3]):
            ref = independent_survival(T, p, nodes)
            assert np.max(np.abs(sol.survival(nodes) - ref)) < 1e-10

    def test_two_node_chain_matches_conditioning_formula(self):
        p1, p2, w = 0.08, 0.05, 0.31
        net = Network(n=2, p=np.array([p1, p2]), edges=((0, 1, w),))
        sol = solve_master(net, T)
        assert np.max(np.abs(sol.survival([0]) - np.exp(-p1 * T))) < 1e-10
        ref = two_node_chain_survival(T, p1, p2, w)
        assert np.max(np.abs(sol.survival([1]) - ref)) < 1e-10

    def test_circle_sidedness_is_invisible_in_distribution(self):
        one = solve_master(build_circle(4, 0.05, 0.3, sided="one"), T)
        two = solve_master(build_circle(4, 0.05, 0.3, sided="two"), T)
        f1 = one.expected_fraction()
        f2 = two.expected_fraction()
        assert np.max(np.abs(f1 - f2)) < 1e-10


class TestSurvival:
    def test_whole_network_set(self):
        # only spontaneous adoption can break an all-susceptible network
        M, p = 4, 0.07
        net = build_circle(M, p, 0.4)
        assert np.max(np.abs(survival(net, range(M), T) - np.exp(-M * p * T))) < 1e-11

    def test_singleton_complements_marginal(self):
        net = build_line(4, 0.05, 0.3, sided="two")
        sol = solve_master(net, T)
        marg = sol.marginals()
        for j in range(4):
            assert np.max(np.abs(sol.survival([j]) - (1.0 - marg[j]))) < 1e-12

    def test_adjacent_pair_on_two_sided_line_factorizes(self):
        p, q, M = 0.05, 0.3, 5
        sol = solve_master(build_line(M, p, q, sided="two"), T)
        for j in range(2, M + 1):
            ref = pair_survival_two_sided_line(T, p, q, M, j)
            assert np.max(np.abs(sol.pair_survival(j - 2, j - 1) - ref)) < 1e-10

    def test_set_monotone_in_omega(self):
        net = build_circle(5, 0.05, 0.3)
        sol = solve_master(net, T)
        small = sol.survival([1, 2])
        big = sol.survival([1, 2, 4])
        assert np.all(big[1:] < small[1:])

    def test_node_validation(self):
        sol = solve_master(build_circle(3, 0.1, 0.3), T)
        with pytest.raises(ValueError):
            sol.survival([])
        with pytest.raises(ValueError):
            sol.survival([3])


class TestAgainstAnalytic:
    def test_circle_curve(self):
        net = build_circle(6, 0.05, 0.3)
        curve = exact_f(net, T)
        assert curve.source == "oracle"
        assert curve.f[0] == 0.0
        ref, _ = f_circle(T, 0.05, 0.3, 6)
        assert np.max(np.abs(curve.f - ref)) < 1e-8
        assert curve.per_node.shape == (6, T.size)
        assert np.max(np.abs(curve.per_node - ref)) < 1e-8

    def test_hybrid_curve(self):
        net = build_hybrid_circle_ray(3, 2, 0.05, 0.3)
        curve = exact_f(net, T)
        fC, _ = f_circle(T, 0.05, 0.3, 3)
        f4, _ = f_circle(T, 0.05, 0.3, 4)
        f5, _ = f_circle(T, 0.05, 0.3, 5)
        ref = np.vstack([fC, fC, fC, f4, f5])
        assert np.max(np.abs(curve.per_node - ref)) < 1e-8


class TestStructure:
    def test_conservation(self):
        sol = solve_master(build_circle(6, 0.05, 0.3), T)
        assert sol.conservation_defect() < 1e-12

    def test_marginals_monotone(self):
        sol = solve_master(build_line(5, 0.05, 0.3, sided="two"), T)
        assert np.all(np.diff(sol.marginals(), axis=1) > -1e-10)

    def test_generator_only_adds_nodes(self):
        # every off-diagonal transition goes from a set to a strict superset
        # obtained by adding exactly one node
        net = build_line(4, 0.05, 0.3, sided="two")
        Q = build_generator(net).tocoo()
        off = Q.row != Q.col
        rows, cols = Q.row[off], Q.col[off]
        assert np.all((rows & cols) == cols)
        popcount = np.vectorize(lambda x: bin(x).count("1"))
        assert np.all(popcount(rows) == popcount(cols) + 1)
        assert np.all(Q.data[off] > 0)

    def test_generator_columns_sum_to_zero(self):
        Q = build_generator(build_circle(5, 0.05, 0.3))
        colsum = np.asarray(Q.sum(axis=0)).ravel()
        assert np.max(np.abs(colsum)) < 1e-12

    def test_size_cap(self):
        net = Network(n=HARD_CAP + 1, p=np.full(HARD_CAP + 1, 0.1), edges=())
        with pytest.raises(ValueError, match="capped"):
            solve_master(net, T)

    def test_grid_validation(self):
        net = build_circle(3, 0.1, 0.3)
        with pytest.raises(ValueError):
            solve_master(net, np.array([-1.0, 0.0]))
        with pytest.raises(ValueError):
            solve_master(net, np.array([0.0, 2.0, 1.0]))
        with pytest.raises(ValueError):
            solve_master(net, np.zeros(0))


class TestMonotonicityInStructure:
    def test_line_survives_longer_than_circle(self):
        # the circle is the line plus one edge, so every set survives at
        # least as long on the line
        p, q, M = 0.05, 0.3, 5
        line = solve_master(build_line(M, p, q, sided="one"), T)
        circ = solve_master(build_circle(M, p, q, sided="one"), T)
        rng = np.random.default_rng(7)
        for _ in range(8):
            size = rng.integers(1, M + 1)
            nodes = rng.choice(M, size=size, replace=False)
            s_line = line.survival(nodes)
            s_circ = circ.survival(nodes)
            assert np.all(s_circ <= s_line + 1e-11)

    def test_survival_strictly_decreases_in_q(self):
        lo = solve_master(build_circle(4, 0.05, 0.2), T)
        hi = solve_master(build_circle(4, 0.05, 0.4), T)
        assert np.all(hi.survival([0, 1])[1:] < lo.survival([0, 1])[1:])


class TestContainers:
    def test_state_distribution_validation(self):
        with pytest.raises(ValueError, match="entries"):
            StateDistribution(M=2, time=0.0, probabilities=np.ones(3) / 3)
        with pytest.raises(ValueError, match="negative"):
            StateDistribution(M=1, time=0.0, probabilities=np.array([1.1, -0.1]))
        with pytest.raises(ValueError, match="sum"):
            StateDistribution(M=1, time=0.0, probabilities=np.array([0.6, 0.6]))

    def test_solution_acts_as_sequence(self):
        sol = solve_master(build_circle(3, 0.1, 0.3), T)
        assert len(sol) == T.size
        snap = sol[5]
        assert isinstance(snap, StateDistribution)
        assert snap.time == T[5]
        assert snap.M == 3
        times = [d.time for d in sol]
        assert times == list(T)

    def test_solution_shape_validation(self):
        net = build_circle(3, 0.1, 0.3)
        with pytest.raises(ValueError, match="shape"):
            MasterSolution(network=net, t=T, probs=np.zeros((T.size, 4)))

    def test_marginal_report(self):
        net = build_line(4, 0.05, 0.3, sided="two")
        rep = marginal_report(net, T, omegas=([0], [0, 3]))
        assert rep.marginals.shape == (4, T.size)
        assert np.allclose(rep.f, rep.marginals.mean(axis=0), atol=0)
        assert set(rep.survivals) == {(0,), (0, 3)}
        assert np.all(rep.survivals[(0, 3)] <= rep.survivals[(0,)] + 1e-12)
