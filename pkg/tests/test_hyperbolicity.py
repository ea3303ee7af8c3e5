"""Gromov products, the exact four-point constant against a nested-loop
oracle, sampled mode, and the finite-horizon pole defect."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import cheegerlab as cl
from cheegerlab import (
    BudgetExceededError,
    Graph,
    InvalidHorizonError,
    InvalidInputError,
)

from conftest import oracle_delta


def random_connected_graph(seed, nmin=4, nmax=9):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(nmin, nmax))
    names = [f"n{i}" for i in range(n)]
    edges = {(names[int(rng.integers(0, i))], names[i]) for i in range(1, n)}
    extra = int(rng.integers(0, n))
    for _ in range(extra):
        i, j = rng.integers(0, n, size=2)
        if i != j:
            a, b = names[int(min(i, j))], names[int(max(i, j))]
            edges.add((a, b))
    return Graph.from_edges(edges)


# -- gromov product ----------------------------------------------------------------


def test_gromov_product_path():
    g = Graph.from_edges([("o", "a"), ("a", "b")])
    assert cl.gromov_product(g, "a", "b", "o") == 1
    assert cl.gromov_product(g, "o", "o", "o") == 0


def test_gromov_product_splits_at_root():
    t = cl.homogeneous_tree(3, 3)
    assert cl.gromov_product(t.graph, "v00", "v10", "v") == 0


def test_gromov_product_unknown_point():
    g = cl.cycle_graph(4)
    with pytest.raises(InvalidInputError):
        cl.gromov_product(g, "0", "1", "zz")


@given(st.integers(0, 2_000))
@settings(max_examples=30, deadline=None)
def test_base_point_stability(seed):
    g = random_connected_graph(seed)
    rng = np.random.default_rng(seed + 1)
    x, y, o1, o2 = (g.vertices[int(i)] for i in rng.integers(0, len(g.vertices), 4))
    lhs = abs(cl.gromov_product(g, x, y, o1) - cl.gromov_product(g, x, y, o2))
    assert lhs <= g.distance(o1, o2)


# -- exact four-point constant -------------------------------------------------------


def test_trees_have_delta_zero():
    for t in (cl.homogeneous_tree(3, 4), cl.comb_tree(6, 2), cl.random_tree(40, 7)):
        rep = cl.delta_four_point(t.graph)
        assert rep.delta == 0
        assert rep.mode == "exhaustive" and not rep.lower_bound_only


def test_cycle_four():
    rep = cl.delta_four_point(cl.cycle_graph(4))
    assert rep.delta == 1
    assert cl.evaluate_witness(cl.cycle_graph(4), rep.witness) == 1


def test_cycle_six_matches_oracle():
    g = cl.cycle_graph(6)
    rep = cl.delta_four_point(g)
    assert rep.delta == oracle_delta(g.vertices, g.edges) == 1
    assert rep.delta >= 1  # antipodal pair with midpoints already forces 1


@given(st.integers(0, 5_000))
@settings(max_examples=25, deadline=None)
def test_exhaustive_matches_nested_loop_oracle(seed):
    g = random_connected_graph(seed, nmin=4, nmax=8)
    rep = cl.delta_four_point(g)
    assert rep.delta == oracle_delta(g.vertices, g.edges)
    assert cl.evaluate_witness(g, rep.witness) == rep.delta


def test_delta_on_metric_space():
    space = cl.line_space([0.0, 1.0, 2.5, 7.0])
    rep = cl.delta_four_point(space)
    assert rep.delta == 0.0  # subsets of the line are 0-hyperbolic


def test_delta_isomorphism_invariance():
    g = cl.cycle_graph(5)
    mapping = {v: f"z{(3 * int(v)) % 5}" for v in g.vertices}
    assert cl.delta_four_point(g).delta == cl.delta_four_point(cl.relabeled(g, mapping)).delta


def test_budget_error_instructs_sampling():
    g = cl.grid_window(6, 6, truncated=False)
    with pytest.raises(BudgetExceededError, match="sampled"):
        cl.delta_four_point(g, budget=1000)


def test_sampled_mode_is_a_lower_bound():
    g = cl.grid_window(5, 5, truncated=False)
    exact = cl.delta_four_point(g)
    sampled = cl.delta_four_point(g, mode="sampled", seed=3, samples=4000)
    assert sampled.lower_bound_only
    assert sampled.delta <= exact.delta
    assert cl.evaluate_witness(g, sampled.witness) == sampled.delta
    again = cl.delta_four_point(g, mode="sampled", seed=3, samples=4000)
    assert again.delta == sampled.delta and again.witness == sampled.witness


def test_small_spaces_are_trivially_zero():
    g = Graph.from_edges([("a", "b")])
    assert cl.delta_four_point(g).delta == 0


# -- pole defect -------------------------------------------------------------------------


def test_pole_defect_tree_root_is_zero():
    t = cl.homogeneous_tree(3, 4)
    rep = cl.pole_defect(t.graph, "v", 4)
    assert rep.defect == 0
    assert set(rep.covered) == set(t.graph.vertices)


def test_pole_defect_star_of_paths():
    g = Graph.from_edges(
        [("c", "a1"), ("a1", "a2"), ("c", "b1"), ("b1", "b2"), ("c", "d1"), ("d1", "d2")]
    )
    assert cl.pole_defect(g, "c", 2).defect == 0


def test_pole_defect_comb_teeth():
    # spine of length 12 with teeth of length 2: tips near the middle sit at
    # distance 2 from every base-to-sphere geodesic
    spine = [f"s{i}" for i in range(13)]
    edges = [(spine[i], spine[i + 1]) for i in range(12)]
    for i in range(13):
        edges += [(spine[i], f"t{i}a"), (f"t{i}a", f"t{i}b")]
    g = Graph.from_edges(edges)
    rep = cl.pole_defect(g, "s6", 6)
    assert rep.defect == 2
    assert rep.witness.endswith("b")


def test_pole_defect_on_tree_equals_dead_branch_depth():
    # covered set = complete subtree; defect = deepest dead hang-off
    t = cl.comb_tree(8, 3)
    rep = cl.pole_defect(t.graph, t.root, t.horizon)
    assert rep.covered == cl.maximal_complete_subtree(t)
    assert rep.defect == 3
    full = cl.homogeneous_tree(3, 4)
    assert cl.pole_defect(full.graph, "v", 4).defect == 0


def test_pole_defect_horizon_validation():
    g = cl.path_window(5, truncated=False)
    with pytest.raises(InvalidHorizonError):
        cl.pole_defect(g, "1", 10)
    with pytest.raises(InvalidInputError):
        cl.pole_defect(g, "zz", 2)
