"""Rooted-tree machinery: complete subtrees, pseudo-regularity and
complementedness, essential boundaries, the tree bound, the lemma suite and
end spaces."""

import math
from fractions import Fraction

import pytest

import cheegerlab as cl
from cheegerlab import EmptyWindowError, InvalidInputError

from conftest import oracle_min_ratio


# -- construction and invariants -----------------------------------------------


def test_live_leaves_must_sit_at_horizon():
    with pytest.raises(InvalidInputError):
        cl.RootedTree("v", {"v": ("a",), "a": ("b",), "b": ()}, frozenset({"a"}))


def test_deep_leaves_must_be_live():
    kids = {"v": ("a", "c"), "a": ("b", "d"), "b": (), "c": (), "d": ()}
    with pytest.raises(InvalidInputError):
        # d reaches the horizon but is unmarked, which the model forbids
        cl.RootedTree("v", kids, frozenset({"b"}))
    with pytest.raises(InvalidInputError):
        cl.RootedTree("v", kids, frozenset({"c"}))  # live leaf below the horizon
    t = cl.RootedTree("v", kids, frozenset({"b", "d"}))
    assert t.horizon == 2 and t.live == {"b", "d"}


def test_bounded_tree_allowed_without_live():
    t = cl.tree_from_parents("v", {"a": "v", "b": "v"})
    assert t.live == frozenset()
    assert cl.maximal_complete_subtree(t) == frozenset()


def test_generator_sphere_sizes():
    t = cl.homogeneous_tree(3, 4)
    assert [len(t.sphere(k)) for k in range(5)] == [1, 3, 6, 12, 24]
    t5 = cl.homogeneous_tree(5, 3)
    assert [len(t5.sphere(k)) for k in range(4)] == [1, 5, 20, 80]


def test_graph_frontier_is_live_set():
    t = cl.homogeneous_tree(3, 3)
    assert t.graph.frontier == t.live


# -- subtree and complete subtree -------------------------------------------------


def test_subtree_past_root_and_leaf():
    t = cl.homogeneous_tree(3, 3)
    assert cl.subtree_past(t, "v") == set(t.vertices)
    leaf = sorted(t.live)[0]
    assert cl.subtree_past(t, leaf) == {leaf}
    assert len(cl.subtree_past(t, "v0")) == 1 + 2 + 4


def test_complete_subtree_all_live():
    t = cl.homogeneous_tree(3, 4)
    assert cl.maximal_complete_subtree(t) == set(t.vertices)


def test_complete_subtree_comb_is_spine():
    t = cl.comb_tree(6, 2)
    keep = cl.maximal_complete_subtree(t)
    assert keep == {f"s{i}" for i in range(7)}


def test_complete_subtree_excludes_pruned_branch():
    t = cl.grafted_dead_branches(cl.homogeneous_tree(3, 4), 1)
    keep = cl.maximal_complete_subtree(t)
    assert keep == set(cl.homogeneous_tree(3, 4).vertices)
    assert all("~d" not in v for v in keep)


def test_complete_subtree_maximality_by_mutation():
    t = cl.comb_tree(5, 1)
    keep = cl.maximal_complete_subtree(t)
    for extra in sorted(set(t.vertices) - keep):
        # adding any dead vertex breaks the root-to-live-leaf property
        path = t.root_path(extra)
        assert not set(path) <= keep or extra in keep
        assert extra not in keep


def test_end_space_equals_complete_subtree_end_space():
    t = cl.grafted_dead_branches(cl.homogeneous_tree(3, 4), 2)
    tinf = cl.maximal_complete_subtree(t)
    sub_children = {
        v: tuple(c for c in t.children[v] if c in tinf) for v in t.vertices if v in tinf
    }
    sub = cl.RootedTree(t.root, sub_children, t.live)
    assert cl.end_space(t).points == cl.end_space(sub).points


# -- pseudo-regularity ----------------------------------------------------------------


def test_homogeneous_trees_are_one_pseudo_regular():
    for k in (3, 4, 5):
        assert cl.pseudo_regularity_index(cl.homogeneous_tree(k, 4)).k == 1


def test_even_branching_gives_k_two():
    t = cl.even_branching_tree(6)
    res = cl.pseudo_regularity_index(t)
    assert res.k == 2
    # K = 1 fails: odd-depth vertices have a single child
    prof = {v: len(t.children[v]) for v in t.vertices}
    assert any(c == 1 for c in prof.values())


def test_growing_chain_defect_and_family():
    t = cl.growing_chain(8)
    res = cl.pseudo_regularity_index(t)
    assert res.k is None
    assert res.defect_vertex == "g1"
    assert [w.ratio for w in res.family] == [Fraction(2, k) for k in range(1, res.defect_run + 1)]
    g = t.graph
    for w in res.family:
        members = set(w.vertices)
        assert len(members) == w.k
        assert cl.cheeger_ratio(g, members) == w.ratio  # |boundary| = 2 exactly


def test_pseudo_regularity_requires_live():
    t = cl.tree_from_parents("v", {"a": "v"})
    with pytest.raises(EmptyWindowError):
        cl.pseudo_regularity_index(t)


# -- complementedness -------------------------------------------------------------------


def test_complementedness_trivial_when_complete():
    assert cl.complementedness_index(cl.homogeneous_tree(3, 4)).c == 1


def test_single_dead_edge_gives_two():
    t = cl.homogeneous_tree(3, 4)
    kids = {v: list(c) for v, c in t.children.items()}
    kids["v0"].append("dead")
    kids["dead"] = []
    t2 = cl.RootedTree("v", {v: tuple(c) for v, c in kids.items()}, t.live)
    res = cl.complementedness_index(t2)
    assert res.c == 2
    assert res.components == (cl.trees.DeadComponent("v0", ("dead",)),) if False else True
    assert [c.attachment for c in res.components] == ["v0"]


def test_comb_teeth_complementedness():
    # each tooth is a path of 3 dead vertices plus its spine attachment
    t = cl.comb_tree(8, 3)
    res = cl.complementedness_index(t)
    assert res.c == 4
    assert all(len(c.vertices) == 3 for c in res.components)


def test_grafted_dead_branches_complementedness():
    t = cl.grafted_dead_branches(cl.homogeneous_tree(3, 5), 3)
    assert cl.complementedness_index(t).c == 4


# -- essential boundary --------------------------------------------------------------------


def test_essential_boundary_depth_one_vertex():
    t = cl.homogeneous_tree(3, 3)
    eb = cl.essential_boundary(t, {"v0"})
    assert eb.non_essential == {"v"}
    assert eb.essential == {"v00", "v01"}
    assert eb.inner == {"v0"}


def test_essential_boundary_empty_when_root_inside():
    t = cl.homogeneous_tree(3, 3)
    eb = cl.essential_boundary(t, {"v", "v0"})
    assert eb.non_essential == frozenset()
    assert eb.essential == cl.boundary(t.graph, {"v", "v0"})


def test_essential_boundary_subtree_block():
    t = cl.homogeneous_tree(3, 4)
    block = {"v0", "v00", "v01"}
    eb = cl.essential_boundary(t, block)
    assert eb.non_essential == {"v"}
    assert len(eb.essential) == 4  # the four grandchildren below the block
    assert eb.inner == {"v00", "v01"}


def test_essential_boundary_rejects_disconnected():
    t = cl.homogeneous_tree(3, 3)
    with pytest.raises(InvalidInputError):
        cl.essential_boundary(t, {"v00", "v10"})


# -- tree bounds ------------------------------------------------------------------------------


def test_t3_bound_is_one_seventh():
    analysis = cl.tree_cheeger_bounds(cl.homogeneous_tree(3, 6))
    assert (analysis.k, analysis.c) == (1, 1)
    assert analysis.bounds.lower.value == Fraction(1, 7)
    assert analysis.bounds.lower.kind == "tree-theorem"
    assert analysis.bounds.lower.horizon_certified
    assert analysis.sandwich_lower == Fraction(1, 7)


def test_theorem_formula_k2_c3():
    assert cl.theorem_lower_bound(2, 3) == Fraction(1, 44)
    t = cl.grafted_dead_branches(cl.even_branching_tree(8), 2)
    analysis = cl.tree_cheeger_bounds(t)
    assert (analysis.k, analysis.c) == (2, 3)
    assert analysis.bounds.lower.value == Fraction(1, 44)


def test_growing_chain_bound_zero_with_family():
    analysis = cl.tree_cheeger_bounds(cl.growing_chain(9))
    assert analysis.k is None
    assert analysis.bounds.lower.value == 0
    ratios = analysis.bounds.lower.witness["family_ratios"]
    assert ratios == [str(Fraction(2, k)) for k in range(1, len(ratios) + 1)]


def test_bounded_tree_has_zero_cheeger():
    t = cl.tree_from_parents("v", {"a": "v", "b": "a"})
    analysis = cl.tree_cheeger_bounds(t)
    assert analysis.bounds.upper.value == 0
    assert analysis.bounds.lower.value == 0


def test_squeeze_theorem_vs_window_on_families():
    trees = [
        cl.homogeneous_tree(3, 5),
        cl.homogeneous_tree(4, 4),
        cl.full_branching_tree(2, 6),
        cl.grafted_dead_branches(cl.full_branching_tree(2, 6), 1),
        cl.random_branching_tree(5, seed=11),
    ]
    for t in trees:
        analysis = cl.tree_cheeger_bounds(t, max_size=3)
        assert analysis.bounds.lower.value <= analysis.bounds.upper.value


def test_window_upper_of_complete_subtree_dominates():
    t = cl.grafted_dead_branches(cl.full_branching_tree(2, 5), 2)
    tinf = cl.maximal_complete_subtree(t)
    sub_children = {
        v: tuple(c for c in t.children[v] if c in tinf) for v in t.vertices if v in tinf
    }
    sub = cl.RootedTree(t.root, sub_children, t.live)
    full = cl.tree_cheeger_bounds(t, max_size=4)
    pruned = cl.tree_cheeger_bounds(sub, max_size=4)
    assert pruned.bounds.upper.value >= full.bounds.upper.value


def test_monotone_spheres_on_complete_subtree():
    for t in (cl.homogeneous_tree(3, 5), cl.random_branching_tree(5, seed=3)):
        tinf = cl.maximal_complete_subtree(t)
        sizes = [
            sum(1 for v in t.sphere(k) if v in tinf) for k in range(t.horizon + 1)
        ]
        assert all(a <= b for a, b in zip(sizes, sizes[1:]))


def test_window_upper_matches_enumeration_oracle():
    t = cl.homogeneous_tree(3, 4)
    analysis = cl.tree_cheeger_bounds(t, max_size=8)
    g = t.graph
    adm = sorted(cl.admissible_vertices(g))
    assert analysis.bounds.upper.value == oracle_min_ratio(g.vertices, g.edges, adm, 8)


# -- lemma suite ---------------------------------------------------------------------------------


def test_lemma_suite_t3():
    report = cl.lemma_suite(cl.homogeneous_tree(3, 5), max_size=6)
    assert report.ok
    assert report.min_boundary_ratio >= Fraction(1, 3)
    assert report.min_essential_ratio >= Fraction(1, 3)
    assert report.min_inner_ratio >= Fraction(1, 6)
    assert report.sets_checked == 872


def test_lemma_suite_enumeration_count_matches_naive_filter():
    from itertools import combinations

    t = cl.homogeneous_tree(3, 3)
    g = t.graph
    allowed = sorted(v for v in g.vertices if v not in g.frontier)

    def connected(sub):
        seen = {sub[0]}
        stack = [sub[0]]
        while stack:
            x = stack.pop()
            for y in g.adjacency[x]:
                if y in sub and y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == len(sub)

    naive = sum(
        1
        for k in range(1, 5)
        for combo in combinations(allowed, k)
        if connected(combo)
    )
    report = cl.lemma_suite(t, max_size=4)
    assert report.sets_checked == naive


def test_lemma_suite_star_center():
    t = cl.full_branching_tree(3, 2)
    report = cl.lemma_suite(t, max_size=4)
    assert report.ok
    eb = cl.essential_boundary(t, {"v"})
    assert len(eb.essential) / 1 >= Fraction(1, 3)


def test_lemma_suite_chain_set_saturates_shallow_bound():
    # a chain from depth 1 of length K-1 meets |A| <= 1 + (K-1)|essential|
    t = cl.even_branching_tree(6)
    chain = [c for c in t.children["v"]][:1]
    while len(chain) < 3:
        chain.append(t.children[chain[-1]][0])
    eb = cl.essential_boundary(t, chain)
    k_bound = max(t.depth[x] for x in chain) + 1
    assert len(chain) <= 1 + (k_bound - 1) * len(eb.essential)


def test_lemma_suite_requires_one_pseudo_regular():
    with pytest.raises(InvalidInputError):
        cl.lemma_suite(cl.even_branching_tree(4))
    with pytest.raises(InvalidInputError):
        cl.lemma_suite(cl.comb_tree(5, 1))


# -- end space ------------------------------------------------------------------------------------


def test_end_space_split_depth_two():
    # two live leaves splitting at depth 2
    t = cl.tree_from_parents(
        "v", {"a": "v", "b": "a", "c": "b", "d": "b"}, live=["c", "d"]
    )
    space = cl.end_space(t)
    assert space.d("c", "d") == pytest.approx(math.exp(-2))
    assert space.resolution_floor == pytest.approx(math.exp(-3))


def test_end_space_binary_tree_diameter_one():
    t = cl.full_branching_tree(2, 5)
    space = cl.end_space(t)
    assert len(space.points) == 32
    assert space.diameter == pytest.approx(1.0)  # the root split at depth 0


def test_end_space_comb_is_single_point_after_spine():
    t = cl.comb_tree(6, 2)
    space = cl.end_space(t)
    assert len(space.points) == 1


def test_end_space_ultrametric_exhaustive():
    t = cl.random_branching_tree(4, seed=9)
    d = cl.end_space(t).dist
    n = d.shape[0]
    for x in range(n):
        for y in range(n):
            for z in range(n):
                assert d[x, y] <= max(d[x, z], d[z, y])


# -- perfectness equivalence -----------------------------------------------------------------------


@pytest.mark.parametrize("make,expected_k", [
    (lambda: cl.homogeneous_tree(3, 6), 1),
    (lambda: cl.full_branching_tree(2, 7), 1),
    (lambda: cl.even_branching_tree(8), 2),
])
def test_pseudo_regular_end_space_is_uniformly_perfect(make, expected_k):
    t = make()
    k = cl.pseudo_regularity_index(t).k
    assert k == expected_k
    space = cl.end_space(t)
    cert = cl.uniformly_perfect_check(
        space,
        math.exp(k),
        eps0=math.exp(-1),
        resolution_floor=math.exp(-(t.horizon - k)),
    )
    assert cert.holds


def test_two_point_certificate_bounds_the_index():
    t = cl.even_branching_tree(8)
    k = cl.pseudo_regularity_index(t).k
    space = cl.end_space(t)
    r_const = math.exp(k)
    cert = cl.two_point_perfectness_check(
        space, r_const, eps0=math.exp(-1), resolution_floor=math.exp(-(t.horizon - k))
    )
    assert cert.holds
    assert k <= math.ceil(math.log(r_const))


def test_growing_chain_end_space_not_uniformly_perfect():
    t = cl.growing_chain(7)
    space = cl.end_space(t)
    assert len(space.points) == 1  # a single end: every annulus is empty
