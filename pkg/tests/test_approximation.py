"""Truncated hyperbolic approximations: construction, structural checks,
level certificates, releveling and boundary identification."""

import math

import numpy as np
import pytest

import cheegerlab as cl
from cheegerlab import FiniteMetricSpace, InvalidInputError
from cheegerlab.io import canonical_json_bytes, leveled_payload


def singleton():
    return FiniteMetricSpace(("o",), np.zeros((1, 1)))


# -- construction -----------------------------------------------------------------


def test_parameter_range_enforced():
    X = cl.two_point(1.0)
    with pytest.raises(InvalidInputError):
        cl.build_truncated(X, 0.3, 2)
    with pytest.raises(InvalidInputError):
        cl.build_truncated(X, 0.0, 2)


def test_two_point_structure():
    lg = cl.build_truncated(cl.two_point(1.0), 1 / 6, 2)
    assert lg.k0 == -1
    assert len(lg.level_vertices(-1)) == 1
    assert len(lg.level_vertices(0)) == 2
    adj = lg.graph.adjacency
    # level 0 is a horizontal pair, joined downward to the base
    assert "L0:q" in adj["L0:p"]
    assert "L-1:p" in adj["L0:p"] and "L-1:p" in adj["L0:q"]
    # level 1 onward the two sides separate from each other (no horizontal)
    assert "L1:q" not in adj["L1:p"]
    assert lg.graph.frontier == {"L2:p", "L2:q"}


def test_two_point_deep_levels_are_twin_chains():
    lg = cl.build_truncated(cl.two_point(1.0), 1 / 6, 4)
    adj = lg.graph.adjacency
    for k in (2, 3):
        assert sorted(adj[f"L{k}:p"]) == [f"L{k - 1}:p", f"L{k + 1}:p"]


def test_singleton_is_a_chain_and_needs_explicit_base():
    with pytest.raises(InvalidInputError):
        cl.build_truncated(singleton(), 1 / 6, 3)
    lg = cl.build_truncated(singleton(), 1 / 6, 4, k0=0)
    assert len(lg.graph.vertices) == 5
    assert lg.graph.mu <= 2  # a path
    cert = cl.level_certificate(lg)
    assert not cert.certified and cert.c2 == 0


def test_cantor_level_sizes_and_determinism():
    X = cl.cantor_sample(6)
    lg = cl.build_truncated(X, 1 / 9, 3)
    sizes = [len(lg.level_vertices(k)) for k in range(lg.k0, lg.k_max + 1)]
    assert sizes == [1, 4, 16, 64]
    assert all(a <= b for a, b in zip(sizes, sizes[1:]))
    again = cl.build_truncated(cl.cantor_sample(6), 1 / 9, 3)
    assert canonical_json_bytes(leveled_payload(lg)) == canonical_json_bytes(
        leveled_payload(again)
    )


def test_kmax_must_reach_base():
    with pytest.raises(InvalidInputError):
        cl.build_truncated(cl.cantor_sample(4), 1 / 9, -1)


# -- structural checks ---------------------------------------------------------------


def test_structural_checks_singleton_chain():
    lg = cl.build_truncated(singleton(), 1 / 6, 4, k0=0)
    rep = cl.structural_checks(lg)
    assert rep.structural_ok
    assert rep.delta.delta == 0
    assert rep.max_degree <= 2


def test_structural_checks_two_point():
    rep = cl.structural_checks(cl.build_truncated(cl.two_point(1.0), 1 / 6, 3))
    assert rep.structural_ok
    assert float(rep.delta.delta) <= 3.0


def test_structural_checks_cantor():
    for depth, kmax in ((5, 2), (6, 3)):
        lg = cl.build_truncated(cl.cantor_sample(depth), 1 / 9, kmax)
        rep = cl.structural_checks(lg)
        assert rep.structural_ok, rep.violations
        assert rep.classification_ok and rep.unique_base_ok and rep.upper_neighbor_ok
        assert rep.degree_cap_ok and rep.max_degree <= rep.degree_cap
        assert rep.delta_ok


def test_radial_geodesics_have_monotone_levels():
    # every edge moves the level by at most one and every vertex has both an
    # upper and (above the base) a lower neighbor, so base distances realize
    # the level offsets exactly: base geodesics are radial with monotone level
    for lg in (
        cl.build_truncated(cl.cantor_sample(5), 1 / 9, 2),
        cl.build_truncated(cl.two_point(1.0), 1 / 6, 4),
    ):
        dist = lg.graph.bfs_distances([lg.base])
        for v in lg.graph.vertices:
            assert dist[v] == lg.level[v] - lg.k0


# -- level certificates -----------------------------------------------------------------


def test_level_certificate_needs_three_levels():
    lg = cl.build_truncated(cl.two_point(1.0), 1 / 6, 0)
    with pytest.raises(InvalidInputError):
        cl.level_certificate(lg)


def test_two_point_certificate_pinches():
    lg = cl.build_truncated(cl.two_point(1.0), 1 / 6, 4)
    cert = cl.level_certificate(lg)
    assert not cert.certified
    assert cert.c2 < 0
    assert cert.violating_vertex in ("L1:p", "L1:q")


def test_cantor_certificate_after_relevel():
    lg = cl.build_truncated(cl.cantor_sample(6), 1 / 9, 4)
    coarse = cl.relevel(lg, 2)
    assert coarse.k_max - coarse.k0 >= 2
    cert = cl.level_certificate(coarse)
    assert cert.certified
    assert cert.c2 > 0
    assert cert.bound.lower.value > 0
    assert cert.bound.lower.horizon_certified


def test_relevel_identity():
    lg = cl.build_truncated(cl.cantor_sample(5), 1 / 9, 2)
    same = cl.relevel(lg, 1)
    assert canonical_json_bytes(leveled_payload(lg)) == canonical_json_bytes(
        leveled_payload(same)
    )


def test_relevel_singleton_still_a_chain():
    lg = cl.build_truncated(singleton(), 1 / 6, 4, k0=0)
    coarse = cl.relevel(lg, 2)
    assert coarse.graph.mu <= 2


# -- tree end spaces through the pipeline ---------------------------------------------------


def test_tree_end_space_certificate_positive_iff_pseudo_regular():
    # a pseudo-regular tree's end space certifies; a chain end space cannot
    t = cl.homogeneous_tree(3, 6)
    space = cl.end_space(t)
    lg = cl.build_truncated(space, math.exp(-2), 3)
    cert = cl.level_certificate(lg)
    assert cert.certified and cert.bound.lower.value > 0

    chain_space = cl.end_space(cl.growing_chain(6))
    lg2 = cl.build_truncated(chain_space, 1 / 6, 3, k0=0)
    cert2 = cl.level_certificate(lg2)
    assert not cert2.certified


# -- boundary identification ------------------------------------------------------------------


def test_boundary_identification_sibling_pair():
    lg = cl.build_truncated(cl.cantor_sample(3), 1 / 9, 1)
    # centers 0 and 2/3 split at the first Cantor branching
    pairs = [("L1:c000", "L1:c100")]
    rep = cl.boundary_identification_check(lg, pairs=pairs)
    expected = math.log(1 / (2 / 3)) / math.log(9.0)
    assert rep.pairs[0].expected == pytest.approx(expected)
    assert rep.ok


def test_boundary_identification_sampled_pairs_stable():
    lg = cl.build_truncated(cl.cantor_sample(6), 1 / 9, 3)
    rep1 = cl.boundary_identification_check(lg, sample=50, seed=0)
    rep2 = cl.boundary_identification_check(lg, sample=50, seed=0)
    assert rep1.max_deviation == rep2.max_deviation
    assert len(rep1.pairs) == 50
    assert rep1.ok  # measured deviations stay below the recorded slack
    assert rep1.max_deviation <= 1.0


def test_boundary_identification_rejects_same_center():
    lg = cl.build_truncated(cl.two_point(1.0), 1 / 6, 2)
    with pytest.raises(InvalidInputError):
        cl.boundary_identification_check(lg, pairs=[("L2:p", "L2:p")])
