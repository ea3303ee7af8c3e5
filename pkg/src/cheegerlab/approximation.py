"""Truncated hyperbolic approximations of finite metric spaces.

Levels k0..k_max each carry a maximal r^k-separated set of the space; a
vertex is the ball B(a, 2 r^k) around a kept point.  Horizontal edges join
same-level vertices whose closed balls share a witness point of X; a radial
edge joins consecutive levels when the upper (open) ball is contained in the
lower one, both conditions evaluated pointwise over X rather than through
center-distance shortcuts.  The deepest level is declared the graph frontier
so that window analyses stay honest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConstructionError, InvalidInputError
from .graphs import (
    BoundEndpoint,
    CheegerBound,
    CertificateResult,
    Graph,
    normalize_edge,
)
from .hyperbolicity import DeltaReport, delta_four_point, gromov_product
from .metric import FiniteMetricSpace, greedy_separated, strongly_bounded_geometry_profile

MAX_PARAMETER = 1.0 / 6.0

#: Default additive slack for the boundary-identification report: a measured
#: regression constant, not a theorem value.  Across the reference builds
#: (Cantor samples at r = 1/9, tree end spaces at r = e^-2) the largest
#: deviation observed was exactly 1.0; the default leaves headroom.
DEFAULT_BOUNDARY_SLACK = 2.0


def _vertex_name(k: int, point: str) -> str:
    return f"L{k}:{point}"


@dataclass(frozen=True, eq=False)
class LeveledGraph:
    """Hyperbolic-approximation output: graph plus level/center annotations."""

    graph: Graph
    space: FiniteMetricSpace
    r: float
    k0: int
    k_max: int
    level: dict[str, int]
    center: dict[str, str]
    radius: dict[str, float]

    @property
    def base(self) -> str:
        """The unique vertex of the lowest level."""
        (name,) = [v for v, k in self.level.items() if k == self.k0]
        return name

    def level_vertices(self, k: int) -> tuple[str, ...]:
        return tuple(v for v in self.graph.vertices if self.level[v] == k)


def _k0_for(space: FiniteMetricSpace, r: float) -> int:
    diam = space.diameter
    if diam <= 0:
        raise InvalidInputError(
            "degenerate (singleton) space has no natural base level; pass k0 explicitly"
        )
    guess = math.floor(math.log(diam) / math.log(r))
    k = guess + 2
    while not diam < r**k:  # maximal k with diam < r^k
        k -= 1
    while diam < r ** (k + 1):
        k += 1
    return k


def build_truncated(
    space: FiniteMetricSpace,
    r: float,
    k_max: int,
    k0: int | None = None,
) -> LeveledGraph:
    """Build the truncated hyperbolic approximation of ``space`` down to level
    ``k_max`` with parameter r <= 1/6.

    For a singleton space the base level cannot be derived from the diameter
    and must be passed explicitly; the result is then a chain (a ray prefix).
    """
    if not 0 < r <= MAX_PARAMETER:
        raise InvalidInputError("the parameter must satisfy 0 < r <= 1/6")
    if len(space.points) < 1:
        raise InvalidInputError("empty space")
    if k0 is None:
        k0 = _k0_for(space, r)
    elif space.diameter > 0 and not space.diameter < r**k0:
        raise InvalidInputError(f"k0={k0} does not dominate the diameter")
    if k_max < k0:
        raise InvalidInputError(f"need k_max >= k0 = {k0}")

    d = space.dist
    idx = space.index
    levels: dict[int, list[str]] = {}
    for k in range(k0, k_max + 1):
        levels[k] = list(greedy_separated(space, r**k))
    if len(levels[k0]) != 1:
        raise ConstructionError(
            "base level is not a single vertex", witness=tuple(levels[k0])
        )

    names: list[str] = []
    level_map: dict[str, int] = {}
    center: dict[str, str] = {}
    radius: dict[str, float] = {}
    for k in range(k0, k_max + 1):
        for p in levels[k]:
            v = _vertex_name(k, p)
            names.append(v)
            level_map[v] = k
            center[v] = p
            radius[v] = 2 * r**k

    edges: set[tuple[str, str]] = set()
    for k in range(k0, k_max + 1):
        pts = [idx[p] for p in levels[k]]
        rad = 2 * r**k
        inside = d[:, pts] <= rad  # closed balls, one column per vertex
        hits = inside.T.astype(np.int32) @ inside.astype(np.int32)
        for a in range(len(pts)):
            for b in range(a + 1, len(pts)):
                if hits[a, b] > 0:
                    edges.add(
                        normalize_edge(
                            _vertex_name(k, levels[k][a]), _vertex_name(k, levels[k][b])
                        )
                    )
        if k < k_max:
            up = [idx[p] for p in levels[k + 1]]
            rad_up = 2 * r ** (k + 1)
            in_up = d[:, up] < rad_up  # open balls for containment
            out_lo = ~(d[:, pts] < rad)
            misses = out_lo.T.astype(np.int32) @ in_up.astype(np.int32)
            for a in range(len(pts)):
                for b in range(len(up)):
                    if misses[a, b] == 0:
                        edges.add(
                            normalize_edge(
                                _vertex_name(k, levels[k][a]),
                                _vertex_name(k + 1, levels[k + 1][b]),
                            )
                        )

    frontier = frozenset(_vertex_name(k_max, p) for p in levels[k_max])
    graph = Graph(tuple(names), frozenset(edges), frontier)
    built = LeveledGraph(graph, space, r, k0, k_max, level_map, center, radius)
    _assert_invariants(built)
    return built


def _assert_invariants(lg: LeveledGraph) -> None:
    for u, v in lg.graph.edges:
        if abs(lg.level[u] - lg.level[v]) > 1:
            raise ConstructionError("edge skips a level", witness=(u, v))
    for v in lg.graph.vertices:
        k = lg.level[v]
        if k < lg.k_max and not any(
            lg.level[w] == k + 1 for w in lg.graph.adjacency[v]
        ):
            raise ConstructionError("vertex has no upper neighbor", witness=v)
    if not lg.graph.is_connected:
        raise ConstructionError("approximation graph is disconnected")


def relevel(lg: LeveledGraph, s: int) -> LeveledGraph:
    """Coarsened rebuild with parameter r^s, keeping every s-th level."""
    if s < 1:
        raise InvalidInputError("need s >= 1")
    if s == 1:
        return build_truncated(lg.space, lg.r, lg.k_max, k0=lg.k0)
    new_r = lg.r**s
    new_kmax = math.floor(lg.k_max / s)
    k0 = None
    if lg.space.diameter <= 0:
        k0 = math.ceil(lg.k0 / s)
        new_kmax = max(new_kmax, k0)
    return build_truncated(lg.space, new_r, new_kmax, k0=k0)


# ---------------------------------------------------------------------------
# Structural checks
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StructuralReport:
    """Post-build validation: hard invariants plus the delta expectation.

    ``structural_ok`` covers the provable invariants (edge classification,
    unique base, upper neighbors, degree cap).  A delta above the configured
    cap is reported as a finding, not a failure, unless an invariant also
    broke: the cap is an expectation about the vertex metric, not a theorem.
    """

    structural_ok: bool
    classification_ok: bool
    unique_base_ok: bool
    upper_neighbor_ok: bool
    degree_cap_ok: bool
    max_degree: int
    degree_cap: int
    delta: DeltaReport
    delta_cap: float
    delta_ok: bool
    violations: tuple[str, ...]


def structural_checks(
    lg: LeveledGraph,
    delta_cap: float = 3.0,
    delta_budget: int = 2**31,
) -> StructuralReport:
    violations: list[str] = []

    classification_ok = True
    for u, v in lg.graph.edges:
        if abs(lg.level[u] - lg.level[v]) > 1:
            classification_ok = False
            violations.append(f"edge {u}--{v} is neither horizontal nor radial")

    base_vertices = [v for v in lg.graph.vertices if lg.level[v] == lg.k0]
    unique_base_ok = len(base_vertices) == 1
    if not unique_base_ok:
        violations.append(f"level {lg.k0} has {len(base_vertices)} vertices")

    upper_ok = True
    for v in lg.graph.vertices:
        k = lg.level[v]
        if k < lg.k_max and not any(lg.level[w] == k + 1 for w in lg.graph.adjacency[v]):
            upper_ok = False
            violations.append(f"{v} has no neighbor one level up")

    scales = [lg.r**k for k in range(lg.k0, lg.k_max + 1)]
    m1 = strongly_bounded_geometry_profile(lg.space, 5.0, scales).m
    m23 = strongly_bounded_geometry_profile(lg.space, 2.0 / lg.r, scales).m
    cap = m1 + 2 * m23
    max_degree = lg.graph.mu
    degree_cap_ok = max_degree <= cap
    if not degree_cap_ok:
        violations.append(f"max degree {max_degree} exceeds the profile cap {cap}")

    delta = delta_four_point(lg.graph, budget=delta_budget)
    delta_ok = float(delta.delta) <= delta_cap

    return StructuralReport(
        structural_ok=classification_ok and unique_base_ok and upper_ok and degree_cap_ok,
        classification_ok=classification_ok,
        unique_base_ok=unique_base_ok,
        upper_neighbor_ok=upper_ok,
        degree_cap_ok=degree_cap_ok,
        max_degree=max_degree,
        degree_cap=cap,
        delta=delta,
        delta_cap=delta_cap,
        delta_ok=delta_ok,
        violations=tuple(violations),
    )


# ---------------------------------------------------------------------------
# Level-function certificate
# ---------------------------------------------------------------------------


def level_certificate(lg: LeveledGraph) -> CertificateResult:
    """Apply the gradient/Laplacian certificate with f = level function.

    Radial edges change f by exactly 1 and horizontal edges by 0, so c1 = 1;
    c2 is the minimal averaged up-minus-down neighbor count over the interior
    levels.  A pinched vertex (as many down- as up-neighbors, e.g. on a chain)
    kills the certificate, which is exactly what happens over boundaries that
    are not uniformly perfect.
    """
    if lg.k_max - lg.k0 < 2:
        raise InvalidInputError("need at least 3 levels for an interior")
    c2: Fraction | None = None
    worst: str | None = None
    for v in lg.graph.vertices:
        k = lg.level[v]
        if not lg.k0 < k < lg.k_max:
            continue
        ups = downs = 0
        for w in lg.graph.adjacency[v]:
            step = lg.level[w] - k
            if step == 1:
                ups += 1
            elif step == -1:
                downs += 1
        val = Fraction(ups - downs, lg.graph.degree(v))
        if c2 is None or val < c2:
            c2, worst = val, v
    assert c2 is not None
    c1 = Fraction(1)
    if c2 <= 0:
        return CertificateResult(False, None, c1, c2, violating_vertex=worst)
    value = c2 / (lg.graph.mu * c1)
    endpoint = BoundEndpoint(
        value,
        "certificate",
        witness={"function": "level", "c1": c1, "c2": c2},
        horizon_certified=True,
    )
    interior = tuple(
        v for v in lg.graph.vertices if lg.k0 < lg.level[v] < lg.k_max
    )
    return CertificateResult(True, CheegerBound(lower=endpoint), c1, c2,
                             verified_region=interior)


# ---------------------------------------------------------------------------
# Boundary identification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryPairCheck:
    u: str
    w: str
    product: float
    expected: float
    deviation: float


@dataclass(frozen=True)
class BoundaryIdentificationReport:
    ok: bool
    slack: float
    max_deviation: float
    pairs: tuple[BoundaryPairCheck, ...]


def boundary_identification_check(
    lg: LeveledGraph,
    pairs: list[tuple[str, str]] | None = None,
    sample: int = 50,
    seed: int = 0,
    slack: float = DEFAULT_BOUNDARY_SLACK,
) -> BoundaryIdentificationReport:
    """Compare Gromov products of deepest-level vertices (from the base) with
    log_{1/r}(1/d) of their centers.

    The identification theorem guarantees a visual metric with parameter 1/r
    but fixes no additive constant; ``slack`` is a measured regression value
    carried in the report, and exceeding it is a finding.
    """
    deepest = lg.level_vertices(lg.k_max)
    if pairs is None:
        cands = [
            (u, w)
            for i, u in enumerate(deepest)
            for w in deepest[i + 1:]
            if lg.center[u] != lg.center[w]
        ]
        if len(cands) > sample:
            rng = np.random.default_rng(seed)
            picks = rng.choice(len(cands), size=sample, replace=False)
            cands = [cands[i] for i in sorted(int(x) for x in picks)]
        pairs = cands
    base = lg.base
    out = []
    for u, w in pairs:
        if lg.level[u] != lg.k_max or lg.level[w] != lg.k_max:
            raise InvalidInputError(f"pair ({u}, {w}) is not on the deepest level")
        if lg.center[u] == lg.center[w]:
            raise InvalidInputError(f"pair ({u}, {w}) shares its center point")
        prod = float(gromov_product(lg.graph, u, w, base))
        dist = lg.space.d(lg.center[u], lg.center[w])
        expected = math.log(1.0 / dist) / math.log(1.0 / lg.r)
        out.append(BoundaryPairCheck(u, w, prod, expected, abs(prod - expected)))
    max_dev = max((p.deviation for p in out), default=0.0)
    return BoundaryIdentificationReport(max_dev <= slack, slack, max_dev, tuple(out))
