"""Finite graphs with unit-length edges and the exact Cheeger machinery on them.

Vertex boundaries, the BFS metric, discrete gradient/Laplacian with Green's
identity, a brute-force interior-Cheeger oracle over explicit subset windows,
and function-based lower-bound certificates.  Everything combinatorial is
computed in exact `fractions.Fraction` arithmetic; floats never enter this
module.

A graph may carry a *frontier*: the set of vertices where an infinite ambient
graph was cut off.  Window results are only ambient-faithful for sets that
keep distance >= 2 from the frontier, and the ops below enforce exactly that
discipline.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Any, Callable, Iterable, Mapping

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .errors import (
    BudgetExceededError,
    EmptyWindowError,
    InvalidInputError,
    InvalidSupportError,
)

#: Hard cap on how many subsets a brute-force scan may enumerate.
DEFAULT_SUBSET_BUDGET = 2**22

Rational = Fraction | int


def normalize_edge(u: str, v: str) -> tuple[str, str]:
    """Canonical (sorted) form of an undirected edge."""
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Graph:
    """Finite undirected simple graph with optional frontier markers.

    ``vertices`` keeps its declared order (serialization sorts); ``edges``
    holds canonical sorted pairs.  Simplicity and endpoint membership are
    validated on construction; :meth:`from_edges` additionally rejects
    disconnected input unless told otherwise.
    """

    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, str]]
    frontier: frozenset[str] = frozenset()

    def __post_init__(self):
        seen = set(self.vertices)
        if len(seen) != len(self.vertices):
            raise InvalidInputError("duplicate vertex identifiers")
        for u, v in self.edges:
            if u == v:
                raise InvalidInputError(f"self-loop at {u!r}")
            if (u, v) != normalize_edge(u, v):
                raise InvalidInputError(f"edge {(u, v)!r} not in canonical order")
            if u not in seen or v not in seen:
                raise InvalidInputError(f"edge {(u, v)!r} has undeclared endpoint")
        if not self.frontier <= seen:
            raise InvalidInputError("frontier contains undeclared vertices")

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[tuple[str, str]],
        vertices: Iterable[str] | None = None,
        frontier: Iterable[str] = (),
        require_connected: bool = True,
    ) -> "Graph":
        edge_set = frozenset(normalize_edge(str(u), str(v)) for u, v in edges)
        if vertices is None:
            names = sorted({x for e in edge_set for x in e})
        else:
            names = [str(v) for v in vertices]
        g = cls(tuple(names), edge_set, frozenset(str(v) for v in frontier))
        if require_connected and not g.is_connected:
            raise InvalidInputError(
                "graph is disconnected; pass require_connected=False for "
                "per-component analysis (h is then the min over components)"
            )
        return g

    # -- basic structure -------------------------------------------------

    @cached_property
    def adjacency(self) -> dict[str, frozenset[str]]:
        nbrs: dict[str, set[str]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return {v: frozenset(s) for v, s in nbrs.items()}

    def neighbors(self, v: str) -> frozenset[str]:
        try:
            return self.adjacency[v]
        except KeyError:
            raise InvalidInputError(f"unknown vertex {v!r}") from None

    def degree(self, v: str) -> int:
        return len(self.neighbors(v))

    @cached_property
    def mu(self) -> int:
        """Uniformity constant: the maximum vertex degree."""
        return max((len(s) for s in self.adjacency.values()), default=0)

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def is_connected(self) -> bool:
        if not self.vertices:
            return True
        return len(self.bfs_distances([self.vertices[0]])) == len(self.vertices)

    def bfs_distances(self, sources: Iterable[str]) -> dict[str, int]:
        """Multi-source BFS distances to every reachable vertex."""
        dist: dict[str, int] = {}
        queue: deque[str] = deque()
        for s in sources:
            if s not in self.adjacency:
                raise InvalidInputError(f"unknown vertex {s!r}")
            if s not in dist:
                dist[s] = 0
                queue.append(s)
        while queue:
            x = queue.popleft()
            d = dist[x] + 1
            for y in self.adjacency[x]:
                if y not in dist:
                    dist[y] = d
                    queue.append(y)
        return dist

    @cached_property
    def distance_matrix(self) -> np.ndarray:
        """All-pairs BFS distances as int32 (requires connectivity)."""
        n = len(self.vertices)
        ii, jj = [], []
        for u, v in self.edges:
            ii.extend((self.index[u], self.index[v]))
            jj.extend((self.index[v], self.index[u]))
        adj = csr_matrix((np.ones(len(ii), dtype=np.int8), (ii, jj)), shape=(n, n))
        dmat = shortest_path(adj, method="D", unweighted=True)
        if np.isinf(dmat).any():
            raise InvalidInputError("distance matrix requested on a disconnected graph")
        return dmat.astype(np.int32)

    def distance(self, u: str, v: str) -> int:
        return int(self.distance_matrix[self.index[u], self.index[v]])

    def eccentricity(self, v: str) -> int:
        return int(self.distance_matrix[self.index[v]].max())

    # -- bitset views used by the enumeration oracle ---------------------

    @cached_property
    def _neighbor_masks(self) -> list[int]:
        masks = [0] * len(self.vertices)
        for u, v in self.edges:
            masks[self.index[u]] |= 1 << self.index[v]
            masks[self.index[v]] |= 1 << self.index[u]
        return masks


def relabeled(g: Graph, mapping: Mapping[str, str]) -> Graph:
    """Copy of ``g`` with vertices renamed through a bijection."""
    if sorted(mapping) != sorted(g.vertices) or len(set(mapping.values())) != len(g.vertices):
        raise InvalidInputError("relabeling must be a bijection on the vertex set")
    return Graph(
        tuple(mapping[v] for v in g.vertices),
        frozenset(normalize_edge(mapping[u], mapping[v]) for u, v in g.edges),
        frozenset(mapping[v] for v in g.frontier),
    )


# ---------------------------------------------------------------------------
# Vertex functions
# ---------------------------------------------------------------------------


def vertex_function(
    g: Graph, values: Mapping[str, Rational | str] | Callable[[str], Rational]
) -> dict[str, Fraction]:
    """Coerce ``values`` into an exact rational function defined on all of V(g)."""
    out: dict[str, Fraction] = {}
    for v in g.vertices:
        try:
            raw = values(v) if callable(values) else values[v]
        except KeyError:
            raise InvalidInputError(f"function undefined at vertex {v!r}") from None
        out[v] = Fraction(raw)
    return out


def support(f: Mapping[str, Fraction]) -> frozenset[str]:
    return frozenset(v for v, x in f.items() if x != 0)


# ---------------------------------------------------------------------------
# Boundaries and ratios
# ---------------------------------------------------------------------------


def _check_subset(g: Graph, subset: Iterable[str]) -> frozenset[str]:
    a = frozenset(subset)
    if not a:
        raise InvalidInputError("the set A must be non-empty")
    unknown = a - set(g.vertices)
    if unknown:
        raise InvalidInputError(f"A contains non-vertices: {sorted(unknown)}")
    return a


def boundary(g: Graph, subset: Iterable[str]) -> frozenset[str]:
    """Vertex boundary: all vertices at graph distance exactly 1 from the set."""
    a = _check_subset(g, subset)
    out: set[str] = set()
    for v in a:
        out.update(g.adjacency[v])
    return frozenset(out - a)


def cheeger_ratio(g: Graph, subset: Iterable[str]) -> Fraction:
    """|boundary(A)| / |A| as an exact rational."""
    a = _check_subset(g, subset)
    return Fraction(len(boundary(g, a)), len(a))


def admissible_vertices(g: Graph) -> frozenset[str]:
    """Vertices at distance >= 2 from the frontier (all vertices if no frontier)."""
    if not g.frontier:
        return frozenset(g.vertices)
    near = g.bfs_distances(g.frontier)
    return frozenset(v for v in g.vertices if near.get(v, 2) >= 2)


# ---------------------------------------------------------------------------
# Certified bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundEndpoint:
    """One certified endpoint of a Cheeger interval, with its provenance."""

    value: Fraction
    kind: str  # certificate | tree-theorem | decomposition-theorem | brute-force-window | trivial
    witness: Any = None
    horizon_certified: bool = False

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if self.value < 0:
            raise InvalidInputError("bound endpoints are non-negative")


@dataclass(frozen=True)
class CheegerBound:
    """A certified interval [lower, upper] for a Cheeger constant.

    ``upper is None`` means +infinity (no upper evidence).  Every endpoint
    carries the witness that produced it.
    """

    lower: BoundEndpoint
    upper: BoundEndpoint | None = None

    def __post_init__(self):
        if self.upper is not None and self.lower.value > self.upper.value:
            raise InvalidInputError(
                f"inconsistent bound: lower {self.lower.value} > upper {self.upper.value}"
            )


def subset_count(n: int, max_size: int) -> int:
    """Number of non-empty subsets of an n-set with at most ``max_size`` elements."""
    return sum(comb(n, k) for k in range(1, max_size + 1))


def auto_max_size(n: int, budget: int = DEFAULT_SUBSET_BUDGET) -> int:
    """Largest subset-size cap whose full enumeration stays within ``budget``."""
    m = 0
    while m < n and subset_count(n, m + 1) <= budget:
        m += 1
    if m == 0:
        raise BudgetExceededError(n, budget)
    return m


def interior_cheeger_bruteforce(
    g: Graph,
    max_size: int,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> CheegerBound:
    """Exact minimum of |dA|/|A| over every non-empty subset of admissible
    vertices with at most ``max_size`` elements.

    Admissible means distance >= 2 from the frontier, so each enumerated
    window ratio equals its value in the ambient graph and the minimum is a
    true upper bound for the ambient Cheeger constant.  Disconnected sets are
    enumerated too: shared boundary vertices can make them optimal.  The
    witness reported is the lexicographically smallest minimizing set.
    """
    adm = sorted(admissible_vertices(g))
    if not adm:
        raise EmptyWindowError("no vertex is at distance >= 2 from the frontier")
    if not 1 <= max_size <= len(adm):
        raise InvalidInputError(
            f"max_size must be in [1, {len(adm)}] (admissible vertices), got {max_size}"
        )
    required = subset_count(len(adm), max_size)
    if required > budget:
        raise BudgetExceededError(required, budget)

    masks = g._neighbor_masks
    idx = [g.index[v] for v in adm]
    names = list(adm)
    n = len(idx)

    # best = (boundary_count, size, witness tuple of names)
    best: tuple[int, int, tuple[str, ...]] | None = None

    def consider(b: int, size: int, chosen: list[int]):
        nonlocal best
        if best is None or b * best[1] < best[0] * size:
            best = (b, size, tuple(names[i] for i in chosen))
            return
        if b * best[1] == best[0] * size:
            cand = tuple(names[i] for i in chosen)
            if cand < best[2]:
                best = (b, size, cand)

    def rec(start: int, size: int, set_mask: int, nb_mask: int, chosen: list[int]):
        for i in range(start, n):
            m = set_mask | (1 << idx[i])
            nb = nb_mask | masks[idx[i]]
            chosen.append(i)
            consider((nb & ~m).bit_count(), size + 1, chosen)
            if size + 1 < max_size:
                rec(i + 1, size + 1, m, nb, chosen)
            chosen.pop()

    rec(0, 0, 0, 0, [])
    assert best is not None
    b, size, witness = best
    value = Fraction(b, size)
    upper = BoundEndpoint(
        value,
        "brute-force-window",
        witness={"set": witness, "boundary_size": b, "max_size": max_size},
        horizon_certified=bool(g.frontier),
    )
    return CheegerBound(lower=BoundEndpoint(Fraction(0), "trivial"), upper=upper)


# ---------------------------------------------------------------------------
# Discrete calculus
# ---------------------------------------------------------------------------


def gradient(g: Graph, f: Mapping[str, Fraction], x: str, y: str) -> Fraction:
    """Edge gradient f(y) - f(x) for an edge xy, else 0."""
    if x not in g.adjacency or y not in g.adjacency:
        raise InvalidInputError(f"unknown vertex in pair ({x!r}, {y!r})")
    if y in g.adjacency[x]:
        return Fraction(f[y]) - Fraction(f[x])
    return Fraction(0)


def laplacian(g: Graph, f: Mapping[str, Fraction], x: str) -> Fraction:
    """Averaged Laplacian (1/|N(x)|) * sum of f(y)-f(x) over neighbors y."""
    nbrs = g.neighbors(x)
    if not nbrs:
        raise InvalidInputError(f"vertex {x!r} is isolated; Laplacian undefined")
    total = sum((Fraction(f[y]) - Fraction(f[x]) for y in nbrs), Fraction(0))
    return total / len(nbrs)


def green_identity_check(
    g: Graph, f: Mapping[str, Fraction], g2: Mapping[str, Fraction]
) -> Fraction:
    """Residual of the discrete Green identity; the contract is exactly 0.

    Computes sum_x (Lf)(x) g2(x) |N(x)| + (1/2) sum over ordered adjacent
    pairs of (grad f)(grad g2).  On a truncated window the identity is only
    ambient-meaningful when one of the functions is supported away from the
    frontier zone, so that support is required up front.
    """
    f = vertex_function(g, f)
    g2 = vertex_function(g, g2)
    if g.frontier:
        zone = frozenset(
            v for v, d in g.bfs_distances(g.frontier).items() if d <= 1
        )
        if support(f) & zone and support(g2) & zone:
            offender = sorted((support(f) | support(g2)) & zone)[0]
            raise InvalidSupportError(
                f"support touches the frontier zone at {offender!r}; the identity "
                "is not guaranteed on truncations"
            )
    lhs = Fraction(0)
    for x in g.vertices:
        nbrs = g.adjacency[x]
        if nbrs and g2[x] != 0:
            lhs += sum((f[y] - f[x] for y in nbrs), Fraction(0)) * g2[x]
    cross = Fraction(0)
    for u, v in g.edges:
        cross += 2 * (f[v] - f[u]) * (g2[v] - g2[u])  # both orientations
    return lhs + cross / 2


@dataclass(frozen=True)
class CertificateResult:
    """Outcome of a function-based lower-bound certificate."""

    certified: bool
    bound: CheegerBound | None
    c1: Fraction
    c2: Fraction | None
    violating_vertex: str | None = None
    verified_region: tuple[str, ...] = ()


def certificate_lower_bound(g: Graph, f: Mapping[str, Fraction]) -> CertificateResult:
    """Lower bound c2/(mu*c1) from a function with bounded gradient and
    positive Laplacian on the interior.

    c1 is the maximum |gradient| over all edges, c2 the minimum Laplacian
    over interior vertices (everything at distance >= 2 from the frontier).
    With a non-empty frontier the bound is only proven for the infinite
    ambient graph; the result is flagged horizon-certified and reports the
    region on which the hypothesis was actually verified.
    """
    if not g.is_connected:
        raise InvalidInputError("certificate requires a connected graph")
    f = vertex_function(g, f)
    interior = sorted(admissible_vertices(g))
    if not interior:
        raise EmptyWindowError("interior (V minus frontier and its neighbors) is empty")

    c1 = max((abs(f[v] - f[u]) for u, v in g.edges), default=Fraction(0))
    c2 = None
    worst_vertex = None
    for x in interior:
        val = laplacian(g, f, x)
        if c2 is None or val < c2:
            c2, worst_vertex = val, x
    assert c2 is not None
    if c2 <= 0:
        return CertificateResult(False, None, c1, c2, violating_vertex=worst_vertex)
    # c2 > 0 forces some neighbor value to differ, hence c1 > 0.
    assert c1 > 0, "positive Laplacian with zero gradient is impossible"
    value = c2 / (g.mu * c1)
    endpoint = BoundEndpoint(
        value,
        "certificate",
        witness={"f": dict(f), "c1": c1, "c2": c2},
        horizon_certified=bool(g.frontier),
    )
    return CertificateResult(
        True,
        CheegerBound(lower=endpoint),
        c1,
        c2,
        verified_region=tuple(interior),
    )


@dataclass(frozen=True)
class CorollaryCheck:
    holds: bool
    ratio: Fraction
    c1: Fraction
    c2: Fraction


def corollary_connected_bound(
    g: Graph, f: Mapping[str, Fraction], subset: Iterable[str]
) -> CorollaryCheck:
    """Check |dA|/|A| >= c2/c1 for a set whose boundary vertices each have a
    single neighbor inside, with c1, c2 evaluated on A and its boundary."""
    f = vertex_function(g, f)
    a = _check_subset(g, subset)
    bd = boundary(g, a)
    for x in sorted(bd):
        k = len(g.adjacency[x] & a)
        if k != 1:
            raise InvalidInputError(
                f"boundary vertex {x!r} has {k} neighbors in A (need exactly 1)"
            )
    closure = a | bd
    edges = [(u, v) for u, v in g.edges if u in closure and v in closure]
    c1 = max((abs(f[v] - f[u]) for u, v in edges), default=Fraction(0))
    c2 = min(laplacian(g, f, x) for x in sorted(a))
    ratio = Fraction(len(bd), len(a))
    if c1 > 0:
        holds = ratio >= c2 / c1
    else:  # constant f on the closure forces c2 = 0; nothing left to verify
        holds = c2 <= 0
    return CorollaryCheck(holds, ratio, c1, c2)


# ---------------------------------------------------------------------------
# Quasi-isometry checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuasiIsometryReport:
    holds: bool
    embedding_ok: bool
    fullness_ok: bool
    alpha: Fraction
    beta: Fraction
    eps: Fraction
    worst_pair: tuple[str, str] | None = None
    worst_pair_slack: Fraction | None = None
    worst_vertex: str | None = None
    worst_vertex_distance: int | None = None


def quasi_isometry_check(
    g1: Graph,
    g2: Graph,
    mapping: Mapping[str, str],
    alpha: Rational = 1,
    beta: Rational = 0,
    eps: Rational = 0,
) -> QuasiIsometryReport:
    """Verify the two-sided quasi-isometric-embedding inequalities on all
    vertex pairs, plus eps-fullness of the image; report the worst witness."""
    alpha, beta, eps = Fraction(alpha), Fraction(beta), Fraction(eps)
    if alpha < 1 or beta < 0 or eps < 0:
        raise InvalidInputError("need alpha >= 1, beta >= 0, eps >= 0")
    missing = [v for v in g1.vertices if v not in mapping]
    if missing:
        raise InvalidInputError(f"map not total: missing {missing[0]!r}")
    bad_image = [v for v in g1.vertices if mapping[v] not in g2.index]
    if bad_image:
        raise InvalidInputError(f"map image {mapping[bad_image[0]]!r} not in target graph")

    d1 = g1.distance_matrix
    d2 = g2.distance_matrix
    img_idx = np.array([g2.index[mapping[v]] for v in g1.vertices])

    worst_pair = None
    worst_slack: Fraction | None = None
    n = len(g1.vertices)
    for i in range(n):
        for j in range(i + 1, n):
            a = int(d1[i, j])
            b = int(d2[img_idx[i], img_idx[j]])
            slack = min(Fraction(b) - (Fraction(a) / alpha - beta), alpha * a + beta - b)
            if worst_slack is None or slack < worst_slack:
                worst_slack = slack
                worst_pair = (g1.vertices[i], g1.vertices[j])
    embedding_ok = worst_slack is None or worst_slack >= 0

    cover = d2[np.asarray(sorted(set(img_idx.tolist())), dtype=int)].min(axis=0)
    far = int(cover.argmax())
    worst_vertex = g2.vertices[far]
    worst_dist = int(cover[far])
    fullness_ok = Fraction(worst_dist) <= eps

    return QuasiIsometryReport(
        holds=embedding_ok and fullness_ok,
        embedding_ok=embedding_ok,
        fullness_ok=fullness_ok,
        alpha=alpha,
        beta=beta,
        eps=eps,
        worst_pair=worst_pair,
        worst_pair_slack=worst_slack,
        worst_vertex=worst_vertex,
        worst_vertex_distance=worst_dist,
    )


# ---------------------------------------------------------------------------
# Window generators (plumbing for tests, demos and the decomposition module)
# ---------------------------------------------------------------------------


def path_window(n: int, truncated: bool = True) -> Graph:
    """Path 1..n; with ``truncated`` both endpoints are marked as frontier."""
    if n < 1:
        raise InvalidInputError("need n >= 1")
    names = [str(i) for i in range(1, n + 1)]
    edges = [(names[i], names[i + 1]) for i in range(n - 1)]
    frontier = {names[0], names[-1]} if truncated and n >= 2 else set()
    return Graph.from_edges(edges, vertices=names, frontier=frontier)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InvalidInputError("need n >= 3")
    names = [str(i) for i in range(n)]
    edges = [(names[i], names[(i + 1) % n]) for i in range(n)]
    return Graph.from_edges(edges, vertices=names)


def grid_window(rows: int, cols: int, truncated: bool = True) -> Graph:
    """rows x cols window of the square lattice; the border ring is the frontier."""
    if rows < 1 or cols < 1:
        raise InvalidInputError("need positive grid dimensions")
    names = [f"g{r}.{c}" for r in range(rows) for c in range(cols)]
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((f"g{r}.{c}", f"g{r}.{c + 1}"))
            if r + 1 < rows:
                edges.append((f"g{r}.{c}", f"g{r + 1}.{c}"))
    frontier = set()
    if truncated:
        frontier = {
            f"g{r}.{c}"
            for r in range(rows)
            for c in range(cols)
            if r in (0, rows - 1) or c in (0, cols - 1)
        }
    return Graph.from_edges(edges, vertices=names, frontier=frontier)
