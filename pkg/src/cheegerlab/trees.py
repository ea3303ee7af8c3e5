"""Rooted trees truncated at a depth horizon, and the Cheeger theory on them.

A live leaf sits at depth exactly D and stands for an isometric ray that
continues beyond the horizon; dead leaves (any depth < D) are genuine ends.
All asymptotic notions -- the maximal geodesically complete subtree, the
pseudo-regularity constant K, the complementedness constant C, the end space
-- are evaluated exactly on this represented prefix and reported together
with D.  The analyses never re-root: the declared root is used as given.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    BudgetExceededError,
    EmptyWindowError,
    InvalidInputError,
)
from .graphs import (
    DEFAULT_SUBSET_BUDGET,
    BoundEndpoint,
    CheegerBound,
    Graph,
    auto_max_size,
    boundary,
    interior_cheeger_bruteforce,
    normalize_edge,
)
from .metric import FiniteMetricSpace


@dataclass(frozen=True, eq=False)
class RootedTree:
    """Finite rooted tree with horizon D and live-leaf markers."""

    root: str
    children: dict[str, tuple[str, ...]]
    live: frozenset[str]

    def __post_init__(self):
        if self.root not in self.children:
            raise InvalidInputError("children map must cover the root")
        seen = {self.root}
        order = [self.root]
        depth = {self.root: 0}
        parent: dict[str, str] = {}
        stack = [self.root]
        while stack:
            x = stack.pop()
            for c in self.children[x]:
                if c in seen:
                    raise InvalidInputError(f"vertex {c!r} reached twice; not a tree")
                if c not in self.children:
                    raise InvalidInputError(f"children map missing vertex {c!r}")
                seen.add(c)
                order.append(c)
                parent[c] = x
                depth[c] = depth[x] + 1
                stack.append(c)
        if len(seen) != len(self.children):
            extra = sorted(set(self.children) - seen)
            raise InvalidInputError(f"unreachable vertices: {extra[:3]}")
        object.__setattr__(self, "_order", tuple(order))
        object.__setattr__(self, "_parent", parent)
        object.__setattr__(self, "_depth", depth)
        horizon = max(depth.values())
        leaves = {v for v in seen if not self.children[v]}
        if not self.live <= leaves:
            raise InvalidInputError("live markers must sit on leaves")
        if self.live:
            if horizon < 1:
                raise InvalidInputError("horizon must be >= 1")
            off = [v for v in self.live if depth[v] != horizon]
            if off:
                raise InvalidInputError(
                    f"live leaf {off[0]!r} not at the horizon depth {horizon}"
                )
            dead_deep = [v for v in leaves - self.live if depth[v] == horizon]
            if dead_deep:
                raise InvalidInputError(
                    f"leaf {dead_deep[0]!r} reaches the horizon but is not live"
                )

    # -- structure --------------------------------------------------------

    @property
    def vertices(self) -> tuple[str, ...]:
        return self._order

    @property
    def parent(self) -> dict[str, str]:
        return self._parent

    @property
    def depth(self) -> dict[str, int]:
        return self._depth

    @cached_property
    def horizon(self) -> int:
        return max(self._depth.values())

    @cached_property
    def leaves(self) -> frozenset[str]:
        return frozenset(v for v in self.vertices if not self.children[v])

    def sphere(self, t: int) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if self._depth[v] == t)

    def root_path(self, x: str) -> tuple[str, ...]:
        if x not in self.children:
            raise InvalidInputError(f"unknown vertex {x!r}")
        path = [x]
        while path[-1] != self.root:
            path.append(self._parent[path[-1]])
        return tuple(reversed(path))

    @cached_property
    def graph(self) -> Graph:
        """Underlying graph; the live leaves are the truncation frontier."""
        edges = frozenset(
            normalize_edge(v, c) for v in self.vertices for c in self.children[v]
        )
        return Graph(self.vertices, edges, frozenset(self.live))


def tree_from_parents(
    root: str, parents: Mapping[str, str], live: Iterable[str] = ()
) -> RootedTree:
    kids: dict[str, list[str]] = {root: []}
    for c, p in parents.items():
        kids.setdefault(p, []).append(c)
        kids.setdefault(c, [])
    return RootedTree(root, {v: tuple(sorted(cs)) for v, cs in kids.items()}, frozenset(live))


def subtree_past(t: RootedTree, x: str) -> frozenset[str]:
    """The cone past x: x together with all of its descendants."""
    if x not in t.children:
        raise InvalidInputError(f"unknown vertex {x!r}")
    out = []
    stack = [x]
    while stack:
        y = stack.pop()
        out.append(y)
        stack.extend(t.children[y])
    return frozenset(out)


def maximal_complete_subtree(t: RootedTree) -> frozenset[str]:
    """Vertices on some root-to-live-leaf path: the unique maximal subtree in
    which every root-anchored segment extends to the horizon.  Empty when the
    tree is bounded (no live leaves)."""
    keep: set[str] = set()
    for leaf in t.live:
        x = leaf
        while x not in keep:
            keep.add(x)
            if x == t.root:
                break
            x = t.parent[x]
    return frozenset(keep)


# ---------------------------------------------------------------------------
# Pseudo-regularity and complementedness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainWitness:
    """A window set along a single-descendant chain with |dA| = 2, |A| = K."""

    k: int
    vertices: tuple[str, ...]
    ratio: Fraction


@dataclass(frozen=True)
class PseudoRegularityResult:
    k: int | None  # minimal K within the horizon, or None on defect
    horizon: int
    defect_vertex: str | None = None
    defect_run: int = 0
    family: tuple[ChainWitness, ...] = ()


def _descendant_profile(t: RootedTree, members: frozenset[str]) -> dict[str, list[int]]:
    """cnt[a][j] = number of ``members`` descendants of a at relative depth j."""
    cnt: dict[str, list[int]] = {}
    for a in reversed(t.vertices):
        if a not in members:
            continue
        row = [1]
        for c in t.children[a]:
            if c not in members:
                continue
            sub = cnt[c]
            while len(row) < len(sub) + 1:
                row.append(0)
            for j, val in enumerate(sub):
                row[j + 1] += val
        cnt[a] = row
    return cnt


def _single_child_chain(t: RootedTree, a: str) -> list[str]:
    chain = [a]
    while len(t.children[chain[-1]]) == 1:
        chain.append(t.children[chain[-1]][0])
    return chain


def pseudo_regularity_index(t: RootedTree) -> PseudoRegularityResult:
    """Minimal K in [1, horizon] such that every vertex of the complete
    subtree, tested at depths down to horizon - K, has at least two complete
    descendants exactly K levels deeper; defect witness otherwise.

    The condition is evaluated on the maximal complete subtree, matching the
    statements the tree bound relies on.  Values of K close to the horizon
    rest on thin evidence (at K = horizon only the root is testable), which
    is why every downstream bound is flagged horizon-certified: a window
    with two live rays of a bi-infinite chain reports K = horizon even
    though no finite K works for the ambient chain.
    """
    tinf = maximal_complete_subtree(t)
    if not tinf:
        raise EmptyWindowError("tree has no live leaf; complete subtree is empty")
    d = t.horizon
    cnt = _descendant_profile(t, tinf)
    depth = t.depth
    for k in range(1, d + 1):
        ok = True
        for a in t.vertices:
            if a in tinf and depth[a] <= d - k and cnt[a][k] < 2:
                ok = False
                break
        if ok:
            return PseudoRegularityResult(k, d)
    # defect: exhibit the longest single-descendant chain off a non-root vertex
    best: tuple[int, int, str] | None = None
    for a in t.vertices:
        if a in tinf and a != t.root:
            run = len(_single_child_chain(t, a)) - 1
            key = (-run, depth[a], a)
            if best is None or key < best:
                best = key
    assert best is not None
    defect_vertex = best[2]
    run = -best[0]
    chain = _single_child_chain(t, defect_vertex)
    family = tuple(
        ChainWitness(k, tuple(chain[:k]), Fraction(2, k)) for k in range(1, run + 1)
    )
    return PseudoRegularityResult(None, d, defect_vertex, run, family)


@dataclass(frozen=True)
class DeadComponent:
    attachment: str  # the unique complete-subtree vertex the branch hangs from
    vertices: tuple[str, ...]  # dead vertices only; |component| counts these + 1


@dataclass(frozen=True)
class ComplementednessResult:
    c: int
    components: tuple[DeadComponent, ...]


def complementedness_index(t: RootedTree) -> ComplementednessResult:
    """C = max size of a dead branch, counting its attachment vertex.

    A component of the closure of T minus the complete subtree consists of
    the dead vertices of one hanging branch plus the unique complete vertex
    it attaches to; with no dead vertices at all, C = 1.
    """
    tinf = maximal_complete_subtree(t)
    if not tinf:
        raise EmptyWindowError("tree has no live leaf; complete subtree is empty")
    comps = []
    seen: set[str] = set()
    for x in t.vertices:
        if x in tinf or x in seen:
            continue
        if t.parent[x] in tinf:  # top of a dead branch
            block = sorted(subtree_past(t, x))
            seen.update(block)
            comps.append(DeadComponent(t.parent[x], tuple(block)))
    c = max((len(b.vertices) + 1 for b in comps), default=1)
    return ComplementednessResult(c, tuple(comps))


# ---------------------------------------------------------------------------
# Essential boundaries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EssentialBoundary:
    non_essential: frozenset[str]
    essential: frozenset[str]
    inner: frozenset[str]  # vertices of A adjacent to the essential boundary


def essential_boundary(t: RootedTree, subset: Iterable[str]) -> EssentialBoundary:
    """Split the boundary of a connected set into its single root-side vertex
    (empty when the root belongs to the set) and the essential remainder."""
    a = frozenset(subset)
    if not a or not a <= set(t.children):
        raise InvalidInputError("A must be a non-empty set of tree vertices")
    g = t.graph
    if not _connected_in(g, a):
        raise InvalidInputError("the induced subgraph on A must be connected")
    bd = boundary(g, a)
    top = min(t.depth[x] for x in a)
    ne = frozenset(w for w in bd if t.depth[w] < top)
    e = bd - ne
    inner = frozenset(x for x in a if g.adjacency[x] & e)
    return EssentialBoundary(ne, e, inner)


def _connected_in(g: Graph, a: frozenset[str]) -> bool:
    start = next(iter(a))
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in g.adjacency[x]:
            if y in a and y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(a)


# ---------------------------------------------------------------------------
# The tree bound
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TreeAnalysis:
    horizon: int
    k: int | None
    c: int | None
    t_infty: frozenset[str]
    bounds: CheegerBound
    pseudo: PseudoRegularityResult | None
    complementedness: ComplementednessResult | None
    sandwich_lower: Fraction | None  # h(T_inf)/(C + (C-1) h(T_inf)) with h(T_inf) >= 1/(7K)


def theorem_lower_bound(k: int, c: int) -> Fraction:
    """1/((7K+1)C - 1); with C = 1 this is the complete-tree value 1/(7K)."""
    if k < 1 or c < 1:
        raise InvalidInputError("need K >= 1 and C >= 1")
    return Fraction(1, (7 * k + 1) * c - 1)


def tree_cheeger_bounds(
    t: RootedTree,
    max_size: int | None = None,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> TreeAnalysis:
    """Certified Cheeger interval for the tree the window represents.

    The lower endpoint comes from the (K, C) theorem when K exists within the
    horizon (flagged horizon-certified: the constants are verified on the
    prefix only); a pseudo-regularity defect pins the lower endpoint to 0 and
    reports the 2/K witness family.  The upper endpoint is the brute-force
    window minimum over admissible sets, capped at ``max_size`` (largest size
    within the budget when omitted).
    """
    g = t.graph
    if not t.live:
        # bounded tree: the whole vertex set has empty boundary
        upper = BoundEndpoint(Fraction(0), "brute-force-window",
                              witness={"set": g.vertices, "boundary_size": 0})
        zero = CheegerBound(BoundEndpoint(Fraction(0), "trivial"), upper)
        return TreeAnalysis(t.horizon, None, None, frozenset(), zero, None, None, None)

    tinf = maximal_complete_subtree(t)
    pseudo = pseudo_regularity_index(t)
    comp = complementedness_index(t)

    if max_size is None:
        interior = [v for v, d in g.bfs_distances(g.frontier).items() if d >= 2]
        if not interior:
            raise EmptyWindowError("horizon too shallow for a window upper bound")
        max_size = auto_max_size(len(interior), budget)
    upper_bound = interior_cheeger_bruteforce(g, max_size, budget).upper

    if pseudo.k is not None:
        value = theorem_lower_bound(pseudo.k, comp.c)
        lower = BoundEndpoint(
            value,
            "tree-theorem",
            witness={"K": pseudo.k, "C": comp.c},
            horizon_certified=True,
        )
        htinf = Fraction(1, 7 * pseudo.k)
        sandwich = htinf / (comp.c + (comp.c - 1) * htinf)
    else:
        lower = BoundEndpoint(
            Fraction(0),
            "tree-theorem",
            witness={
                "defect_vertex": pseudo.defect_vertex,
                "family_ratios": [str(w.ratio) for w in pseudo.family],
            },
            horizon_certified=True,
        )
        sandwich = None
    return TreeAnalysis(
        t.horizon, pseudo.k, comp.c, tinf,
        CheegerBound(lower, upper_bound), pseudo, comp, sandwich,
    )


# ---------------------------------------------------------------------------
# Lemma suite
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LemmaCounterexample:
    lemma: str
    vertices: tuple[str, ...]
    detail: str


@dataclass(frozen=True)
class LemmaSuiteReport:
    sets_checked: int
    min_boundary_ratio: Fraction | None
    min_essential_ratio: Fraction | None
    min_inner_ratio: Fraction | None
    counterexamples: tuple[LemmaCounterexample, ...]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _connected_sets(g: Graph, allowed: list[str], max_size: int, budget: int):
    """Enumerate the connected vertex sets of the induced subgraph on
    ``allowed`` with at most ``max_size`` elements, each exactly once.

    Classic exclusive-neighborhood extension: sets are anchored at their
    lowest-ranked vertex and grown only through vertices not already adjacent
    to the current set, which makes the enumeration duplicate-free and
    deterministic.
    """
    rank = {v: i for i, v in enumerate(allowed)}
    adj = g.adjacency
    produced = 0

    def rec(sub: tuple[str, ...], covered: frozenset[str], ext: tuple[str, ...], rv: int):
        nonlocal produced
        produced += 1
        if produced > budget:
            raise BudgetExceededError(produced, budget, what="connected sets")
        yield sub
        if len(sub) == max_size:
            return
        work = list(ext)
        while work:
            w = work.pop(0)
            fresh = tuple(
                u for u in sorted(adj[w])
                if u in rank and rank[u] > rv and u not in covered
            )
            new_covered = covered | {u for u in adj[w] if u in rank}
            yield from rec(sub + (w,), new_covered, tuple(work) + fresh, rv)

    for v in allowed:
        rv = rank[v]
        nbrs = {u for u in adj[v] if u in rank}
        ext0 = tuple(u for u in sorted(nbrs) if rank[u] > rv)
        yield from rec((v,), frozenset({v}) | nbrs, ext0, rv)


def lemma_suite(
    t: RootedTree,
    max_size: int = 8,
    budget: int = DEFAULT_SUBSET_BUDGET,
) -> LemmaSuiteReport:
    """Exhaustively test the three connected-set inequalities, plus the
    shallow-set counting bound, over every connected set of dead-free,
    1-pseudo-regular trees.

    Sets avoid the horizon sphere so that window boundaries equal ambient
    boundaries; any counterexample is a build-breaking bug and is reported.
    """
    tinf = maximal_complete_subtree(t)
    if set(t.vertices) - tinf:
        raise InvalidInputError("lemma suite requires a tree that equals its complete subtree")
    pseudo = pseudo_regularity_index(t)
    if pseudo.k != 1:
        raise InvalidInputError(f"lemma suite requires 1-pseudo-regularity (got K={pseudo.k})")

    g = t.graph
    allowed = [v for v in g.vertices if v not in g.frontier]
    third, sixth = Fraction(1, 3), Fraction(1, 6)
    counter: list[LemmaCounterexample] = []
    mins: list[Fraction | None] = [None, None, None]
    checked = 0
    for a in _connected_sets(g, allowed, max_size, budget):
        checked += 1
        aset = frozenset(a)
        bd = boundary(g, aset)
        eb = essential_boundary(t, aset)
        size = len(aset)
        ratios = (
            ("boundary-third", Fraction(len(bd), size), third, 0),
            ("essential-third", Fraction(len(eb.essential), size), third, 1),
            ("inner-sixth", Fraction(len(eb.inner), size), sixth, 2),
        )
        for name, ratio, floor_val, slot in ratios:
            if mins[slot] is None or ratio < mins[slot]:
                mins[slot] = ratio
            if ratio < floor_val:
                counter.append(LemmaCounterexample(name, tuple(sorted(aset)), f"{ratio} < {floor_val}"))
        max_depth = max(t.depth[x] for x in aset)
        if size > 1 + max_depth * len(eb.essential):
            counter.append(
                LemmaCounterexample(
                    "shallow-count", tuple(sorted(aset)),
                    f"|A|={size} > 1 + {max_depth}*{len(eb.essential)}",
                )
            )
    return LemmaSuiteReport(checked, mins[0], mins[1], mins[2], tuple(counter))


# ---------------------------------------------------------------------------
# End space
# ---------------------------------------------------------------------------


def end_space(t: RootedTree) -> FiniteMetricSpace:
    """Ultrametric on the live leaves: d(F, G) = exp(-depth of the branching
    point).  Resolution floor exp(-horizon); diameter at most 1."""
    leaves = [v for v in t.vertices if v in t.live]
    if not leaves:
        raise EmptyWindowError("no live leaves: the end space is empty")
    paths = {f: t.root_path(f) for f in leaves}
    n = len(leaves)
    d = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            pi, pj = paths[leaves[i]], paths[leaves[j]]
            split = 0
            for a, b in zip(pi, pj):
                if a != b:
                    break
                split += 1
            d[i, j] = d[j, i] = math.exp(-(split - 1))
    space = FiniteMetricSpace(tuple(leaves), d, resolution_floor=math.exp(-t.horizon))
    dm = space.dist
    for x in range(n):  # ultrametric: d(x,y) <= max(d(x,z), d(z,y)) for all triples
        if not (dm[x][:, None] <= np.maximum(dm[x][None, :], dm)).all():
            raise InvalidInputError("end space failed the ultrametric inequality")
    return space


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def _tree_from_children(root: str, kids: dict[str, list[str]], live: Iterable[str]) -> RootedTree:
    return RootedTree(root, {v: tuple(c) for v, c in kids.items()}, frozenset(live))


def homogeneous_tree(k: int, depth: int) -> RootedTree:
    """Window of the k-regular tree: the root has k children, every other
    internal vertex k-1; all horizon leaves live."""
    if k < 2 or k > 10:
        raise InvalidInputError("need 2 <= k <= 10")
    if depth < 1:
        raise InvalidInputError("need depth >= 1")
    kids: dict[str, list[str]] = {"v": []}
    frontier: list[str] = ["v"]
    for level in range(depth):
        nxt: list[str] = []
        for name in frontier:
            fan = k if name == "v" else k - 1
            for i in range(fan):
                child = f"{name}{i}" if name != "v" else f"v{i}"
                kids[name].append(child)
                kids[child] = []
                nxt.append(child)
        frontier = nxt
    return _tree_from_children("v", kids, frontier)


def full_branching_tree(b: int, depth: int) -> RootedTree:
    """Every vertex, root included, has exactly b children; horizon leaves live."""
    if b < 1 or b > 10:
        raise InvalidInputError("need 1 <= b <= 10")
    if depth < 1:
        raise InvalidInputError("need depth >= 1")
    kids: dict[str, list[str]] = {"v": []}
    frontier = ["v"]
    for _ in range(depth):
        nxt = []
        for name in frontier:
            for i in range(b):
                child = f"{name}.{i}" if name == "v" else f"{name}{i}"
                kids[name].append(child)
                kids[child] = []
                nxt.append(child)
        frontier = nxt
    return _tree_from_children("v", kids, frontier)


def even_branching_tree(depth: int) -> RootedTree:
    """Binary splits at even depths only, single child at odd depths: the
    minimal pseudo-regularity constant is 2."""
    if depth < 2:
        raise InvalidInputError("need depth >= 2")
    kids: dict[str, list[str]] = {"v": []}
    frontier = ["v"]
    for level in range(depth):
        nxt = []
        fan = 2 if level % 2 == 0 else 1
        for name in frontier:
            for i in range(fan):
                child = f"{name}.{i}" if name == "v" else f"{name}{i}"
                kids[name].append(child)
                kids[child] = []
                nxt.append(child)
        frontier = nxt
    return _tree_from_children("v", kids, frontier)


def comb_tree(depth: int, tooth: int) -> RootedTree:
    """A live spine to the horizon with dead teeth of the given length hanging
    from every spine vertex where they fit below the horizon."""
    if depth < 2 or tooth < 1:
        raise InvalidInputError("need depth >= 2 and tooth >= 1")
    kids: dict[str, list[str]] = {}
    spine = [f"s{i}" for i in range(depth + 1)]
    for i, name in enumerate(spine):
        kids[name] = [spine[i + 1]] if i < depth else []
    for i in range(depth + 1):
        if i + tooth <= depth - 1:  # teeth must stay strictly below the horizon
            prev = spine[i]
            for j in range(tooth):
                name = f"t{i}.{j}"
                kids[prev].append(name)
                kids[name] = []
                prev = name
    return _tree_from_children("s0", kids, [spine[-1]])


def growing_chain(depth: int) -> RootedTree:
    """A single live chain: every vertex has one descendant, so the window
    exhibits a single-descendant chain of every length up to the horizon."""
    if depth < 2:
        raise InvalidInputError("need depth >= 2")
    names = [f"g{i}" for i in range(depth + 1)]
    kids = {names[i]: [names[i + 1]] if i < depth else [] for i in range(depth + 1)}
    return _tree_from_children(names[0], kids, [names[-1]])


def grafted_dead_branches(base: RootedTree, size: int) -> RootedTree:
    """Attach a dead chain of ``size`` vertices to every vertex where it fits
    strictly below the horizon (complementedness becomes size + 1)."""
    if size < 1:
        raise InvalidInputError("need size >= 1")
    kids = {v: list(cs) for v, cs in base.children.items()}
    d = base.depth
    for v in base.vertices:
        if d[v] + size <= base.horizon - 1:
            prev = v
            for j in range(size):
                name = f"{v}~d{j}"
                kids[prev].append(name)
                kids[name] = []
                prev = name
    return _tree_from_children(base.root, kids, base.live)


def random_branching_tree(
    depth: int, seed: int, min_children: int = 2, max_children: int = 3
) -> RootedTree:
    """Seeded tree where every vertex gets min..max children; all leaves live,
    so the result is 1-pseudo-regular whenever min_children >= 2."""
    if depth < 1 or min_children < 1 or max_children < min_children:
        raise InvalidInputError("bad branching parameters")
    rng = np.random.default_rng(seed)
    kids: dict[str, list[str]] = {"v": []}
    frontier = ["v"]
    for _ in range(depth):
        nxt = []
        for name in frontier:
            fan = int(rng.integers(min_children, max_children + 1))
            for i in range(fan):
                child = f"{name}.{i}" if name == "v" else f"{name}{i}"
                kids[name].append(child)
                kids[child] = []
                nxt.append(child)
        frontier = nxt
    return _tree_from_children("v", kids, frontier)


def random_tree(n: int, seed: int) -> RootedTree:
    """Seeded random attachment tree on n vertices; the deepest leaves are
    marked live."""
    if n < 2:
        raise InvalidInputError("need n >= 2")
    rng = np.random.default_rng(seed)
    names = [f"r{i}" for i in range(n)]
    kids: dict[str, list[str]] = {names[0]: []}
    for i in range(1, n):
        p = names[int(rng.integers(0, i))]
        kids[p].append(names[i])
        kids[names[i]] = []
    depth = {names[0]: 0}
    stack = [names[0]]
    while stack:
        x = stack.pop()
        for c in kids[x]:
            depth[c] = depth[x] + 1
            stack.append(c)
    horizon = max(depth.values())
    live = [v for v in names if not kids[v] and depth[v] == horizon]
    return _tree_from_children(names[0], kids, live)
