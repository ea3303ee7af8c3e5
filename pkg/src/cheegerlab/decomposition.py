"""Vertex-overlap decompositions of graphs and the explicit Cheeger bounds
they certify, plus the graft construction and window scans.

A decomposition covers the ambient graph by induced pieces meeting only in
independent vertex sets.  Pieces in the first class carry a re-verifiable
Cheeger certificate; every piece of the second class must be R-close (in its
own intrinsic metric) to the first class except for components that carry
certificates themselves.  Certificates are always re-verified from the piece
data; declared numbers are never trusted.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import EmptyWindowError, InvalidInputError
from .graphs import (
    BoundEndpoint,
    CheegerBound,
    DEFAULT_SUBSET_BUDGET,
    Graph,
    admissible_vertices,
    auto_max_size,
    certificate_lower_bound,
    interior_cheeger_bruteforce,
    normalize_edge,
)
from .trees import (
    RootedTree,
    complementedness_index,
    pseudo_regularity_index,
    theorem_lower_bound,
)


# ---------------------------------------------------------------------------
# Theorem formulas
# ---------------------------------------------------------------------------


def bound_general(mu: int, radius: int, rate: Fraction | int) -> Fraction:
    """Ambient lower bound r^2 (mu-1) / ((mu^{R+1}-1)(mu+r)^2 + 2 r mu (mu-1))."""
    rate = Fraction(rate)
    if mu < 2:
        raise InvalidInputError("the formula needs mu >= 2")
    if radius < 0 or rate <= 0:
        raise InvalidInputError("need R >= 0 and r > 0")
    num = rate**2 * (mu - 1)
    den = (mu ** (radius + 1) - 1) * (mu + rate) ** 2 + 2 * rate * mu * (mu - 1)
    return num / den


def bound_strong(mu: int, radius: int, rate: Fraction | int) -> Fraction:
    """Strong-decomposition bound r (mu-1) / ((mu^{R+1}-1)(mu+r) + mu (mu-1));
    never below the general bound at the same parameters."""
    rate = Fraction(rate)
    if mu < 2:
        raise InvalidInputError("the formula needs mu >= 2")
    if radius < 0 or rate <= 0:
        raise InvalidInputError("need R >= 0 and r > 0")
    num = rate * (mu - 1)
    den = (mu ** (radius + 1) - 1) * (mu + rate) + mu * (mu - 1)
    value = num / den
    assert value >= bound_general(mu, radius, rate)
    return value


# ---------------------------------------------------------------------------
# Decomposition data and validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PieceCertificate:
    """Re-verifiable evidence that a piece has Cheeger constant >= r.

    ``tree-theorem``: the induced piece is a rooted-tree window; its (K, C)
    bound is recomputed from scratch.  ``function``: a vertex function is
    re-run through the gradient/Laplacian certificate on the induced piece.
    """

    kind: str
    root: str | None = None
    live: frozenset[str] = frozenset()
    f: Mapping[str, Fraction] | None = None

    def __post_init__(self):
        if self.kind not in ("tree-theorem", "function"):
            raise InvalidInputError(f"unknown certificate kind {self.kind!r}")
        if self.kind == "tree-theorem" and self.root is None:
            raise InvalidInputError("tree-theorem certificate needs a root")
        if self.kind == "function" and self.f is None:
            raise InvalidInputError("function certificate needs the function")


@dataclass(frozen=True, eq=False)
class DecompositionSpec:
    ambient: Graph
    pieces: dict[str, frozenset[str]]
    s1: frozenset[str]
    s2: frozenset[str]
    radius: int
    rate: Fraction
    certificates: dict[str, PieceCertificate] = field(default_factory=dict)


@dataclass(frozen=True)
class PieceScan:
    """Recomputed second-class piece data (functions of ambient, pieces, R)."""

    contact: tuple[str, ...]  # V_s: vertices shared with the certified union
    shield: tuple[str, ...]  # W_s: closed R-ball of the contact set, intrinsic metric
    components: tuple[tuple[str, ...], ...]  # leftover components needing certificates


@dataclass(frozen=True, eq=False)
class ValidationReport:
    valid: bool
    strong: bool
    violations: tuple[str, ...]
    unverified: tuple[str, ...]  # frontier-crossing components tolerated without proof
    verified_lower: dict[str, Fraction]
    scans: dict[str, PieceScan]


def _induced(g: Graph, verts: frozenset[str], frontier_too: bool = True) -> Graph:
    edges = frozenset(e for e in g.edges if e[0] in verts and e[1] in verts)
    order = tuple(v for v in g.vertices if v in verts)
    frontier = frozenset(g.frontier & verts) if frontier_too else frozenset()
    return Graph(order, edges, frontier)


def _tree_from_graph(g: Graph, root: str, live: frozenset[str]) -> RootedTree:
    if len(g.edges) != len(g.vertices) - 1 or not g.is_connected:
        raise InvalidInputError("piece is not a tree")
    children: dict[str, tuple[str, ...]] = {}
    parent: dict[str, str] = {}
    seen = {root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        kids = sorted(y for y in g.adjacency[x] if y != parent.get(x))
        children[x] = tuple(kids)
        for y in kids:
            parent[y] = x
            seen.add(y)
            queue.append(y)
    return RootedTree(root, children, live)


def _verify_certificate(
    piece_graph: Graph, cert: PieceCertificate, rate: Fraction
) -> tuple[bool, Fraction | None, str]:
    """Recompute the certified lower bound on the induced piece."""
    if cert.kind == "tree-theorem":
        try:
            tree = _tree_from_graph(piece_graph, cert.root, cert.live)
            pseudo = pseudo_regularity_index(tree)
            if pseudo.k is None:
                return False, Fraction(0), "piece tree is not pseudo-regular in its window"
            comp = complementedness_index(tree)
            value = theorem_lower_bound(pseudo.k, comp.c)
        except InvalidInputError as exc:
            return False, None, f"tree certificate rejected: {exc}"
    else:
        res = certificate_lower_bound(piece_graph, cert.f)
        if not res.certified:
            return False, Fraction(0), f"function certificate fails at {res.violating_vertex}"
        value = res.bound.lower.value
    if value < rate:
        return False, value, f"re-verified lower bound {value} is below the required {rate}"
    return True, value, ""


def validate(spec: DecompositionSpec) -> ValidationReport:
    """Re-derive every structural clause of the decomposition and re-verify
    every certificate; each violated clause is reported with a witness."""
    g = spec.ambient
    violations: list[str] = []
    unverified: list[str] = []
    verified: dict[str, Fraction] = {}
    scans: dict[str, PieceScan] = {}

    ids = set(spec.pieces)
    if not spec.s1 or (spec.s1 | spec.s2) != ids or spec.s1 & spec.s2:
        violations.append("class labels must partition the piece ids with S1 non-empty")
    if spec.radius < 0 or spec.rate <= 0:
        violations.append("need R >= 0 and r > 0")

    covered = set()
    for name, verts in spec.pieces.items():
        if not verts <= set(g.vertices):
            bad = sorted(verts - set(g.vertices))[0]
            violations.append(f"piece {name!r} contains unknown vertex {bad!r}")
        covered |= verts
    missing = set(g.vertices) - covered
    if missing:
        violations.append(f"cover misses vertex {sorted(missing)[0]!r}")

    names = sorted(spec.pieces)
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            common = spec.pieces[a] & spec.pieces[b]
            for u, v in g.edges:
                if u in common and v in common:
                    violations.append(
                        f"pieces {a!r} and {b!r} share the edge {u}--{v}; "
                        "intersections must be vertex sets"
                    )
                    break
            if not spec.pieces[a] - spec.pieces[b]:
                violations.append(f"piece {a!r} is contained in {b!r}")
            if not spec.pieces[b] - spec.pieces[a]:
                violations.append(f"piece {b!r} is contained in {a!r}")

    certified_union: set[str] = set()
    for s in sorted(spec.s1):
        certified_union |= spec.pieces.get(s, frozenset())

    for s in sorted(spec.s1):
        cert = spec.certificates.get(s)
        if cert is None:
            violations.append(f"first-class piece {s!r} has no certificate")
            continue
        ok, value, reason = _verify_certificate(_induced(g, spec.pieces[s]), cert, spec.rate)
        if value is not None:
            verified[s] = value
        if not ok:
            violations.append(f"piece {s!r}: {reason}")

    strong = True
    for s in sorted(spec.s2):
        verts = spec.pieces.get(s, frozenset())
        piece = _induced(g, verts)
        contact = sorted(verts & certified_union)
        if not contact:
            violations.append(f"second-class piece {s!r} does not meet the certified union")
            scans[s] = PieceScan((), (), ())
            continue
        dist = piece.bfs_distances(contact)
        shield = sorted(v for v, d in dist.items() if d <= spec.radius)
        rest = frozenset(verts) - set(shield)
        comps = _components(piece, rest)
        if rest:
            strong = False
        scans[s] = PieceScan(tuple(contact), tuple(shield), tuple(tuple(sorted(c)) for c in comps))
        for j, comp in enumerate(sorted(comps, key=min)):
            key = f"{s}/{j}"
            cert = spec.certificates.get(key)
            if cert is None:
                if set(comp) & g.frontier:
                    unverified.append(key)
                else:
                    violations.append(
                        f"component {key!r} (starting {min(comp)!r}) has no certificate"
                    )
                continue
            ok, value, reason = _verify_certificate(_induced(g, frozenset(comp)), cert, spec.rate)
            if value is not None:
                verified[key] = value
            if not ok:
                violations.append(f"component {key!r}: {reason}")

    return ValidationReport(
        valid=not violations,
        strong=strong,
        violations=tuple(violations),
        unverified=tuple(unverified),
        verified_lower=verified,
        scans=scans,
    )


def _components(g: Graph, verts: frozenset[str]) -> list[frozenset[str]]:
    remaining = set(verts)
    out = []
    while remaining:
        start = min(remaining)
        comp = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in g.adjacency[x]:
                if y in remaining and y not in comp:
                    comp.add(y)
                    queue.append(y)
        remaining -= comp
        out.append(frozenset(comp))
    return out


def decomposition_bound(spec: DecompositionSpec) -> CheegerBound:
    """Certified ambient lower bound from a validated decomposition; the
    strong formula is used exactly when the shields cover their pieces."""
    report = validate(spec)
    if not report.valid:
        raise InvalidInputError(
            "decomposition does not validate: " + "; ".join(report.violations)
        )
    mu = spec.ambient.mu
    value = (
        bound_strong(mu, spec.radius, spec.rate)
        if report.strong
        else bound_general(mu, spec.radius, spec.rate)
    )
    endpoint = BoundEndpoint(
        value,
        "decomposition-theorem",
        witness={
            "mu": mu,
            "R": spec.radius,
            "r": spec.rate,
            "strong": report.strong,
            "unverified_components": report.unverified,
        },
        horizon_certified=bool(spec.ambient.frontier) or bool(report.unverified),
    )
    return CheegerBound(lower=endpoint)


# ---------------------------------------------------------------------------
# Graft construction
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GraftResult:
    graph: Graph
    base_vertices: tuple[str, ...]
    pieces: dict[str, frozenset[str]]  # "base" plus one copy piece per base vertex
    copy_roots: dict[str, str]  # piece id -> identified base vertex


def graft(base: Graph, attachment: Graph, port: str, verify_limit: int = 300) -> GraftResult:
    """Identify the port of a fresh attachment copy with every base vertex.

    The base stays isometrically embedded (checked exhaustively on windows up
    to ``verify_limit`` vertices) and the degree bound mu(base) + mu(att)
    is asserted.  Copy vertices are named ``<base vertex>/<attachment vertex>``.
    """
    if port not in attachment.index:
        raise InvalidInputError(f"port {port!r} is not an attachment vertex")
    if port in attachment.frontier:
        raise InvalidInputError("the port must not lie on the attachment frontier")
    if not base.is_connected or not attachment.is_connected:
        raise InvalidInputError("graft needs connected inputs")

    def copy_name(w: str, x: str) -> str:
        return w if x == port else f"{w}/{x}"

    vertices = list(base.vertices)
    edges = set(base.edges)
    frontier = set(base.frontier)
    pieces: dict[str, frozenset[str]] = {"base": frozenset(base.vertices)}
    copy_roots: dict[str, str] = {}
    for w in base.vertices:
        members = [w]
        for x in attachment.vertices:
            if x != port:
                vertices.append(copy_name(w, x))
                members.append(copy_name(w, x))
        for u, v in attachment.edges:
            edges.add(normalize_edge(copy_name(w, u), copy_name(w, v)))
        frontier.update(copy_name(w, x) for x in attachment.frontier)
        pid = f"copy:{w}"
        pieces[pid] = frozenset(members)
        copy_roots[pid] = w
    result = Graph(tuple(vertices), frozenset(edges), frozenset(frontier))

    assert result.mu <= base.mu + attachment.mu, "degree bound violated"
    if len(result.vertices) <= verify_limit:
        db = base.distance_matrix
        dr = result.distance_matrix
        for i, u in enumerate(base.vertices):
            for j in range(i + 1, len(base.vertices)):
                if db[i, j] != dr[result.index[u], result.index[base.vertices[j]]]:
                    raise InvalidInputError(
                        f"base distances not preserved at ({u}, {base.vertices[j]})"
                    )
    return GraftResult(result, tuple(base.vertices), pieces, copy_roots)


def graft_decomposition(
    base: Graph, attachment: Graph, port: str, radius: int = 0
) -> DecompositionSpec:
    """Package a graft as a decomposition: copies are the certified class
    (via the tree theorem on each copy), the base is the shielded class."""
    tree_check = _tree_from_graph(attachment, port, frozenset(attachment.frontier))
    pseudo = pseudo_regularity_index(tree_check)
    if pseudo.k is None:
        raise InvalidInputError("attachment tree is not pseudo-regular; no rate available")
    rate = theorem_lower_bound(pseudo.k, complementedness_index(tree_check).c)

    g = graft(base, attachment, port)
    certs: dict[str, PieceCertificate] = {}
    for pid, root in g.copy_roots.items():
        live = frozenset(
            v for v in g.pieces[pid] if v in g.graph.frontier and v != root
        )
        certs[pid] = PieceCertificate("tree-theorem", root=root, live=live)
    return DecompositionSpec(
        ambient=g.graph,
        pieces=g.pieces,
        s1=frozenset(g.copy_roots),
        s2=frozenset({"base"}),
        radius=radius,
        rate=rate,
        certificates=certs,
    )


# ---------------------------------------------------------------------------
# Window scans
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConverseScanReport:
    """Interior-Cheeger values across a family of windows.

    ``decay`` flags a non-increasing sequence whose last value dropped to at
    most half of the first (evidence toward a vanishing ambient constant);
    ``floor`` is the smallest value seen.  When an ambient lower bound is
    supplied, every window value must stay above it.
    """

    values: tuple[Fraction, ...]
    witnesses: tuple[tuple[str, ...], ...]
    nonincreasing: bool
    decay: bool
    floor: Fraction
    ambient_lower: Fraction | None = None
    lower_respected: bool | None = None


def converse_scan(
    windows: Iterable[Graph],
    max_size: int | None = None,
    budget: int = DEFAULT_SUBSET_BUDGET,
    ambient_lower: Fraction | None = None,
) -> ConverseScanReport:
    values: list[Fraction] = []
    witnesses: list[tuple[str, ...]] = []
    for g in windows:
        adm = admissible_vertices(g)
        if not adm:
            raise EmptyWindowError("a window has no admissible vertex")
        if max_size is None:
            size = auto_max_size(len(adm), budget)
        else:
            size = min(max_size, len(adm))
        bound = interior_cheeger_bruteforce(g, size, budget)
        values.append(bound.upper.value)
        witnesses.append(tuple(bound.upper.witness["set"]))
    if not values:
        raise InvalidInputError("need at least one window")
    nonincreasing = all(b <= a for a, b in zip(values, values[1:]))
    decay = nonincreasing and len(values) >= 2 and values[-1] * 2 <= values[0]
    floor = min(values)
    respected = None
    if ambient_lower is not None:
        respected = all(v >= ambient_lower for v in values)
    return ConverseScanReport(
        tuple(values), tuple(witnesses), nonincreasing, decay, floor,
        ambient_lower, respected,
    )
