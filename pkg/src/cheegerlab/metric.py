"""Finite metric spaces: separated sets, uniform perfectness, bounded-geometry
profiles, epsilon-nets and canonical sample generators.

Distances are binary64 floats.  Strict inequalities from the definitions are
evaluated with no tolerance (ties resolve to the non-strict side); the load
validator alone uses a 1e-9 slack for the triangle inequality.  A finite
sample can only witness multi-scale properties down to its own resolution, so
every perfectness verdict carries the [resolution_floor, eps0] range it was
checked on and claims nothing below it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError
from .graphs import Graph, normalize_edge

TRIANGLE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """Labeled point set with a symmetric distance matrix.

    ``resolution_floor`` is optional metadata set by constructions that know
    the scale below which the sample stops resolving its source (end spaces,
    regular samples); it is advisory and does not affect the metric.
    """

    points: tuple[str, ...]
    dist: np.ndarray
    resolution_floor: float | None = None

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        object.__setattr__(self, "dist", d)
        n = len(self.points)
        if len(set(self.points)) != n:
            raise InvalidInputError("duplicate point identifiers")
        if d.shape != (n, n):
            raise InvalidInputError(f"distance matrix must be {n}x{n}")
        if n == 0:
            raise InvalidInputError("empty metric space")
        if (d.diagonal() != 0).any():
            raise InvalidInputError("dist(x,x) must be 0")
        if not (d == d.T).all():
            raise InvalidInputError("distance matrix must be symmetric")
        off = d[~np.eye(n, dtype=bool)]
        if off.size and (off <= 0).any():
            raise InvalidInputError("dist(x,y) must be positive for x != y")
        if n <= 600:
            worst = (d[:, None, :] - d[:, :, None] - d[None, :, :]).max()
        else:  # chunk the O(n^3) check to bound memory
            worst = -np.inf
            for i in range(n):
                worst = max(worst, (d[i][None, :] - d[i][:, None] - d).max())
        if worst > TRIANGLE_TOL:
            raise InvalidInputError(
                f"triangle inequality violated by {worst:.3e} (tolerance {TRIANGLE_TOL})"
            )

    @cached_property
    def index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    def d(self, x: str, y: str) -> float:
        idx = self.index
        try:
            return float(self.dist[idx[x], idx[y]])
        except KeyError as exc:
            raise InvalidInputError(f"unknown point {exc.args[0]!r}") from None

    @property
    def diameter(self) -> float:
        return float(self.dist.max())


def line_space(
    coords: Sequence[float],
    names: Sequence[str] | None = None,
    resolution_floor: float | None = None,
) -> FiniteMetricSpace:
    """Points on the real line with the absolute-value metric, in given order."""
    xs = np.asarray(list(coords), dtype=float)
    if names is None:
        names = [f"x{i}" for i in range(len(xs))]
    return FiniteMetricSpace(
        tuple(names), np.abs(xs[:, None] - xs[None, :]), resolution_floor
    )


def _integer_line_space(
    offsets: Sequence[int],
    scale: float,
    names: Sequence[str],
    resolution_floor: float | None,
) -> FiniteMetricSpace:
    """Line metric d = |i - j| * scale from integer offsets.

    Building distances as (exact integer) * scale keeps equal gaps equal as
    floats, so tie comparisons against scale multiples behave exactly.
    """
    ts = np.asarray(list(offsets), dtype=float)
    return FiniteMetricSpace(
        tuple(names), np.abs(ts[:, None] - ts[None, :]) * scale, resolution_floor
    )


# ---------------------------------------------------------------------------
# Separated sets and nets
# ---------------------------------------------------------------------------


def greedy_separated(space: FiniteMetricSpace, r: float) -> tuple[str, ...]:
    """Maximal r-separated subset, scanning points in input order.

    Output is r-separated (pairwise distances >= r) and maximal: every point
    lies strictly within r of some kept point.
    """
    if r <= 0:
        raise InvalidInputError("separation radius must be positive")
    kept: list[int] = []
    d = space.dist
    for i in range(len(space.points)):
        if all(d[i, j] >= r for j in kept):
            kept.append(i)
    return tuple(space.points[i] for i in kept)


def epsilon_net(space: FiniteMetricSpace, eps: float) -> Graph:
    """Graph on a maximal eps-separated set, joining points at distance <= 2*eps.

    The distance-2*eps tie is an edge (closed condition).
    """
    if eps <= 0:
        raise InvalidInputError("eps must be positive")
    names = greedy_separated(space, eps)
    idx = space.index
    edges = []
    for a in range(len(names)):
        for b in range(a + 1, len(names)):
            dd = space.dist[idx[names[a]], idx[names[b]]]
            if 0 < dd <= 2 * eps:
                edges.append(normalize_edge(names[a], names[b]))
    return Graph(tuple(names), frozenset(edges), frozenset())


# ---------------------------------------------------------------------------
# Uniform perfectness
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PerfectnessCertificate:
    """Verdict of an annulus-nonemptiness scan over a declared scale range.

    ``holds`` quantifies only over the checked epsilons (the caller grid
    augmented with every realized distance inside [resolution_floor, eps0]);
    nothing is claimed below the floor.
    """

    constant: float  # S for the one-point form, R for the two-point form
    form: str  # "one-point" | "two-point"
    eps0: float
    resolution_floor: float
    holds: bool
    witness: tuple[str, float] | None = None  # (point, eps) with empty annulus
    checked_eps: int = 0


def _eps_candidates(
    space: FiniteMetricSpace, eps0: float, floor: float, grid: Iterable[float]
) -> np.ndarray:
    if not (0 < floor <= eps0):
        raise InvalidInputError("need 0 < resolution_floor <= eps0")
    grid = np.asarray(sorted(set(float(e) for e in grid)), dtype=float)
    if grid.size and (grid[0] < floor or grid[-1] > eps0):
        raise InvalidInputError("grid values must lie within [resolution_floor, eps0]")
    upper = space.dist[np.triu_indices(len(space.points), k=1)]
    realized = upper[(upper >= floor) & (upper <= eps0)]
    return np.unique(np.concatenate([grid, realized, [floor, eps0]]))


def uniformly_perfect_check(
    space: FiniteMetricSpace,
    s: float,
    eps0: float,
    resolution_floor: float,
    grid: Iterable[float] = (),
) -> PerfectnessCertificate:
    """One-point form: every annulus (eps/S, eps] around every point is
    non-empty, for every checked eps in [resolution_floor, eps0]."""
    if s <= 1:
        raise InvalidInputError("need S > 1")
    eps_list = _eps_candidates(space, eps0, resolution_floor, grid)
    d = space.dist
    for eps in eps_list:
        # d in (eps/S, eps]; self-distance 0 never qualifies
        ok = ((d > eps / s) & (d <= eps)).any(axis=1)
        bad = np.nonzero(~ok)[0]
        if bad.size:
            return PerfectnessCertificate(
                s, "one-point", eps0, resolution_floor, False,
                witness=(space.points[int(bad[0])], float(eps)),
                checked_eps=len(eps_list),
            )
    return PerfectnessCertificate(
        s, "one-point", eps0, resolution_floor, True, checked_eps=len(eps_list)
    )


def two_point_perfectness_check(
    space: FiniteMetricSpace,
    r_const: float,
    eps0: float,
    resolution_floor: float,
    grid: Iterable[float] = (),
) -> PerfectnessCertificate:
    """Two-point form: within distance eps of every point there are two points
    more than eps/R apart, for every checked eps in [resolution_floor, eps0]."""
    if r_const <= 1:
        raise InvalidInputError("need R > 1")
    eps_list = _eps_candidates(space, eps0, resolution_floor, grid)
    n = len(space.points)
    order = np.argsort(space.dist, axis=1, kind="stable")
    # widest[x][k] = max pairwise distance among the k nearest points to x
    # (the nearest point is x itself); balls grow only at realized distances
    widest = np.zeros((n, n + 1))
    for x in range(n):
        ids = order[x]
        best = 0.0
        for k in range(1, n):
            best = max(best, float(space.dist[ids[k], ids[:k]].max()))
            widest[x, k + 1] = best
    for eps in eps_list:
        counts = (space.dist <= eps).sum(axis=1)
        for x in range(n):
            if not widest[x, counts[x]] > eps / r_const:
                return PerfectnessCertificate(
                    r_const, "two-point", eps0, resolution_floor, False,
                    witness=(space.points[x], float(eps)),
                    checked_eps=len(eps_list),
                )
    return PerfectnessCertificate(
        r_const, "two-point", eps0, resolution_floor, True, checked_eps=len(eps_list)
    )


def rescale_eps0(s: float, eps0: float, eps0_new: float) -> float:
    """Constant for moving a perfectness certificate to a new scale cap:
    S' = S * max(1, eps0'/eps0)."""
    if s <= 1 or eps0 <= 0 or eps0_new <= 0:
        raise InvalidInputError("need S > 1 and positive scale caps")
    return s * max(1.0, eps0_new / eps0)


def one_point_to_two_point_constant(s: float) -> float:
    """R = S^2/(S-1): an S-uniformly-perfect space satisfies the two-point form."""
    if s <= 1:
        raise InvalidInputError("need S > 1")
    return s * s / (s - 1)


def two_point_to_one_point_constant(r_const: float) -> float:
    """S = 2R: the two-point form with constant R gives uniform perfectness."""
    if r_const <= 1:
        raise InvalidInputError("need R > 1")
    return 2 * r_const


# ---------------------------------------------------------------------------
# Strongly bounded geometry
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeometryProfile:
    """Observed multiplicity bound: M exceeds every |A_eps ∩ B(x, K*eps)| seen."""

    m: int
    k: float
    max_count: int
    worst_scale: float
    worst_point: str


def strongly_bounded_geometry_profile(
    space: FiniteMetricSpace, k: float, scales: Iterable[float]
) -> GeometryProfile:
    """For each scale eps build the greedy eps-approximation and count its
    points inside the open ball B(x, K*eps); returns M = 1 + the overall max."""
    scales = [float(e) for e in scales]
    if not scales:
        raise InvalidInputError("need at least one scale")
    if any(e <= 0 for e in scales):
        raise InvalidInputError("scales must be positive")
    if k <= 0:
        raise InvalidInputError("need K > 0")
    idx = space.index
    best = (-1, 0.0, space.points[0])
    for eps in scales:
        net = [idx[p] for p in greedy_separated(space, eps)]
        sub = space.dist[:, net]
        counts = (sub < k * eps).sum(axis=1)
        x = int(counts.argmax())
        if int(counts[x]) > best[0]:
            best = (int(counts[x]), eps, space.points[x])
    return GeometryProfile(best[0] + 1, k, best[0], best[1], best[2])


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------


def cantor_sample(depth: int) -> FiniteMetricSpace:
    """Left endpoints of the depth-level middle-thirds intervals, line metric.

    2^depth points named by their {0,2}-ternary code.  The resolution floor
    is the smallest realized distance, 2 * 3^-depth (sibling endpoints);
    below it the sample resolves nothing and no annulus is non-empty.
    """
    if depth < 1:
        raise InvalidInputError("need depth >= 1")
    offsets = []
    names = []
    for code in range(2**depth):
        t = 0
        for bit in range(depth):
            if (code >> (depth - 1 - bit)) & 1:
                t += 2 * 3 ** (depth - 1 - bit)
        offsets.append(t)
        names.append("c" + format(code, f"0{depth}b"))
    scale = 3.0**-depth
    return _integer_line_space(offsets, scale, names, resolution_floor=2 * scale)


def interval_sample(n: int) -> FiniteMetricSpace:
    """n equally spaced points on [0, 1]; resolution floor is the step."""
    if n < 2:
        raise InvalidInputError("need n >= 2")
    step = 1.0 / (n - 1)
    return _integer_line_space(
        range(n), step, [f"i{i}" for i in range(n)], resolution_floor=step
    )


def two_point(d: float = 1.0) -> FiniteMetricSpace:
    """The two-point space {p, q} at distance d."""
    if d <= 0:
        raise InvalidInputError("need d > 0")
    return FiniteMetricSpace(("p", "q"), np.array([[0.0, d], [d, 0.0]]))
