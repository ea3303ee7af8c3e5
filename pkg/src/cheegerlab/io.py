"""Byte-stable JSON file formats for graphs, metric spaces, trees, leveled
graphs and decompositions.

Dumps are canonical: sorted object keys, two-space indent, a trailing
newline, vertex/edge arrays sorted, rationals rendered as fraction strings.
Loading re-validates every structural invariant.  Metric-space point order is
preserved (greedy scans depend on it); everything else is order-free.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .approximation import LeveledGraph
from .decomposition import DecompositionSpec, PieceCertificate
from .errors import InvalidInputError
from .graphs import Graph
from .metric import FiniteMetricSpace
from .trees import RootedTree


def canonical_json_bytes(payload: Any) -> bytes:
    return (json.dumps(payload, sort_keys=True, indent=2, allow_nan=False) + "\n").encode()


def write_canonical(path: str | Path, payload: Any) -> None:
    Path(path).write_bytes(canonical_json_bytes(payload))


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: not valid JSON ({exc})") from None


def sha256_file(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def fraction_str(x: Fraction) -> str:
    return str(Fraction(x))


def parse_fraction(text: str | int) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"bad rational {text!r}: {exc}") from None


# -- graphs -----------------------------------------------------------------


def graph_payload(g: Graph) -> dict:
    payload = {
        "vertices": sorted(g.vertices),
        "edges": sorted([u, v] for u, v in g.edges),
    }
    if g.frontier:
        payload["frontier"] = sorted(g.frontier)
    return payload


def graph_from_payload(data: dict, require_connected: bool = True) -> Graph:
    if not isinstance(data, dict) or "vertices" not in data or "edges" not in data:
        raise InvalidInputError("graph document needs 'vertices' and 'edges'")
    return Graph.from_edges(
        [(str(u), str(v)) for u, v in data["edges"]],
        vertices=[str(v) for v in data["vertices"]],
        frontier=[str(v) for v in data.get("frontier", [])],
        require_connected=require_connected,
    )


def save_graph(path: str | Path, g: Graph) -> None:
    write_canonical(path, graph_payload(g))


def load_graph(path: str | Path, require_connected: bool = True) -> Graph:
    return graph_from_payload(read_json(path), require_connected)


# -- metric spaces ------------------------------------------------------------


def metric_payload(space: FiniteMetricSpace) -> dict:
    payload = {
        "points": list(space.points),
        "dist": [[float(x) for x in row] for row in space.dist],
    }
    if space.resolution_floor is not None:
        payload["resolution_floor"] = float(space.resolution_floor)
    return payload


def metric_from_payload(data: dict) -> FiniteMetricSpace:
    if not isinstance(data, dict) or "points" not in data or "dist" not in data:
        raise InvalidInputError("metric document needs 'points' and 'dist'")
    return FiniteMetricSpace(
        tuple(str(p) for p in data["points"]),
        np.asarray(data["dist"], dtype=float),
        data.get("resolution_floor"),
    )


def save_metric(path: str | Path, space: FiniteMetricSpace) -> None:
    write_canonical(path, metric_payload(space))


def load_metric(path: str | Path) -> FiniteMetricSpace:
    return metric_from_payload(read_json(path))


# -- rooted trees -------------------------------------------------------------


def tree_payload(t: RootedTree) -> dict:
    def node(v: str) -> dict:
        out: dict[str, Any] = {"name": v}
        if v in t.live:
            out["live"] = True
        kids = t.children[v]
        if kids:
            out["children"] = [node(c) for c in kids]
        return out

    return node(t.root)


def tree_from_payload(data: dict) -> RootedTree:
    children: dict[str, tuple[str, ...]] = {}
    live: list[str] = []

    def walk(node: dict) -> str:
        if not isinstance(node, dict) or "name" not in node:
            raise InvalidInputError("tree nodes need a 'name'")
        name = str(node["name"])
        if name in children:
            raise InvalidInputError(f"duplicate tree vertex {name!r}")
        kids = node.get("children", [])
        children[name] = ()
        names = tuple(walk(k) for k in kids)
        children[name] = names
        if node.get("live"):
            live.append(name)
        return name

    root = walk(data)
    return RootedTree(root, children, frozenset(live))


def save_tree(path: str | Path, t: RootedTree) -> None:
    write_canonical(path, tree_payload(t))


def load_tree(path: str | Path) -> RootedTree:
    return tree_from_payload(read_json(path))


# -- leveled graphs -----------------------------------------------------------


def leveled_payload(lg: LeveledGraph) -> dict:
    return {
        "graph": graph_payload(lg.graph),
        "space": metric_payload(lg.space),
        "r": float(lg.r),
        "k0": lg.k0,
        "k_max": lg.k_max,
        "level": {v: lg.level[v] for v in sorted(lg.level)},
        "center": {v: lg.center[v] for v in sorted(lg.center)},
        "radius": {v: float(lg.radius[v]) for v in sorted(lg.radius)},
    }


def leveled_from_payload(data: dict) -> LeveledGraph:
    graph = graph_from_payload(data["graph"])
    space = metric_from_payload(data["space"])
    lg = LeveledGraph(
        graph,
        space,
        float(data["r"]),
        int(data["k0"]),
        int(data["k_max"]),
        {str(v): int(k) for v, k in data["level"].items()},
        {str(v): str(p) for v, p in data["center"].items()},
        {str(v): float(x) for v, x in data["radius"].items()},
    )
    if set(lg.level) != set(graph.vertices):
        raise InvalidInputError("level map must cover exactly the vertices")
    return lg


def save_leveled(path: str | Path, lg: LeveledGraph) -> None:
    write_canonical(path, leveled_payload(lg))


def load_leveled(path: str | Path) -> LeveledGraph:
    return leveled_from_payload(read_json(path))


# -- decompositions -----------------------------------------------------------


def certificate_payload(cert: PieceCertificate) -> dict:
    out: dict[str, Any] = {"kind": cert.kind}
    if cert.root is not None:
        out["root"] = cert.root
    if cert.live:
        out["live"] = sorted(cert.live)
    if cert.f is not None:
        out["f"] = {v: fraction_str(Fraction(x)) for v, x in sorted(cert.f.items())}
    return out


def certificate_from_payload(data: dict) -> PieceCertificate:
    return PieceCertificate(
        kind=str(data.get("kind", "")),
        root=data.get("root"),
        live=frozenset(str(v) for v in data.get("live", [])),
        f={str(v): parse_fraction(x) for v, x in data["f"].items()} if "f" in data else None,
    )


def save_decomposition(path: str | Path, spec: DecompositionSpec) -> None:
    """Write a decomposition document plus the files it references.

    The main document points at the ambient graph and at one certificate file
    per key, all placed next to it with names derived from the stem.
    """
    path = Path(path)
    stem = path.stem
    ambient_name = f"{stem}.ambient.json"
    save_graph(path.parent / ambient_name, spec.ambient)
    cert_refs: dict[str, str] = {}
    for i, key in enumerate(sorted(spec.certificates)):
        name = f"{stem}.cert{i}.json"
        write_canonical(path.parent / name, certificate_payload(spec.certificates[key]))
        cert_refs[key] = name
    write_canonical(
        path,
        {
            "ambient": ambient_name,
            "pieces": {name: sorted(verts) for name, verts in spec.pieces.items()},
            "S1": sorted(spec.s1),
            "S2": sorted(spec.s2),
            "R": spec.radius,
            "r": fraction_str(spec.rate),
            "certificates": cert_refs,
        },
    )


def load_decomposition(path: str | Path) -> DecompositionSpec:
    path = Path(path)
    data = read_json(path)
    for field_name in ("ambient", "pieces", "S1", "S2", "R", "r"):
        if field_name not in data:
            raise InvalidInputError(f"decomposition document misses {field_name!r}")
    ambient = load_graph(path.parent / str(data["ambient"]))
    certs = {
        str(key): certificate_from_payload(read_json(path.parent / str(ref)))
        for key, ref in data.get("certificates", {}).items()
    }
    return DecompositionSpec(
        ambient=ambient,
        pieces={
            str(name): frozenset(str(v) for v in verts)
            for name, verts in data["pieces"].items()
        },
        s1=frozenset(str(s) for s in data["S1"]),
        s2=frozenset(str(s) for s in data["S2"]),
        radius=int(data["R"]),
        rate=parse_fraction(data["r"]),
        certificates=certs,
    )
