"""Combinatorial model of internal graphs G, pendant vectors u, external
degenerations H, bicolorings, and the assembled Landau diagrams.

Labeling conventions (also the JSON schema's): internal vertices are
1..l in cyclic order; external lines are numbered 1..d cyclically, with
vertex i owning the block of u_i consecutive labels.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import networkx as nx

from .scalars import DimensionError, DomainError

DIAGRAM_SCHEMA = "landau/diagram/1"


class SizeError(ValueError):
    """Input exceeds the supported desk-scale size."""


@dataclass(frozen=True)
class InternalGraph:
    """Simple graph on cyclically labeled vertices 1..ell."""

    ell: int
    edges: frozenset

    def __init__(self, ell, edges):
        norm = set()
        for (i, j) in edges:
            if i == j or not (1 <= i <= ell and 1 <= j <= ell):
                raise DomainError("bad edge (%r,%r)" % (i, j))
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "edges", frozenset(norm))

    def neighbors(self, i):
        out = []
        for (a, b) in self.edges:
            if a == i:
                out.append(b)
            elif b == i:
                out.append(a)
        return sorted(out)

    def degree(self, i):
        return len(self.neighbors(i))

    def nx(self):
        g = nx.Graph()
        g.add_nodes_from(range(1, self.ell + 1))
        g.add_edges_from(self.edges)
        return g

    def triangles(self):
        """Sorted list of 3-cliques as sorted tuples."""
        es = self.edges
        tris = []
        for (a, b, c) in itertools.combinations(range(1, self.ell + 1), 3):
            if (a, b) in es and (a, c) in es and (b, c) in es:
                tris.append((a, b, c))
        return tris

    def automorphisms(self):
        """All vertex permutations preserving the edge set (ell <= 8)."""
        if self.ell > 8:
            raise SizeError("automorphism search limited to ell <= 8")
        autos = []
        for perm in itertools.permutations(range(1, self.ell + 1)):
            mapping = {i + 1: perm[i] for i in range(self.ell)}
            if all((min(mapping[a], mapping[b]), max(mapping[a], mapping[b])) in self.edges
                   for (a, b) in self.edges):
                autos.append(mapping)
        return autos


@dataclass(frozen=True)
class PendantVector:
    u: tuple

    def __init__(self, u):
        u = tuple(int(v) for v in u)
        if any(v < 0 for v in u):
            raise DomainError("pendant counts must be nonnegative")
        object.__setattr__(self, "u", u)

    def __len__(self):
        return len(self.u)

    def __getitem__(self, k):
        return self.u[k]

    def total(self):
        return sum(self.u)


@dataclass(frozen=True)
class Bicoloring:
    """Map from triangle ids (tuples) to 'b' / 'w'."""

    colors: tuple  # tuple of (triangle, color) pairs, sorted

    def __init__(self, colors):
        items = []
        for tri, col in (colors.items() if isinstance(colors, dict) else colors):
            if col not in ("b", "w"):
                raise DomainError("colors must be 'b' or 'w'")
            items.append((tuple(tri), col))
        object.__setattr__(self, "colors", tuple(sorted(items)))

    def as_dict(self):
        return dict(self.colors)

    def __getitem__(self, tri):
        return dict(self.colors)[tuple(tri)]


@dataclass(frozen=True)
class LandauDiagram:
    """G_u together with an external incidence pattern H (possibly empty)."""

    G: InternalGraph
    u: PendantVector
    H: tuple = ()
    sigma: Bicoloring | None = None
    external_triangles: tuple = ()

    def __post_init__(self):
        if len(self.u) != self.G.ell:
            raise DimensionError("pendant vector length != vertex count")
        d = self.u.total()
        for (a, b) in self.H:
            if not (1 <= a <= d and 1 <= b <= d):
                raise DomainError("H edge outside external labels 1..%d" % d)

    @property
    def d(self):
        return self.u.total()

    def external_lines_of_vertex(self, i):
        """Global labels of the external lines attached to internal vertex i (1-based)."""
        start = sum(self.u[k] for k in range(i - 1))
        return list(range(start + 1, start + 1 + self.u[i - 1]))

    def owner_of_external(self, m):
        """Internal vertex owning external line label m."""
        acc = 0
        for i in range(1, self.G.ell + 1):
            acc += self.u[i - 1]
            if m <= acc:
                return i
        raise DomainError("external label out of range")

    def dim_incidence_variety(self):
        return 4 * self.G.ell - len(self.G.edges)


def is_outerplanar(G: InternalGraph) -> bool:
    """True iff G has no K4 or K2,3 topological minor.

    Decided by planarity of G plus an apex vertex joined to every vertex,
    which is equivalent to outerplanarity.
    """
    if G.ell > 12:
        raise SizeError("outerplanarity check limited to ell <= 12")
    g = G.nx()
    apex = 0
    g.add_edges_from((apex, v) for v in range(1, G.ell + 1))
    ok, _ = nx.check_planarity(g)
    return bool(ok)


def has_forbidden_subdivision(G: InternalGraph) -> bool:
    """Direct search for a K4 or K2,3 subdivision (slow oracle for tests)."""
    g = G.nx()

    def disjoint_paths_exist(branch, pairs):
        # try to realize all pairs by internally disjoint paths over non-branch vertices
        others = [v for v in g.nodes if v not in branch]

        def backtrack(idx, used):
            if idx == len(pairs):
                return True
            a, b = pairs[idx]
            # BFS over all simple paths a..b avoiding used and branch-internal vertices
            for path in nx.all_simple_paths(g, a, b, cutoff=len(others) + 1):
                interior = set(path[1:-1])
                if interior & set(branch) or interior & used:
                    continue
                if backtrack(idx + 1, used | interior):
                    return True
            return False

        return backtrack(0, set())

    nodes = list(g.nodes)
    for branch in itertools.combinations(nodes, 4):
        pairs = list(itertools.combinations(branch, 2))
        if disjoint_paths_exist(branch, pairs):
            return True
    for left in itertools.combinations(nodes, 2):
        rest = [v for v in nodes if v not in left]
        for right in itertools.combinations(rest, 3):
            pairs = [(a, b) for a in left for b in right]
            if disjoint_paths_exist(tuple(left) + tuple(right), pairs):
                return True
    return False


def triangles_and_components(G: InternalGraph):
    """(triangle list, 2^tau component count); only valid for outerplanar G."""
    if not is_outerplanar(G):
        raise DomainError("component-count formula requires an outerplanar graph")
    tris = G.triangles()
    return tris, 2 ** len(tris)


def build_H_triangle(G: InternalGraph, u, pair_choice="cyclic-first") -> LandauDiagram:
    """Degenerate diagram G_u plus one external incidence per internal vertex.

    The degenerate edge at vertex i joins two of its external lines; by
    default the two cyclically-first ones.  The joined pair becomes an
    external triangle (colorable), recorded as (m1, m2, i).
    """
    u = u if isinstance(u, PendantVector) else PendantVector(u)
    if any(v < 2 for v in u.u):
        raise DomainError("H-triangle degeneration needs u_i >= 2 at every vertex")
    diagram = LandauDiagram(G, u)
    h_edges = []
    ext_tris = []
    for i in range(1, G.ell + 1):
        ext = diagram.external_lines_of_vertex(i)
        if pair_choice == "cyclic-first":
            a, b = ext[0], ext[1]
        elif pair_choice == "cyclic-last":
            a, b = ext[-2], ext[-1]
        else:
            raise DomainError("unknown pair_choice %r" % pair_choice)
        h_edges.append((a, b))
        ext_tris.append((a, b, i))
    return LandauDiagram(G, u, tuple(h_edges), None, tuple(ext_tris))


class NotReducible:
    """Refusal value of reducibility_split (dimension mismatch, not an error)."""

    def __init__(self, reason):
        self.reason = reason

    def __bool__(self):
        return False

    def __repr__(self):
        return f"NotReducible({self.reason})"


def reducibility_split(diagram: LandauDiagram, V1):
    """Split along V1 when dim V_{G1} = |u restricted to V1|.

    Returns (sub1, sub2, connecting edge list) or a NotReducible value.
    """
    V1 = sorted(set(V1))
    ell = diagram.G.ell
    if not V1 or len(V1) >= ell:
        raise DomainError("V1 must be a nonempty proper vertex subset")
    V2 = [v for v in range(1, ell + 1) if v not in V1]
    inside1 = [(a, b) for (a, b) in diagram.G.edges if a in V1 and b in V1]
    u1 = sum(diagram.u[v - 1] for v in V1)
    dim1 = 4 * len(V1) - len(inside1)
    if u1 != dim1:
        return NotReducible(f"|u restricted| = {u1} != dim V_G1 = {dim1}")
    inside2 = [(a, b) for (a, b) in diagram.G.edges if a in V2 and b in V2]
    crossing = [(a, b) for (a, b) in diagram.G.edges
                if (a in V1) != (b in V1)]

    def induced(vertices, inside):
        remap = {v: k + 1 for k, v in enumerate(vertices)}
        g = InternalGraph(len(vertices), [(remap[a], remap[b]) for (a, b) in inside])
        uu = PendantVector([diagram.u[v - 1] for v in vertices])
        return LandauDiagram(g, uu)

    return induced(V1, inside1), induced(V2, inside2), crossing


# ---------------------------------------------------------------------------
# JSON diagram format
# ---------------------------------------------------------------------------

def diagram_to_json(diagram: LandauDiagram) -> dict:
    out = {
        "schema": DIAGRAM_SCHEMA,
        "ell": diagram.G.ell,
        "edges": sorted([list(e) for e in diagram.G.edges]),
        "u": list(diagram.u.u),
    }
    if diagram.H:
        out["H"] = [list(e) for e in diagram.H]
    if diagram.sigma is not None:
        out["sigma"] = {"-".join(map(str, tri)): col for tri, col in diagram.sigma.colors}
    return out


def diagram_from_json(data) -> LandauDiagram:
    if isinstance(data, str):
        data = json.loads(data)
    ell = int(data["ell"])
    G = InternalGraph(ell, [tuple(e) for e in data.get("edges", [])])
    u = PendantVector(data["u"])
    h = data.get("H")
    sigma_raw = data.get("sigma")
    if h == "triangle":
        diagram = build_H_triangle(G, u)
    else:
        h_edges = tuple(tuple(e) for e in (h or []))
        diagram = LandauDiagram(G, u, h_edges)
    if sigma_raw:
        colors = {tuple(int(x) for x in key.split("-")): col for key, col in sigma_raw.items()}
        diagram = LandauDiagram(diagram.G, diagram.u, diagram.H, Bicoloring(colors),
                                diagram.external_triangles)
    return diagram
