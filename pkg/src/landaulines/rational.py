"""Closed-form fibers when each internal vertex carries an incident pair
of external lines.

When two of the external lines at a vertex meet, any transversal of both
either passes through their common point p or lies in their common plane
P.  Picking one of the two options ("black" = through p, "white" = in P)
at every vertex turns the fiber of the incidence problem into a chain of
linear constructions in the Grassmann-Cayley algebra, so each colored
solution is a rational expression in the input lines.  This module
builds those solutions for the one-vertex four-line problem, for trees
of vertices, and for the triangle, together with the exact scalar
factors whose vanishing makes two colored solutions collide.

All outputs are normalized to primitive integer coordinate vectors with
the first nonzero entry positive, so values are reproducible across runs.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .diagram import LandauDiagram
from .geometry import (PlueckerLine, ProjectivePlane, ProjectivePoint,
                       chain_polynomial, common_plane, gca_join,
                       intersection_point, join_as_plane, line_from_points,
                       line_pairing, meet_as_line, meet_as_point,
                       normalize_primitive)
from .scalars import DimensionError, DomainError, _scalar_nonzero
from .schubert import FiberSolution, tree_solve_order, verify_fiber

BLACK, WHITE = "b", "w"


def _check_color(c):
    if c not in (BLACK, WHITE):
        raise DomainError("colors must be %r or %r, got %r" % (BLACK, WHITE, c))
    return c


def primitive_line(L) -> PlueckerLine:
    """Rescale a rational line to primitive integers, first nonzero positive."""
    coords = L.coords if isinstance(L, PlueckerLine) else list(L)
    return PlueckerLine(normalize_primitive(coords), _skip_check=True)


def primitive_point(p) -> ProjectivePoint:
    coords = p.coords if isinstance(p, ProjectivePoint) else list(p)
    return ProjectivePoint(normalize_primitive(coords))


def primitive_plane(P) -> ProjectivePlane:
    coeffs = P.coeffs if isinstance(P, ProjectivePlane) else list(P)
    return ProjectivePlane(normalize_primitive(coeffs))


@dataclass(frozen=True)
class ExternalTriangleData:
    """An incident external pair at one vertex, plus its free lines.

    ``pair`` holds the two incident external lines; ``p`` is their
    common point and ``P`` their common plane; ``free`` are the
    remaining external lines of the vertex (in general position).
    """

    pair: tuple
    p: ProjectivePoint
    P: ProjectivePlane
    free: tuple

    @staticmethod
    def from_lines(M1, M2, *free):
        if _scalar_nonzero(line_pairing(M1, M2)):
            raise DomainError("the two pair lines must be incident")
        p = primitive_point(intersection_point(M1, M2))
        P = primitive_plane(common_plane(M1, M2))
        return ExternalTriangleData((M1, M2), p, P, tuple(free))


def vertex_triangle_data(diagram: LandauDiagram, M, i) -> ExternalTriangleData:
    """Assemble the incident-pair data of internal vertex i from a diagram
    whose H edges join two external lines per vertex."""
    M = list(M)
    tri = next((t for t in diagram.external_triangles if t[2] == i), None)
    if tri is None:
        pairs = [e for e in diagram.H
                 if diagram.owner_of_external(e[0]) == i
                 and diagram.owner_of_external(e[1]) == i]
        if len(pairs) != 1:
            raise DomainError("vertex %d does not carry exactly one "
                              "incident external pair" % i)
        tri = (pairs[0][0], pairs[0][1], i)
    m1, m2 = tri[0], tri[1]
    free = [M[m - 1] for m in diagram.external_lines_of_vertex(i)
            if m not in (m1, m2)]
    return ExternalTriangleData.from_lines(M[m1 - 1], M[m2 - 1], *free)


# ---------------------------------------------------------------------------
# Elementary colored constructions
# ---------------------------------------------------------------------------

def transversal_through_point(p: ProjectivePoint, B, C) -> PlueckerLine:
    """The line through p meeting B and C: (p v B) meet (p v C)."""
    return meet_as_line(join_as_plane(p, B), join_as_plane(p, C))


def transversal_in_plane(P: ProjectivePlane, B, C) -> PlueckerLine:
    """The line in P meeting B and C: (P meet B) v (P meet C)."""
    return line_from_points(meet_as_point(P, B), meet_as_point(P, C))


def three_mass_box_lines(p, P, M3, M4):
    """The two rational transversals of four lines with one incident pair.

    The incident pair enters through its common point p and common plane
    P.  Returns (L_black, L_white): the transversal through p and the
    transversal inside P, both meeting M3 and M4, as primitive lines.
    """
    L_black = transversal_through_point(p, M3, M4)
    L_white = transversal_in_plane(P, M3, M4)
    return primitive_line(L_black), primitive_line(L_white)


# ---------------------------------------------------------------------------
# Triangle
# ---------------------------------------------------------------------------

def _as_sigma(sigma, length):
    s = tuple(sigma)
    if len(s) != length:
        raise DimensionError("expected a coloring of %d triangles" % length)
    for c in s:
        _check_color(c)
    return s


def triangle_concurrency_point(sigma_ext, data) -> ProjectivePoint:
    """For an internal-black coloring, the common point of the three lines.

    Each vertex confines its line to a plane: p_i v M_i when its outer
    triangle is black, P_i when white.  The three planes meet in the point.
    """
    planes = []
    for c, d in zip(sigma_ext, data):
        planes.append(join_as_plane(d.p, d.free[0]) if c == BLACK else d.P)
    return primitive_point(meet_as_point(*planes))


def triangle_coplanarity_plane(sigma_ext, data) -> ProjectivePlane:
    """For an internal-white coloring, the common plane of the three lines.

    Each vertex pins its line to a point: p_i when its outer triangle is
    black, M_i meet P_i when white.  The three points span the plane.
    """
    points = []
    for c, d in zip(sigma_ext, data):
        points.append(d.p if c == BLACK else meet_as_point(d.P, d.free[0]))
    return primitive_plane(join_as_plane(*points))


def triangle_rational_fiber(sigma, data) -> FiberSolution:
    """One fiber point of the triangle with incident external pairs.

    sigma is a coloring in {'b','w'}^4 whose first entry colors the
    inner triangle and the rest the three outer ones.  data is a triple
    of ExternalTriangleData with one free line each.
    """
    sigma = _as_sigma(sigma, 4)
    data = list(data)
    if len(data) != 3 or any(len(d.free) != 1 for d in data):
        raise DimensionError("need three vertices with one free line each")
    ext = sigma[1:]
    lines = []
    meta = {}
    if sigma[0] == BLACK:
        q = triangle_concurrency_point(ext, data)
        meta["point"] = q
        for c, d in zip(ext, data):
            anchor = d.p if c == BLACK else meet_as_point(d.P, d.free[0])
            lines.append(line_from_points(anchor, q))
    else:
        Q = triangle_coplanarity_plane(ext, data)
        meta["plane"] = Q
        for c, d in zip(ext, data):
            if c == BLACK:
                lines.append(line_from_points(d.p, meet_as_point(Q, d.free[0])))
            else:
                lines.append(meet_as_line(d.P, Q))
    lines = [primitive_line(L) for L in lines]
    return FiberSolution(lines, is_real=True, tag=sigma, meta=meta)


def all_triangle_rational_fibers(data):
    """All 16 colored fiber points, keyed by coloring."""
    out = {}
    for sigma in itertools.product((BLACK, WHITE), repeat=4):
        out[sigma] = triangle_rational_fiber(sigma, data)
    return out


def tr_rat_factors(data, sigma_int):
    """Exact scalar factors of the triangle fiber with first color fixed.

    Returns (pair_factors, mixed_factors).  pair_factors maps
    (i, sigma1, sigma2) -- two colorings differing only in the outer
    color at vertex i -- to the pairing of the two rational lines at
    vertex i; it vanishes iff those lines coincide.  mixed_factors maps
    an outer coloring sigma to the pairing of its concurrency point with
    its coplanarity plane; it vanishes iff the internal-black and
    internal-white solutions for sigma coincide.
    """
    sigma_int = _check_color(sigma_int)
    data = list(data)
    fibers = {}
    for ext in itertools.product((BLACK, WHITE), repeat=3):
        fibers[ext] = triangle_rational_fiber((sigma_int,) + ext, data)
    pair_factors = {}
    for ext in itertools.product((BLACK, WHITE), repeat=3):
        for i in range(3):
            if ext[i] == BLACK:
                other = ext[:i] + (WHITE,) + ext[i + 1:]
                s1 = (sigma_int,) + ext
                s2 = (sigma_int,) + other
                val = line_pairing(fibers[ext].lines[i], fibers[other].lines[i])
                pair_factors[(i + 1, s1, s2)] = val
    mixed_factors = {}
    for ext in itertools.product((BLACK, WHITE), repeat=3):
        q = triangle_concurrency_point(ext, data)
        Q = triangle_coplanarity_plane(ext, data)
        mixed_factors[ext] = gca_join(q, Q.extensor())
    return pair_factors, mixed_factors


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------

def tree_rational_fiber(diagram: LandauDiagram, M, sigma) -> FiberSolution:
    """The unique colored fiber point of a tree diagram with incident pairs.

    sigma assigns 'b'/'w' to each internal vertex (in vertex order).
    Vertices are processed in an orientation where each sees exactly two
    remaining constraints beyond its incident pair; a black vertex takes
    the transversal through its pair point, a white one the transversal
    in its pair plane.
    """
    G = diagram.G
    sigma = _as_sigma(sigma, G.ell)
    M = list(M)
    order = tree_solve_order(G, diagram.u.u)
    solved = {}
    for i in order:
        d = vertex_triangle_data(diagram, M, i)
        constraints = list(d.free) + [solved[j] for j in G.neighbors(i)
                                      if j in solved]
        if len(constraints) != 2:
            raise DomainError("vertex %d does not see exactly 2 constraints "
                              "beyond its incident pair" % i)
        if sigma[i - 1] == BLACK:
            L = transversal_through_point(d.p, *constraints)
        else:
            L = transversal_in_plane(d.P, *constraints)
        solved[i] = primitive_line(L)
    lines = [solved[i] for i in range(1, G.ell + 1)]
    sol = FiberSolution(lines, is_real=True, tag=sigma)
    report = verify_fiber(diagram, M, sol)
    sol.residuals = report.residuals
    sol.meta["report"] = report
    return sol


def all_tree_rational_fibers(diagram: LandauDiagram, M):
    """All 2^ell colored fiber points of a tree diagram, keyed by coloring."""
    out = {}
    for sigma in itertools.product((BLACK, WHITE), repeat=diagram.G.ell):
        out[sigma] = tree_rational_fiber(diagram, M, sigma)
    return out


def admissible_colorings(n_triangles, constraint=None):
    """Enumerate colorings in {'b','w'}^n, filtered by an optional
    per-family admissibility predicate.

    For trees and the triangle every coloring is admissible; families
    with interacting triangles supply their own constraint.
    """
    out = []
    for sigma in itertools.product((BLACK, WHITE), repeat=n_triangles):
        if constraint is None or constraint(sigma):
            out.append(sigma)
    return out


# ---------------------------------------------------------------------------
# Cluster-type scalar factors
# ---------------------------------------------------------------------------

def cluster_factor_3mb(columns):
    """<245|13|267> for seven rational columns z1..z7 of a 4 x n matrix.

    The four lines (z1 z2), (z2 z3), (z4 z5), (z6 z7) have an incident
    pair, and the square of this chain polynomial equals the Gram
    determinant of the four lines exactly.
    """
    cols = [list(c) for c in columns]
    if len(cols) != 7 or any(len(c) != 4 for c in cols):
        raise DimensionError("need seven columns of length 4")
    z = [ProjectivePoint([Fraction(v) for v in c]) for c in cols]
    P245 = join_as_plane(z[1], z[3], z[4])
    P267 = join_as_plane(z[1], z[5], z[6])
    return chain_polynomial(P245.extensor(), z[0], z[2], P267.extensor())
