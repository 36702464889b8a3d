"""Projective 3-space line geometry: Plücker coordinates, pairings,
Grassmann-Cayley meet/join, chain polynomials, Gram matrices, and the
dual-variable ingestion map.

Conventions fixed here and inherited everywhere:
  * Plücker coordinate order (p12, p13, p14, p23, p24, p34);
  * pairing <L M> = l12 m34 - l13 m24 + l14 m23 + l23 m14 - l24 m13 + l34 m12;
  * extensors of step k are stored as coefficient vectors on the sorted
    k-subsets of {1,2,3,4} in lexicographic order.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .scalars import (DimensionError, DomainError, GaussianRational,
                      _scalar_nonzero, scalar_to_complex)

# basis index subsets per step
BASIS = {k: [tuple(s) for s in itertools.combinations(range(4), k)] for k in range(5)}
BASIS_INDEX = {k: {s: i for i, s in enumerate(BASIS[k])} for k in range(5)}

# Plücker order (12,13,14,23,24,34) coincides with BASIS[2] lex order on 0-based pairs.
PLUECKER_PAIRS = BASIS[2]


def _merge_sign(s1, s2):
    """Sign of sorting the concatenation of two disjoint sorted tuples; 0 if overlap."""
    if set(s1) & set(s2):
        return 0, None
    merged = s1 + s2
    # count inversions
    inv = 0
    for i in range(len(merged)):
        for j in range(i + 1, len(merged)):
            if merged[i] > merged[j]:
                inv += 1
    return (-1 if inv % 2 else 1), tuple(sorted(merged))


class Extensor:
    """Homogeneous element of step k in the exterior algebra of a 4-space."""

    __slots__ = ("step", "coeffs", "degenerate")

    def __init__(self, step, coeffs, degenerate=False):
        if step not in BASIS:
            raise DimensionError("extensor step must be 0..4")
        coeffs = list(coeffs)
        if len(coeffs) != len(BASIS[step]):
            raise DimensionError("wrong coefficient count for step %d" % step)
        self.step = step
        self.coeffs = coeffs
        self.degenerate = degenerate

    def is_zero(self):
        return not any(_scalar_nonzero(c) for c in self.coeffs)

    def __add__(self, other):
        if self.step != other.step:
            raise DimensionError("adding extensors of different steps")
        return Extensor(self.step, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        if self.step != other.step:
            raise DimensionError("subtracting extensors of different steps")
        return Extensor(self.step, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, s):
        return Extensor(self.step, [c * s for c in self.coeffs])

    def wedge(self, other):
        step = self.step + other.step
        if step > 4:
            raise DomainError("join overflows step 4")
        out = [0] * len(BASIS[step])
        for s1, c1 in zip(BASIS[self.step], self.coeffs):
            if not _scalar_nonzero(c1):
                continue
            for s2, c2 in zip(BASIS[other.step], other.coeffs):
                if not _scalar_nonzero(c2):
                    continue
                sign, merged = _merge_sign(s1, s2)
                if sign:
                    idx = BASIS_INDEX[step][merged]
                    out[idx] = out[idx] + sign * c1 * c2
        return Extensor(step, out)

    def dual(self):
        """Hodge star: e_S -> sign(S, S^c) e_{S^c}."""
        costep = 4 - self.step
        out = [0] * len(BASIS[costep])
        for s, c in zip(BASIS[self.step], self.coeffs):
            comp = tuple(sorted(set(range(4)) - set(s)))
            sign, _ = _merge_sign(s, comp)
            out[BASIS_INDEX[costep][comp]] = sign * c
        return Extensor(costep, out)

    def __repr__(self):
        return f"Extensor(step={self.step}, {self.coeffs})"


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

class ProjectivePoint:
    """Point of P^3: four homogeneous coordinates, not all zero."""

    __slots__ = ("coords",)

    def __init__(self, coords):
        coords = list(coords)
        if len(coords) != 4:
            raise DimensionError("a projective point has 4 coordinates")
        if not any(_scalar_nonzero(c) for c in coords):
            raise DomainError("zero vector is not a projective point")
        self.coords = coords

    def extensor(self):
        return Extensor(1, self.coords)

    def __repr__(self):
        return f"ProjectivePoint({self.coords})"


class ProjectivePlane:
    """Plane of P^3 as a step-3 extensor coefficient vector.

    covector() converts to the usual plane covector (a,b,c,d) with
    a x1 + b x2 + c x3 + d x4 = 0 via the Hodge dual.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        if len(coeffs) != 4:
            raise DimensionError("a plane extensor has 4 coordinates")
        if not any(_scalar_nonzero(c) for c in coeffs):
            raise DomainError("zero vector is not a plane")
        self.coeffs = coeffs

    def extensor(self):
        return Extensor(3, self.coeffs)

    def covector(self):
        return self.extensor().dual().coeffs

    @staticmethod
    def from_covector(cov):
        e = Extensor(1, list(cov)).dual()
        # dual of dual is +/- identity; undo the sign so round trips agree
        back = e.dual()
        sign = None
        for a, b in zip(back.coeffs, cov):
            if _scalar_nonzero(a):
                sign = 1 if a == b else -1
                break
        coeffs = e.coeffs if sign == 1 else [-c for c in e.coeffs]
        return ProjectivePlane(coeffs)

    def __repr__(self):
        return f"ProjectivePlane({self.coeffs})"


class PlueckerLine:
    """A line in P^3 via six Plücker coordinates (p12,p13,p14,p23,p24,p34).

    Constructed lines satisfy the Plücker quadric.  The ``ambient``
    constructor admits arbitrary 6-vectors ("ambient P^5 mode") for the
    pentabox resultant, which works on the whole P^5.
    """

    __slots__ = ("coords", "ambient_mode")

    def __init__(self, coords, ambient=False, _skip_check=False):
        coords = list(coords)
        if len(coords) != 6:
            raise DimensionError("a Plücker vector has 6 coordinates")
        if not any(_scalar_nonzero(c) for c in coords):
            raise DomainError("zero Plücker vector")
        self.coords = coords
        self.ambient_mode = ambient
        if not ambient and not _skip_check:
            q = self.quadric_value()
            if isinstance(q, (float, complex)):
                scale = max(_magnitude(c) for c in coords)
                if abs(q) > 1e-9 * (scale * scale + 1e-300):
                    raise DomainError("Plücker quadric violated: %r" % q)
            elif _scalar_nonzero(q):
                raise DomainError("Plücker quadric violated: %r" % q)

    @staticmethod
    def ambient(coords):
        """Raw 6-vector not required to satisfy the quadric."""
        return PlueckerLine(coords, ambient=True)

    def quadric_value(self):
        p = self.coords
        return p[0] * p[5] - p[1] * p[4] + p[2] * p[3]

    def extensor(self):
        return Extensor(2, self.coords)

    def antisymmetric_matrix(self):
        """4x4 matrix P with P[i][j] = p_ij (rows of spanning points come out of P.w)."""
        p = self.coords
        z = p[0] * 0
        return [[z, p[0], p[1], p[2]],
                [-p[0], z, p[3], p[4]],
                [-p[1], -p[3], z, p[5]],
                [-p[2], -p[4], -p[5], z]]

    def spanning_points(self):
        """Two independent points on the line, via columns of the Plücker matrix."""
        mat = self.antisymmetric_matrix()
        cols = [[mat[r][c] for r in range(4)] for c in range(4)]
        cols = [c for c in cols if any(_scalar_nonzero(v) for v in c)]
        first = cols[0]
        for other in cols[1:]:
            test = line_from_points_raw(first, other)
            if test is not None:
                return ProjectivePoint(first), ProjectivePoint(other)
        raise DomainError("could not extract two independent points (degenerate line)")

    def scale(self, s):
        return PlueckerLine([c * s for c in self.coords], ambient=self.ambient_mode,
                            _skip_check=True)

    def __repr__(self):
        return f"PlueckerLine({self.coords})"


class LineConfiguration:
    """Ordered list of lines: the external data M or internal data L."""

    __slots__ = ("lines",)

    def __init__(self, lines):
        self.lines = list(lines)

    def __len__(self):
        return len(self.lines)

    def __getitem__(self, k):
        return self.lines[k]

    def __iter__(self):
        return iter(self.lines)


class DualPoint4:
    """A dual (region) variable (x0, x1, x2, x3)."""

    __slots__ = ("x",)

    def __init__(self, x):
        x = list(x)
        if len(x) != 4:
            raise DimensionError("dual point has 4 components")
        self.x = x


def _magnitude(c):
    try:
        return abs(c)
    except TypeError:
        return abs(scalar_to_complex(c))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def line_from_points_raw(a, b):
    """Plücker 6-vector of the line through coordinate 4-vectors a, b; None if dependent."""
    coords = [a[i] * b[j] - a[j] * b[i] for (i, j) in PLUECKER_PAIRS]
    if not any(_scalar_nonzero(c) for c in coords):
        return None
    return coords


def line_from_points(a: ProjectivePoint, b: ProjectivePoint) -> PlueckerLine:
    """Line spanned by two points; p_ij = a_i b_j - a_j b_i."""
    coords = line_from_points_raw(a.coords, b.coords)
    if coords is None:
        raise DomainError("proportional points span no line")
    return PlueckerLine(coords, _skip_check=True)


_PAIRING_SIGNS = (1, -1, 1, 1, -1, 1)  # signs against the reversed coordinate order


def line_pairing(L, M):
    """<L M> = l12 m34 - l13 m24 + l14 m23 + l23 m14 - l24 m13 + l34 m12."""
    a = L.coords if isinstance(L, PlueckerLine) else list(L)
    b = M.coords if isinstance(M, PlueckerLine) else list(M)
    acc = None
    for k in range(6):
        term = _PAIRING_SIGNS[k] * a[k] * b[5 - k]
        acc = term if acc is None else acc + term
    return acc


def _as_extensor(x):
    if isinstance(x, Extensor):
        return x
    if isinstance(x, ProjectivePoint):
        return x.extensor()
    if isinstance(x, ProjectivePlane):
        return x.extensor()
    if isinstance(x, PlueckerLine):
        return x.extensor()
    if isinstance(x, (list, tuple)):
        if len(x) == 4:
            return Extensor(1, list(x))
        if len(x) == 6:
            return Extensor(2, list(x))
    raise DomainError("cannot interpret %r as an extensor" % (x,))


def gca_join(*args):
    """Join (wedge) of points/lines/planes; a step-4 result is returned as a scalar."""
    exts = [_as_extensor(a) for a in args]
    out = exts[0]
    for e in exts[1:]:
        out = out.wedge(e)
    if out.step == 4:
        return out.coeffs[0]
    return out


def gca_meet(*args):
    """Meet of planes/lines: join in Hodge-dual coordinates, dualized back.

    Degenerate meets (contained/identical arguments) return a zero
    extensor flagged ``degenerate`` instead of raising.
    """
    exts = [_as_extensor(a) for a in args]
    costeps = [4 - e.step for e in exts]
    if sum(costeps) > 4:
        raise DomainError("meet overflows: co-steps sum past 4")
    out = exts[0].dual()
    for e in exts[1:]:
        out = out.wedge(e.dual())
    result = out.dual()
    if result.is_zero():
        return Extensor(result.step, result.coeffs, degenerate=True)
    return result


def meet_as_point(*args):
    e = gca_meet(*args)
    if e.step != 1:
        raise DomainError("meet did not produce a point")
    if e.is_zero():
        raise DomainError("degenerate meet: no unique point")
    return ProjectivePoint(e.coeffs)


def meet_as_line(*args):
    e = gca_meet(*args)
    if e.step != 2:
        raise DomainError("meet did not produce a line")
    if e.is_zero():
        raise DomainError("degenerate meet: no unique line")
    return PlueckerLine(e.coeffs, _skip_check=True)


def join_as_plane(*args):
    e = gca_join(*args)
    if not isinstance(e, Extensor) or e.step != 3:
        raise DomainError("join did not produce a plane")
    if e.is_zero():
        raise DomainError("degenerate join: arguments dependent")
    return ProjectivePlane(e.coeffs)


def chain_polynomial(P, d, e, Q):
    """<P | de | Q> = <P v d><e v Q> - <P v e><d v Q> for step-3 P, Q."""
    Pe = _as_extensor(P)
    Qe = _as_extensor(Q)
    de = _as_extensor(d)
    ee = _as_extensor(e)
    if Pe.step != 3 or Qe.step != 3:
        raise DimensionError("chain polynomial outer slots must be planes")
    return (Pe.wedge(de).coeffs[0] * ee.wedge(Qe).coeffs[0]
            - Pe.wedge(ee).coeffs[0] * de.wedge(Qe).coeffs[0])


def gram_matrix(lines):
    """Symmetric matrix of pairwise pairings <M_i M_j> with zero diagonal."""
    ls = list(lines)
    if len(ls) < 2:
        raise DimensionError("Gram matrix needs at least two lines")
    n = len(ls)
    g = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            v = line_pairing(ls[i], ls[j])
            g[i][j] = v
            g[j][i] = v
    return g


def twistor_from_dual_point(x) -> PlueckerLine:
    """Line of the 2x4 matrix [[1,0,x0+x3,x1-i x2],[0,1,x1+i x2,x0-x3]]."""
    if isinstance(x, DualPoint4):
        x = x.x
    x0, x1, x2, x3 = (Fraction(v) if not isinstance(v, (Fraction, int)) else v for v in x)
    i_unit = GaussianRational.i()
    row1 = [GaussianRational(1), GaussianRational(0),
            GaussianRational(x0 + x3), GaussianRational(x1) - i_unit * GaussianRational(x2)]
    row2 = [GaussianRational(0), GaussianRational(1),
            GaussianRational(x1) + i_unit * GaussianRational(x2), GaussianRational(x0 - x3)]
    return line_from_points(ProjectivePoint(row1), ProjectivePoint(row2))


def hodge_dual(e):
    """Hodge star on any extensor-like input; lines come back as lines."""
    ext = _as_extensor(e).dual()
    if isinstance(e, PlueckerLine):
        return PlueckerLine(ext.coeffs, ambient=e.ambient_mode, _skip_check=True)
    if isinstance(e, ProjectivePoint):
        return ProjectivePlane(ext.coeffs)
    if isinstance(e, ProjectivePlane):
        return ProjectivePoint(ext.coeffs)
    return ext


def intersection_point(L1: PlueckerLine, L2: PlueckerLine) -> ProjectivePoint:
    """Common point of two incident lines (pairing ~ 0).

    Computed as P1 . (Q2 . w): Q2's columns are planes through L2, and
    applying the Plücker matrix of L1 to a plane gives the point where L1
    pierces it.  The probe w with the largest output is kept.
    """
    P1 = L1.antisymmetric_matrix()
    Q2 = hodge_dual(L2).antisymmetric_matrix()
    best, best_mag = None, None
    for w in range(4):
        plane = [Q2[r][w] for r in range(4)]
        pt = [sum(P1[r][k] * plane[k] for k in range(4)) for r in range(4)]
        mag = sum(_magnitude(v) for v in pt)
        if not any(_scalar_nonzero(v) for v in pt):
            continue
        if best is None or mag > best_mag:
            best, best_mag = pt, mag
    if best is None:
        raise DomainError("lines do not meet (or are identical)")
    return ProjectivePoint(best)


def common_plane(L1: PlueckerLine, L2: PlueckerLine) -> ProjectivePlane:
    """Common plane of two incident (coplanar) lines."""
    a, b = L1.spanning_points()
    for pt in (a, b):
        e = gca_join(L2, pt)
        if isinstance(e, Extensor) and e.step == 3 and not e.is_zero():
            return ProjectivePlane(e.coeffs)
    raise DomainError("no common plane (lines coincide?)")


def point_on_line(pt: ProjectivePoint, L: PlueckerLine):
    """Value list of the incidence conditions of a point lying on a line (all zero iff on)."""
    e = gca_join(pt, L)
    return e.coeffs  # step-3 extensor components


def normalize_primitive(vec):
    """Clear denominators to a primitive integer vector, first nonzero entry positive."""
    fr = [Fraction(v) for v in vec]
    from math import gcd
    den = 1
    for f in fr:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in fr]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g:
        ints = [v // g for v in ints]
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-w for w in ints]
            break
    return ints


def normalize_float(vec):
    """Scale a float/complex vector by its largest-magnitude entry."""
    mags = [abs(complex(v)) for v in vec]
    k = max(range(len(vec)), key=lambda i: mags[i])
    pivot = vec[k]
    return [complex(v) / pivot for v in vec]
