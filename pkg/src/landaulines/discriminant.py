"""Closed formulas and recursions for line-configuration discriminants.

The box discriminant and the five-line resultant are Gram determinants.
The pentabox discriminant has an exact determinantal formula: four linear
forms and two quadrics in six unknowns, eliminated through a Bezoutian
block determinant of size 10x10.  Reducible diagrams factor through
substitution of box branches, and the double-box mixed discriminant is
the discriminant of the quartic pencil of two quadric surfaces.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .diagram import LandauDiagram
from .geometry import (PlueckerLine, ProjectivePoint, Extensor, gca_join,
                       chain_polynomial, gram_matrix, line_pairing,
                       line_from_points_raw)
from .scalars import (ConsistencyError, DimensionError, DomainError,
                      QuadExtContext, UnivariatePolynomial, generic_det,
                      interpolate_exact, scalar_to_complex,
                      univariate_discriminant, _scalar_nonzero)
from .schubert import (box_quadratic, box_line_at, spanning_pair_rref,
                       _line_is_exact, _SPAN_MIXES)


def ls_disc_box(M1, M2, M3, M4):
    """Determinant of the 4x4 pairing Gram matrix of four lines.

    Vanishes exactly when the two transversals of the four lines coincide.
    """
    return generic_det(gram_matrix([M1, M2, M3, M4]))


def sls_res_penta(M1, M2, M3, M4, M5):
    """Determinant of the 5x5 pairing Gram matrix of five lines.

    Vanishes exactly when the five lines admit a common transversal.
    """
    return generic_det(gram_matrix([M1, M2, M3, M4, M5]))


# ---------------------------------------------------------------------------
# Exact pentabox resultant
# ---------------------------------------------------------------------------

def _adjugate3(S):
    """Adjugate of a symmetric 3x3 matrix."""
    a = [[None] * 3 for _ in range(3)]
    idx = ((0, 1, 2), (1, 2, 0), (2, 0, 1))
    for i in range(3):
        for j in range(3):
            r1, r2 = [r for r in range(3) if r != j]
            c1, c2 = [c for c in range(3) if c != i]
            minor = S[r1][c1] * S[r2][c2] - S[r1][c2] * S[r2][c1]
            a[i][j] = minor if (i + j) % 2 == 0 else -minor
    return a


def _divided_difference_quadric(coeffs, i):
    """Linear form (x-part, y-part) of the i-th divided difference of
    sum_{p<=q} c_pq x_p x_q (0-based index i)."""
    n = 6
    xv = [coeffs[i][q] if q > i else 0 for q in range(n)]
    yv = [coeffs[p][i] if p < i else 0 for p in range(n)]
    cii = coeffs[i][i]
    xv[i] = xv[i] + cii
    yv[i] = yv[i] + cii
    return xv, yv


def pentabox_resultant_exact(A, B, C, D, E, F, G):
    """(Res, det Gram6, Res / det^2) for seven lines.

    X = x1 A + ... + x5 E + x6 G is made to meet A, B, C, D (four linear
    forms), lie on the line quadric (one quadric), and share its E,F,G
    transversal pencil degeneration (a second quadric); the resultant of
    these six equations is a 10x10 block determinant built from the
    Bezoutian of the system.
    """
    base = [A, B, C, D, E, G]
    # independence of the chosen basis as 6-vectors
    mat = [list(L.coords) for L in base]
    if not _scalar_nonzero(generic_det(mat)):
        raise DomainError("basis lines A,B,C,D,E,G are linearly dependent")
    G6 = gram_matrix(base)
    detG = generic_det(G6)
    if not _scalar_nonzero(detG):
        raise DomainError("Gram matrix of the basis lines is singular; "
                          "the quotient Res/det^2 is undefined")

    T = [G6[i] for i in range(4)]  # four linear forms, rows of the Gram

    # first quadric: the Pluecker relation sum_{p<q} g_pq x_p x_q
    c5 = [[G6[p][q] if p < q else 0 for q in range(6)] for p in range(6)]

    # second quadric: det of the 4x4 Gram of (E, F, G, X) as a form in x
    S = gram_matrix([E, F, G])
    adjS = _adjugate3(S)
    L = [[line_pairing(W, base[j]) for j in range(6)] for W in (E, F, G)]
    Q6 = [[None] * 6 for _ in range(6)]
    for p in range(6):
        for q in range(6):
            acc = 0
            for a in range(3):
                for b in range(3):
                    acc = acc + L[a][p] * adjS[a][b] * L[b][q]
            Q6[p][q] = -acc
    c6 = [[0] * 6 for _ in range(6)]
    for p in range(6):
        c6[p][p] = Q6[p][p]
        for q in range(p + 1, 6):
            c6[p][q] = 2 * Q6[p][q]

    # Bezoutian: mixed x_i y_j coefficients of det of the divided-difference
    # matrix; columns 1..4 are constant, so a Laplace expansion along the two
    # quadric columns reduces everything to 4x4 numeric minors
    d5 = [_divided_difference_quadric(c5, i) for i in range(6)]
    d6 = [_divided_difference_quadric(c6, i) for i in range(6)]
    Bez = [[0] * 6 for _ in range(6)]
    for r in range(6):
        for s in range(6):
            if r == s:
                continue
            rows = [i for i in range(6) if i not in (r, s)]
            minor = generic_det([[T[j][i] for j in range(4)] for i in rows])
            sign = 1 if (r + s) % 2 else -1  # (-1)^(r+s+1) in 1-based labels
            if s < r:
                sign = -sign
            ax, ay = d5[r]
            bx, by = d6[s]
            for i in range(6):
                for j in range(6):
                    Bez[i][j] = Bez[i][j] + sign * minor * (
                        ax[i] * by[j] + bx[i] * ay[j])

    big = [[Bez[i][j] for j in range(6)] + [T[r][i] for r in range(4)]
           for i in range(6)]
    big += [[T[r][j] for j in range(6)] + [0] * 4 for r in range(4)]
    res = generic_det(big)
    return res, detG, res / detG ** 2


# ---------------------------------------------------------------------------
# Recursion via box substitution
# ---------------------------------------------------------------------------

#: ratio (exact pentabox quotient) / (box-branch product), fixed once at a
#: rational fixture; see tests for the executable calibration
PENTABOX_RECURSION_CONSTANT = None  # calibrated lazily on first use

_CALIBRATION_POINT_PAIRS = [
    ((1, 0, 0, 1), (0, 1, 2, -1)),
    ((1, 1, 0, 0), (0, 0, 1, 3)),
    ((2, -1, 1, 0), (1, 0, 0, 2)),
    ((1, 2, 3, 1), (0, 1, -1, 2)),
    ((3, 0, 1, 1), (1, 1, 1, -1)),
    ((1, -2, 0, 1), (2, 1, 1, 0)),
    ((0, 1, 1, 1), (1, 3, 0, -2)),
]


def _calibration_fixture():
    from .geometry import line_from_points
    return [line_from_points(ProjectivePoint([Fraction(c) for c in p]),
                             ProjectivePoint([Fraction(c) for c in q]))
            for p, q in _CALIBRATION_POINT_PAIRS]


def _exact_span_pair(L):
    """Spanning points whose wedge reproduces L itself, not a multiple."""
    q1, q2 = spanning_pair_rref(L)
    wedge = line_from_points_raw(q1.coords, q2.coords)
    kappa = None
    for w, c in zip(wedge, L.coords):
        if _scalar_nonzero(c):
            kappa = w / c
            break
    return ProjectivePoint([c / kappa for c in q1.coords]), q2


def box_branch_product(A, B, C, D, evaluate, tol=1e-9):
    """prod over the two box branches of evaluate(X_branch), normalized so the
    recursion carries no extraneous factor.

    The branches are the transversals of A,B,C,D; evaluate must be homogeneous
    of degree 2 in its line argument.  The normalizing factor
    (2 a2)^4 / (<BC><BD><CD>)^2 is the fourth power of the branch scaling
    eps = 2 a2 / sqrt(<BC><BD><CD>).
    """
    exact = all(_line_is_exact(L) for L in (A, B, C, D))
    d1_0, d2_0 = spanning_pair_rref(D)
    coeffs = d1 = d2 = None
    for (a, b) in _SPAN_MIXES:
        d1 = ProjectivePoint([u + a * v for u, v in zip(d1_0.coords, d2_0.coords)])
        d2 = ProjectivePoint([b * u + v for u, v in zip(d1_0.coords, d2_0.coords)])
        # normalize so that d1 wedge d2 equals D itself, not a multiple;
        # the branch scaling below assumes this
        wedge = line_from_points_raw(d1.coords, d2.coords)
        kappa = None
        for w, dcoord in zip(wedge, D.coords):
            if _scalar_nonzero(dcoord):
                kappa = w / dcoord
                break
        d1 = ProjectivePoint([c / kappa for c in d1.coords])
        cand = box_quadratic(A, B, C, D, d1, d2)
        if _scalar_nonzero(cand.a2):
            coeffs = cand
            break
    if coeffs is None:
        raise DomainError("all spanning mixes give a degenerate pencil")
    # the chain coefficients are bilinear in the spanning pair of B; undo
    # the scale its reduced spanning pair loses against B itself
    b1, b2 = spanning_pair_rref(B)
    wedge_b = line_from_points_raw(b1.coords, b2.coords)
    kappa_b = None
    for w, bcoord in zip(wedge_b, B.coords):
        if _scalar_nonzero(bcoord):
            kappa_b = w / bcoord
            break
    a2_true = coeffs.a2 / kappa_b
    norm = (2 * a2_true) ** 4 / (line_pairing(B, C) * line_pairing(B, D)
                                 * line_pairing(C, D)) ** 2
    delta = coeffs.discriminant()
    if exact:
        ctx = QuadExtContext(delta)
        lift = lambda L: PlueckerLine([ctx.from_base(c) for c in L.coords],
                                      _skip_check=True)
        Bl, Cl = lift(B), lift(C)
        d1l = ProjectivePoint([ctx.from_base(c) for c in d1.coords])
        d2l = ProjectivePoint([ctx.from_base(c) for c in d2.coords])
        total = None
        for sign in (1, -1):
            x = ctx.element(-coeffs.a1, sign) / (2 * ctx.from_base(coeffs.a2))
            X = box_line_at(x, Bl, Cl, d1l, d2l)
            v = evaluate(X)
            total = v if total is None else total * v
        return norm * total.rational_part()
    sq = np.sqrt(complex(delta))
    total = 1.0
    for sign in (1, -1):
        x = (-complex(coeffs.a1) + sign * sq) / (2 * complex(coeffs.a2))
        X = box_line_at(x, B, C, d1, d2)
        total = total * complex(evaluate(X))
    scale = abs(total) + 1.0
    if abs(total.imag) > tol * scale:
        raise ConsistencyError("branch values are not conjugate: product "
                               "has imaginary part %r" % (total.imag,))
    return complex(norm) * total


def disc_via_recursion(diagram: LandauDiagram, M, base="box-gram", tol=1e-9):
    """Discriminant/resultant of a reducible two-vertex diagram as a product
    of base values over the two box branches of the degree-4 vertex.

    base = "box-gram" evaluates the 4x4 Gram determinant at the second
    vertex (three pendants there), base = "penta-gram" the 5x5 Gram
    determinant (four pendants there).
    """
    G = diagram.G
    u = tuple(diagram.u.u)
    if G.ell != 2 or sorted(G.edges) != [(1, 2)]:
        raise DomainError("recursion evaluator supports the two-vertex graph")
    try:
        i4 = u.index(4) + 1
    except ValueError:
        raise DomainError("recursion needs a vertex of degree u_i = 4") from None
    other = 3 - i4
    M = list(M)
    M1 = [M[m - 1] for m in diagram.external_lines_of_vertex(i4)]
    M2 = [M[m - 1] for m in diagram.external_lines_of_vertex(other)]
    if base == "box-gram":
        if len(M2) != 3:
            raise DomainError("box-gram base needs u = (4,3)")
        evaluate = lambda X: ls_disc_box(X, *M2)
    elif base == "penta-gram":
        if len(M2) != 4:
            raise DomainError("penta-gram base needs u = (4,4)")
        evaluate = lambda X: sls_res_penta(X, *M2)
    else:
        raise DomainError("unknown base %r" % (base,))
    return box_branch_product(*M1, evaluate, tol=tol)


def pentabox_recursion_constant():
    """Ratio of the exact pentabox quotient to the branch product, fixed at
    the stored rational fixture."""
    global PENTABOX_RECURSION_CONSTANT
    if PENTABOX_RECURSION_CONSTANT is None:
        lines = _calibration_fixture()
        _, _, delta = pentabox_resultant_exact(*lines)
        prod = box_branch_product(
            *lines[:4], lambda X: ls_disc_box(X, lines[4], lines[5], lines[6]))
        PENTABOX_RECURSION_CONSTANT = Fraction(delta) / Fraction(prod)
    return PENTABOX_RECURSION_CONSTANT


# ---------------------------------------------------------------------------
# Quadric surfaces through line triples and the double-box discriminant
# ---------------------------------------------------------------------------

@dataclass
class QuadricMatrix4:
    """Symmetric 4x4 matrix of the quadric surface through three lines."""

    matrix: list
    degenerate: bool = False

    def value(self, x):
        acc = 0
        for i in range(4):
            for j in range(4):
                acc = acc + x[i] * self.matrix[i][j] * x[j]
        return acc


def quadric_through_three_lines(A, B, C) -> QuadricMatrix4:
    """Polarized matrix U of q(x) = <Ax | B | Cx>, the quadric containing
    the three pairwise disjoint lines A, B, C.

    Incident inputs yield a rank-deficient U which is flagged, not raised.
    """
    b1, b2 = _exact_span_pair(B)

    def q(xc):
        p = ProjectivePoint(list(xc))
        PA = gca_join(p, A)
        PC = gca_join(p, C)
        if not isinstance(PA, Extensor) or PA.step != 3 or PA.is_zero():
            return 0
        if not isinstance(PC, Extensor) or PC.step != 3 or PC.is_zero():
            return 0
        return chain_polynomial(Extensor(3, PA.coeffs), b1, b2,
                                Extensor(3, PC.coeffs))

    exact = all(_line_is_exact(L) for L in (A, B, C))
    half = Fraction(1, 2) if exact else 0.5
    e = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    diag = [q(e[i]) for i in range(4)]
    U = [[None] * 4 for _ in range(4)]
    for i in range(4):
        U[i][i] = diag[i]
        for j in range(i + 1, 4):
            s = [e[i][k] + e[j][k] for k in range(4)]
            U[i][j] = U[j][i] = (q(s) - diag[i] - diag[j]) * half
    if exact:
        degenerate = not _scalar_nonzero(generic_det(U))
    else:
        arr = np.array([[complex(v) for v in row] for row in U])
        sv = np.linalg.svd(arr, compute_uv=False)
        degenerate = bool(sv[-1] <= 1e-10 * max(sv[0], 1e-300))
    return QuadricMatrix4(U, degenerate)


def _pencil_quartic(U, V, exact):
    """det(U + t V) as a univariate polynomial in t."""
    if exact:
        samples = []
        for t in range(5):
            mat = [[U[i][j] + t * V[i][j] for j in range(4)] for i in range(4)]
            samples.append((Fraction(t), generic_det(mat)))
        return interpolate_exact(samples, 4)
    ts = [-2.0, -1.0, 0.0, 1.0, 2.0]
    vals = [generic_det([[U[i][j] + t * V[i][j] for j in range(4)]
                         for i in range(4)]) for t in ts]
    coeffs = np.linalg.solve(
        np.vander(np.array(ts, dtype=complex), 5, increasing=True),
        np.array([complex(v) for v in vals]))
    return UnivariatePolynomial(list(coeffs))


def nls_disc_doublebox(A, B, C, E, F, G):
    """Mixed discriminant of the two quadric surfaces through A,B,C and
    E,F,G: the discriminant of the quartic det(U + t V).

    A pencil whose quartic degenerates below degree 4 is flagged with a
    warning; the discriminant of the degenerate polynomial (0 below
    degree 2) is still returned.
    """
    qU = quadric_through_three_lines(A, B, C)
    qV = quadric_through_three_lines(E, F, G)
    exact = all(_line_is_exact(L) for L in (A, B, C, E, F, G))
    f = _pencil_quartic(qU.matrix, qV.matrix, exact)
    coeffs = list(f.coeffs)
    if exact:
        deg = f.degree
    else:
        scale = max((abs(complex(c)) for c in coeffs), default=0.0)
        deg = -1
        for k, c in enumerate(coeffs):
            if abs(complex(c)) > 1e-10 * (scale + 1e-300):
                deg = k
        coeffs = coeffs[:deg + 1] if deg >= 0 else []
        f = UnivariatePolynomial(coeffs if coeffs else [0])
    if deg < 4:
        warnings.warn("pencil quartic degenerates to degree %d" % max(deg, 0),
                      RuntimeWarning, stacklevel=2)
    if deg < 2:
        return 0
    return univariate_discriminant(f)


# ---------------------------------------------------------------------------
# Numeric collision indicator
# ---------------------------------------------------------------------------

def _proj_distance(a, b):
    av = np.array([complex(scalar_to_complex(c)) if not isinstance(c, (int, float, complex))
                   else complex(c) for c in a])
    bv = np.array([complex(scalar_to_complex(c)) if not isinstance(c, (int, float, complex))
                   else complex(c) for c in b])
    m = np.outer(av, bv) - np.outer(bv, av)
    den = max(float(np.abs(av).max() * np.abs(bv).max()), 1e-300)
    return float(np.abs(m).max()) / den


def collision_indicator(solutions):
    """Minimum normalized pairwise distance among fiber solutions.

    A proxy discriminant sign for diagrams without closed forms: it tends
    to zero exactly when two solutions collide.  It is not the discriminant
    polynomial itself.
    """
    sols = list(solutions)
    if len(sols) < 2:
        raise DimensionError("collision indicator needs at least two solutions")
    best = None
    for i in range(len(sols)):
        for j in range(i + 1, len(sols)):
            li = sols[i].lines if hasattr(sols[i], "lines") else sols[i]
            lj = sols[j].lines if hasattr(sols[j], "lines") else sols[j]
            d = max(_proj_distance(a.coords, b.coords) for a, b in zip(li, lj))
            best = d if best is None else min(best, d)
    return best
