"""Fiber solvers for the Landau map: the four-line box in closed form,
trees by oriented sequences of box solves, cycles through an exact
univariate cycle polynomial, and residual certification.

Every solver is a pure function; branch bookkeeping is explicit and no
randomness is used inside a solver.  Exact solves work over towers of
quadratic extensions: each box contributes one square root, and all
previously found lines are lifted into the newest extension so that
arithmetic never mixes radicands.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .diagram import InternalGraph, LandauDiagram
from .geometry import (Extensor, PlueckerLine, ProjectivePoint,
                       chain_polynomial, gca_join, gca_meet, gram_matrix,
                       intersection_point, line_from_points, line_pairing,
                       meet_as_line, normalize_float, normalize_primitive)
from .scalars import (ConsistencyError, DomainError, FastRational,
                      QuadExt, QuadExtContext, RATIONAL_TYPES,
                      UnivariatePolynomial, _scalar_nonzero, exact_sqrt,
                      find_real_and_complex_roots, generic_det,
                      interpolate_exact, is_real_root,
                      rational_function_reconstruct, scalar_to_complex)


class InfeasibleError(DomainError):
    """The requested fiber is empty (no consistent solve orientation)."""


class DegeneratePencilError(DomainError):
    """Box solve degenerated to a2 = a1 = 0."""


@dataclass
class BoxCoefficients:
    """Coefficients of the box quadratic <A X(x)> = a2 x^2 + a1 x + a0."""

    a2: object
    a1: object
    a0: object

    def discriminant(self):
        return self.a1 * self.a1 - 4 * self.a0 * self.a2


@dataclass
class FiberSolution:
    """One point of a Landau-map fiber with its certificate."""

    lines: list
    residuals: list = field(default_factory=list)
    is_real: bool | None = None
    tag: object = None
    warnings: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)


@dataclass
class ResidualReport:
    max_residual: float
    tol: float
    passed: bool
    residuals: list


def _is_exact_scalar(x):
    return isinstance(x, RATIONAL_TYPES) or isinstance(x, QuadExt)


def _line_is_exact(L):
    return all(_is_exact_scalar(c) for c in L.coords)


def _line_real_flag(L):
    """Reality of a projective line: some scaling makes all coordinates real."""
    emb = [scalar_to_complex(c) if _is_exact_scalar(c) else complex(c) for c in L.coords]
    nrm = normalize_float(emb)
    return all(is_real_root(v) for v in nrm)


def _rref_two_rows(rows, exact):
    """Reduced row echelon form of a 2x4 matrix over a field."""
    m = [list(rows[0]), list(rows[1])]
    if exact:
        m = [[FastRational(v) if isinstance(v, int) else v for v in row] for row in m]
    piv_r = 0
    for col in range(4):
        if exact:
            pivot = next((r for r in range(piv_r, 2) if _scalar_nonzero(m[r][col])), None)
        else:
            cand = max(range(piv_r, 2), key=lambda r: abs(complex(m[r][col])))
            pivot = cand if abs(complex(m[cand][col])) > 1e-13 else None
        if pivot is None:
            continue
        m[piv_r], m[pivot] = m[pivot], m[piv_r]
        pv = m[piv_r][col]
        m[piv_r] = [v / pv for v in m[piv_r]]
        other = 1 - piv_r
        if _scalar_nonzero(m[other][col]):
            f = m[other][col]
            m[other] = [m[other][k] - f * m[piv_r][k] for k in range(4)]
        piv_r += 1
        if piv_r == 2:
            break
    return m


def spanning_pair_rref(L: PlueckerLine):
    """Deterministic spanning pair: RREF rows of a spanning-point matrix."""
    p1, p2 = L.spanning_points()
    rows = _rref_two_rows([p1.coords, p2.coords], _line_is_exact(L))
    return ProjectivePoint(rows[0]), ProjectivePoint(rows[1])


def _plane_through(point_coords, L: PlueckerLine) -> Extensor:
    e = gca_join(ProjectivePoint(point_coords), L)
    return Extensor(3, e.coeffs)


def box_quadratic(A, B, C, D, d1=None, d2=None) -> BoxCoefficients:
    """Chain-polynomial coefficients of <A X(x)>, X(x) = (p(x)B) meet (p(x)C),
    p(x) = d1 + x d2 spanning the line D."""
    if d1 is None or d2 is None:
        d1, d2 = spanning_pair_rref(D)
    b1, b2 = spanning_pair_rref(B)
    p1A = _plane_through(d1.coords, A)
    p2A = _plane_through(d2.coords, A)
    p1C = _plane_through(d1.coords, C)
    p2C = _plane_through(d2.coords, C)
    a2 = chain_polynomial(p2A, b1, b2, p2C)
    a0 = chain_polynomial(p1A, b1, b2, p1C)
    a1 = chain_polynomial(p1A, b1, b2, p2C) + chain_polynomial(p2A, b1, b2, p1C)
    return BoxCoefficients(a2, a1, a0)


def box_line_at(x, B, C, d1, d2, A=None) -> PlueckerLine:
    """X(x): the transversal through p(x) = d1 + x d2 meeting B and C.

    When p(x) lies on B or C (possible at rational branch points of
    degenerate configurations) the plane through that line collapses;
    if the fourth line A is supplied, its plane substitutes for the
    collapsed one, which is valid at roots of <A X(x)>.
    """
    p = ProjectivePoint([a + x * b for a, b in zip(d1.coords, d2.coords)])
    planes = [gca_join(p, B), gca_join(p, C)]
    if A is not None:
        planes.append(gca_join(p, A))
    exact = all(_is_exact_scalar(c) for pl in planes for c in pl.coeffs)
    if exact:
        good = [pl for pl in planes if not pl.is_zero()]
        for i in range(len(good)):
            for j in range(i + 1, len(good)):
                try:
                    return meet_as_line(Extensor(3, good[i].coeffs),
                                        Extensor(3, good[j].coeffs))
                except DomainError:
                    continue
        raise DomainError("degenerate meet: no unique line")
    # inexact input: pick the best-conditioned plane pair.  Near-zero
    # planes occur at rational branch points of degenerate configurations
    # and their directions are rounding noise, so scores are measured
    # against the input magnitudes rather than the plane magnitudes.
    pscale = max(abs(complex(c)) for c in p.coords)
    in_lines = [B, C] + ([A] if A is not None else [])
    lscales = [max(abs(complex(c)) for c in L.coords) for L in in_lines]
    best = None
    for i in range(len(planes)):
        for j in range(i + 1, len(planes)):
            e = gca_meet(Extensor(3, planes[i].coeffs),
                         Extensor(3, planes[j].coeffs))
            if e.step != 2:
                continue
            denom = pscale * pscale * lscales[i] * lscales[j]
            score = max(abs(complex(c)) for c in e.coeffs) / denom if denom else 0.0
            if best is None or score > best[0]:
                best = (score, e)
    if best is None or best[0] == 0.0:
        raise DomainError("degenerate meet: no unique line")
    return PlueckerLine(best[1].coeffs, _skip_check=True)


_SPAN_MIXES = [(0, 0), (1, 0), (0, 1), (2, 1), (1, 3)]


def solve_box4(A, B, C, D, tol=1e-9):
    """The two lines meeting four given lines.

    Exact inputs give branches over the quadratic extension by
    sqrt(a1^2 - 4 a0 a2); float/complex inputs give numeric branches.
    Returns a list of two FiberSolution, branch signs +1 / -1 in meta.
    """
    exact = all(_line_is_exact(L) for L in (A, B, C, D))
    d1_0, d2_0 = spanning_pair_rref(D)
    coeffs = d1 = d2 = None
    for (a, b) in _SPAN_MIXES:
        if 1 - a * b == 0:
            continue
        d1 = ProjectivePoint([u + a * v for u, v in zip(d1_0.coords, d2_0.coords)])
        d2 = ProjectivePoint([b * u + v for u, v in zip(d1_0.coords, d2_0.coords)])
        cand = box_quadratic(A, B, C, D, d1, d2)
        if exact:
            ok = _scalar_nonzero(cand.a2)
        else:
            ok = abs(complex(cand.a2)) > tol * (
                1 + abs(complex(cand.a1)) + abs(complex(cand.a0)))
        if ok:
            coeffs = cand
            break
    if coeffs is None:
        cand = box_quadratic(A, B, C, D, d1_0, d2_0)
        if not _scalar_nonzero(cand.a1):
            raise DegeneratePencilError("a2 = a1 = 0: box pencil degenerate")
        # a2 == 0 for every re-span: one root finite, one at infinity (p = d2)
        x0 = -cand.a0 / cand.a1
        lines = [box_line_at(x0, B, C, d1_0, d2_0, A),
                 meet_as_line(_plane_through(d2_0.coords, B),
                              _plane_through(d2_0.coords, C))]
        out = []
        for sign, L in zip((1, -1), lines):
            sol = FiberSolution([L], meta={"branch": sign, "coeffs": cand,
                                           "at_infinity": sign == -1})
            sol.residuals = [line_pairing(L, N) for N in (A, B, C, D)]
            sol.is_real = _line_real_flag(L)
            out.append(sol)
        return out
    delta = coeffs.discriminant()
    out = []
    if exact and exact_sqrt(delta) is not None:
        # square discriminant: both branches stay in the base field
        sq = exact_sqrt(delta)
        for sign in (1, -1):
            x = (FastRational(-coeffs.a1) + sign * sq) / (2 * FastRational(coeffs.a2))
            X = box_line_at(x, B, C, d1, d2, A)
            sol = FiberSolution([X], meta={"branch": sign, "coeffs": coeffs,
                                           "x": x, "delta": delta})
            sol.residuals = [line_pairing(X, N) for N in (A, B, C, D)]
            sol.residuals.append(X.quadric_value())
            sol.is_real = _line_real_flag(X)
            out.append(sol)
    elif exact:
        ctx = QuadExtContext(FastRational(delta) if isinstance(delta, int) else delta)

        def lift(vals):
            return [QuadExt(c, 0, ctx.delta) for c in vals]

        # lift everything into the new extension so radicands never mix
        Al, Bl, Cl, Dl = (PlueckerLine(lift(L.coords), _skip_check=True)
                          for L in (A, B, C, D))
        d1l, d2l = ProjectivePoint(lift(d1.coords)), ProjectivePoint(lift(d2.coords))
        for sign in (1, -1):
            x = ctx.element(-coeffs.a1, sign) / (2 * ctx.from_base(coeffs.a2))
            X = box_line_at(x, Bl, Cl, d1l, d2l, Al)
            sol = FiberSolution([X], meta={"branch": sign, "coeffs": coeffs,
                                           "x": x, "delta": delta})
            sol.residuals = [line_pairing(X, N) for N in (Al, Bl, Cl, Dl)]
            sol.residuals.append(X.quadric_value())
            sol.is_real = _line_real_flag(X)
            out.append(sol)
    else:
        sq = np.sqrt(complex(delta))
        for sign in (1, -1):
            x = (-complex(coeffs.a1) + sign * sq) / (2 * complex(coeffs.a2))
            X = box_line_at(x, B, C, d1, d2, A)
            sol = FiberSolution([X], meta={"branch": sign, "coeffs": coeffs,
                                           "x": x, "delta": complex(delta)})
            sol.residuals = [complex(line_pairing(X, N)) for N in (A, B, C, D)]
            sol.residuals.append(complex(X.quadric_value()))
            sol.is_real = _line_real_flag(X)
            out.append(sol)
    return out


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------

def tree_solve_order(G: InternalGraph, u):
    """Sequence of vertices for oriented box solves.

    A vertex is ready when its pendant count plus already-solved
    neighbors give exactly 4 incidence constraints.  Raises
    InfeasibleError when no consistent orientation exists.
    """
    u = list(u)
    solved = []
    remaining = set(range(1, G.ell + 1))
    while remaining:
        supplies = {i: u[i - 1] + sum(1 for j in G.neighbors(i) if j in solved)
                    for i in remaining}
        over = [i for i, s in sorted(supplies.items()) if s > 4]
        if over:
            raise InfeasibleError(f"vertex {over[0]} over-constrained "
                                  f"(supply {supplies[over[0]]})")
        ready = sorted(i for i, s in supplies.items() if s == 4)
        if not ready:
            raise InfeasibleError("no vertex with exactly 4 available constraints")
        i = ready[0]
        solved.append(i)
        remaining.discard(i)
    return solved


def _lift_line_to(L, delta):
    """Embed a line over the base field into the extension with radicand delta."""
    return PlueckerLine([QuadExt(c, 0, delta) for c in L.coords], _skip_check=True)


def solve_tree(diagram: LandauDiagram, M, tol=1e-8):
    """All 2^l fiber points of a tree diagram by oriented box solves.

    With exact (rational) external lines the solutions live in a tower of
    quadratic extensions, one square root per internal vertex.
    """
    G = diagram.G
    order = tree_solve_order(G, diagram.u.u)
    M = list(M)
    exact = all(_line_is_exact(L) for L in M)
    solutions = []

    def recurse(idx, partial, branches):
        if idx == len(order):
            lines = [partial[i] for i in range(1, G.ell + 1)]
            sol = FiberSolution(lines, tag=tuple(branches))
            report = verify_fiber(diagram, M, sol, tol)
            sol.residuals = report.residuals
            sol.meta["report"] = report
            sol.is_real = all(_line_real_flag(L) for L in lines)
            solutions.append(sol)
            return
        i = order[idx]
        lines = [M[m - 1] for m in diagram.external_lines_of_vertex(i)]
        lines += [partial[j] for j in G.neighbors(i) if j in partial]
        if len(lines) != 4:
            raise InfeasibleError("vertex %d does not see 4 constraints" % i)
        for b in solve_box4(*lines):
            new_partial = dict(partial)
            if exact and isinstance(b.meta.get("x"), QuadExt):
                # lift earlier lines into the newest extension
                delta = b.meta["x"].delta
                new_partial = {j: _lift_line_to(L, delta) for j, L in partial.items()}
            new_partial[i] = b.lines[0]
            recurse(idx + 1, new_partial, branches + [b.meta["branch"]])

    recurse(0, {}, [])
    return solutions


def verify_fiber(diagram: LandauDiagram, M, sol, tol=1e-8):
    """Residuals of every incidence equation and Plücker quadric at a solution.

    The exact residual values are kept, but pass/fail is judged on
    max-normalized complex representatives so the report is scale-free.
    """
    lines = sol.lines if isinstance(sol, FiberSolution) else list(sol)
    M = list(M)
    residuals = []
    for (i, j) in sorted(diagram.G.edges):
        residuals.append(line_pairing(lines[i - 1], lines[j - 1]))
    for i in range(1, diagram.G.ell + 1):
        for m in diagram.external_lines_of_vertex(i):
            residuals.append(line_pairing(lines[i - 1], M[m - 1]))
    for L in lines:
        residuals.append(L.quadric_value())

    def embed(L):
        return normalize_float([scalar_to_complex(c) if _is_exact_scalar(c) else complex(c)
                                for c in L.coords])

    norm_lines = [embed(L) for L in lines]
    norm_M = [embed(L) for L in M]
    vals = []
    for (i, j) in sorted(diagram.G.edges):
        vals.append(abs(complex(line_pairing(norm_lines[i - 1], norm_lines[j - 1]))))
    for i in range(1, diagram.G.ell + 1):
        for m in diagram.external_lines_of_vertex(i):
            vals.append(abs(complex(line_pairing(norm_lines[i - 1], norm_M[m - 1]))))
    for p in norm_lines:
        vals.append(abs(p[0] * p[5] - p[1] * p[4] + p[2] * p[3]))
    mx = max(vals) if vals else 0.0
    return ResidualReport(mx, tol, mx <= tol, residuals)


# ---------------------------------------------------------------------------
# Cycles
# ---------------------------------------------------------------------------

def _exact_line(L):
    return PlueckerLine([c if isinstance(c, QuadExt) else FastRational(c)
                         for c in L.coords], _skip_check=True)


def _cycle_blocks(diagram, M):
    return [[M[m - 1] for m in diagram.external_lines_of_vertex(i)]
            for i in range(1, diagram.G.ell + 1)]


def _parametrized_end_line(blocks, x):
    """L_l(x): transversal through a moving point of M1^(l), meeting M2^(l), M3^(l)."""
    Ml = blocks[-1]
    q1, q2 = spanning_pair_rref(Ml[0])
    p = ProjectivePoint([a + x * b for a, b in zip(q1.coords, q2.coords)])
    return meet_as_line(Extensor(3, gca_join(p, Ml[1]).coeffs),
                        Extensor(3, gca_join(p, Ml[2]).coeffs))


def _branch_product(prev_line, k, blocks, end_line):
    """Product over the +/- branch tower of the terminal 5x5 Gram determinant.

    prev_line constrains vertex k; the recursion walks the path
    1..l-1 and returns an element of the entry field (radicals cancel
    pairwise, which rational_part() asserts).
    """
    ell = len(blocks)
    if k == ell - 1:
        g = gram_matrix([prev_line] + list(blocks[k - 1]) + [end_line])
        return generic_det(g)
    B, C, D = blocks[k - 1][1], blocks[k - 1][2], blocks[k - 1][0]
    d1, d2 = spanning_pair_rref(D)
    coeffs = box_quadratic(prev_line, B, C, D, d1, d2)
    if not _scalar_nonzero(coeffs.a2):
        raise ZeroDivisionError("sample hit a branch point (a2 = 0)")
    delta = coeffs.discriminant()
    sq = exact_sqrt(delta)
    if sq is not None:
        # square discriminant: both branches live in the current field
        total = None
        for sign in (1, -1):
            x = (-FastRational(coeffs.a1) + sign * sq) / (2 * FastRational(coeffs.a2))
            L = box_line_at(x, B, C, d1, d2, prev_line)
            val = _branch_product(L, k + 1, blocks, end_line)
            total = val if total is None else total * val
        return total
    ctx = QuadExtContext(delta)
    lifted_end = PlueckerLine([ctx.from_base(c) for c in end_line.coords],
                              _skip_check=True)
    lifted_prev = PlueckerLine([ctx.from_base(c) for c in prev_line.coords],
                               _skip_check=True)
    # every input except x is fixed by the sqrt(delta)-conjugation, so the
    # minus-branch value is the conjugate of the plus-branch value and the
    # two-branch product collapses to a single field norm
    x = ctx.element(-coeffs.a1, 1) / (2 * ctx.from_base(coeffs.a2))
    L = box_line_at(x, B, C, d1, d2, lifted_prev)
    val = _branch_product(L, k + 1, blocks, lifted_end)
    return val.norm()


def _first_box_a2(blocks, end_line):
    B, C, D = blocks[0][1], blocks[0][2], blocks[0][0]
    return box_quadratic(end_line, B, C, D).a2


def build_cycle_polynomial(diagram: LandauDiagram, M, extra_checks=2,
                           max_den_degree=32):
    """The univariate cycle polynomial f_l(x) of degree 2^(l+1), exactly.

    Samples the branch product at rational x (multiplying conjugate
    branch pairs inside quadratic-extension towers keeps every sample
    rational) and reconstructs the polynomial: for l = 3 the known
    denominator a2(x)^4 is cleared and the samples interpolated; for
    l = 4, 5 the samples are fit as an exact rational function whose
    numerator is the cycle polynomial.
    """
    G = diagram.G
    ell = G.ell
    cycle_edges = {(i, i + 1) for i in range(1, ell)} | {(1, ell)}
    if set(G.edges) != cycle_edges or ell not in (3, 4, 5):
        raise DomainError("cycle polynomial supports C_l with l in {3,4,5}")
    if any(v != 3 for v in diagram.u.u):
        raise DomainError("cycle polynomial needs u = (3,...,3)")
    M = [_exact_line(L) for L in M]
    blocks = _cycle_blocks(diagram, M)
    degree = 2 ** (ell + 1)

    def collect(n_samples, clear_denominator):
        samples = []
        failures = 0
        x = FastRational(0)
        while len(samples) < n_samples:
            try:
                end_line = _parametrized_end_line(blocks, x)
                raw = _branch_product(end_line, 1, blocks, end_line)
                if clear_denominator:
                    raw = raw * _first_box_a2(blocks, end_line) ** 4
                samples.append((x, raw))
            except (ZeroDivisionError, DomainError):
                failures += 1
                if failures > n_samples + 50:
                    raise DomainError("external configuration too degenerate to "
                                      "sample the cycle polynomial") from None
            x += 1
        return samples

    if ell == 3:
        try:
            return interpolate_exact(collect(degree + 1 + extra_checks, True),
                                     degree)
        except ConsistencyError:
            # special configurations (e.g. incident external pairs) change
            # the denominator structure; fall through to the rational ladder
            pass

    # the samples are a rational function whose numerator is the cycle
    # polynomial; generically its denominator degree is degree/2 (one
    # squared branch-point factor per box level), so that guess goes
    # first and a full ladder backs it up
    num_deg = degree + 2
    guess = degree // 2
    candidates = [guess] + [d for d in range(0, max_den_degree + 1) if d != guess]
    samples = collect(num_deg + max(candidates) + 2 + extra_checks, False)
    for den_deg in candidates:
        try:
            p, _ = rational_function_reconstruct(
                samples[:num_deg + den_deg + 2 + extra_checks], num_deg, den_deg)
        except (ConsistencyError, DomainError):
            continue
        if p.degree == degree:
            return p
    raise ConsistencyError("cycle polynomial reconstruction failed at all "
                           "denominator degree bounds")


# ---------------------------------------------------------------------------
# Numeric cycle fibers and the triangle
# ---------------------------------------------------------------------------

def _rationalized(M):
    """Exact copies of the input lines.

    Inexact lines are rounded through their spanning points, which keeps
    the result exactly on the Plücker quadric, and scaled to primitive
    integer coordinates to keep downstream arithmetic cheap.
    """
    out = []
    for L in M:
        if _line_is_exact(L):
            out.append(_exact_line(L))
        else:
            scale = max(abs(complex(c)) for c in L.coords)
            approx = [Fraction(complex(c).real / scale).limit_denominator(10 ** 12)
                      for c in L.coords]
            out.append(PlueckerLine(normalize_primitive(approx),
                                    _skip_check=True))
    return out


def _norm_line(L):
    return PlueckerLine(normalize_float([complex(c) for c in L.coords]),
                        _skip_check=True)


def _best_branch_chain(end_line, blocks):
    """Pick the +/- branch at each path vertex minimizing the closing residual."""
    ell = len(blocks)
    best = None
    for combo in itertools.product((0, 1), repeat=ell - 1):
        lines = []
        prev = end_line
        for k in range(1, ell):
            branch_pair = solve_box4(prev, blocks[k - 1][1], blocks[k - 1][2],
                                     blocks[k - 1][0])
            prev = branch_pair[combo[k - 1]].lines[0]
            lines.append(prev)
        closing = abs(complex(line_pairing(_norm_line(lines[-1]),
                                           _norm_line(end_line))))
        if best is None or closing < best[0]:
            best = (closing, lines, combo)
    return best[1], best[2], best[0]


def _chain_at(x, combo, blocks):
    end_line = _parametrized_end_line(blocks, x)
    lines = []
    prev = end_line
    for k in range(1, len(blocks)):
        branch_pair = solve_box4(prev, blocks[k - 1][1], blocks[k - 1][2],
                                 blocks[k - 1][0])
        prev = branch_pair[combo[k - 1]].lines[0]
        lines.append(prev)
    closing = complex(line_pairing(_norm_line(lines[-1]), _norm_line(end_line)))
    return end_line, lines, closing


def _polish_cycle_root(x, combo, blocks, end_line, chain_lines, closing):
    """Secant refinement of a simple cycle root against the closing incidence."""
    x0, g0 = x, closing
    x1 = x * (1 + 1e-7) + 1e-7
    try:
        _, _, g1 = _chain_at(x1, combo, blocks)
    except DomainError:
        return x, end_line, chain_lines, abs(closing)
    best = (abs(g0), x0, end_line, chain_lines)
    for _ in range(8):
        denom = g1 - g0
        if abs(denom) == 0.0:
            break
        x2 = x1 - g1 * (x1 - x0) / denom
        try:
            e2, l2, g2 = _chain_at(x2, combo, blocks)
        except DomainError:
            break
        if abs(g2) < best[0]:
            best = (abs(g2), x2, e2, l2)
        if abs(g2) < 1e-14:
            break
        x0, g0, x1, g1 = x1, g1, x2, g2
    score, xb, eb, lb = best
    return xb, eb, lb, score


def solve_cycle_numeric(diagram: LandauDiagram, M, tol=1e-8):
    """Numeric fiber of a cycle C_l over real externals via roots of f_l.

    Returns (solutions, f_l): one FiberSolution per root cluster of the
    cycle polynomial, carrying the cluster multiplicity in its meta.
    """
    M_exact = _rationalized(M)
    f = build_cycle_polynomial(diagram, M_exact)
    roots = find_real_and_complex_roots(f, tol=1e-9, high_precision=True)
    M_num = [_norm_line(L) for L in M_exact]
    blocks = _cycle_blocks(diagram, M_num)
    sols = []
    for cluster in roots:
        x = cluster.value
        end_line = _parametrized_end_line(blocks, x)
        chain_lines, combo, closing = _best_branch_chain(end_line, blocks)
        if cluster.multiplicity == 1:
            x, end_line, chain_lines, closing = _polish_cycle_root(
                x, combo, blocks, end_line, chain_lines, closing)
        lines = chain_lines + [end_line]
        sol = FiberSolution(lines, meta={"x": x, "branches": combo,
                                         "multiplicity": cluster.multiplicity,
                                         "closing_residual": closing})
        report = verify_fiber(diagram, M_num, sol, tol)
        sol.residuals = report.residuals
        sol.meta["report"] = report
        sol.is_real = cluster.is_real and all(_line_real_flag(L) for L in lines)
        sols.append(sol)
    return sols, f


def classify_triangle_solution(lines):
    """'concurrent' when the three pairwise meets coincide, 'coplanar' when
    the six spanning points fit one plane.  Returns (tag, scores)."""
    L = [_norm_line(x) for x in lines]
    pts = []
    for (i, j) in ((0, 1), (0, 2), (1, 2)):
        pts.append(normalize_float(intersection_point(L[i], L[j]).coords))

    def pdist(p, q):
        a = np.array(p, dtype=complex)
        b = np.array(q, dtype=complex)
        m = np.outer(a, b) - np.outer(b, a)
        return float(np.abs(m).max()) / float(max(np.abs(a).max() * np.abs(b).max(),
                                                  1e-300))

    concurrent_score = max(pdist(pts[0], pts[1]), pdist(pts[0], pts[2]),
                           pdist(pts[1], pts[2]))
    rows = []
    for x in L:
        p1, p2 = x.spanning_points()
        rows.append(normalize_float(p1.coords))
        rows.append(normalize_float(p2.coords))
    s = np.linalg.svd(np.array(rows, dtype=complex), compute_uv=False)
    coplanar_score = float(s[-1] / max(s[0], 1e-300))
    tag = "concurrent" if concurrent_score < coplanar_score else "coplanar"
    return tag, concurrent_score, coplanar_score


def solve_triangle(diagram: LandauDiagram, M, tol=1e-8):
    """The 16 fiber points of K3 with u = (3,3,3), tagged concurrent/coplanar.

    Returns (solutions, cycle polynomial).
    """
    if diagram.G.ell != 3 or len(diagram.G.edges) != 3:
        raise DomainError("solve_triangle expects the triangle graph K3")
    sols, f = solve_cycle_numeric(diagram, M, tol)
    for sol in sols:
        tag, c_score, p_score = classify_triangle_solution(sol.lines)
        sol.tag = tag
        sol.meta["concurrent_score"] = c_score
        sol.meta["coplanar_score"] = p_score
        if min(c_score, p_score) > 1e-4:
            sol.warnings.append("ambiguous geometric classification near discriminant")
    return sols, f
