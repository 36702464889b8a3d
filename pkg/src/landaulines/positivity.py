"""Totally positive line configurations and experiment harnesses.

A 4 x n matrix all of whose 4 x 4 minors are positive yields a
configuration of lines spanned by pairs of consecutive columns.  On such
positive configurations the transversal problems of this package appear
to have only real solutions, and the closed-form discriminants stay
positive.  This module generates positive matrices exactly (products of
positive elementary bidiagonal factors), builds line configurations from
them, and runs the reality / copositivity / promotion experiments with
reproducible per-trial seeds.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .diagram import InternalGraph, LandauDiagram, PendantVector
from .geometry import (PlueckerLine, ProjectivePoint, intersection_point,
                       line_from_points, normalize_float)
from .scalars import (DimensionError, DomainError, QuadExt, exact_sign,
                      scalar_to_complex)
from .schubert import (solve_box4, solve_cycle_numeric, solve_tree,
                       solve_triangle)

PARAM_LETTERS = "abcdefghijklmnopqrstuvwx"


def _det4(cols):
    """Determinant of four length-4 columns (exact or float)."""
    m = [list(c) for c in cols]
    det = 0
    for perm, sign in (((0, 1, 2, 3), 1), ((0, 1, 3, 2), -1), ((0, 2, 1, 3), -1),
                       ((0, 2, 3, 1), 1), ((0, 3, 1, 2), 1), ((0, 3, 2, 1), -1),
                       ((1, 0, 2, 3), -1), ((1, 0, 3, 2), 1), ((1, 2, 0, 3), 1),
                       ((1, 2, 3, 0), -1), ((1, 3, 0, 2), -1), ((1, 3, 2, 0), 1),
                       ((2, 0, 1, 3), 1), ((2, 0, 3, 1), -1), ((2, 1, 0, 3), -1),
                       ((2, 1, 3, 0), 1), ((2, 3, 0, 1), 1), ((2, 3, 1, 0), -1),
                       ((3, 0, 1, 2), -1), ((3, 0, 2, 1), 1), ((3, 1, 0, 2), 1),
                       ((3, 1, 2, 0), -1), ((3, 2, 0, 1), -1), ((3, 2, 1, 0), 1)):
        det += sign * m[0][perm[0]] * m[1][perm[1]] * m[2][perm[2]] * m[3][perm[3]]
    return det


def sign_normalize_columns(cols):
    """Flip column signs so the first nonzero coordinate of each is positive.

    Columns are projective representatives, so positivity of minors is
    only meaningful after this normalization.
    """
    out = []
    for c in cols:
        c = list(c)
        flip = 1
        if all(isinstance(v, (int, Fraction, QuadExt)) for v in c):
            for v in c:
                s = exact_sign(v)
                if s != 0:
                    flip = s
                    break
        else:
            scale = max(abs(complex(v)) for v in c)
            for v in c:
                if abs(complex(v)) > 1e-9 * scale:
                    flip = -1 if complex(v).real < 0 else 1
                    break
        out.append([flip * v for v in c])
    return out


@dataclass(frozen=True)
class TotallyPositiveMatrix:
    """A 4 x n matrix whose maximal minors are all positive.

    ``columns`` holds n length-4 column vectors; ``params`` the positive
    generator parameters it was built from (informational).
    """

    columns: tuple
    params: tuple = ()

    @property
    def n(self):
        return len(self.columns)

    def column(self, j):
        """Column j (1-based)."""
        return list(self.columns[j - 1])

    def minor(self, js):
        """Maximal minor on columns js (1-based, increasing)."""
        return _det4([self.columns[j - 1] for j in js])

    def maximal_minors(self):
        """All C(n,4) maximal minors, keyed by the column quadruple."""
        return {js: self.minor(js)
                for js in itertools.combinations(range(1, self.n + 1), 4)}

    def is_totally_positive(self, tol=0.0):
        """Exhaustive positivity test of all maximal minors (n <= 24)."""
        if self.n > 24:
            raise DimensionError("exhaustive minor test limited to n <= 24")
        return all(v > tol for v in self.maximal_minors().values())

    def line(self, i):
        """The line spanned by consecutive columns 2i-1, 2i (1-based)."""
        return line_from_points(ProjectivePoint(self.column(2 * i - 1)),
                                ProjectivePoint(self.column(2 * i)))


def _positive_param(t):
    if not t > 0:
        raise DomainError("generator parameters must be strictly positive")
    return t


def _draw_parameter(rng, distribution, exact):
    if callable(distribution):
        t = distribution(rng)
    elif distribution == "log-uniform":
        t = 10.0 ** rng.uniform(-1.0, 1.0)
    elif distribution == "uniform":
        t = rng.uniform(0.1, 10.0)
    else:
        raise DomainError("unknown parameter distribution %r" % (distribution,))
    if exact:
        t = Fraction(t).limit_denominator(10 ** 4)
        if t <= 0:
            t = Fraction(1, 10 ** 4)
    return _positive_param(t)


def tp_matrix_from_bidiagonal(n, params):
    """4 x n totally positive matrix from n^2 positive parameters.

    The parameters fill a product of elementary bidiagonal factors (a
    full lower staircase, a positive diagonal, a full upper staircase)
    acting on the identity; the first four rows of the resulting square
    matrix are returned.  Every minor of the product is positive.
    """
    params = [_positive_param(t) for t in params]
    if len(params) != n * n:
        raise DimensionError("need n^2 = %d parameters, got %d" % (n * n, len(params)))
    it = iter(params)
    one = Fraction(1) if isinstance(params[0], (int, Fraction)) else 1.0
    rows = [[one * (r == c) for c in range(n)] for r in range(4)]
    # lower factors: column c-1 += t * column c, staircase order
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            t = next(it)
            for r in range(4):
                rows[r][i - 1] += t * rows[r][i]
    for j in range(n):
        t = next(it)
        for r in range(4):
            rows[r][j] *= t
    # upper factors: column c += t * column c-1, mirrored staircase
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            t = next(it)
            for r in range(4):
                rows[r][i] += t * rows[r][i - 1]
    cols = tuple(tuple(rows[r][c] for r in range(4)) for c in range(n))
    return TotallyPositiveMatrix(cols, tuple(params))


def rescale_columns(Z: TotallyPositiveMatrix):
    """Divide each column by its largest entry magnitude.

    Columns are projective, so this changes nothing geometrically, but
    it keeps numeric solvers well conditioned on matrices whose entries
    are long products of parameters.
    """
    cols = []
    for c in Z.columns:
        m = max(abs(v) if isinstance(v, (int, Fraction)) else abs(complex(v))
                for v in c)
        if isinstance(m, (int, Fraction)):
            m = Fraction(m)
        cols.append(tuple(v / m for v in c))
    return TotallyPositiveMatrix(tuple(cols), Z.params)


def sample_tp_matrix(n, seed, distribution="log-uniform", exact=True, verify=None,
                     rescale=True):
    """Random totally positive 4 x n matrix with reproducible seed.

    Parameters are drawn i.i.d. from ``distribution`` (default
    log-uniform on [0.1, 10]); with ``exact`` they are rationalized so
    all minors are exact.  The minor test runs exhaustively when
    ``verify`` is true (default: on for n <= 10).  Columns are rescaled
    to unit max entry unless ``rescale`` is false.
    """
    if n < 4:
        raise DimensionError("need n >= 4 columns")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    params = [_draw_parameter(rng, distribution, exact) for _ in range(n * n)]
    Z = tp_matrix_from_bidiagonal(n, params)
    if rescale:
        Z = rescale_columns(Z)
    if verify is None:
        verify = n <= 10
    if verify and not Z.is_totally_positive():
        raise DomainError("sampled matrix failed the minor test")
    return Z


def vandermonde_tp_matrix(ts):
    """Columns (1, t, t^2, t^3) at increasing positive t: totally positive."""
    ts = list(ts)
    if any(t <= 0 for t in ts):
        raise DomainError("nodes must be positive")
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise DomainError("nodes must be strictly increasing")
    cols = tuple((1 * t ** 0, t, t ** 2, t ** 3) for t in ts)
    return TotallyPositiveMatrix(cols, tuple(ts))


# ---------------------------------------------------------------------------
# The explicit positive 4 x 10 matrix
# ---------------------------------------------------------------------------

def pentagon_tp_matrix(params=None):
    """The explicit birational 4 x 10 totally positive matrix.

    Takes 24 positive parameters named 'a'..'x' (dict, sequence, or None
    for all ones) and returns the matrix whose 210 maximal minors are
    monomial-positive in the parameters.  Its five consecutive-column
    lines form a positive pentagon configuration.
    """
    if params is None:
        params = {k: Fraction(1) for k in PARAM_LETTERS}
    elif not isinstance(params, dict):
        vals = list(params)
        if len(vals) != 24:
            raise DimensionError("need 24 parameters a..x")
        params = dict(zip(PARAM_LETTERS, vals))
    missing = [k for k in PARAM_LETTERS if k not in params]
    if missing:
        raise DomainError("missing parameters: %s" % ",".join(missing))
    vals = {k: _positive_param(params[k]) for k in PARAM_LETTERS}
    a, b, c, d, e, f, g, h, i, j, k, l, m, n, o, p, q, r, s, t, u, v, w, x = \
        (vals[ch] for ch in PARAM_LETTERS)
    A3 = (g * h + (g + k) * l + (g + k + o) * p + (g + k + o + s) * t
          + (g + k + o + s + v) * w)
    A4a = g * h * i
    A4b = A4a + (g * h + (g + k) * l) * m
    A4c = A4b + (g * h + (g + k) * l + (g + k + o) * p) * q
    A4 = A4c + (g * h + (g + k) * l + (g + k + o) * p + (g + k + o + s) * t) * u
    B4a = d * e + (d + h) * i
    B4b = B4a + (d + h + l) * m
    B4c = B4b + (d + h + l + p) * q
    B4 = B4c + (d + h + l + p + t) * u
    cols = (
        (1, 0, 0, 0),
        (g + k + o + s + v + x, 1, 0, 0),
        (A3, d + h + l + p + t + w, 1, 0),
        (A4, B4, b + e + i + m + q + u, 1),
        (A4c * r, B4c * r, (b + e + i + m + q) * r, r),
        (A4b * n, B4b * n, (b + e + i + m) * n, n),
        (A4a * j, B4a * j, (b + e + i) * j, j),
        (0, d * e * f, (b + e) * f, f),
        (0, 0, b * c, c),
        (0, 0, 0, a),
    )
    return TotallyPositiveMatrix(cols, tuple(vals[ch] for ch in PARAM_LETTERS))


# ---------------------------------------------------------------------------
# Positive line configurations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PositiveLineConfiguration:
    """Lines spanned by consecutive column pairs of a positive matrix.

    ``starts`` gives the first column index p_i of each line; incident
    neighbors share a column (p_{i+1} = p_i + 1), generic neighbors skip
    (p_{i+1} = p_i + 2).
    """

    Z: TotallyPositiveMatrix
    starts: tuple

    def __post_init__(self):
        for s in self.starts:
            if not 1 <= s <= self.Z.n - 1:
                raise DimensionError("line start %d out of range" % s)

    @property
    def n_lines(self):
        return len(self.starts)

    def line(self, i):
        """External line i (1-based)."""
        s = self.starts[i - 1]
        return line_from_points(ProjectivePoint(self.Z.column(s)),
                                ProjectivePoint(self.Z.column(s + 1)))

    def lines(self):
        return [self.line(i) for i in range(1, self.n_lines + 1)]


def configuration_starts(diagram: LandauDiagram):
    """Column start indices for a diagram's external lines.

    Consecutive externals joined by an incidence edge in H share a
    column; all others advance by two.
    """
    d = diagram.d
    H = {tuple(sorted(e)) for e in diagram.H}
    starts = [1]
    for m in range(1, d):
        step = 1 if (m, m + 1) in H else 2
        starts.append(starts[-1] + step)
    return tuple(starts)


def columns_needed(diagram: LandauDiagram):
    return configuration_starts(diagram)[-1] + 1


def sample_positive_configuration(diagram: LandauDiagram, seed,
                                  distribution="log-uniform", exact=True,
                                  extra_columns=0):
    """Positive line configuration for a diagram's external pattern."""
    starts = configuration_starts(diagram)
    n = starts[-1] + 1 + extra_columns
    Z = sample_tp_matrix(n, seed, distribution, exact=exact, verify=False)
    return PositiveLineConfiguration(Z, starts)


# ---------------------------------------------------------------------------
# Experiments
# ---------------------------------------------------------------------------

@dataclass
class ExperimentReport:
    """Aggregate of an independent-trials experiment."""

    trials: int
    seed: object
    conclusive: int = 0
    all_real: int = 0
    counts: dict = field(default_factory=dict)
    worst_imag: float = 0.0
    margins: list = field(default_factory=list)
    min_value: object = None
    min_at: object = None
    violations: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def as_dict(self):
        return {
            "trials": self.trials,
            "seed": self.seed,
            "conclusive": self.conclusive,
            "all_real": self.all_real,
            "counts": {str(k): v for k, v in sorted(self.counts.items())},
            "worst_imag": self.worst_imag,
            "min_value": None if self.min_value is None else float(self.min_value),
            "violations": self.violations,
            "failures": self.failures,
        }


def _trial_rng(seed, t):
    return random.Random((seed, t))


def _float_line(L):
    """Real float copy of an exact line, scaled to unit max coordinate."""
    coords = [float(c) for c in L.coords]
    m = max(abs(c) for c in coords)
    return PlueckerLine([c / m for c in coords], _skip_check=True)


def _solution_imag(sol):
    worst = 0.0
    for L in sol.lines:
        coords = normalize_float([complex(c) for c in L.coords])
        worst = max(worst, max(abs(v.imag) for v in coords))
    return worst


def solve_positive_fiber(diagram: LandauDiagram, lines):
    """Dispatch a diagram's fiber problem to the matching solver.

    Returns (solutions, cycle polynomial or None).
    """
    G = diagram.G
    if G.ell == 1 and diagram.u[0] == 4:
        return solve_box4(*lines), None
    n_edges = len(G.edges)
    if n_edges == G.ell - 1:
        sol = solve_tree(diagram, lines)
        return (sol if isinstance(sol, list) else [sol]), None
    if G.ell == 3 and n_edges == 3:
        return solve_triangle(diagram, lines)
    if n_edges == G.ell and all(G.degree(i) == 2 for i in range(1, G.ell + 1)):
        return solve_cycle_numeric(diagram, lines)
    raise DomainError("no solver for this diagram")


def _count_real_roots_exact(f):
    """Exact number of real roots (Sturm) of a rational-coefficient
    polynomial, counted without multiplicity."""
    import sympy

    x = sympy.symbols("x")
    poly = sympy.Poly(sum(sympy.Rational(c) * x ** k
                          for k, c in enumerate(f.coeffs)), x)
    squarefree = poly.quo(poly.gcd(poly.diff(x)))
    return squarefree.count_roots(), squarefree.degree()


def reality_experiment(diagram: LandauDiagram, trials, seed,
                       distribution="log-uniform", imag_tol=1e-6):
    """Solve the fiber over random positive configurations; count reality.

    Each trial draws its own positive configuration from a seed derived
    as (seed, trial-index), solves the fiber numerically, and records
    the solution count and the worst normalized imaginary part.  Solver
    failures are reported as inconclusive trials, never dropped.
    """
    report = ExperimentReport(trials=trials, seed=seed)
    for t in range(trials):
        rng = _trial_rng(seed, t)
        try:
            config = sample_positive_configuration(diagram, rng, distribution,
                                                   exact=True)
            lines = [_float_line(L) for L in config.lines()]
            sols, f = solve_positive_fiber(diagram, lines)
            worst = max(_solution_imag(s) for s in sols) if sols else 0.0
            real = worst <= imag_tol
            if not real:
                # tight real pairs can masquerade as conjugate pairs in
                # floats; certify with an exact real-root count instead
                if f is not None:
                    nreal, ndistinct = _count_real_roots_exact(f)
                    real = nreal == ndistinct
                else:
                    exact_sols, _ = solve_positive_fiber(diagram, config.lines())
                    real = all(s.is_real for s in exact_sols)
        except Exception as exc:  # inconclusive trial, kept in the report
            report.failures.append((t, repr(exc)))
            continue
        report.conclusive += 1
        report.counts[len(sols)] = report.counts.get(len(sols), 0) + 1
        report.margins.append(worst)
        report.worst_imag = max(report.worst_imag, worst)
        if real:
            report.all_real += 1
    return report


def copositivity_experiment(evaluator, diagram: LandauDiagram, trials, seed,
                            distribution="log-uniform"):
    """Evaluate a closed-form discriminant on random positive configurations.

    Exact rational sampling makes each sign decision exact.  Reports the
    minimum value seen, where it occurred, and every nonpositive value
    with its trial index.
    """
    report = ExperimentReport(trials=trials, seed=seed)
    for t in range(trials):
        rng = _trial_rng(seed, t)
        try:
            config = sample_positive_configuration(diagram, rng, distribution,
                                                   exact=True)
            val = evaluator(*config.lines())
        except Exception as exc:
            report.failures.append((t, repr(exc)))
            continue
        report.conclusive += 1
        if report.min_value is None or val < report.min_value:
            report.min_value = val
            report.min_at = t
        if not val > 0:
            report.violations.append((t, val))
    return report


# ---------------------------------------------------------------------------
# Promotion substitutions
# ---------------------------------------------------------------------------

@dataclass
class PromotionReport:
    ok: bool
    min_minor: float
    n_minors: int
    reality_violation: bool = False
    details: list = field(default_factory=list)


def _minor_test(cols, tol=0.0, normalize=True):
    """Sign-normalize columns and test all 4-column minors; returns
    (all positive, min normalized minor, count).

    Exact columns (Fraction / quadratic-extension entries) get exact
    sign decisions; floats fall back to a tolerance test.
    """
    if normalize:
        cols = sign_normalize_columns(cols)
    exact = all(isinstance(v, (int, Fraction, QuadExt)) for c in cols for v in c)
    scales = [max(abs(scalar_to_complex(v)) for v in c) or 1.0 for c in cols]
    worst = None
    count = 0
    ok = True
    for js in itertools.combinations(range(len(cols)), 4):
        d = _det4([cols[j] for j in js])
        df = scalar_to_complex(d).real
        norm = df / (scales[js[0]] * scales[js[1]] * scales[js[2]] * scales[js[3]])
        count += 1
        if worst is None or norm < worst:
            worst = norm
        positive = exact_sign(d) > 0 if exact else df > tol
        if not positive:
            ok = False
    return ok, worst, count


def _representative_minor_test(marked, rest, tol=0.0, allow_swap=True):
    """Test total positivity over the projective representatives of the
    marked columns: all sign flips, and optionally the labeling order of
    the first two marked columns (two points on one line).

    Returns (ok, min normalized minor of the best representative, count,
    representative description or None).
    """
    if allow_swap == "all":
        orders = list(itertools.permutations(range(len(marked))))
    else:
        orders = [tuple(range(len(marked)))]
        if allow_swap and len(marked) >= 2:
            orders.append((1, 0) + tuple(range(2, len(marked))))
    rest = sign_normalize_columns(rest)
    best = (False, None, 0, None)
    for order in orders:
        picked = [marked[i] for i in order]
        for signs in itertools.product((1, -1), repeat=len(marked)):
            cols = [[s * t for t in c] for s, c in zip(signs, picked)]
            cols += [list(c) for c in rest]
            ok, worst, count = _minor_test(cols, tol=tol, normalize=False)
            if ok:
                return True, worst, count, (order, signs)
            if best[1] is None or worst > best[1]:
                best = (False, worst, count, None)
    return best


def promotion_positivity_check(Z: TotallyPositiveMatrix, branch=1, tol=1e-9):
    """Substitute one branch of the four-line problem into a positive matrix.

    The first eight columns span the lines M1..M4; X is the chosen
    transversal branch; the matrix [v|w|z9|...|zn] with v = X cap M1,
    w = X cap M2 must again have all positive maximal minors for some
    projective representative (column signs, labeling of v and w).
    """
    if Z.n < 8:
        raise DimensionError("box promotion needs n >= 8 columns")
    if branch not in (1, -1):
        raise DomainError("branch must be +1 or -1")
    exact = all(isinstance(v, (int, Fraction))
                for c in Z.columns for v in c)
    lines = [Z.line(i) if exact else _float_line(Z.line(i))
             for i in range(1, 5)]
    sols = solve_box4(*lines)
    sol = next(s for s in sols if s.meta.get("branch") == branch)
    if not sol.is_real:
        return PromotionReport(False, 0.0, 0, reality_violation=True,
                               details=["complex branch on positive input"])
    X = sol.lines[0]
    v = list(intersection_point(X, lines[0]).coords)
    w = list(intersection_point(X, lines[1]).coords)
    rest = [Z.column(j) if exact else [float(x) for x in Z.column(j)]
            for j in range(9, Z.n + 1)]
    if not exact:
        v = [complex(x).real for x in v]
        w = [complex(x).real for x in w]
    ok, worst, count, rep = _representative_minor_test([v, w], rest, tol=tol)
    return PromotionReport(ok, worst if worst is not None else 0.0, count,
                           details=[("representative", rep)] if rep else [])


def triangle_promotion_check(Z: TotallyPositiveMatrix, tol=1e-9):
    """Promotion test for the triangle: all 16 solutions of the nine-line
    problem on columns 1..18 give a positive 4 x (n-15) matrix.

    For each solution, with L_a the line meeting M1 and L_b the line
    meeting M9: x = L_a cap M1, p = L_a cap L_b, y = L_b cap M9, and the
    matrix [x|p|y|z19|...|zn] must pass the minor test.
    """
    if Z.n < 21:
        raise DimensionError("triangle promotion needs n >= 21 columns")
    diagram = LandauDiagram(InternalGraph(3, [(1, 2), (1, 3), (2, 3)]),
                            PendantVector((3, 3, 3)))
    Z = rescale_columns(Z)
    lines = [_float_line(Z.line(i)) for i in range(1, 10)]
    sols, f = solve_triangle(diagram, lines)
    all_certified_real = None
    if any(_solution_imag(s) > 1e-6 for s in sols):
        nreal, ndistinct = _count_real_roots_exact(f)
        all_certified_real = nreal == ndistinct
    rest = [[float(x) for x in Z.column(j)] for j in range(19, Z.n + 1)]
    reports = []
    all_ok = True
    any_complex = False
    worst = None
    count = 0
    for sol in sols:
        if _solution_imag(sol) > 1e-6 and not all_certified_real:
            any_complex = True
            all_ok = False
            reports.append("complex solution on positive input")
            continue
        La, Lb = sol.lines[0], sol.lines[2]
        x = [complex(v).real for v in intersection_point(La, lines[0]).coords]
        p = [complex(v).real for v in intersection_point(La, Lb).coords]
        y = [complex(v).real for v in intersection_point(Lb, lines[8]).coords]
        ok, w, cnt, rep = _representative_minor_test([x, p, y], rest, tol=tol,
                                                     allow_swap="all")
        count = cnt
        if worst is None or (w is not None and w < worst):
            worst = w
        if not ok:
            all_ok = False
            reports.append("minor test failed for one solution")
        else:
            reports.append(("representative", rep))
    return PromotionReport(all_ok, worst if worst is not None else 0.0, count,
                           reality_violation=any_complex, details=reports)
