"""Scalar fields and polynomial engines used by every other module.

Exact rationals are carried by :class:`fractions.Fraction` (aliased
``ExactRational``), complex rationals by :class:`GaussianRational`, and
square-root branch values by :class:`QuadExt`, a quadratic extension
``a + b*sqrt(delta)`` whose base field may itself be a quadratic extension
(so towers of square roots work, which the cycle solvers need).

Polynomial machinery: dense univariate polynomials over any of these
fields, sparse multivariate polynomials, and the truncated polynomial ring
Z[t_1..t_l]/(t_i^cap) that houses multidegrees.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

try:
    from gmpy2 import mpq as FastRational
except ImportError:  # pragma: no cover - gmpy2 is optional
    FastRational = Fraction

ExactRational = Fraction

#: Types accepted as exact rational scalars throughout the package.
RATIONAL_TYPES = (int, Fraction) if FastRational is Fraction \
    else (int, Fraction, FastRational)


class DimensionError(ValueError):
    """Operands live in incompatible spaces (wrong length, cap, or variable count)."""


class DomainError(ValueError):
    """Input outside the mathematical domain of the operation."""


class ConsistencyError(ArithmeticError):
    """A redundant computation disagreed with itself beyond tolerance."""


class IllConditionedError(ArithmeticError):
    """Numerical problem too degenerate to solve at the requested tolerance."""


def rat(x, den=None):
    """Coerce to Fraction; rat(2,3) == Fraction(2,3)."""
    if den is not None:
        return Fraction(x, den)
    return Fraction(x)


# ---------------------------------------------------------------------------
# Gaussian rationals
# ---------------------------------------------------------------------------

class GaussianRational:
    """Complex numbers with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def i():
        return GaussianRational(0, 1)

    def _coerce(self, other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, RATIONAL_TYPES):
            return GaussianRational(other, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def norm2(self):
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.norm2()
        if n == 0:
            raise ZeroDivisionError("division by zero GaussianRational")
        num = self * o.conjugate()
        return GaussianRational(num.re / n, num.im / n)

    def __rtruediv__(self, other):
        return GaussianRational(other, 0) / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


# ---------------------------------------------------------------------------
# Quadratic extensions (possibly towered)
# ---------------------------------------------------------------------------

def _is_base_scalar(x):
    return isinstance(x, RATIONAL_TYPES) or isinstance(x, QuadExt)


class QuadExtContext:
    """Fixed radicand delta; produces and checks elements a + b*sqrt(delta)."""

    __slots__ = ("delta",)

    def __init__(self, delta):
        self.delta = delta

    def element(self, a, b=0):
        return QuadExt(a, b, self.delta)

    def sqrt(self):
        """The element sqrt(delta) itself."""
        return QuadExt(0, 1, self.delta)

    def from_base(self, a):
        return QuadExt(a, 0, self.delta)


class QuadExt:
    """a + b*sqrt(delta) over a base field; delta is fixed per context.

    Mixing elements with different radicands raises DomainError rather
    than silently extending the field.  The base coefficients may be
    Fractions or themselves QuadExt, giving towers of square roots.
    """

    __slots__ = ("a", "b", "delta")

    def __init__(self, a, b, delta):
        self.a = a
        self.b = b
        self.delta = delta

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if not _same_scalar(other.delta, self.delta):
                raise DomainError("mixed radicands in quadratic extension arithmetic")
            return other
        if isinstance(other, RATIONAL_TYPES):
            return QuadExt(other, 0 * _zero_like(self.b), self.delta)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, self.delta)

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.delta)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b, self.delta)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExt(self.a * o.a + self.b * o.b * self.delta,
                       self.a * o.b + self.b * o.a, self.delta)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadExt(self.a, -self.b, self.delta)

    def norm(self):
        """Field norm a^2 - b^2*delta, an element of the base field."""
        return self.a * self.a - self.b * self.b * self.delta

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = o.norm()
        if not _scalar_nonzero(n):
            raise ZeroDivisionError("division by zero quadratic-extension element")
        num = self * o.conjugate()
        return QuadExt(num.a / n, num.b / n, self.delta)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return _same_scalar(self.a, o.a) and _same_scalar(self.b, o.b)

    def __hash__(self):
        return hash(("QuadExt", _hashable(self.a), _hashable(self.b), _hashable(self.delta)))

    def __bool__(self):
        return _scalar_nonzero(self.a) or _scalar_nonzero(self.b)

    @property
    def is_rational_part_only(self):
        return not _scalar_nonzero(self.b)

    def rational_part(self):
        """Return a when b == 0, else raise ConsistencyError."""
        if _scalar_nonzero(self.b):
            raise ConsistencyError("radical part did not cancel: %r" % (self.b,))
        return self.a

    def to_complex(self):
        d = scalar_to_complex(self.delta)
        return scalar_to_complex(self.a) + scalar_to_complex(self.b) * np.sqrt(complex(d))

    def __repr__(self):
        return f"QuadExt({self.a!r} + {self.b!r}*sqrt({self.delta!r}))"


def exact_sign(x):
    """Sign (-1, 0, +1) of a real exact scalar, including QuadExt towers
    with positive radicands.  Complex-valued elements raise DomainError."""
    if isinstance(x, QuadExt):
        if exact_sign(x.delta) < 0:
            raise DomainError("sign of a complex quadratic element")
        sa, sb = exact_sign(x.a), exact_sign(x.b)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb if sa == 0 else sa
        # opposite signs: |a| vs |b| sqrt(delta) decided by the field norm
        return sa if exact_sign(x.norm()) > 0 else sb
    if isinstance(x, GaussianRational):
        if x.im != 0:
            raise DomainError("sign of a complex scalar")
        x = x.re
    return (x > 0) - (x < 0)


def exact_sqrt(x):
    """Rational square root of an exact rational when one exists, else None."""
    if isinstance(x, RATIONAL_TYPES) and not isinstance(x, Fraction):
        x = Fraction(x)
    if not isinstance(x, Fraction) or x < 0:
        return None
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None


def _zero_like(x):
    return x * 0 if isinstance(x, QuadExt) else Fraction(0)


def _same_scalar(x, y):
    try:
        return x == y
    except DomainError:
        return False


def _scalar_nonzero(x):
    return bool(x)


def _hashable(x):
    return x if not isinstance(x, QuadExt) else ("q", _hashable(x.a), _hashable(x.b))


def scalar_to_complex(x):
    """Embed an exact scalar (Fraction / GaussianRational / QuadExt tower) into complex."""
    if isinstance(x, QuadExt):
        return x.to_complex()
    if isinstance(x, GaussianRational):
        return complex(x)
    return complex(x)


# ---------------------------------------------------------------------------
# Univariate polynomials
# ---------------------------------------------------------------------------

class UnivariatePolynomial:
    """Dense univariate polynomial, coefficients low-to-high over any field."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = list(coeffs)
        while len(coeffs) > 1 and not _scalar_nonzero(coeffs[-1]):
            coeffs.pop()
        if not coeffs:
            coeffs = [Fraction(0)]
        self.coeffs = coeffs

    @property
    def degree(self):
        if len(self.coeffs) == 1 and not _scalar_nonzero(self.coeffs[0]):
            return -1
        return len(self.coeffs) - 1

    def is_zero(self):
        return self.degree < 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self):
        if len(self.coeffs) == 1:
            return UnivariatePolynomial([self.coeffs[0] * 0])
        return UnivariatePolynomial([c * k for k, c in enumerate(self.coeffs)][1:])

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UnivariatePolynomial([
            (a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n)])

    def __sub__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UnivariatePolynomial([
            (a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0) for k in range(n)])

    def __mul__(self, other):
        if not isinstance(other, UnivariatePolynomial):
            return UnivariatePolynomial([c * other for c in self.coeffs])
        out = [self.coeffs[0] * other.coeffs[0] * 0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UnivariatePolynomial(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, UnivariatePolynomial):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __repr__(self):
        return "UnivariatePolynomial(%r)" % (self.coeffs,)


def sylvester_resultant(p: UnivariatePolynomial, q: UnivariatePolynomial):
    """Resultant of p and q via the Sylvester matrix determinant."""
    m, n = p.degree, q.degree
    if m < 0 or n < 0:
        raise DomainError("resultant of the zero polynomial is undefined")
    if m == 0:
        return p.coeffs[0] ** n
    if n == 0:
        return q.coeffs[0] ** m
    size = m + n
    zero = p.coeffs[0] * 0
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([zero] * i + pc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + qc + [zero] * (size - n - 1 - i))
    return generic_det(rows)


def univariate_discriminant(p: UnivariatePolynomial):
    """disc(p) = (-1)^(d(d-1)/2) * Res(p, p') / lc(p)."""
    d = p.degree
    if d < 0:
        raise DomainError("discriminant of the zero polynomial")
    if d < 2:
        raise DomainError("discriminant needs degree >= 2")
    res = sylvester_resultant(p, p.derivative())
    sign = -1 if (d * (d - 1) // 2) % 2 else 1
    return sign * res / p.coeffs[-1]


class RootCluster:
    """A root with its multiplicity cluster and a reality flag."""

    __slots__ = ("value", "multiplicity", "is_real")

    def __init__(self, value, multiplicity, is_real):
        self.value = value
        self.multiplicity = multiplicity
        self.is_real = is_real

    def __repr__(self):
        return f"RootCluster({self.value}, x{self.multiplicity}, real={self.is_real})"


def is_real_root(z, real_tol=1e-8):
    """Default reality flag: |Im z| <= real_tol * (1 + |z|)."""
    return abs(z.imag) <= real_tol * (1.0 + abs(z))


def find_real_and_complex_roots(p, tol=1e-9, real_tol=1e-8, high_precision=False):
    """All roots of a float/complex polynomial, with multiplicity clusters.

    Returns a list of RootCluster covering deg(p) roots in total.  Each
    root satisfies |p(root)| <= tol * scale(p).  Roots within the reality
    threshold of the real axis are flagged real.
    """
    exact_input = (isinstance(p, UnivariatePolynomial)
                   and all(isinstance(c, RATIONAL_TYPES) for c in p.coeffs))
    if exact_input:
        # normalize exactly first: huge integer coefficients may not fit a float
        cmax = max(abs(Fraction(c)) for c in p.coeffs if c)
        coeffs = [complex(Fraction(c) / cmax) for c in p.coeffs]
    elif isinstance(p, UnivariatePolynomial):
        coeffs = [scalar_to_complex(c) if not isinstance(c, (int, float, complex)) else complex(c)
                  for c in p.coeffs]
    else:
        coeffs = [complex(c) for c in p]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 1:
        raise DomainError("root finding needs degree >= 1")
    if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coeffs):
        raise DomainError("non-finite coefficient")
    scale = max(abs(c) for c in coeffs)
    # exact input fixes the degree, so a relatively tiny (but nonzero) leading
    # coefficient is legitimate; for float input it means the degree is unclear
    if not exact_input and abs(coeffs[-1]) < tol * scale:
        raise IllConditionedError("leading coefficient below tol * |p|; degree ill-determined")
    if exact_input:
        high_precision = True
    if high_precision:
        import mpmath
        if exact_input:
            with mpmath.workdps(60):
                mp_in = [mpmath.mpmathify(c) for c in reversed(p.coeffs)]
                mp_roots = mpmath.polyroots(mp_in, maxsteps=400, extraprec=200)
        else:
            mp_roots = mpmath.polyroots([mpmath.mpc(c) for c in reversed(coeffs)],
                                        maxsteps=200, extraprec=120)
        roots = np.array([complex(r) for r in mp_roots])
    else:
        roots = np.roots(list(reversed(coeffs)))
    # verify residuals (relative to local evaluation scale)
    for r in roots:
        val = 0j
        mag = 0.0
        power = 1.0 + 0j
        for c in coeffs:
            val += c * power
            mag += abs(c) * abs(power)
            power *= r
        if abs(val) > max(tol * mag, tol * scale) * 1e3:
            raise IllConditionedError(f"root residual too large at {r}: |p|={abs(val)}")
    # cluster roots that sit closer than tol^(1/2) on the natural scale;
    # exact coefficients give high-precision roots, so the radius can be
    # much tighter without splitting genuine multiple roots
    cluster_tol = 1e-10 if exact_input else max(1e-6, tol ** 0.5)
    order = sorted(range(len(roots)), key=lambda k: (roots[k].real, roots[k].imag))
    clusters = []
    for k in order:
        z = roots[k]
        for cl in clusters:
            if abs(z - cl[0] / cl[1]) <= cluster_tol * (1.0 + abs(z)):
                cl[0] += z
                cl[1] += 1
                break
        else:
            clusters.append([z, 1])
    return [RootCluster(c[0] / c[1], c[1], is_real_root(c[0] / c[1], real_tol))
            for c in clusters]


def interpolate_exact(samples, degree_bound):
    """Unique polynomial of degree <= degree_bound through exact samples.

    Extra samples beyond degree_bound+1 are used as consistency checks;
    a disagreement raises ConsistencyError reporting the worst deviation.
    """
    xs = [s[0] for s in samples]
    if len(set(xs)) != len(xs):
        raise DomainError("duplicate interpolation abscissae")
    if len(samples) < degree_bound + 1:
        raise DomainError("need at least degree_bound+1 samples")
    base = samples[: degree_bound + 1]
    # Newton divided differences
    xs = [s[0] for s in base]
    table = [s[1] for s in base]
    coeffs_newton = [table[0]]
    for level in range(1, len(base)):
        table = [(table[k + 1] - table[k]) / (xs[k + level] - xs[k])
                 for k in range(len(table) - 1)]
        coeffs_newton.append(table[0])
    poly = UnivariatePolynomial([coeffs_newton[-1]])
    for k in range(len(coeffs_newton) - 2, -1, -1):
        poly = poly * UnivariatePolynomial([-xs[k], 1]) + UnivariatePolynomial([coeffs_newton[k]])
    worst = None
    for x, v in samples[degree_bound + 1:]:
        dev = poly(x) - v
        if _scalar_nonzero(dev):
            if worst is None or abs(dev) > abs(worst):
                worst = dev
    if worst is not None:
        raise ConsistencyError(f"overdetermined interpolation inconsistent; max deviation {worst}")
    return poly


def rational_function_reconstruct(samples, num_degree, den_degree):
    """Recover P/Q (deg P <= num_degree, deg Q <= den_degree, Q monic) from samples.

    Solves the linear system P(x) - F(x) Q(x) = 0 exactly.  Returns
    (P, Q) as UnivariatePolynomials, or raises ConsistencyError when the
    samples do not fit the degree bounds.
    """
    n_unknowns = num_degree + 1 + den_degree  # Q monic: den_degree free coeffs
    if len(samples) < n_unknowns + 1:
        raise DomainError("not enough samples for rational reconstruction")
    rows = []
    rhs = []
    for x, f in samples:
        row = [x ** k for k in range(num_degree + 1)]
        row += [-f * x ** k for k in range(den_degree)]
        rows.append(row)
        rhs.append(f * x ** den_degree)
    sol = solve_linear_exact(rows, rhs)
    if sol is None:
        raise ConsistencyError("rational reconstruction system inconsistent")
    p = UnivariatePolynomial(sol[: num_degree + 1])
    q = UnivariatePolynomial(sol[num_degree + 1:] + [Fraction(1)])
    return p, q


# ---------------------------------------------------------------------------
# Exact linear algebra
# ---------------------------------------------------------------------------

def generic_det(rows):
    """Determinant over any field by Gaussian elimination with exact division."""
    n = len(rows)
    m = [list(r) for r in rows]
    if any(len(r) != n for r in m):
        raise DimensionError("determinant of a non-square matrix")
    det = None
    sign = 1
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if _scalar_nonzero(m[r][col]):
                pivot = r
                break
        if pivot is None:
            return m[0][0] * 0
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        pv = m[col][col]
        det = pv if det is None else det * pv
        for r in range(col + 1, n):
            if _scalar_nonzero(m[r][col]):
                factor = m[r][col] / pv
                m[r] = [m[r][k] - factor * m[col][k] for k in range(n)]
    return det if sign == 1 else -det


def solve_linear_exact(rows, rhs):
    """Solve an (over)determined linear system exactly; None if inconsistent.

    Requires the coefficient matrix to have full column rank.
    """
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    n_rows = len(m)
    n_cols = len(rows[0])
    piv_rows = []
    piv_r = 0
    for col in range(n_cols):
        pivot = None
        for r in range(piv_r, n_rows):
            if _scalar_nonzero(m[r][col]):
                pivot = r
                break
        if pivot is None:
            raise DomainError("coefficient matrix is column-rank deficient")
        m[piv_r], m[pivot] = m[pivot], m[piv_r]
        pv = m[piv_r][col]
        for r in range(n_rows):
            if r != piv_r and _scalar_nonzero(m[r][col]):
                factor = m[r][col] / pv
                m[r] = [m[r][k] - factor * m[piv_r][k] for k in range(n_cols + 1)]
        piv_rows.append((piv_r, col))
        piv_r += 1
    for r in range(piv_r, n_rows):
        if _scalar_nonzero(m[r][n_cols]):
            return None
    sol = [None] * n_cols
    for r, col in piv_rows:
        sol[col] = m[r][n_cols] / m[r][col]
    return sol


def nullspace_exact(rows, n_cols):
    """Basis of the exact nullspace of a matrix given as a list of rows."""
    m = [list(r) for r in rows]
    n_rows = len(m)
    piv_cols = []
    piv_r = 0
    for col in range(n_cols):
        pivot = None
        for r in range(piv_r, n_rows):
            if _scalar_nonzero(m[r][col]):
                pivot = r
                break
        if pivot is None:
            continue
        m[piv_r], m[pivot] = m[pivot], m[piv_r]
        pv = m[piv_r][col]
        m[piv_r] = [v / pv for v in m[piv_r]]
        for r in range(n_rows):
            if r != piv_r and _scalar_nonzero(m[r][col]):
                factor = m[r][col]
                m[r] = [m[r][k] - factor * m[piv_r][k] for k in range(n_cols)]
        piv_cols.append(col)
        piv_r += 1
    free_cols = [c for c in range(n_cols) if c not in piv_cols]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * n_cols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(piv_cols):
            vec[pc] = -m[r][fc]
        basis.append(vec)
    return basis


# ---------------------------------------------------------------------------
# Multivariate polynomials
# ---------------------------------------------------------------------------

class TruncatedMultiPoly:
    """Element of Z[t_1..t_l]/(t_i^cap): sparse exponent -> int coefficient map."""

    __slots__ = ("nvars", "cap", "terms")

    def __init__(self, nvars, cap=6, terms=None):
        self.nvars = nvars
        self.cap = cap
        self.terms = {}
        if terms:
            for expo, coeff in terms.items():
                if coeff == 0:
                    continue
                if len(expo) != nvars:
                    raise DimensionError("exponent length != nvars")
                if any(e >= cap for e in expo):
                    continue
                self.terms[tuple(expo)] = self.terms.get(tuple(expo), 0) + coeff
            self.terms = {e: c for e, c in self.terms.items() if c != 0}

    @staticmethod
    def constant(nvars, value, cap=6):
        return TruncatedMultiPoly(nvars, cap, {(0,) * nvars: value})

    @staticmethod
    def variable(nvars, index, cap=6):
        expo = [0] * nvars
        expo[index] = 1
        return TruncatedMultiPoly(nvars, cap, {tuple(expo): 1})

    def coefficient(self, expo):
        return self.terms.get(tuple(expo), 0)

    def _check(self, other):
        if self.nvars != other.nvars or self.cap != other.cap:
            raise DimensionError("mismatched variable count or truncation cap")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return TruncatedMultiPoly(self.nvars, self.cap, terms)

    def __mul__(self, other):
        if isinstance(other, int):
            return TruncatedMultiPoly(self.nvars, self.cap,
                                      {e: c * other for e, c in self.terms.items()})
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if any(v >= self.cap for v in e):
                    continue
                terms[e] = terms.get(e, 0) + c1 * c2
        return TruncatedMultiPoly(self.nvars, self.cap, terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, TruncatedMultiPoly):
            return NotImplemented
        return (self.nvars, self.cap, self.terms) == (other.nvars, other.cap, other.terms)

    def n_terms(self):
        return len(self.terms)

    def total_degrees(self):
        return sorted({sum(e) for e in self.terms})

    def evaluate_ones(self):
        return sum(self.terms.values())

    def __repr__(self):
        return f"TruncatedMultiPoly({self.nvars} vars, cap {self.cap}, {self.terms})"


def poly_mul_truncated(p: TruncatedMultiPoly, q: TruncatedMultiPoly) -> TruncatedMultiPoly:
    """Truncated product; monomials with any exponent >= cap are discarded."""
    return p * q


class SparsePoly:
    """Sparse multivariate polynomial with exact field coefficients (no cap)."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = {}
        if terms:
            for expo, coeff in terms.items():
                if not _scalar_nonzero(coeff):
                    continue
                self.terms[tuple(expo)] = coeff

    @staticmethod
    def constant(nvars, value):
        return SparsePoly(nvars, {(0,) * nvars: value})

    @staticmethod
    def variable(nvars, index, coeff=Fraction(1)):
        expo = [0] * nvars
        expo[index] = 1
        return SparsePoly(nvars, {tuple(expo): coeff})

    def __add__(self, other):
        if not isinstance(other, SparsePoly):
            other = SparsePoly.constant(self.nvars, other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = terms.get(e, 0) + c
            if _scalar_nonzero(v):
                terms[e] = v
            else:
                terms.pop(e, None)
        return SparsePoly(self.nvars, terms)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, SparsePoly):
            other = SparsePoly.constant(self.nvars, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            return SparsePoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = terms.get(e, 0) + c1 * c2
                if _scalar_nonzero(v):
                    terms[e] = v
                else:
                    terms.pop(e, None)
        return SparsePoly(self.nvars, terms)

    __rmul__ = __mul__

    def coefficient(self, expo):
        return self.terms.get(tuple(expo), Fraction(0))

    def substitute(self, values):
        """Evaluate at a full point (list of scalars)."""
        acc = 0
        for e, c in self.terms.items():
            term = c
            for idx, power in enumerate(e):
                for _ in range(power):
                    term = term * values[idx]
            acc = acc + term
        return acc

    def is_zero(self):
        return not self.terms

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def __repr__(self):
        return f"SparsePoly({self.nvars} vars, {self.terms})"
