"""Exterior algebra over R^n (n <= 16) with exact-rational or float scalars.

Blades are bitmasks over basis indices 0..n-1 in increasing-index
orientation; the concatenation sign of two disjoint blades is the parity of
index inversions between them.  The interior product contracts the first
slot: i_v(a)(w_2,...,w_k) = a(v, w_2,...,w_k), so contracting the j-th slot
(0-indexed) of a blade contributes (-1)^j.

Scalar kinds never mix: a Multivector is either exact (Fraction) or float.
Proof-side code stays exact; the numerical search uses the float kind.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import NamedTuple

from . import linalg
from .errors import DimensionMismatchError, GradeError, MetricError, ScalarKindError

MAX_DIM = 16

EXACT = "exact"
FLOAT = "float"


class Blade(NamedTuple):
    mask: int

    @property
    def grade(self):
        return self.mask.bit_count()

    @property
    def indices(self):
        return tuple(i for i in range(self.mask.bit_length()) if self.mask >> i & 1)

    def __str__(self):
        if self.mask == 0:
            return "1"
        return "e" + "".join(str(i + 1) for i in self.indices)


def _coerce(value, kind):
    if kind == EXACT:
        if isinstance(value, float):
            raise ScalarKindError("float coefficient in an exact multivector")
        # ints stay ints: cheaper than Fraction in the hot exact paths
        return value if isinstance(value, int) else Fraction(value)
    return float(value)


def _infer_kind(values):
    kinds = {FLOAT if isinstance(v, float) else EXACT for v in values}
    if len(kinds) > 1:
        raise ScalarKindError("mixed exact and float coefficients")
    return kinds.pop() if kinds else None


def wedge_sign(a_mask, b_mask):
    """Sign of e_A ^ e_B for disjoint masks: parity of index inversions."""
    swaps = 0
    bm = b_mask
    while bm:
        low = bm & -bm
        swaps += (a_mask >> low.bit_length()).bit_count()
        bm ^= low
    return -1 if swaps & 1 else 1


class Multivector:
    """Immutable element of Lambda(R^n); sparse blade->coefficient storage."""

    __slots__ = ("n", "kind", "_terms")

    def __init__(self, n, terms=None, kind=None):
        if not 0 < n <= MAX_DIM:
            raise DimensionMismatchError(f"dimension must be in 1..{MAX_DIM}, got {n}")
        self.n = n
        terms = dict(terms or {})
        inferred = _infer_kind(terms.values())
        if kind is None:
            kind = inferred or EXACT
        elif inferred is not None and inferred != kind:
            raise ScalarKindError(f"coefficients are {inferred}, requested {kind}")
        self.kind = kind
        clean = {}
        for mask, c in terms.items():
            if mask < 0 or mask >= (1 << n):
                raise DimensionMismatchError(f"blade mask {mask:#x} outside 2^{n}")
            c = _coerce(c, kind)
            if c != 0:
                clean[mask] = c
        self._terms = clean

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n, kind=EXACT):
        return cls(n, {}, kind)

    @classmethod
    def unit(cls, n, kind=EXACT):
        return cls(n, {0: 1 if kind == EXACT else 1.0}, kind)

    @classmethod
    def blade(cls, n, indices, coeff=1):
        """Blade from 0-based index tuple; repeated indices give zero."""
        mask = 0
        sign = 1
        for i in indices:
            bit = 1 << i
            if mask & bit:
                return cls.zero(n)
            # insertion sign: parity of already-present indices above i
            if (mask >> (i + 1)).bit_count() & 1:
                sign = -sign
            mask |= bit
        return cls(n, {mask: sign * coeff})

    @classmethod
    def covector(cls, n, i, coeff=1):
        return cls(n, {1 << i: coeff})

    @classmethod
    def volume(cls, n, kind=EXACT):
        return cls(n, {(1 << n) - 1: 1 if kind == EXACT else 1.0}, kind)

    # -- inspection ---------------------------------------------------------

    def items(self):
        return sorted(((Blade(m), c) for m, c in self._terms.items()),
                      key=lambda t: (t[0].grade, t[0].mask))

    def coefficient(self, indices):
        mv = Multivector.blade(self.n, indices)
        ((blade, sign),) = mv.items() if not mv.is_zero() else ((None, 0),)
        if blade is None:
            return _coerce(0, self.kind)
        return self._terms.get(blade.mask, _coerce(0, self.kind)) * sign

    def coeff_mask(self, mask):
        return self._terms.get(mask, _coerce(0, self.kind))

    def is_zero(self):
        return not self._terms

    def grades(self):
        return sorted({m.bit_count() for m in self._terms})

    def grade(self):
        """The common grade of all terms, or None for zero/inhomogeneous."""
        gs = self.grades()
        return gs[0] if len(gs) == 1 else None

    def homogeneous_grade(self):
        if self.is_zero():
            return None
        g = self.grade()
        if g is None:
            raise GradeError(f"multivector is inhomogeneous: grades {self.grades()}")
        return g

    def terms_dict(self):
        return dict(self._terms)

    # -- arithmetic ---------------------------------------------------------

    def _check_compat(self, other):
        if self.n != other.n:
            raise DimensionMismatchError(f"dimensions differ: {self.n} vs {other.n}")
        if self.kind != other.kind:
            raise ScalarKindError(f"scalar kinds differ: {self.kind} vs {other.kind}")

    def __add__(self, other):
        self._check_compat(other)
        terms = dict(self._terms)
        for m, c in other._terms.items():
            terms[m] = terms.get(m, _coerce(0, self.kind)) + c
        return Multivector(self.n, terms, self.kind)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Multivector(self.n, {m: -c for m, c in self._terms.items()}, self.kind)

    def scale(self, s):
        s = _coerce(s, self.kind)
        return Multivector(self.n, {m: c * s for m, c in self._terms.items()}, self.kind)

    def __eq__(self, other):
        return (isinstance(other, Multivector) and self.n == other.n
                and self.kind == other.kind and self._terms == other._terms)

    def __hash__(self):
        return hash((self.n, self.kind, tuple(sorted(self._terms.items()))))

    def wedge(self, other):
        self._check_compat(other)
        out = {}
        for ma, ca in self._terms.items():
            for mb, cb in other._terms.items():
                if ma & mb:
                    continue
                m = ma | mb
                c = ca * cb * wedge_sign(ma, mb)
                acc = out.get(m)
                out[m] = c if acc is None else acc + c
        return Multivector(self.n, out, self.kind)

    def __repr__(self):
        if self.is_zero():
            return f"Multivector({self.n}, 0)"
        parts = [f"{c}*{Blade(m)}" for (m, c) in sorted(self._terms.items())]
        return f"Multivector({self.n}, {' + '.join(parts)})"


def wedge(a, b):
    """Graded-commutative product; sign by blade-inversion parity."""
    return a.wedge(b)


def wedge_all(factors):
    it = iter(factors)
    acc = next(it)
    for f in it:
        acc = acc.wedge(f)
    return acc


def interior(v, a):
    """Contraction of the first slot of `a` with the vector `v`.

    Antiderivation convention: removing the j-th (0-indexed) index of a blade
    contributes (-1)^j.
    """
    if len(v) != a.n:
        raise DimensionMismatchError(f"vector length {len(v)} != dimension {a.n}")
    k = a.homogeneous_grade()
    if k is None:
        return Multivector.zero(a.n, a.kind)
    if k == 0:
        raise GradeError("interior product of a grade-0 multivector")
    coeffs = [_coerce(x, a.kind) for x in v]
    out = {}
    for mask, c in a._terms.items():
        slot = 0
        mm = mask
        while mm:
            low = mm & -mm
            i = low.bit_length() - 1
            if coeffs[i] != 0:
                nm = mask ^ low
                term = c * coeffs[i] * (1 if slot % 2 == 0 else -1)
                acc = out.get(nm)
                out[nm] = term if acc is None else acc + term
            slot += 1
            mm ^= low
    return Multivector(a.n, out, a.kind)


def evaluate(a, vectors):
    """Full antisymmetric evaluation a(v_1,...,v_k); equals iterated interiors."""
    k = a.homogeneous_grade()
    if k is None:
        k = 0 if not vectors else len(vectors)
    if len(vectors) != k and not a.is_zero():
        raise GradeError(f"grade {k} form evaluated on {len(vectors)} vectors")
    acc = a
    for v in vectors:
        if acc.is_zero():
            break
        acc = interior(v, acc)
    return acc.coeff_mask(0)


def _two_form_matrix(a):
    if a.is_zero():
        return [[Fraction(0)] * a.n for _ in range(a.n)]
    if a.homogeneous_grade() != 2:
        raise GradeError("expected a 2-form")
    if a.kind != EXACT:
        raise ScalarKindError("rank/kernel analysis requires exact scalars")
    m = [[Fraction(0)] * a.n for _ in range(a.n)]
    for mask, c in a._terms.items():
        lo = (mask & -mask).bit_length() - 1
        hi = mask.bit_length() - 1
        m[lo][hi] = c
        m[hi][lo] = -c
    return m


def two_form_rank(a):
    """Rank of the skew matrix of a 2-form; always even."""
    return linalg.rank(_two_form_matrix(a))


def two_form_kernel(a):
    """Exact basis of {v : i_v a = 0}."""
    return linalg.kernel(_two_form_matrix(a), a.n)


def two_form_from_matrix(n, skew):
    terms = {}
    for i in range(n):
        for j in range(i + 1, n):
            if skew[i][j] != 0:
                terms[(1 << i) | (1 << j)] = Fraction(skew[i][j])
    return Multivector(n, terms)


def pullback(a, p):
    """Pullback along the linear map with matrix p: (P*a)(v...) = a(Pv...).

    Basis covector e^i pulls back to the i-th row of p.
    """
    n = a.n
    if len(p) != n or any(len(r) != n for r in p):
        raise DimensionMismatchError("matrix shape mismatch")
    rows = [Multivector(n, {1 << j: Fraction(p[i][j]) for j in range(n)})
            for i in range(n)]
    out = Multivector.zero(n, a.kind)
    for mask, c in a._terms.items():
        factors = [rows[i] for i in Blade(mask).indices]
        term = Multivector.unit(n, a.kind).scale(c)
        for f in factors:
            term = term.wedge(f)
        out = out + term
    return out


class FrameMetric:
    """SPD Gram matrix of the coordinate coframe, with an orientation sign.

    Positive-definiteness is certified on construction by exact leading
    principal minors.  The Hodge star is only defined for diagonal Gram
    matrices (the root-adapted bases used here are always orthogonal).
    """

    __slots__ = ("n", "gram", "orientation")

    def __init__(self, gram, orientation=1):
        n = len(gram)
        if not 0 < n <= MAX_DIM:
            raise MetricError(f"dimension must be in 1..{MAX_DIM}")
        g = [[Fraction(x) for x in row] for row in gram]
        if any(len(row) != n for row in g):
            raise MetricError("Gram matrix is not square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise MetricError("Gram matrix is not symmetric")
        if not linalg.is_positive_definite(g):
            raise MetricError("Gram matrix is not positive definite")
        if orientation not in (1, -1):
            raise MetricError("orientation must be +1 or -1")
        self.n = n
        self.gram = tuple(tuple(row) for row in g)
        self.orientation = orientation

    @classmethod
    def euclidean(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries, orientation=1):
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)],
                   orientation)

    def is_diagonal(self):
        return all(self.gram[i][j] == 0
                   for i in range(self.n) for j in range(self.n) if i != j)

    def diagonal_entries(self):
        return [self.gram[i][i] for i in range(self.n)]


def _exact_sqrt(q):
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def hodge_star(a, metric, scale=None):
    """Hodge star for a diagonal rational coframe metric.

    The factor 1/sqrt(det G) in front of the star must be rational for the
    result to stay exact; pass `scale` to substitute the overall scale by
    hand (harmonicity verdicts are scale-invariant).
    """
    if metric.n != a.n:
        raise DimensionMismatchError("metric dimension mismatch")
    if not metric.is_diagonal():
        raise MetricError("Hodge star supports only diagonal Gram matrices")
    a.homogeneous_grade()  # raises for inhomogeneous input
    diag = metric.diagonal_entries()
    if scale is None:
        d = Fraction(1)
        for h in diag:
            d *= h
        root = _exact_sqrt(d)
        if root is None:
            raise MetricError(
                "det(Gram) has no rational square root; pass an explicit scale")
        scale = Fraction(1) / root
    full = (1 << a.n) - 1
    out = {}
    for mask, c in a._terms.items():
        comp = full ^ mask
        norm = Fraction(1)
        mm = mask
        while mm:
            low = mm & -mm
            norm *= diag[low.bit_length() - 1]
            mm ^= low
        factor = wedge_sign(mask, comp) * norm * metric.orientation
        if a.kind == FLOAT:
            out[comp] = c * float(factor * Fraction(scale)) if isinstance(scale, Fraction) else c * float(factor) * scale
        else:
            out[comp] = c * factor * scale
    return Multivector(a.n, out, a.kind)


def _grade_masks(n, k):
    masks = [m for m in range(1 << n) if m.bit_count() == k]
    masks.sort()
    return masks


def lefschetz_matrix(omega):
    """Matrix of a -> a ^ omega from 2-forms to 4-forms in dimension six."""
    if omega.n != 6:
        raise DimensionMismatchError("Lefschetz map implemented for n = 6 only")
    if not omega.is_zero() and omega.homogeneous_grade() != 2:
        raise GradeError("expected a 2-form")
    masks2 = _grade_masks(6, 2)
    masks4 = _grade_masks(6, 4)
    index4 = {m: i for i, m in enumerate(masks4)}
    zero = _coerce(0, omega.kind)
    mat = [[zero] * len(masks2) for _ in range(len(masks4))]
    for col, m2 in enumerate(masks2):
        image = Multivector(6, {m2: 1 if omega.kind == EXACT else 1.0},
                            omega.kind).wedge(omega)
        for mask, c in image._terms.items():
            mat[index4[mask]][col] = c
    return mat


def lefschetz_invertible(omega):
    if omega.kind != EXACT:
        raise ScalarKindError("invertibility check requires exact scalars")
    return linalg.det(lefschetz_matrix(omega)) != 0
