"""Exterior algebra laws against independent brute-force oracles."""

import itertools
import random
from fractions import Fraction

import pytest

from geoformal.errors import (DimensionMismatchError, GradeError, MetricError,
                              ScalarKindError)
from geoformal.exterior import (FrameMetric, Multivector, evaluate,
                                hodge_star, interior, lefschetz_invertible,
                                lefschetz_matrix, pullback, two_form_kernel,
                                two_form_rank, wedge)

M = Multivector


# -- independent oracles ------------------------------------------------------

def perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def eval_oracle(form, vectors):
    """Antisymmetric evaluation by explicit permutation sums (no interior)."""
    total = Fraction(0)
    k = len(vectors)
    for mask, coeff in form.terms_dict().items():
        idx = [i for i in range(form.n) if mask >> i & 1]
        assert len(idx) == k
        for perm in itertools.permutations(range(k)):
            prod = Fraction(coeff) * perm_sign(list(perm))
            for slot, p in enumerate(perm):
                prod *= Fraction(vectors[slot][idx[p]])
            total += prod
    return total


def random_homogeneous(rng, n, grade, terms=3):
    out = {}
    for _ in range(terms):
        idx = tuple(sorted(rng.sample(range(n), grade)))
        mask = 0
        for i in idx:
            mask |= 1 << i
        out[mask] = out.get(mask, 0) + rng.randint(-4, 4)
    return M(n, {m: c for m, c in out.items() if c})


def random_vectors(rng, n, k):
    return [[rng.randint(-3, 3) for _ in range(n)] for _ in range(k)]


# -- spec examples -------------------------------------------------------------

def test_wedge_disjoint_blades():
    assert M.blade(6, (0, 1)).wedge(M.blade(6, (2, 3))) == M.blade(6, (0, 1, 2, 3))


def test_wedge_square_cross_terms():
    w = M.blade(6, (0, 1)) + M.blade(6, (2, 3))
    assert w.wedge(w) == M.blade(6, (0, 1, 2, 3)).scale(2)


def test_wedge_cube_brute_force():
    # oracle: expand the cube over all ordered blade triples with sorting signs
    x = M.blade(6, (0, 1)) + M.blade(6, (2, 3)) + M.blade(6, (4, 5))
    terms = list(x.terms_dict().items())
    total = {}
    for (m1, c1), (m2, c2), (m3, c3) in itertools.product(terms, repeat=3):
        if m1 & m2 or (m1 | m2) & m3:
            continue
        idx = [i for m in (m1, m2, m3) for i in range(6) if m >> i & 1]
        inv = sum(1 for a in range(6) for b in range(a + 1, 6)
                  if idx[a] > idx[b])
        sign = -1 if inv % 2 else 1
        mask = m1 | m2 | m3
        total[mask] = total.get(mask, 0) + sign * c1 * c2 * c3
    cube = x.wedge(x).wedge(x)
    assert cube.terms_dict() == {m: c for m, c in total.items() if c}
    assert cube == M.volume(6).scale(6)


def test_interior_examples():
    assert interior([1, 0, 0, 0, 0, 0], M.blade(6, (0, 1))) == M.blade(6, (1,))
    assert interior([0, 0, 1, 0, 0, 0], M.blade(6, (0, 1))).is_zero()
    # second slot contributes a minus sign
    assert interior([0, 1, 0, 0, 0, 0], M.blade(6, (0, 1, 2))) == \
        M.blade(6, (0, 2)).scale(-1)


def test_interior_grade_zero_rejected():
    with pytest.raises(GradeError):
        interior([1, 0, 0, 0], M.unit(4))


def test_interior_length_mismatch():
    with pytest.raises(DimensionMismatchError):
        interior([1, 0], M.blade(4, (0, 1)))


def test_evaluate_examples():
    e1 = [1, 0, 0, 0, 0, 0]
    e2 = [0, 1, 0, 0, 0, 0]
    assert evaluate(M.blade(6, (0, 1)), [e1, e2]) == 1
    assert evaluate(M.blade(6, (0, 1)), [e2, e1]) == -1
    basis = [[1 if i == j else 0 for i in range(6)] for j in range(6)]
    assert evaluate(M.volume(6), basis) == 1


def test_two_form_rank_examples():
    assert two_form_rank(M.blade(6, (0, 1))) == 2
    ker = two_form_kernel(M.blade(6, (0, 1)))
    assert len(ker) == 4
    w = M.blade(6, (0, 1)) + M.blade(6, (2, 3))
    assert two_form_rank(w) == 4
    ker = two_form_kernel(w)
    assert [[x for x in v] for v in ker] == \
        [[0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]]
    assert two_form_rank(M.zero(6)) == 0


def test_hodge_examples():
    g = FrameMetric.euclidean(6)
    assert hodge_star(M.blade(6, (0, 1)), g) == M.blade(6, (2, 3, 4, 5))
    assert hodge_star(M.unit(6), g) == M.volume(6)
    assert hodge_star(hodge_star(M.blade(6, (0, 1)), g), g) == M.blade(6, (0, 1))


def test_lefschetz_examples():
    std = M.blade(6, (0, 1)) + M.blade(6, (2, 3)) + M.blade(6, (4, 5))
    assert lefschetz_invertible(std)
    assert not lefschetz_invertible(M.blade(6, (0, 1)))
    zero_rows = lefschetz_matrix(M.zero(6))
    assert all(all(x == 0 for x in row) for row in zero_rows)
    with pytest.raises(DimensionMismatchError):
        lefschetz_matrix(M.blade(4, (0, 1)))


# -- algebraic laws -------------------------------------------------------------

def test_wedge_associative_and_graded_commutative():
    rng = random.Random(101)
    for _ in range(400):
        n = rng.choice([4, 5, 6, 7, 8])
        p = rng.randint(0, n)
        q = rng.randint(0, n)
        r = rng.randint(0, n)
        a = random_homogeneous(rng, n, p)
        b = random_homogeneous(rng, n, q)
        c = random_homogeneous(rng, n, r)
        assert a.wedge(b).wedge(c) == a.wedge(b.wedge(c))
        sign = -1 if (p * q) % 2 else 1
        assert a.wedge(b) == b.wedge(a).scale(sign)


def test_interior_antiderivation_and_square_zero():
    rng = random.Random(55)
    for _ in range(400):
        n = rng.choice([4, 5, 6, 7])
        p = rng.randint(1, n - 1)
        q = rng.randint(1, n - p)
        a = random_homogeneous(rng, n, p)
        b = random_homogeneous(rng, n, q)
        v = random_vectors(rng, n, 1)[0]
        lhs = interior(v, a.wedge(b)) if not a.wedge(b).is_zero() else M.zero(n)
        sign = -1 if p % 2 else 1
        rhs = interior(v, a).wedge(b) + a.wedge(interior(v, b)).scale(sign)
        assert lhs == rhs
        if p >= 2:
            assert interior(v, interior(v, a)).is_zero()


def test_evaluate_matches_oracle_and_alternates():
    rng = random.Random(77)
    for _ in range(200):
        n = rng.choice([4, 5, 6])
        k = rng.randint(1, n)
        a = random_homogeneous(rng, n, k)
        vs = random_vectors(rng, n, k)
        assert evaluate(a, vs) == eval_oracle(a, vs)
        if k >= 2:
            i, j = rng.sample(range(k), 2)
            swapped = list(vs)
            swapped[i], swapped[j] = swapped[j], swapped[i]
            assert evaluate(a, swapped) == -evaluate(a, vs)


def test_two_form_rank_even_and_matches_kernel():
    rng = random.Random(31)
    for _ in range(200):
        n = rng.choice([4, 6, 8])
        a = random_homogeneous(rng, n, 2, terms=4)
        rank = two_form_rank(a)
        assert rank % 2 == 0
        assert rank == n - len(two_form_kernel(a))


def test_hodge_involution_all_grades():
    for n in (4, 6, 7, 8, 12):
        g = FrameMetric.euclidean(n)
        rng = random.Random(n)
        for k in range(n + 1):
            a = random_homogeneous(rng, n, k, terms=2)
            sign = -1 if (k * (n - k)) % 2 else 1
            assert hodge_star(hodge_star(a, g), g) == a.scale(sign)


def test_hodge_norm_law():
    rng = random.Random(4)
    g = FrameMetric.diagonal([1, 4, 9, 1, 4, 25])
    for _ in range(50):
        k = rng.randint(0, 6)
        a = random_homogeneous(rng, 6, k, terms=3)
        diag = g.diagonal_entries()
        norm2 = Fraction(0)
        for mask, c in a.terms_dict().items():
            w = Fraction(1)
            for i in range(6):
                if mask >> i & 1:
                    w *= diag[i]
            norm2 += Fraction(c) ** 2 * w
        # det(G) = 1*4*9*1*4*25 = 3600, so the unit volume is e123456/60
        vol = M.volume(6).scale(Fraction(1, 60))
        assert a.wedge(hodge_star(a, g)) == vol.scale(norm2)


def test_hodge_rejects_bad_metrics():
    with pytest.raises(MetricError):
        FrameMetric([[1, 0], [0, -1]])
    with pytest.raises(MetricError):
        FrameMetric([[1, 2], [0, 1]])
    g = FrameMetric([[2, 1], [1, 2]])
    with pytest.raises(MetricError):
        hodge_star(M.blade(2, (0,)), g)
    # non-square determinant without an explicit scale
    g2 = FrameMetric.diagonal([2, 1, 1, 1])
    with pytest.raises(MetricError):
        hodge_star(M.blade(4, (0, 1)), g2)
    # but fine once the scale is supplied
    out = hodge_star(M.blade(4, (0, 1)), g2, scale=1)
    assert out == M.blade(4, (2, 3)).scale(2)


def test_lefschetz_invertible_iff_cube_nonzero():
    rng = random.Random(9)
    for _ in range(150):
        w = random_homogeneous(rng, 6, 2, terms=5)
        cube = w.wedge(w).wedge(w)
        assert lefschetz_invertible(w) == (not cube.is_zero())


def test_pullback_matches_evaluation():
    rng = random.Random(12)
    for _ in range(60):
        n = 5
        a = random_homogeneous(rng, n, 2, terms=3)
        p = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
        pa = pullback(a, p)
        for _ in range(4):
            vs = random_vectors(rng, n, 2)
            pvs = [[sum(p[i][j] * v[j] for j in range(n)) for i in range(n)]
                   for v in vs]
            assert evaluate(pa, vs) == evaluate(a, pvs)


# -- scalar-kind discipline ------------------------------------------------------

def test_scalar_kinds_never_mix():
    a = M(4, {0b0011: 1})
    b = M(4, {0b1100: 1.0}, "float")
    with pytest.raises(ScalarKindError):
        wedge(a, b)
    with pytest.raises(ScalarKindError):
        a + b
    with pytest.raises(ScalarKindError):
        M(4, {0b0011: 1, 0b1100: 2.0})


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        wedge(M.blade(4, (0,)), M.blade(6, (0,)))


def test_float_kind_wedge_works():
    a = M(6, {0b000011: 1.0, 0b001100: 1.0}, "float")
    sq = a.wedge(a)
    assert sq.kind == "float"
    assert sq.coeff_mask(0b001111) == 2.0
