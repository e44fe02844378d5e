"""Lie algebra constructions: brackets, Killing forms, the three-form."""

from fractions import Fraction

import pytest

from geoformal import linalg
from geoformal.errors import LieAlgebraError
from geoformal.exterior import Multivector, evaluate, interior
from geoformal.lie import (LieAlgebra, Subalgebra, biinvariant_three_form,
                           ce_differential_full, coadjoint_lie_derivative_full,
                           is_ad_invariant, killing_form, named_algebra,
                           reductive_split, sl3_chevalley, su, torus_element)


def _trace_form(alg, scale):
    """Independent Killing oracle: 2n * tr(XY) on the matrix basis."""
    d = alg.dim
    out = [[Fraction(0)] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            prod = Fraction(0)
            A, B = alg.matrix_basis[i], alg.matrix_basis[j]
            n = len(A)
            for r in range(n):
                for s in range(n):
                    are, aim = A[r][s]
                    bre, bim = B[s][r]
                    prod += are * bre - aim * bim
            out[i][j] = scale * prod
    return out


def test_su_dimensions():
    assert su(2).dim == 3
    assert su(3).dim == 8
    assert su(4).dim == 15
    with pytest.raises(LieAlgebraError):
        su(5)


def test_su_killing_is_trace_form():
    # Killing of su(n) equals 2n * Re tr(XY); two independent routes
    for n in (2, 3):
        alg = su(n)
        assert killing_form(alg) == _trace_form(alg, Fraction(2 * n))


def test_su_killing_negative_definite():
    for n in (2, 3, 4):
        assert linalg.is_negative_definite(killing_form(su(n)))


def test_sl3_chevalley_relations():
    sl3 = sl3_chevalley()
    H1, H2 = sl3.basis_vector(0), sl3.basis_vector(1)
    E1, E2, E3 = (sl3.basis_vector(i) for i in (2, 3, 4))
    F1 = sl3.basis_vector(5)
    assert sl3.bracket(H1, E1) == [x * 2 for x in E1]
    assert sl3.bracket(E1, F1) == H1
    assert sl3.bracket(H1, E2) == [-x for x in E2]
    assert sl3.bracket(H2, E1) == [-x for x in E1]
    assert sl3.bracket(E1, E2) == E3  # the chosen E3 convention
    assert sl3.bracket(H1, F1) == [-2 * x for x in F1]


def test_sl3_killing_values():
    sl3 = sl3_chevalley()
    B = killing_form(sl3)
    assert B[2][5] == 6    # B(E1, F1): 6 * tr(E1 F1)
    assert B[2][2] == 0    # root grading
    assert B[0][0] == 12   # B(H1, H1) = 6 * tr(H1^2)
    assert B == _trace_form(sl3, Fraction(6))
    assert is_ad_invariant(sl3, B)


def test_killing_ad_invariance_identity():
    for name in ("su2", "su3", "sl3-chevalley"):
        g = named_algebra(name)
        B = killing_form(g)
        d = g.dim
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    lhs = sum(g.c[i][j][t] * B[t][k] for t in range(d))
                    rhs = sum(g.c[i][k][t] * B[j][t] for t in range(d))
                    assert lhs + rhs == 0


def test_antisymmetry_violation_rejected():
    bad = [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
    with pytest.raises(LieAlgebraError):
        LieAlgebra(bad)


def test_jacobi_violation_rejected():
    # antisymmetric but non-Jacobi structure on R^3
    c = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    c[0][1] = [0, 0, 1]
    c[1][0] = [0, 0, -1]
    c[1][2] = [1, 0, 0]
    c[2][1] = [-1, 0, 0]
    c[0][2] = [0, 0, 1]
    c[2][0] = [0, 0, -1]
    with pytest.raises(LieAlgebraError):
        LieAlgebra(c)


def test_torus_element():
    t = torus_element(1, 1)
    g = named_algebra("su3")
    assert t[g.index_of("t1")] == 1
    assert t[g.index_of("t2")] == 2
    assert torus_element(1, -1, override=True)[g.index_of("t2")] == 0
    with pytest.raises(LieAlgebraError):
        torus_element(2, 4)
    with pytest.raises(LieAlgebraError):
        torus_element(1, -1)
    with pytest.raises(LieAlgebraError):
        torus_element(0, 0, override=True)


def test_subalgebra_closure_check():
    g = named_algebra("su3")
    with pytest.raises(LieAlgebraError):
        # a12 and s13 do not close under the bracket
        Subalgebra(g, [g.basis_vector(g.index_of("a12")),
                       g.basis_vector(g.index_of("s13"))])
    h = Subalgebra(g, [g.basis_vector(g.index_of("t1")),
                       g.basis_vector(g.index_of("t2"))])
    assert h.dim == 2


def test_reductive_split_dimensions():
    g3 = named_algebra("su3")
    h1 = Subalgebra(g3, [torus_element(1, 1)])
    assert len(reductive_split(g3, h1).m_basis) == 7
    h2 = Subalgebra(g3, [g3.basis_vector(0), g3.basis_vector(1)])
    assert len(reductive_split(g3, h2).m_basis) == 6
    g4 = named_algebra("su4")
    idx = [g4.index_of("t1"), g4.index_of("a12"), g4.index_of("s12")]
    hb = Subalgebra(g4, [g4.basis_vector(i) for i in idx])
    assert len(reductive_split(g4, hb).m_basis) == 12


def test_three_form_case_identities():
    sl3 = named_algebra("sl3-chevalley")
    B = killing_form(sl3)
    eta = biinvariant_three_form(sl3, B)
    E1, F1, H1 = sl3.basis_vector(2), sl3.basis_vector(5), sl3.basis_vector(0)
    E2, F2 = sl3.basis_vector(3), sl3.basis_vector(6)

    def X(a, b, c, d):
        v = [Fraction(0)] * 8
        v[0], v[1], v[2], v[5] = Fraction(a), Fraction(b), Fraction(c), Fraction(d)
        return v

    for (a, b, c, d) in ((1, 0, 0, 1), (2, -1, 3, 5), (0, 0, 1, 0), (1, 2, 0, 0)):
        assert evaluate(eta, [E1, H1, X(a, b, c, d)]) == -2 * d * B[2][5]
        assert evaluate(eta, [F1, H1, X(a, b, c, d)]) == 2 * c * B[5][2]
        assert evaluate(eta, [F1, X(a, b, 0, 0), E1]) == (2 * a - b) * B[5][2]
        assert evaluate(eta, [F2, X(a, b, 0, 0), E2]) == (2 * b - a) * B[3][6]


def test_three_form_closed_and_biinvariant():
    sl3 = named_algebra("sl3-chevalley")
    eta = biinvariant_three_form(sl3)
    assert ce_differential_full(sl3, eta).is_zero()
    for i in range(sl3.dim):
        assert coadjoint_lie_derivative_full(
            sl3, sl3.basis_vector(i), eta).is_zero()


def test_three_form_contraction_rank():
    sl3 = named_algebra("sl3-chevalley")
    eta = biinvariant_three_form(sl3)
    cols = []
    for i in range(sl3.dim):
        iv = interior(sl3.basis_vector(i), eta)
        cols.append([iv.coeff_mask(m) for m in range(1 << sl3.dim)])
    assert linalg.rank(cols) == sl3.dim  # trivial kernel (semisimplicity)
    L = [0, 1, 2, 5]  # H1, H2, E1, F1
    assert linalg.rank([cols[i] for i in L]) == 4


def test_cartan_formula_on_full_complex():
    # L_X = i_X d + d i_X on Lambda(g*)
    import random
    sl3 = named_algebra("sl3-chevalley")
    rng = random.Random(3)
    for _ in range(20):
        k = rng.randint(1, 3)
        idx = sorted(rng.sample(range(8), k))
        mask = 0
        for i in idx:
            mask |= 1 << i
        form = Multivector(8, {mask: rng.randint(1, 3)})
        x = [Fraction(rng.randint(-2, 2)) for _ in range(8)]
        lhs = coadjoint_lie_derivative_full(sl3, x, form)
        rhs = interior(x, ce_differential_full(sl3, form)) + \
            ce_differential_full(sl3, interior(x, form))
        assert lhs == rhs


def test_named_registry():
    assert named_algebra("su2").dim == 3
    assert named_algebra("sl3-chevalley").labels[0] == "H1"
    with pytest.raises(LieAlgebraError):
        named_algebra("so5")
