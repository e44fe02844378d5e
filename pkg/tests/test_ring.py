"""Graded-commutative ring tables: reduction, substitution, patterns."""

import random
from fractions import Fraction

import pytest

from geoformal import linalg
from geoformal.errors import RingError
from geoformal.ring import (GradedPoly, Generator,
                            RingPresentation, build_table,
                            builtin_presentation, is_pd_algebra, parse_poly,
                            pattern_match, poincare_pairing, poly_to_string,
                            substitute)


def _reduce_oracle(table, poly):
    """Independent reduction oracle: express the polynomial's vector as
    (relation span) + (quotient basis) by solving a full linear system with
    reversed column preference, then compare as ring equality."""
    pres = table.presentation
    if isinstance(poly, str):
        poly = parse_poly(poly, pres.gens)
    d = poly.degree()
    from geoformal.ring import _monomials_of_degree
    monos = list(reversed(_monomials_of_degree(pres.gens, d)))
    index = {m: i for i, m in enumerate(monos)}
    span = []
    for rel in pres.relations:
        rd = rel.degree()
        if rd > d:
            continue
        for mult in _monomials_of_degree(pres.gens, d - rd):
            prod = rel * GradedPoly(pres.gens, {mult: 1})
            if prod.is_zero():
                continue
            row = [Fraction(0)] * len(monos)
            for e, c in prod.terms.items():
                row[index[e]] = c
            span.append(row)
    vec = [Fraction(0)] * len(monos)
    for e, c in poly.terms.items():
        vec[index[e]] = c
    red, pivots = linalg.rref(span) if span else ([], [])
    for row, pc in zip(red, pivots):
        f = vec[pc]
        if f:
            vec = [x - f * y for x, y in zip(vec, row)]
    return GradedPoly(pres.gens, {monos[i]: vec[i] for i in range(len(monos))})


def _ring_equal(table, p, q):
    diff = (p if not isinstance(p, str) else table.presentation.poly(p)) - \
        (q if not isinstance(q, str) else table.presentation.poly(q))
    return table.is_ring_zero(diff)


# -- basics ---------------------------------------------------------------------

def test_wedge_presentation_bases():
    t = build_table(builtin_presentation("wedge", p=5, q=7))
    assert t.betti() == [1 if k in (0, 5, 7, 12) else 0 for k in range(13)]
    assert [t.monomial_name(m) for m in t.basis[12]] == ["u*v"]


def test_odd_generators_square_to_zero():
    gens = (Generator("u", 3), Generator("v", 5))
    u = GradedPoly.generator(gens, "u")
    assert (u * u).is_zero()
    v = GradedPoly.generator(gens, "v")
    # graded commutativity: odd * odd anticommutes
    assert u * v == (v * u).scale(-1)


def test_parse_poly_roundtrip():
    gens = (Generator("x", 2), Generator("y", 2))
    for s in ("x*y - y^2 + x^2", "-2*x^2 + 1/2*y^2", "x^3", "3*x*y"):
        p = parse_poly(s, gens)
        assert parse_poly(poly_to_string(p), gens) == p
    with pytest.raises(RingError):
        parse_poly("x*z", gens)
    with pytest.raises(RingError):
        parse_poly("x^y", gens)


def test_inhomogeneous_relation_rejected():
    with pytest.raises(RingError):
        RingPresentation([("x", 2)], ["x^2 + x"], 6)


def test_degree_overflow_rejected():
    with pytest.raises(RingError):
        RingPresentation([("x", 2)], ["x^4"], 6)
    t = build_table(builtin_presentation("eschenburg-ex1"))
    with pytest.raises(RingError):
        t.reduce("x^4")


# -- Eschenburg example 1 --------------------------------------------------------

def test_ex1_degree4_basis(ex1_table):
    assert [ex1_table.monomial_name(m) for m in ex1_table.basis[4]] == \
        ["x*y", "x^2"]
    assert ex1_table.betti() == [1, 0, 2, 0, 2, 0, 1]


def test_ex1_top_basis_is_designated(ex1_table):
    assert [ex1_table.monomial_name(m) for m in ex1_table.basis[6]] == ["x^2*y"]


def test_ex1_z_prime_identities(ex1_table):
    t = ex1_table
    z = t.presentation.poly("x - 2*y")
    # z'^2 = 5 x^2 exactly
    assert t.reduce_poly(z * z) == t.reduce_poly(t.presentation.poly("5*x^2"))
    assert {t.monomial_name(m): c for m, c in t.reduce(z * z).items()} == \
        {"x^2": Fraction(5)}
    # z'^3 = -10 x y^2 as ring elements
    z3 = t.reduce_poly(z * z * z)
    assert z3 == t.reduce_poly(t.presentation.poly("x*y^2").scale(-10))
    assert {t.monomial_name(m): c for m, c in z3.terms.items()} == \
        {"x^2*y": Fraction(-10)}
    # reduce(x*y^2) lands on the designated volume monomial
    assert {t.monomial_name(m): c for m, c in t.reduce("x*y^2").items()} == \
        {"x^2*y": Fraction(1)}


def test_ex1_reduction_matches_oracle(ex1_table):
    rng = random.Random(3)
    gens = ex1_table.presentation.gens
    for d in (2, 4, 6):
        from geoformal.ring import _monomials_of_degree
        monos = _monomials_of_degree(gens, d)
        for _ in range(10):
            poly = GradedPoly(gens, {m: rng.randint(-3, 3) for m in monos})
            mine = ex1_table.reduce_poly(poly)
            oracle = _reduce_oracle(ex1_table, poly)
            assert ex1_table.is_ring_zero(mine - oracle)


def test_ex1_is_pd(ex1_table):
    assert is_pd_algebra(ex1_table)
    assert linalg.rank(poincare_pairing(ex1_table, 2)) == 2


# -- Eschenburg example 2 --------------------------------------------------------

def test_ex2_bases_and_products(ex2_table):
    t = ex2_table
    assert t.betti() == [1, 0, 2, 0, 2, 0, 1]
    assert [t.monomial_name(m) for m in t.basis[4]] == ["x*y", "x^2"]
    # H^6 is a single line with x^3 = y^3 = x^2 y = x y^2
    for mono in ("x^3", "y^3", "x*y^2"):
        assert _ring_equal(t, mono, "x^2*y")
    s = t.presentation.poly("x + y")
    cube = t.reduce(s * s * s)
    assert {t.monomial_name(m): c for m, c in cube.items()} == \
        {"x^2*y": Fraction(8)}  # all four degree-6 monomials coincide
    assert t.is_ring_zero(t.presentation.poly("x - y") * s)


def test_ex2_pairing_is_degenerate(ex2_table):
    """The literal two-relation presentation is not a PD algebra: x - y
    pairs to zero with all of H^4 (the actual biquotient rings carry a
    weight-dependent cube ratio that restores duality).  The Lefschetz
    obstruction does not use duality."""
    t = ex2_table
    assert not is_pd_algebra(t)
    s = t.presentation.poly("x - y")
    for mono in ("x*y", "x^2"):
        assert t.is_ring_zero(s * t.presentation.poly(mono))


def test_pd_destroyed_by_extra_relation():
    pres = RingPresentation(
        [("x", 2), ("y", 2)],
        ["x^2 - y^2", "x^3 - y^3", "x^2"], 6, name="ex2-degenerate")
    assert not is_pd_algebra(build_table(pres))


# -- flag and sphere-bundle rings -------------------------------------------------

def test_flag_ring():
    t = build_table(builtin_presentation("flag-su3"))
    assert t.betti() == [1, 0, 2, 0, 2, 0, 1]
    assert is_pd_algebra(t)
    assert t.is_ring_zero("x^3")
    assert t.is_ring_zero("y^3")


def test_sphere_bundle_ring_values():
    t = build_table(builtin_presentation("sphere-bundle", c=Fraction(3)))
    assert t.betti() == [1, 0, 2, 0, 2, 0, 1]
    assert _ring_equal(t, "y^3", "-3*x^2*y")
    assert t.is_ring_zero("x*y^2")
    assert is_pd_algebra(t)


def test_sphere_bundle_chern_normalization():
    """Completing the square on y^2 + c1 xy + c2 x^2 = 0 gives
    y'^2 + (c2 - c1^2/4) x^2 = 0: the reduced constant is -p1/4."""
    c1, c2 = Fraction(2), Fraction(5)
    pres = RingPresentation(
        [("x", 2), ("y", 2)],
        [f"y^2 + {c1}*x*y + {c2}*x^2", "x^3"], 6,
        volume_monomial="x^2*y", name="chern")
    t = build_table(pres)
    yp = pres.poly(f"y + {c1 / 2}*x")
    c = c2 - c1 * c1 / 4
    assert t.is_ring_zero(yp * yp + pres.poly("x^2").scale(c))
    tag = pattern_match(t)
    assert tag.kind == "RANK_KERNEL"
    assert tag.params["c"] == c


# -- reduction laws ----------------------------------------------------------------

def test_reduce_linear_idempotent_and_kills_ideal(ex1_table, ex2_table):
    rng = random.Random(8)
    for t in (ex1_table, ex2_table):
        pres = t.presentation
        from geoformal.ring import _monomials_of_degree
        for rel in pres.relations:
            rd = rel.degree()
            for d in range(rd, pres.top + 1, 2):
                for mult in _monomials_of_degree(pres.gens, d - rd):
                    assert t.is_ring_zero(rel * GradedPoly(pres.gens, {mult: 1}))
        for d in (2, 4, 6):
            monos = _monomials_of_degree(pres.gens, d)
            p = GradedPoly(pres.gens, {m: rng.randint(-3, 3) for m in monos})
            q = GradedPoly(pres.gens, {m: rng.randint(-3, 3) for m in monos})
            rp = t.reduce_poly(p)
            assert t.reduce_poly(rp) == rp  # idempotent
            assert t.reduce_poly(p + q) == t.reduce_poly(
                t.reduce_poly(p) + t.reduce_poly(q))  # linear


def test_products_rereduce_consistently(ex1_table):
    rng = random.Random(21)
    t = ex1_table
    gens = t.presentation.gens
    from geoformal.ring import _monomials_of_degree
    m2 = _monomials_of_degree(gens, 2)
    m4 = _monomials_of_degree(gens, 4)
    for _ in range(30):
        p = GradedPoly(gens, {m: rng.randint(-3, 3) for m in m2})
        q = GradedPoly(gens, {m: rng.randint(-3, 3) for m in m4})
        assert t.reduce_poly(t.reduce_poly(p) * t.reduce_poly(q)) == \
            t.reduce_poly(p * q)
        assert t.reduce_poly(p * q) == t.reduce_poly(q * p)  # even degrees


def test_graded_commutativity_signs():
    gens = (Generator("a", 3), Generator("b", 2), Generator("c", 5))
    a = GradedPoly.generator(gens, "a")
    b = GradedPoly.generator(gens, "b")
    c = GradedPoly.generator(gens, "c")
    assert a * b == b * a
    assert a * c == (c * a).scale(-1)
    assert (a * b) * c == a * (b * c)


# -- substitution and the parameter family ----------------------------------------

def _nrel_formula(b, gens):
    return (parse_poly("x1*y1", gens).scale(5 * b - 2 * b * b - 4)
            + parse_poly("y1*y2", gens).scale(6 * b - 8)
            + parse_poly("y1^2", gens).scale(b * (b - 4))
            + parse_poly("y2^2", gens).scale(4))


def _displayed_relations(b, gens):
    d2 = (parse_poly("x1*y1", gens).scale(1 - 2 * b)
          + parse_poly("x1*y2", gens).scale(-2)
          + parse_poly("y1*y2", gens).scale(2)
          + parse_poly("y1^2", gens).scale(b))
    d3 = (parse_poly("x1*y1", gens).scale(-2 * b)
          + parse_poly("x1*y2", gens).scale(b - 4)
          + parse_poly("y1*y2", gens).scale(2 * b)
          + parse_poly("y2^2", gens).scale(2))
    return d2, d3


@pytest.mark.parametrize("b", [Fraction(x) for x in (-3, -2, -1, 1, 2, 3)])
def test_totaro_rewrite_grid(b):
    pres = builtin_presentation("totaro", a=1, b=b)
    table = build_table(pres)
    sub = substitute(table, {
        "x1": "x1",
        "y1": f"x1 + {3 / b}*x2",
        "y2": "x1 + 3/2*x3"})
    tsub = build_table(sub)
    gens = sub.gens
    d2, d3 = _displayed_relations(b, gens)
    # the displayed relations are ideal members of the rewritten presentation
    assert tsub.is_ring_zero(d2)
    assert tsub.is_ring_zero(d3)
    # and conversely the rewritten relations reduce to zero against them
    check = build_table(RingPresentation(
        [(g.name, g.degree) for g in gens],
        [d2, d3, parse_poly("x1^2", gens)], 6))
    for rel in sub.relations:
        assert check.is_ring_zero(rel)
    # the eliminating combination reproduces the displayed coefficients
    assert d2.scale(b - 4) + d3.scale(2) == _nrel_formula(b, gens)


def test_totaro_rewrite_random_rationals():
    rng = random.Random(42)
    gens = None
    for _ in range(100):
        b = Fraction(rng.randint(-30, 30), rng.randint(1, 12))
        if b == 0:
            continue
        pres = builtin_presentation("totaro", a=1, b=b)
        table = build_table(pres)
        sub = substitute(table, {
            "x1": "x1", "y1": f"x1 + {3 / b}*x2", "y2": "x1 + 3/2*x3"})
        gens = sub.gens
        d2, d3 = _displayed_relations(b, gens)
        tsub = build_table(sub)
        assert tsub.is_ring_zero(d2)
        assert tsub.is_ring_zero(d3)
        assert d2.scale(b - 4) + d3.scale(2) == _nrel_formula(b, gens)


def test_discriminant_fact():
    # 2b^2 - 5b + 4 has discriminant 25 - 32 = -7 < 0
    assert Fraction(5) ** 2 - 4 * Fraction(2) * Fraction(4) == -7


def test_substitute_identity_noop(ex1_table):
    sub = substitute(ex1_table, {"x": "x", "y": "y"})
    assert [poly_to_string(r) for r in sub.relations] == \
        [poly_to_string(r) for r in ex1_table.presentation.relations]


def test_substitute_rejects_singular(ex1_table):
    with pytest.raises(RingError):
        substitute(ex1_table, {"x": "x + y", "y": "x + y"})


def test_substitute_case4_decouples():
    pres = builtin_presentation("totaro", a=0, b=0)
    table = build_table(pres)
    sub = substitute(table, {"x1": "x1", "y1": "x2 + x3", "y2": "x2 + 1/2*x3"})
    tsub = build_table(sub)
    gens = sub.gens
    # the derived relations of the decoupled member
    assert tsub.is_ring_zero(parse_poly("y2^2 - y1*y2", gens))
    assert tsub.is_ring_zero(parse_poly("y1^2 - 2*y1*y2", gens))
    # and the would-be contradiction pivot reduces to zero
    y1y2sq = parse_poly("y1", gens) * parse_poly("y2^2", gens)
    assert tsub.is_ring_zero(y1y2sq)


# -- pairings and patterns ----------------------------------------------------------

def test_poincare_pairing_requires_one_dim_top():
    pres = RingPresentation([("x", 2), ("y", 2)], [], 4)
    t = build_table(pres)  # top piece is 3-dimensional
    with pytest.raises(RingError):
        poincare_pairing(t, 2)


def test_pd_betti_palindromic():
    for name, params in (("eschenburg-ex1", {}), ("flag-su3", {}),
                         ("sphere-bundle", {"c": 2}), ("wedge", {"p": 5, "q": 7})):
        t = build_table(builtin_presentation(name, **params))
        if is_pd_algebra(t):
            assert t.betti() == t.betti()[::-1]


def test_pattern_dispatch():
    assert pattern_match(build_table(builtin_presentation(
        "sphere-bundle", c=3))).kind == "RANK_KERNEL"
    tag = pattern_match(build_table(builtin_presentation("sphere-bundle", c=3)))
    assert tag.params["c"] == 3
    tag1 = pattern_match(build_table(builtin_presentation("eschenburg-ex1")))
    assert tag1.kind == "RANK_KERNEL" and tag1.params["c"] == -5
    assert pattern_match(build_table(builtin_presentation(
        "eschenburg-ex2"))).kind == "LEFSCHETZ"
    tt = pattern_match(build_table(builtin_presentation("totaro", a=1, b=-2)))
    assert tt.kind == "TOTARO" and (tt.params["a"], tt.params["b"]) == (1, -2)
    assert pattern_match(build_table(builtin_presentation(
        "wedge", p=5, q=7))).kind == "PROD_ODD"
    # truncated polynomial ring on one degree-4 generator: degrees 0, 4, 8
    p1 = RingPresentation([("x", 4)], [], 8, name="projective-plane-like")
    assert pattern_match(build_table(p1)).kind == "P1"


def test_trivial_bundle_matches_no_negative_pattern():
    t = build_table(builtin_presentation("sphere-bundle", c=0))
    tag = pattern_match(t)
    assert tag.kind not in ("RANK_KERNEL", "LEFSCHETZ", "TOTARO")
