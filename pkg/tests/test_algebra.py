import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from realcubic.algebra import (
    Interval,
    Poly,
    complex_roots,
    count_roots_below,
    discriminant,
    quadric_triple_resultant,
    real_root_count,
    real_roots,
    refine_root,
    resultant,
    squarefree_decomposition,
    strip_high,
    to_int_primitive,
    univ_divmod,
    univ_eval,
    univ_gcd,
    univ_mul,
)
from realcubic.errors import NonConvergence

F = Fraction


# ---------------------------------------------------------------------------
# Poly basics
# ---------------------------------------------------------------------------

def test_parse_simple():
    p = Poly.parse("x^3 - 2/3*x*y + 1/2")
    assert p.terms[(3, 0, 0, 0)] == 1
    assert p.terms[(1, 1, 0, 0)] == F(-2, 3)
    assert p.terms[(0, 0, 0, 0)] == F(1, 2)


def test_parse_decimal_exact():
    p = Poly.parse("0.25*x + 1.5")
    assert p.terms[(1, 0, 0, 0)] == F(1, 4)
    assert p.terms[(0, 0, 0, 0)] == F(3, 2)


def test_parse_implicit_mult_and_parens():
    assert Poly.parse("2x") == Poly.parse("2*x")
    assert Poly.parse("(x + y)^2") == Poly.parse("x^2 + 2*x*y + y^2")
    assert Poly.parse("-(x - y)") == Poly.parse("y - x")


def test_parse_double_star():
    assert Poly.parse("x**3 + 1") == Poly.parse("x^3 + 1")


def test_parse_rejects_unknown_variable():
    with pytest.raises(ValueError):
        Poly.parse("x + t")


def test_parse_rejects_garbage():
    for bad in ["x +", "x ^ y", "(x", "x ) y", "x^-2"]:
        with pytest.raises(ValueError):
            Poly.parse(bad)


coeff_st = st.fractions(
    min_value=-50, max_value=50, max_denominator=20
)


@st.composite
def poly_st(draw, max_terms=8, max_exp=4):
    n = draw(st.integers(min_value=1, max_value=max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(min_value=0, max_value=max_exp)) for _ in range(4))
        terms[e] = draw(coeff_st)
    return Poly(("x", "y", "z", "w"), terms)


@settings(max_examples=200, deadline=None)
@given(poly_st())
def test_print_parse_round_trip_bit_exact(p):
    assert Poly.parse(str(p)) == p


def test_arithmetic_identities():
    x = Poly.var("x")
    y = Poly.var("y")
    p = (x + y) ** 3
    q = x ** 3 + 3 * x ** 2 * y + 3 * x * y ** 2 + y ** 3
    assert p == q
    assert (p - q).is_zero()
    assert p.derivative("x") == 3 * (x + y) ** 2


def test_substitute_and_eval():
    p = Poly.parse("x^2 + y*z - w")
    v = p.eval({"x": F(2), "y": F(3), "z": F(5), "w": F(1)})
    assert v == 4 + 15 - 1
    q = p.substitute({"x": Poly.parse("y + 1")})
    assert q == Poly.parse("y^2 + 2*y + 1 + y*z - w")


def test_homogeneous_degree():
    assert Poly.parse("x^3 + y^2*w").homogeneous_degree() == 3
    assert Poly.parse("x^3 + y^2").homogeneous_degree() is None
    assert Poly.zero().homogeneous_degree() == 0


def test_coeffs_in_and_univariate():
    p = Poly.parse("x^2*y + x*z + 3")
    cs = p.coeffs_in("x")
    assert len(cs) == 3
    assert cs[0] == Poly.parse("3")
    assert cs[1] == Poly.parse("z")
    assert cs[2] == Poly.parse("y")
    u = Poly.parse("2*x^3 - x + 5").to_univariate("x")
    assert u == [F(5), F(-1), F(0), F(2)]
    with pytest.raises(ValueError):
        p.to_univariate("x")


# ---------------------------------------------------------------------------
# univariate helpers
# ---------------------------------------------------------------------------

def rand_coeffs(rng, deg, lo=-9, hi=9):
    c = [F(rng.randint(lo, hi), rng.randint(1, 4)) for _ in range(deg + 1)]
    while c[-1] == 0:
        c[-1] = F(rng.randint(lo, hi), 1)
    return c


def test_divmod_reconstruction():
    rng = random.Random(7)
    for _ in range(50):
        a = rand_coeffs(rng, rng.randint(2, 7))
        b = rand_coeffs(rng, rng.randint(1, 4))
        q, r = univ_divmod(a, b)
        rebuilt = [x + y for x, y in
                   zip(univ_mul(q, b) + [F(0)] * len(a), r + [F(0)] * len(a))]
        assert strip_high(rebuilt) == strip_high([F(t) for t in a])
        assert len(strip_high(r)) - 1 < len(strip_high(b)) - 1


def test_gcd_of_shared_factor():
    rng = random.Random(3)
    for _ in range(30):
        g = rand_coeffs(rng, 2)
        a = univ_mul(g, rand_coeffs(rng, 2))
        b = univ_mul(g, rand_coeffs(rng, 3))
        d = univ_gcd(a, b)
        # gcd must be divisible by g
        _, r = univ_divmod(d, g)
        assert strip_high(r) == []


def test_squarefree_reconstruction():
    rng = random.Random(11)
    for _ in range(30):
        f1 = rand_coeffs(rng, 1)
        f2 = rand_coeffs(rng, 2)
        p = univ_mul(univ_mul(f1, f1), f2)   # f1^2 * f2
        dec = squarefree_decomposition(p)
        rebuilt = [F(1)]
        for fac, m in dec:
            for _ in range(m):
                rebuilt = univ_mul(rebuilt, fac)
        lead = strip_high([F(t) for t in p])[-1]
        assert strip_high(rebuilt) == [t / lead for t in strip_high([F(t) for t in p])]
        assert sum(m * (len(fac) - 1) for fac, m in dec) == len(strip_high(p)) - 1


# ---------------------------------------------------------------------------
# real roots
# ---------------------------------------------------------------------------

def test_real_roots_multiplicity_cubed_factor():
    # (x - 1)^3 (x + 2): oracle checks the multiplicity by derivatives
    p = Poly.parse("(x - 1)^3 * (x + 2)")
    c = p.to_univariate("x")
    # derivative oracle at x = 1
    assert univ_eval(c, F(1)) == 0
    d1 = [k * t for k, t in enumerate(c)][1:]
    d2 = [k * t for k, t in enumerate(d1)][1:]
    d3 = [k * t for k, t in enumerate(d2)][1:]
    assert univ_eval(d1, F(1)) == 0 and univ_eval(d2, F(1)) == 0
    assert univ_eval(d3, F(1)) != 0
    rts = real_roots(c)
    assert [(r.multiplicity, r.lo <= 1 <= r.hi or r.lo <= -2 <= r.hi) for r in rts]
    assert len(rts) == 2
    by_mult = sorted(rts, key=lambda r: r.multiplicity)
    assert by_mult[0].multiplicity == 1 and -2 in by_mult[0] or by_mult[0].is_point()
    assert by_mult[1].multiplicity == 3
    assert 1 in by_mult[1] or (by_mult[1].lo == 1 == by_mult[1].hi)
    assert -2 in by_mult[0] or (by_mult[0].lo == -2 == by_mult[0].hi)


def test_real_roots_sqrt2():
    rts = real_roots([F(-2), F(0), F(1)])
    assert len(rts) == 2
    pos = rts[1]
    tight = refine_root([F(-2), F(0), F(1)], pos, F(1, 10 ** 15))
    assert abs(float(tight.mid) - math.sqrt(2)) < 1e-14


def test_real_roots_exact_rational_root():
    # roots 1/2 and 3; dyadic root can surface as a point interval
    p = univ_mul([F(-1), F(2)], [F(-3), F(1)])
    rts = real_roots(p)
    assert len(rts) == 2
    assert F(1, 2) in rts[0] or rts[0].lo == F(1, 2) == rts[0].hi
    assert 3 in rts[1] or rts[1].is_point() and rts[1].lo == 3


def test_real_roots_no_real():
    assert real_roots([F(1), F(0), F(1)]) == []      # x^2 + 1
    assert real_root_count([F(1), F(1), F(1)]) == 0  # x^2 + x + 1


def test_real_roots_close_pair_separation():
    # roots at 1/1000 and 1/1001 must land in disjoint intervals
    p = univ_mul([F(-1, 1000), F(1)], [F(-1, 1001), F(1)])
    rts = real_roots(p)
    assert len(rts) == 2
    assert rts[0].hi <= rts[1].lo
    assert F(1, 1001) in rts[0] or rts[0].is_point()
    assert F(1, 1000) in rts[1] or rts[1].is_point()


def test_interval_ordering_and_disjointness_random():
    rng = random.Random(5)
    for _ in range(40):
        roots = sorted(rng.sample(range(-12, 12), rng.randint(1, 5)))
        p = [F(1)]
        for r in roots:
            p = univ_mul(p, [F(-r), F(1)])
        rts = real_roots(p)
        assert len(rts) == len(roots)
        for iv, r in zip(rts, roots):
            assert r in iv or (iv.is_point() and iv.lo == r)
        for a, b in zip(rts, rts[1:]):
            assert a.hi <= b.lo


def test_count_roots_below():
    # (x^2 - 2)(x - 5)
    p = univ_mul([F(-2), F(0), F(1)], [F(-5), F(1)])
    assert count_roots_below(p, F(2)) == 2
    assert count_roots_below(p, F(-2)) == 0
    assert count_roots_below(p, F(10)) == 3
    assert count_roots_below([F(-3), F(1)], F(3)) == 0
    assert count_roots_below([F(-3), F(1)], F(3), strict=False) == 1


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(min_value=-9, max_value=9), min_size=3, max_size=9))
def test_real_root_count_never_exceeds_degree(c):
    c = strip_high([F(t) for t in c])
    if len(c) < 2:
        return
    rts = real_roots(c)
    assert sum(r.multiplicity for r in rts) <= len(c) - 1
    for a, b in zip(rts, rts[1:]):
        assert a.hi <= b.lo
    for r in rts:
        if r.is_point():
            assert univ_eval(c, r.lo) == 0
        else:
            assert univ_eval(c, r.lo) != 0 and univ_eval(c, r.hi) != 0


# ---------------------------------------------------------------------------
# complex roots
# ---------------------------------------------------------------------------

def test_complex_roots_residual_x6():
    c = [F(1), F(1), F(0), F(0), F(0), F(0), F(1)]   # x^6 + x + 1
    roots = complex_roots(c)
    assert len(roots) == 6
    for z in roots:
        v = univ_eval([complex(float(t)) for t in c], z)
        assert abs(v) < 1e-12
    # conjugation closure
    for z in roots:
        assert any(abs(z.conjugate() - u) < 1e-9 for u in roots)


def test_complex_roots_multiplicity():
    roots = complex_roots([F(1), F(-2), F(1)])   # (x-1)^2
    assert len(roots) == 2
    assert all(abs(z - 1) < 1e-12 for z in roots)


def test_complex_roots_known_quartic():
    # x^4 - 1: roots are the 4th roots of unity
    roots = complex_roots([F(-1), F(0), F(0), F(0), F(1)])
    expected = [complex(-1), complex(0, -1), complex(0, 1), complex(1)]
    assert len(roots) == 4
    for e in expected:
        assert min(abs(e - z) for z in roots) < 1e-12


@settings(max_examples=120, deadline=None)
@given(st.lists(st.integers(min_value=-9, max_value=9), min_size=3, max_size=9))
def test_root_census_matches_degree(c):
    c = strip_high([F(t) for t in c])
    if len(c) < 3:
        return
    deg = len(c) - 1
    try:
        cz = complex_roots(c)
    except NonConvergence:
        return
    assert len(cz) == deg
    n_real_isol = sum(r.multiplicity for r in real_roots(c))
    n_real_num = sum(1 for z in cz if abs(z.imag) < 1e-7)
    n_pairs = sum(1 for z in cz if z.imag > 1e-7)
    assert n_real_num == n_real_isol
    assert n_real_isol + 2 * n_pairs == deg


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------

def test_resultant_linear_symbols():
    vs = ("x", "a", "b")
    x, a, b = (Poly.var(v, vs) for v in vs)
    r = resultant(x - a, x - b, "x")
    assert r == a - b


def test_resultant_quadratic_example():
    p = Poly.parse("x^2 + 1")
    q = Poly.parse("x - 1")
    assert resultant(p, q, "x").constant_value() == 2


def test_resultant_antisymmetry():
    rng = random.Random(2)
    for _ in range(20):
        p = Poly.from_univariate(rand_coeffs(rng, rng.randint(1, 4)), "x")
        q = Poly.from_univariate(rand_coeffs(rng, rng.randint(1, 4)), "x")
        m, n = p.degree("x"), q.degree("x")
        r1 = resultant(p, q, "x").constant_value()
        r2 = resultant(q, p, "x").constant_value()
        assert r1 == (-1) ** (m * n) * r2


def test_resultant_multiplicative():
    rng = random.Random(9)
    for _ in range(15):
        p = Poly.from_univariate(rand_coeffs(rng, 2), "x")
        q1 = Poly.from_univariate(rand_coeffs(rng, 2), "x")
        q2 = Poly.from_univariate(rand_coeffs(rng, 1), "x")
        lhs = resultant(p, q1 * q2, "x").constant_value()
        rhs = (resultant(p, q1, "x") * resultant(p, q2, "x")).constant_value()
        assert lhs == rhs


def test_resultant_vs_root_product_oracle():
    # Res(p, q) = lc(p)^deg(q) * prod q(alpha) over roots alpha of p
    rng = random.Random(4)
    for _ in range(25):
        cp = rand_coeffs(rng, rng.randint(2, 4))
        cq = rand_coeffs(rng, rng.randint(1, 3))
        p = Poly.from_univariate(cp, "x")
        q = Poly.from_univariate(cq, "x")
        exact = resultant(p, q, "x").constant_value()
        roots = complex_roots(cp)
        prod = complex(float(cp[-1])) ** (len(cq) - 1)
        for al in roots:
            prod *= univ_eval([complex(float(t)) for t in cq], al)
        if abs(prod) > 1e-8:
            assert abs(complex(float(exact)) - prod) / abs(prod) < 1e-6
        else:
            assert abs(complex(float(exact)) - prod) < 1e-6


def test_resultant_shared_root_vanishes():
    p = Poly.parse("(x - 2)(x + 3)")
    q = Poly.parse("(x - 2)(x - 7)")
    assert resultant(p, q, "x").constant_value() == 0


def test_resultant_bivariate_elimination():
    # eliminate y from the circle and a line: x^2 + y^2 - 1, y - x
    c = Poly.parse("x^2 + y^2 - 1")
    l = Poly.parse("y - x")
    r = resultant(c, l, "y")
    assert r == Poly.parse("2*x^2 - 1")


def test_discriminant_detects_repeated_roots():
    assert discriminant(Poly.parse("(x-1)(x-1)(x+3)"), "x").constant_value() == 0
    assert discriminant(Poly.parse("x^2 + 1"), "x").constant_value() != 0
    # classical: disc(x^2 + bx + c) ~ b^2 - 4c up to sign convention
    vs = ("x", "a", "b")
    x, a, b = (Poly.var(v, vs) for v in vs)
    d = resultant(x * x + a * x + b, 2 * x + a, "x")
    assert d == -(a * a - 4 * b)


# ---------------------------------------------------------------------------
# three-quadric resultant
# ---------------------------------------------------------------------------

def _q(s):
    return Poly.parse(s)


def test_quadric_triple_no_common_zero():
    r = quadric_triple_resultant(_q("x^2"), _q("y^2"), _q("z^2"), ("x", "y", "z"))
    assert r != 0


def test_quadric_triple_common_zero_vanishes():
    # all three vanish at (0:1:0)
    r = quadric_triple_resultant(_q("x^2"), _q("x*y"), _q("x*z"), ("x", "y", "z"))
    assert r == 0
    # all three vanish at (1:1:1)
    r2 = quadric_triple_resultant(
        _q("x^2 - y*z"), _q("y^2 - x*z"), _q("z^2 - x*y"), ("x", "y", "z"))
    assert r2 == 0


def test_quadric_triple_generic_random_nonzero():
    rng = random.Random(13)
    hits = 0
    for _ in range(10):
        qs = []
        for _ in range(3):
            terms = {}
            for i in range(3):
                for j in range(i, 3):
                    e = [0, 0, 0, 0]
                    e[i] += 1
                    e[j] += 1
                    terms[tuple(e)] = F(rng.randint(-5, 5))
            qs.append(Poly(("x", "y", "z", "w"), terms))
        r = quadric_triple_resultant(qs[0], qs[1], qs[2], ("x", "y", "z"))
        if r != 0:
            hits += 1
    assert hits >= 9   # generic triples share no projective zero


def test_quadric_triple_forced_common_zero():
    # q(1,2,3) = 0 for each, built by subtracting the value at the point
    rng = random.Random(21)
    pt = (F(1), F(2), F(3))
    for _ in range(5):
        qs = []
        for _ in range(3):
            terms = {}
            for i in range(3):
                for j in range(i, 3):
                    e = [0, 0, 0, 0]
                    e[i] += 1
                    e[j] += 1
                    terms[tuple(e)] = F(rng.randint(-5, 5))
            q = Poly(("x", "y", "z", "w"), terms)
            v = q.eval({"x": pt[0], "y": pt[1], "z": pt[2], "w": F(0)})
            # subtract v/9 * z^2 so the form vanishes at (1,2,3)
            q = q - Poly(("x", "y", "z", "w"), {(0, 0, 2, 0): v / 9})
            qs.append(q)
        r = quadric_triple_resultant(qs[0], qs[1], qs[2], ("x", "y", "z"))
        assert r == 0
