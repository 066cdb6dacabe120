"""Sweep analyzer and exact conic/chord utilities."""

import itertools
import random
from fractions import Fraction

import pytest

from realcubic.algebra import Poly
from realcubic.curve import (
    _null_space,
    analyze_cubic,
    conic_cubic_intersection,
    conic_through_five,
    locate,
    residual_point,
    weierstrass_add,
    weierstrass_chord,
)
from realcubic.errors import (
    DegenerateConfiguration,
    NotOnCurve,
    SharedComponent,
    SingularCurve,
)

V = ("x", "y", "z")
AV = ("x", "y")


def weierstrass_plane_cubic(a: int, b: int) -> Poly:
    return Poly.parse(f"x^3 + ({a})*x*z^2 + ({b})*z^3 - y^2*z", vars=V)


def cubic_disc(a: int, b: int) -> int:
    return -4 * a ** 3 - 27 * b ** 2


class TestAnalyze:
    @pytest.mark.parametrize("a,b", [(-25, 0), (-4, 1), (-7, 6), (-3, 1)])
    def test_two_components_when_three_real_roots(self, a, b):
        assert cubic_disc(a, b) > 0
        out = analyze_cubic(weierstrass_plane_cubic(a, b))
        assert out.components == 2
        assert out.oval_interior is not None

    @pytest.mark.parametrize("a,b", [(1, 0), (0, 1), (2, 3), (-1, 1)])
    def test_one_component_when_one_real_root(self, a, b):
        assert cubic_disc(a, b) < 0
        out = analyze_cubic(weierstrass_plane_cubic(a, b))
        assert out.components == 1
        assert out.oval_interior is None

    def test_fermat_plane_cubic_is_connected(self):
        out = analyze_cubic(Poly.parse("x^3 + y^3 + z^3", vars=V))
        assert out.components == 1

    def test_cell_counts_change_by_two(self):
        out = analyze_cubic(weierstrass_plane_cubic(-25, 0))
        counts = out.cell_counts
        assert counts[0] == 1 and counts[-1] == 1
        assert all(abs(p - q) == 2 for p, q in zip(counts, counts[1:]))

    def test_oval_interior_point_is_interior(self):
        out = analyze_cubic(weierstrass_plane_cubic(-25, 0))
        u, v, w = out.oval_interior_plane_point()
        assert w != 0
        x, y = u / w, v / w
        # inside the oval of y^2 = x^3 - 25 x: -5 < x < 0, y^2 < x^3 - 25 x
        assert Fraction(-5) < x < 0
        assert y * y < x ** 3 - 25 * x

    @pytest.mark.parametrize("text", [
        "x^3 - y^2*z",                 # cusp
        "x^3 + x^2*z - y^2*z",         # node
        "x*y*z",                       # three lines
        "(x^2 + y^2 - z^2)*x",         # conic and line
    ])
    def test_singular_sections_rejected(self, text):
        with pytest.raises(SingularCurve):
            analyze_cubic(Poly.parse(text, vars=V))

    def test_input_validation(self):
        with pytest.raises(ValueError):
            analyze_cubic(Poly.parse("x^2 + y^2 + z^2", vars=V))
        with pytest.raises(ValueError):
            analyze_cubic(Poly.parse("x^3 + y^3 + z^3 + x^2", vars=V))


@pytest.fixture(scope="module")
def curve():
    return analyze_cubic(weierstrass_plane_cubic(-25, 0))


class TestLocate:
    def chord_points(self, n=8):
        """Rational points on y^2 = x^3 - 25 x via repeated chord sums."""
        a, b = Fraction(-25), Fraction(0)
        pts = [(Fraction(-4), Fraction(6))]
        gens = [(Fraction(-5), Fraction(0)), (Fraction(0), Fraction(0))]
        seen = set(pts)
        frontier = list(pts)
        while frontier and len(seen) < n:
            p = frontier.pop()
            for q in list(seen)[:4] + gens:
                s = weierstrass_add(a, b, p, q)
                if s is not None and s not in seen:
                    seen.add(s)
                    frontier.append(s)
        return sorted(seen)

    def test_exact_points_against_x_range(self, curve):
        for (x, y) in self.chord_points(10):
            expect = "oval" if Fraction(-5) <= x <= 0 else "pseudoline"
            assert locate(curve, (x, y, Fraction(1))) == expect

    def test_float_points_agree_with_exact(self, curve):
        for (x, y) in self.chord_points(10):
            expect = "oval" if Fraction(-5) <= x <= 0 else "pseudoline"
            got = locate(curve, (float(x), float(y), 1.0))
            assert got == expect

    def test_point_at_infinity_is_on_pseudoline(self, curve):
        assert locate(curve, (0.0, 1.0, 0.0)) == "pseudoline"
        assert locate(curve, (Fraction(0), Fraction(1), Fraction(0))) \
            == "pseudoline"

    def test_fold_points(self, curve):
        one = Fraction(1)
        assert locate(curve, (Fraction(-5), Fraction(0), one)) == "oval"
        assert locate(curve, (Fraction(0), Fraction(0), one)) == "oval"
        assert locate(curve, (Fraction(5), Fraction(0), one)) == "pseudoline"

    def test_off_curve_rejected(self, curve):
        with pytest.raises(NotOnCurve):
            locate(curve, (Fraction(1), Fraction(1), Fraction(1)))
        with pytest.raises(NotOnCurve):
            locate(curve, (1.25, -3.5, 1.0))

    def test_connected_curve_locates_pseudoline(self):
        out = analyze_cubic(weierstrass_plane_cubic(1, 0))
        # (0, 0) and (4, 2*sqrt(17)) ~ rational test point (0,0) only
        assert locate(out, (Fraction(0), Fraction(0), Fraction(1))) \
            == "pseudoline"

    def test_scaled_projective_input(self, curve):
        assert locate(curve, (Fraction(-8), Fraction(12), Fraction(2))) \
            == "oval"
        assert locate(curve, (-8.0, 12.0, 2.0)) == "oval"


class TestConicThroughFive:
    def test_recovers_parabola(self):
        pts = [(t, t * t) for t in map(Fraction, (-2, -1, 0, 1, 3))]
        q = conic_through_five(pts)
        # proportional to y z - x^2
        assert q.terms.keys() == {(2, 0, 0), (0, 1, 1)}
        ratio = -q.terms[(2, 0, 0)] / q.terms[(0, 1, 1)]
        assert ratio == 1

    def test_circle_points_recover_circle(self):
        def circ(t: Fraction):
            d = 1 + t * t
            return ((1 - t * t) / d, 2 * t / d)
        pts = [circ(Fraction(k)) for k in (-2, -1, 0, 1, 3)]
        q = conic_through_five(pts)
        for k in (5, 7):
            x, y = circ(Fraction(1, k))
            assert q.eval({"x": x, "y": y, "z": Fraction(1)}) == 0

    def test_four_collinear_is_degenerate(self):
        pts = [(Fraction(k), Fraction(0)) for k in range(4)]
        pts.append((Fraction(1), Fraction(2)))
        with pytest.raises(DegenerateConfiguration):
            conic_through_five(pts)

    def test_repeated_point_is_degenerate(self):
        pts = [(Fraction(k), Fraction(k * k)) for k in (0, 1, 2, 2)]
        pts.append((Fraction(5), Fraction(1)))
        with pytest.raises(DegenerateConfiguration):
            conic_through_five(pts)


def cubic_through_parabola_points(ts, rng):
    """A cubic through the points (t, t^2) that does not contain the
    parabola itself."""
    mons = [e for e in itertools.product(range(4), repeat=2) if sum(e) <= 3]
    rows = [[(t ** e[0]) * ((t * t) ** e[1]) for e in mons] for t in ts]
    basis = _null_space(rows, len(mons))
    for _ in range(40):
        ws = [rng.randint(-5, 5) for _ in basis]
        vec = [sum(w * b[i] for w, b in zip(ws, basis))
               for i in range(len(mons))]
        f = Poly(AV, {e: c for e, c in zip(mons, vec) if c != 0})
        if f.is_zero() or f.total_degree() != 3:
            continue
        if f.degree("y") == 0:
            continue
        try:
            pts = conic_cubic_intersection(
                Poly.parse("y - x^2", vars=AV), f)
        except (SharedComponent, DegenerateConfiguration):
            continue
        if len(pts) == 6:
            return f
    raise AssertionError("could not build a test cubic")


class TestResidualPoint:
    def test_drop_one_round_trip(self):
        rng = random.Random(20240817)
        done = 0
        while done < 100:
            ts = sorted(rng.sample(range(-12, 13), 6))
            ts = [Fraction(t) for t in ts]
            try:
                f = cubic_through_parabola_points(ts, rng)
            except AssertionError:
                continue
            for drop in range(6):
                five = [(t, t * t) for i, t in enumerate(ts) if i != drop]
                try:
                    x6, y6 = residual_point(f, five)
                except DegenerateConfiguration:
                    break
                assert (x6, y6) == (ts[drop], ts[drop] ** 2)
            else:
                done += 1

    def test_rejects_point_off_curve(self):
        f = Poly.parse("y^2 - x^3 + 25*x", vars=AV)
        pts = [(Fraction(-4), Fraction(6)), (Fraction(0), Fraction(0)),
               (Fraction(-5), Fraction(0)), (Fraction(5), Fraction(0)),
               (Fraction(1), Fraction(1))]
        with pytest.raises(NotOnCurve):
            residual_point(f, pts)


class TestConicCubicIntersection:
    def test_transversal_count(self):
        rng = random.Random(7)
        ts = [Fraction(t) for t in (-3, -2, -1, 1, 2, 4)]
        f = cubic_through_parabola_points(ts, rng)
        pts = conic_cubic_intersection(Poly.parse("y - x^2", vars=AV), f)
        got = sorted(round(x, 6) for x, _ in pts)
        assert got == [float(t) for t in ts]

    def test_symmetric_pair_split_by_shear(self):
        # circle and symmetric cubic: intersections come in (x, +-y) pairs
        conic = Poly.parse("x^2 + y^2 - 8", vars=AV)
        cubic = Poly.parse("y^2 - x^3 + 25*x", vars=AV)
        pts = conic_cubic_intersection(conic, cubic)
        assert len(pts) == 2
        (x1, y1), (x2, y2) = sorted(pts, key=lambda p: p[1])
        assert abs(x1 - x2) < 1e-9
        assert abs(y1 + y2) < 1e-9

    def test_shared_component_detected(self):
        conic = Poly.parse("y - x^2", vars=AV)
        cubic = Poly.parse("(y - x^2)*(x + 7)", vars=AV)
        with pytest.raises(SharedComponent):
            conic_cubic_intersection(conic, cubic)

    def test_tangential_contact_is_degenerate(self):
        conic = Poly.parse("x^2 + y^2 - 25", vars=AV)
        cubic = Poly.parse("y^2 - x^3 + 25*x", vars=AV)
        with pytest.raises(DegenerateConfiguration):
            conic_cubic_intersection(conic, cubic)


class TestWeierstrass:
    def curve_through(self, p, q):
        (x1, y1), (x2, y2) = p, q
        a = ((y1 * y1 - x1 ** 3) - (y2 * y2 - x2 ** 3)) / (x1 - x2)
        b = y1 * y1 - x1 ** 3 - a * x1
        return a, b

    def test_chord_points_stay_on_curve(self):
        rng = random.Random(99)
        for _ in range(50):
            x1, x2 = rng.randint(-9, 9), rng.randint(-9, 9)
            if x1 == x2:
                continue
            p = (Fraction(x1), Fraction(rng.randint(1, 9)))
            q = (Fraction(x2), Fraction(rng.randint(1, 9)))
            a, b = self.curve_through(p, q)
            r = weierstrass_chord(a, b, p, q)
            assert r is not None
            x3, y3 = r
            assert y3 * y3 == x3 ** 3 + a * x3 + b

    def test_group_sum_assoc(self):
        rng = random.Random(5)
        done = 0
        while done < 50:
            x1, x2 = rng.randint(-9, 9), rng.randint(-9, 9)
            if x1 == x2:
                continue
            p = (Fraction(x1), Fraction(rng.randint(1, 9)))
            q = (Fraction(x2), Fraction(rng.randint(1, 9)))
            a, b = self.curve_through(p, q)
            r = weierstrass_add(a, b, p, p)      # 2P
            lhs = weierstrass_add(a, b, weierstrass_add(a, b, p, q), r)
            rhs = weierstrass_add(a, b, p, weierstrass_add(a, b, q, r))
            assert lhs == rhs
            done += 1

    def test_identity_and_inverse(self):
        a, b = Fraction(-25), Fraction(0)
        p = (Fraction(-4), Fraction(6))
        assert weierstrass_add(a, b, p, None) == p
        assert weierstrass_add(a, b, None, p) == p
        minus = (p[0], -p[1])
        assert weierstrass_add(a, b, p, minus) is None

    def test_off_curve_rejected(self):
        with pytest.raises(NotOnCurve):
            weierstrass_chord(Fraction(1), Fraction(1),
                              (Fraction(0), Fraction(5)),
                              (Fraction(1), Fraction(2)))
