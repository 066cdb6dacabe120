"""Topology of a nonsingular real plane cubic, by an exact vertical sweep.

A nonsingular real cubic in P2 is either one pseudoline or a pseudoline
plus an oval.  After a projective chart change that puts exactly one simple
real point on the line at infinity and makes the y-discriminant squarefree,
the affine picture is a proper 3:1 cover of the x-axis away from finitely
many simple folds.  Counting real fibre points per cell and matching fold
pairs through the first subresultant reconstructs the components exactly,
in rational arithmetic all the way down.

Also here: exact conic utilities (conic through five points, conic-cubic
intersection, the residual sixth intersection point) and the Weierstrass
chord-tangent group law, which the property suites use as independent
cross-checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .algebra import (
    Interval,
    Poly,
    count_roots_below,
    discriminant,
    quadric_triple_resultant,
    real_root_count,
    real_roots,
    refine_root,
    resultant,
    strip_high,
    univ_degree,
    univ_derivative,
    univ_divmod,
    univ_eval,
    univ_gcd,
)
from .config import DEFAULT, SweepConfig
from .errors import (
    ChartDegenerate,
    DegenerateConfiguration,
    InternalInconsistency,
    MultiplicityAmbiguity,
    NotOnCurve,
    SharedComponent,
    SingularCurve,
)

PLANE_VARS = ("x", "y", "z")
AFFINE_VARS = ("x", "y")


# ---------------------------------------------------------------------------
# small exact linear algebra
# ---------------------------------------------------------------------------

def _mat_mul_vec(M, v):
    return tuple(sum(M[i][j] * v[j] for j in range(3)) for i in range(3))


def _mat_inv3(M):
    a, b, c = M[0]
    d, e, f = M[1]
    g, h, i = M[2]
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    if det == 0:
        raise ValueError("singular chart matrix")
    adj = (
        (e * i - f * h, c * h - b * i, b * f - c * e),
        (f * g - d * i, a * i - c * g, c * d - a * f),
        (d * h - e * g, b * g - a * h, a * e - b * d),
    )
    return tuple(tuple(x / det for x in row) for row in adj)


def _is_squarefree(dense) -> bool:
    dense = strip_high(list(dense))
    if univ_degree(dense) <= 0:
        return False
    g = univ_gcd(dense, univ_derivative(dense))
    return univ_degree(g) == 0


# ---------------------------------------------------------------------------
# chart search
# ---------------------------------------------------------------------------

def _chart_candidates(attempts: int):
    ident = ((Fraction(1), Fraction(0), Fraction(0)),
             (Fraction(0), Fraction(1), Fraction(0)),
             (Fraction(0), Fraction(0), Fraction(1)))
    yield ident
    rng = random.Random(0x5eed)
    produced = 1
    while produced < attempts:
        # cycle through coefficient scales: curves with large ovals need a
        # line at infinity far from the origin to cross them only once
        bound = 3 + 2 * (produced % 5)
        M = tuple(tuple(Fraction(rng.randint(-bound, bound))
                        for _ in range(3))
                  for _ in range(3))
        a, b, c = M[0]
        d, e, f = M[1]
        g, h, i = M[2]
        det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
        if det == 0:
            continue
        produced += 1
        yield M


def _apply_chart(G: Poly, M) -> Poly:
    # chart coords v map to input coords u = M v, so input variable j is
    # replaced by row j of M applied to the chart variables
    xs = [Poly.var(v, PLANE_VARS) for v in PLANE_VARS]
    images = {
        PLANE_VARS[j]: sum((xs[k] * M[j][k] for k in range(3)),
                           Poly.zero(PLANE_VARS))
        for j in range(3)
    }
    return G.substitute(images)


def _dehomogenize(GT: Poly) -> Poly:
    terms = {}
    for e, c in GT.terms.items():
        key = (e[0], e[1])
        terms[key] = terms.get(key, 0) + c
    return Poly(AFFINE_VARS, {k: v for k, v in terms.items() if v != 0})


def _chart_ok(GT: Poly):
    """Check the sweep preconditions; return the affine curve and the
    x-discriminant when the chart is usable, else None."""
    cx3 = GT.terms.get((3, 0, 0), 0)
    cy3 = GT.terms.get((0, 3, 0), 0)
    if cx3 == 0 or cy3 == 0:
        return None
    # the line at infinity must meet the curve in one simple real point
    inf = [Fraction(0)] * 4
    for e, c in GT.terms.items():
        if e[2] == 0:
            inf[e[0]] = c
    if not _is_squarefree(inf):
        return None
    if real_root_count(inf) != 1:
        return None
    f = _dehomogenize(GT)
    disc = discriminant(f, "y")
    dense = disc.coeffs_in("x")
    dense = [p.constant_value() for p in dense]
    dense = strip_high([Fraction(c) for c in dense])
    if univ_degree(dense) >= 1 and not _is_squarefree(dense):
        return None
    return f, dense


# ---------------------------------------------------------------------------
# sweep data
# ---------------------------------------------------------------------------

@dataclass
class FoldPoint:
    x: Interval
    birth: bool                 # fibre count rises from 1 to 3 left to right
    pair_low: int               # index (0 or 1) of the lower merging branch
    pair_component: str = ""
    survivor_component: str = ""


@dataclass
class CurveAnalysis:
    ternary: Poly
    transform: tuple            # chart matrix M: chart coords -> input coords
    inverse: tuple
    f: Poly                     # affine curve in the chart
    disc_dense: list            # y-discriminant of f, dense in x
    folds: list
    cell_samples: list          # one rational x per cell
    cell_counts: list
    components: int
    oval_cells: dict = field(default_factory=dict)   # cell -> (lo, hi) branch
    oval_interior: Optional[tuple] = None            # rational (x, y) in chart

    def oval_interior_plane_point(self):
        """A rational point of the input plane strictly inside the oval."""
        if self.oval_interior is None:
            raise ValueError("curve has no oval")
        x0, y0 = self.oval_interior
        return _mat_mul_vec(self.transform, (x0, y0, Fraction(1)))


def _fold_sign(fold_iv: Interval, A: list, N: list, disc_dense: list,
               c3: Fraction, max_bits: int = 512):
    """Exact sign of (y_survivor - y_double) at the fold."""
    P = _dense_mul(A, N)
    if _is_zero_dense(P):
        raise InternalInconsistency("degenerate subresultant at a fold")
    iv = fold_iv
    while True:
        if iv.is_point():
            val = univ_eval(P, iv.lo)
            if val == 0:
                raise InternalInconsistency("triple contact at a fold")
            sign = 1 if val > 0 else -1
            break
        inside = (count_roots_below(P, iv.hi, strict=False)
                  - count_roots_below(P, iv.lo, strict=False))
        if inside == 0:
            val = univ_eval(P, iv.mid)
            if val == 0:
                # mid is exactly a root (can only be one of P's, not disc's);
                # shrink further so the sign test lands off it
                iv = refine_root(disc_dense, iv, iv.width / 4)
                continue
            sign = 1 if val > 0 else -1
            break
        if iv.width < Fraction(1, 1 << max_bits):
            raise InternalInconsistency("fold sign refinement stalled")
        iv = refine_root(disc_dense, iv, iv.width / 4)
    if c3 < 0:
        sign = -sign
    return sign, iv


def _dense_mul(a: list, b: list) -> list:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _coeffs_in_x(p: Poly) -> list:
    dense = [q.constant_value() for q in p.coeffs_in("x")]
    return strip_high([Fraction(c) for c in dense]) or [Fraction(0)]


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, a):
        p = self.parent.setdefault(a, a)
        if p != a:
            self.parent[a] = p = self.find(p)
        return p

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def analyze_cubic(G: Poly, cfg: SweepConfig = None) -> CurveAnalysis:
    """Component structure of the nonsingular real plane cubic G = 0.

    G must be an exact homogeneous cubic in three variables.  Raises
    SingularCurve for singular input and ChartDegenerate when no usable
    sweep chart is found.
    """
    cfg = cfg or DEFAULT.sweep
    if len(G.vars) != 3:
        raise ValueError("expected a ternary cubic")
    if G.homogeneous_degree() != 3:
        raise ValueError("expected a homogeneous cubic")
    if not G.is_exact():
        raise ValueError("exact rational coefficients required")
    parts = [G.derivative(v) for v in G.vars]
    if quadric_triple_resultant(parts[0], parts[1], parts[2], G.vars) == 0:
        raise SingularCurve("plane section is singular")

    last = None
    for M in _chart_candidates(cfg.chart_attempts):
        GT = _apply_chart(G, M)
        got = _chart_ok(GT)
        if got is None:
            continue
        f, disc_dense = got
        try:
            return _sweep(G, M, f, disc_dense)
        except InternalInconsistency as exc:   # pragma: no cover - retried
            last = exc
            continue
    if last is not None:                        # pragma: no cover
        raise last
    raise ChartDegenerate("no usable sweep chart found")


def _sweep(G: Poly, M, f: Poly, disc_dense: list) -> CurveAnalysis:
    ys = f.coeffs_in("y")
    while len(ys) < 4:
        ys.append(Poly.zero(AFFINE_VARS))
    c0, c1, c2, c3p = ys[:4]
    c3 = Fraction(c3p.constant_value())
    fold_ivs = real_roots(disc_dense) if univ_degree(disc_dense) >= 1 else []
    assert all(iv.multiplicity == 1 for iv in fold_ivs)

    # one rational sample per cell, strictly between consecutive fold roots
    samples = []
    if not fold_ivs:
        samples.append(Fraction(0))
    else:
        samples.append(fold_ivs[0].lo - 1)
        for a, b in zip(fold_ivs, fold_ivs[1:]):
            samples.append(Fraction(a.hi + b.lo, 2))
        samples.append(fold_ivs[-1].hi + 1)

    counts = []
    for x0 in samples:
        fy = [univ_eval(_coeffs_in_x(c), x0) for c in (c0, c1, c2, c3p)]
        n = real_root_count(fy)
        if n not in (1, 3):
            raise InternalInconsistency(f"fibre count {n} in a cell")
        counts.append(n)
    if counts[0] != 1 or counts[-1] != 1:
        raise InternalInconsistency("unbounded cells must have one branch")
    for a, b in zip(counts, counts[1:]):
        if abs(a - b) != 2:
            raise InternalInconsistency("fold must change the fibre by two")

    # first subresultant of (f, f_y):  9*c3*f mod f_y = A y + B up to scale
    A_poly = (c1 * c3p * 3 - c2 * c2) * 2
    B_poly = c0 * c3p * 9 - c1 * c2
    A = _coeffs_in_x(A_poly)
    B = _coeffs_in_x(B_poly)
    c2x = _coeffs_in_x(c2)
    # N/ (c3 A) gives y_survivor - y_double up to positive factors
    N = [3 * c3 * t for t in B]
    M2 = _dense_mul(c2x, A)
    n_len = max(len(N), len(M2))
    N = [
        (N[i] if i < len(N) else 0) - (M2[i] if i < len(M2) else 0)
        for i in range(n_len)
    ]
    N = strip_high([Fraction(t) for t in N]) or [Fraction(0)]
    A = strip_high(A) or [Fraction(0)]

    folds = []
    for k, iv in enumerate(fold_ivs):
        birth = counts[k] == 1
        if univ_degree(A) < 0 or A == [Fraction(0)]:
            raise InternalInconsistency("degenerate subresultant")
        sign, iv = _fold_sign(iv, A, N, disc_dense, c3)
        # sign > 0: the surviving branch lies above the merging pair
        pair_low = 0 if sign > 0 else 1
        folds.append(FoldPoint(x=iv, birth=birth, pair_low=pair_low))

    uf = _UnionFind()
    ncells = len(samples)
    for k, fp in enumerate(folds):
        left, right = k, k + 1
        if fp.birth:
            uf.union((right, fp.pair_low), (right, fp.pair_low + 1))
            survivor = 2 if fp.pair_low == 0 else 0
            uf.union((left, 0), (right, survivor))
        else:
            uf.union((left, fp.pair_low), (left, fp.pair_low + 1))
            survivor = 2 if fp.pair_low == 0 else 0
            uf.union((left, survivor), (right, 0))
    # the two unbounded ends meet at the single real point at infinity
    uf.union((0, 0), (ncells - 1, 0))

    classes = {}
    for cell in range(ncells):
        for branch in range(counts[cell]):
            classes.setdefault(uf.find((cell, branch)), []).append(
                (cell, branch))
    if len(classes) > 2:
        raise InternalInconsistency(
            f"{len(classes)} components in a plane cubic")
    infinite = uf.find((0, 0))
    oval_cells = {}
    components = len(classes)
    if components == 2:
        (oval_key,) = [k for k in classes if k != infinite]
        for cell, branch in classes[oval_key]:
            oval_cells.setdefault(cell, []).append(branch)
        for cell, branches in oval_cells.items():
            branches.sort()
            if len(branches) != 2 or branches[1] != branches[0] + 1:
                raise InternalInconsistency("oval branches not adjacent")
        oval_cells = {c: (b[0], b[1]) for c, b in oval_cells.items()}
        span = sorted(oval_cells)
        if span != list(range(span[0], span[-1] + 1)):
            raise InternalInconsistency("oval cells not contiguous")

    # label each fold by the component of its merging pair / survivor
    def comp_of(node):
        return "oval" if uf.find(node) != infinite else "pseudoline"

    for k, fp in enumerate(folds):
        side = k + 1 if fp.birth else k
        fp.pair_component = comp_of((side, fp.pair_low))
        survivor = 2 if fp.pair_low == 0 else 0
        fp.survivor_component = comp_of((side, survivor))

    oval_interior = None
    if components == 2:
        span = sorted(oval_cells)
        mid_cell = span[len(span) // 2]
        x0 = samples[mid_cell]
        lo_b, hi_b = oval_cells[mid_cell]
        fy = [univ_eval(_coeffs_in_x(c), x0) for c in (c0, c1, c2, c3p)]
        roots = real_roots(fy)
        assert len(roots) == 3
        a, b = roots[lo_b], roots[hi_b]
        y0 = Fraction(a.hi + b.lo, 2)
        oval_interior = (x0, y0)

    return CurveAnalysis(
        ternary=G,
        transform=M,
        inverse=_mat_inv3(M),
        f=f,
        disc_dense=disc_dense,
        folds=folds,
        cell_samples=samples,
        cell_counts=counts,
        components=components,
        oval_cells=oval_cells,
        oval_interior=oval_interior,
    )


# ---------------------------------------------------------------------------
# point location
# ---------------------------------------------------------------------------

def _cell_of(analysis: CurveAnalysis, x: Fraction):
    """Index of the cell containing x, or ('fold', k) at an exact fold."""
    below = 0
    for k, fp in enumerate(analysis.folds):
        iv = fp.x
        if iv.is_point():
            if x == iv.lo:
                return ("fold", k)
            if iv.lo < x:
                below += 1
            continue
        while x in iv:
            if iv.width < Fraction(1, 1 << 600):
                raise MultiplicityAmbiguity(
                    "point x-coordinate indistinguishable from a fold")
            iv = refine_root(analysis.disc_dense, iv, iv.width / 4)
            fp.x = iv
        if iv.hi <= x:
            below += 1
    return ("cell", below)


def _chart_xy(analysis: CurveAnalysis, point, tol: float):
    v = tuple(point)
    if len(v) != 3:
        raise ValueError("expected plane coordinates (3 entries)")
    exact = all(isinstance(t, (int, Fraction)) for t in v)
    if exact:
        u = _mat_mul_vec(analysis.inverse, tuple(Fraction(t) for t in v))
        if u[2] == 0:
            return None
        return (u[0] / u[2], u[1] / u[2], True)
    vf = tuple(float(t) for t in v)
    u = tuple(sum(float(analysis.inverse[i][j]) * vf[j] for j in range(3))
              for i in range(3))
    scale = max(abs(t) for t in u)
    if scale == 0:
        raise ValueError("zero vector is not a projective point")
    if abs(u[2]) < tol * scale:
        return None
    return (Fraction(u[0] / u[2]), Fraction(u[1] / u[2]), False)


def locate(analysis: CurveAnalysis, point, tol: float = 1e-7) -> str:
    """Which component of the curve a point lies on: 'oval' or 'pseudoline'.

    The point is given in the coordinates of the input ternary cubic.
    Exact rational points are decided exactly; floating input is matched to
    the nearest fibre branch and must sit within `tol` of it.
    """
    got = _chart_xy(analysis, point, tol)
    if got is None:
        # the point at infinity of the chart lies on the pseudoline
        return "pseudoline"
    x0, y0, exact = got
    if analysis.components == 1:
        # still validate membership for exact points
        if exact and analysis.f.eval({"x": x0, "y": y0}) != 0:
            raise NotOnCurve("point does not satisfy the curve equation")
        return "pseudoline"
    where = _cell_of(analysis, x0)
    ys = analysis.f.coeffs_in("y")
    while len(ys) < 4:
        ys.append(Poly.zero(AFFINE_VARS))
    fy = [univ_eval(_coeffs_in_x(c), x0) for c in ys]

    if where[0] == "fold":
        return _locate_at_fold(analysis, where[1], fy, y0, exact, tol)

    cell = where[1]
    roots = real_roots(fy)
    if exact:
        if univ_eval(fy, y0) != 0:
            raise NotOnCurve("point does not satisfy the curve equation")
        branch = sum(1 for r in roots
                     if (r.hi <= y0 and not r.is_point())
                     or (r.is_point() and r.lo < y0))
    else:
        fyf = [float(t) for t in fy]
        scale = max(abs(t) for t in fyf) or 1.0
        yf = float(y0)
        if abs(univ_eval(fyf, yf)) > tol * scale * max(1.0, abs(yf)) ** 3:
            raise NotOnCurve("point too far from the curve")
        mids = []
        for r in roots:
            r = r if r.is_point() else refine_root(fy, r, Fraction(1, 10**15))
            mids.append(float(r.mid))
        dists = sorted((abs(yf - m), i) for i, m in enumerate(mids))
        if len(dists) > 1 and dists[0][0] > 0 and \
                dists[1][0] < 4 * dists[0][0]:
            raise MultiplicityAmbiguity("point between two fibre branches")
        branch = dists[0][1]
    pair = analysis.oval_cells.get(cell)
    if pair is not None and branch in pair:
        return "oval"
    return "pseudoline"


def _locate_at_fold(analysis, k: int, fy, y0, exact, tol: float) -> str:
    fp = analysis.folds[k]
    # exact fold x: the fibre has a double root y* and a simple root
    dfy = univ_derivative(fy)
    g = univ_gcd(fy, dfy)
    if univ_degree(g) != 1:
        raise InternalInconsistency("fold fibre without a double root")
    ystar = -g[0] / g[1]
    rem = univ_divmod(fy, [-ystar, Fraction(1)])[0]
    rem = univ_divmod(rem, [-ystar, Fraction(1)])[0]
    ysurv = -rem[0] / rem[1]
    if exact:
        if y0 == ystar:
            return fp.pair_component
        if y0 == ysurv:
            return fp.survivor_component
        raise NotOnCurve("point does not satisfy the curve equation")
    d_star, d_surv = abs(float(y0) - float(ystar)), abs(float(y0) - float(ysurv))
    if min(d_star, d_surv) > max(tol, 1e-9) * max(1.0, abs(float(y0))):
        raise NotOnCurve("point too far from the curve")
    return fp.pair_component if d_star <= d_surv else fp.survivor_component


# ---------------------------------------------------------------------------
# conics
# ---------------------------------------------------------------------------

_CONIC_MONOMIALS = ((2, 0, 0), (1, 1, 0), (0, 2, 0), (1, 0, 1), (0, 1, 1),
                    (0, 0, 2))


def conic_through_five(points) -> Poly:
    """The unique conic through five points, exactly.

    Points are rational (x, y) pairs or projective triples.  Raises
    DegenerateConfiguration when the five points fail to determine one
    conic (four collinear, repeated points, ...).
    """
    pts = []
    for p in points:
        p = tuple(Fraction(t) for t in p)
        if len(p) == 2:
            p = (p[0], p[1], Fraction(1))
        if len(p) != 3:
            raise ValueError("points must have 2 or 3 coordinates")
        pts.append(p)
    if len(pts) != 5:
        raise ValueError("exactly five points required")
    rows = [[x ** e[0] * y ** e[1] * z ** e[2] for e in _CONIC_MONOMIALS]
            for (x, y, z) in pts]
    null = _null_space(rows, 6)
    if len(null) != 1:
        raise DegenerateConfiguration(
            f"five points determine a {len(null)}-dimensional conic family")
    coeffs = null[0]
    terms = {e: c for e, c in zip(_CONIC_MONOMIALS, coeffs) if c != 0}
    return Poly(PLANE_VARS, terms)


def _null_space(rows, width):
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(width):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][col] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = mat[r][col]
        mat[r] = [t / inv for t in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][col] != 0:
                factor = mat[i][col]
                mat[i] = [a - factor * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        vec = [Fraction(0)] * width
        vec[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][fc]
        basis.append(vec)
    return basis


def _fibre_dense(p: Poly, x0: Fraction) -> list:
    """p(x0, y) as a dense univariate in y, exactly."""
    out = [univ_eval(_coeffs_in_x(c), x0) for c in p.coeffs_in("y")]
    return strip_high([Fraction(t) for t in out]) or [Fraction(0)]


def conic_cubic_intersection(conic: Poly, cubic: Poly) -> list:
    """Real intersection points of an affine conic and cubic.

    Both inputs are exact Polys in (x, y).  Returns (x, y) float pairs in
    the input coordinates, one per real intersection point; the count is
    exact because a shear first makes the x-projection injective on the
    intersection.  Raises SharedComponent when the curves share a
    component.
    """
    yv = Poly.var("y", AFFINE_VARS)
    xv = Poly.var("x", AFFINE_VARS)
    for k in range(12):
        cq, cc = conic, cubic
        if k:
            shear = {"x": xv + yv * k, "y": yv}
            cq = conic.substitute(shear)
            cc = cubic.substitute(shear)
        res = resultant(cq, cc, "y")
        if res.is_zero():
            raise SharedComponent("conic and cubic share a component")
        dense = _coeffs_in_x(res)
        if univ_degree(dense) < 1:
            return []
        if not _is_squarefree(dense):
            continue
        out = []
        for iv in real_roots(dense):
            iv = iv if iv.is_point() else refine_root(
                dense, iv, Fraction(1, 10 ** 14))
            xs = float(iv.mid)
            ys = _common_y(cq, cc, iv)
            out.append((xs + k * ys, ys))
        return out
    raise DegenerateConfiguration("no shear separated the intersection")


def _common_y(p: Poly, q: Poly, x_iv: Interval) -> float:
    """The y over an isolated intersection x, exactly at rational x and to
    float accuracy otherwise."""
    if x_iv.is_point():
        g = univ_gcd(_fibre_dense(p, x_iv.lo), _fibre_dense(q, x_iv.lo))
        if univ_degree(g) != 1:
            raise DegenerateConfiguration("fibre gcd is not a single point")
        return float(-g[0] / g[1])
    xf = float(x_iv.mid)
    pc = [float(univ_eval([float(u) for u in _coeffs_in_x(c)], xf))
          for c in p.coeffs_in("y")]
    qc = [float(univ_eval([float(u) for u in _coeffs_in_x(c)], xf))
          for c in q.coeffs_in("y")]
    roots = np.roots(list(reversed(pc)))
    best, val = None, float("inf")
    for r in roots:
        if abs(r.imag) > 1e-6:
            continue
        residual = abs(univ_eval(qc, float(r.real)))
        if residual < val:
            best, val = float(r.real), residual
    if best is None:
        raise InternalInconsistency("no real fibre root over a real x")
    return best


def _is_zero_dense(c):
    return all(t == 0 for t in c)


def residual_point(cubic: Poly, points) -> tuple:
    """Sixth intersection of a cubic with the conic through five of its
    points, exactly.

    The five points must be rational, lie on the cubic, and have pairwise
    distinct x-coordinates.  Returns the sixth point as a Fraction pair.
    """
    pts = [tuple(Fraction(t) for t in p) for p in points]
    if len(pts) != 5:
        raise ValueError("exactly five points required")
    for (x0, y0) in pts:
        if cubic.eval({"x": x0, "y": y0}) != 0:
            raise NotOnCurve(f"({x0}, {y0}) is not on the cubic")
    xs = [p[0] for p in pts]
    if len(set(xs)) != 5:
        raise DegenerateConfiguration("x-coordinates must be distinct")
    conic = conic_through_five(pts)
    q_aff = Poly(AFFINE_VARS,
                 {(e[0], e[1]): c for e, c in
                  conic.substitute({"z": 1}).terms.items()})
    res = resultant(q_aff, cubic, "y")
    if res.is_zero():
        raise SharedComponent("conic and cubic share a component")
    dense = _coeffs_in_x(res)
    for x0 in xs:
        dense, rem = univ_divmod(dense, [-x0, Fraction(1)])
        if rem:
            raise InternalInconsistency("known root failed to divide out")
    dense = strip_high(dense)
    if univ_degree(dense) != 1:
        raise DegenerateConfiguration(
            "sixth intersection is at infinity or multiple")
    x6 = -dense[0] / dense[1]
    g = univ_gcd(_fibre_dense(q_aff, x6), _fibre_dense(cubic, x6))
    if univ_degree(g) != 1:
        raise DegenerateConfiguration("sixth point fibre is not simple")
    y6 = -g[0] / g[1]
    if cubic.eval({"x": x6, "y": y6}) != 0:
        raise InternalInconsistency("residual point not on the cubic")
    return (x6, y6)


# ---------------------------------------------------------------------------
# Weierstrass chord-tangent arithmetic
# ---------------------------------------------------------------------------

def weierstrass_chord(a, b, P, Q):
    """Third intersection of the chord (or tangent) with y^2 = x^3 + ax + b.

    Exact rational arithmetic; None encodes the point at infinity.
    """
    a, b = Fraction(a), Fraction(b)
    if P is None or Q is None:
        raise ValueError("chord needs two affine points")
    x1, y1 = (Fraction(t) for t in P)
    x2, y2 = (Fraction(t) for t in Q)
    for (x0, y0) in ((x1, y1), (x2, y2)):
        if y0 * y0 != x0 ** 3 + a * x0 + b:
            raise NotOnCurve(f"({x0}, {y0}) is not on the curve")
    if (x1, y1) == (x2, y2):
        if y1 == 0:
            return None
        lam = (3 * x1 * x1 + a) / (2 * y1)
    else:
        if x1 == x2:
            return None
        lam = (y2 - y1) / (x2 - x1)
    x3 = lam * lam - x1 - x2
    y3 = y1 + lam * (x3 - x1)
    return (x3, y3)


def weierstrass_add(a, b, P, Q):
    """Group sum on y^2 = x^3 + ax + b (chord then reflect)."""
    if P is None:
        return Q
    if Q is None:
        return P
    third = weierstrass_chord(a, b, P, Q)
    if third is None:
        return None
    return (third[0], -third[1])
