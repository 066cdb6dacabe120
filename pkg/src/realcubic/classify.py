"""Classification of real nonsingular affine cubic surfaces.

The projective type is read off the real line count (27, 15, 7 or 3), with
the two three-line types separated by the number of conjugation-invariant
tritangent planes.  The affine type adds the topology of the section by the
plane at infinity: number of real curve components, how many real lines meet
the oval, and, on surfaces with a spherical part, whether the oval sits on
the sphere.  All root counting along probe lines is cyclic in the projective
parameter so points at infinity need no special casing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .algebra import (
    Poly,
    quadric_triple_resultant,
    real_roots,
    refine_root,
    resultant,
    strip_high,
    univ_degree,
)
from .combinat import CLASSES, PROJECTIVE_CLASSES, class_id_for
from .config import DEFAULT, Config
from .curve import (
    PLANE_VARS,
    CurveAnalysis,
    _apply_chart,
    _chart_candidates,
    _dehomogenize,
    _fibre_dense,
    _is_squarefree,
    analyze_cubic,
    conic_cubic_intersection,
    locate,
)
from .errors import (
    DegenerateConfiguration,
    InternalInconsistency,
    NotTransversal,
    SamplingInconclusive,
    SharedComponent,
    Undecided,
)
from .lines import LineSet, eval_many, line_plane_point, poly_arrays, solve_lines, tritangent_triples

AMBIENT_VARS = ("x", "y", "z", "w")

# conjugation-invariant tritangent planes per projective class; the count
# depends only on how conjugation permutes the 27 lines, so it is constant
# on each deformation class
REAL_TRITANGENT_PLANES = {"C27": 45, "C15": 15, "C7": 5, "C3a": 7, "C3b": 13}

_LINE_COUNT_CLASS = {27: "C27", 15: "C15", 7: "C7"}


# ---------------------------------------------------------------------------
# input handling and plane restriction
# ---------------------------------------------------------------------------

def homogenize(f: Poly) -> Poly:
    """Affine cubic in x, y, z lifted to a quaternary form with w."""
    if f.vars not in (AMBIENT_VARS, PLANE_VARS):
        raise ValueError(f"expected variables x, y, z[, w], got {f.vars}")
    deg = f.total_degree()
    if deg != 3:
        raise ValueError(f"expected a cubic, got total degree {deg}")
    terms = {}
    for e, c in f.terms.items():
        e4 = tuple(e[:3]) + ((e[3] if len(e) == 4 else 0),)
        if len(e) == 4 and e[3] != 0:
            raise ValueError("affine input must not use the variable w")
        s = sum(e4)
        terms[e4[:3] + (3 - s,)] = c
    return Poly(AMBIENT_VARS, terms)


def as_projective_cubic(surface) -> Poly:
    """Accept a Poly or string, affine (x,y,z) or homogeneous (x,y,z,w)."""
    if isinstance(surface, str):
        surface = Poly.parse(surface, vars=AMBIENT_VARS)
    if surface.vars == PLANE_VARS:
        return homogenize(surface)
    if surface.vars != AMBIENT_VARS:
        raise ValueError(f"expected variables x, y, z[, w], got {surface.vars}")
    if surface.degree("w") <= 0:
        return homogenize(surface)
    if surface.homogeneous_degree() == 3:
        return surface
    raise ValueError(
        "input must be an affine cubic in x, y, z or a homogeneous "
        "quaternary cubic")


def parse_plane(plane) -> tuple:
    """Coefficients of a plane given as a linear form, string, or 4-vector.

    Accepts "w", "3*x+3*y+3*z+11*w", a degree-1 Poly, or a sequence of
    four rationals, and returns the coefficient 4-tuple of Fractions.
    """
    if isinstance(plane, str):
        plane = Poly.parse(plane, vars=AMBIENT_VARS)
    if isinstance(plane, Poly):
        if plane.vars != AMBIENT_VARS:
            raise ValueError("plane form must use variables x, y, z, w")
        if plane.homogeneous_degree() != 1:
            raise ValueError("plane must be a nonzero homogeneous linear form")
        coeffs = [Fraction(0)] * 4
        for mono, c in plane.terms.items():
            coeffs[mono.index(1)] = Fraction(c)
        return tuple(coeffs)
    hq = tuple(Fraction(c) for c in plane)
    if len(hq) != 4 or all(c == 0 for c in hq):
        raise ValueError("plane must be a nonzero 4-vector")
    return hq


@dataclass
class PlaneRestriction:
    ternary: Poly               # section cubic in plane coordinates
    embed: tuple                # 4x3 rational matrix, plane coords -> ambient
    free: tuple                 # ambient slots holding the plane coordinates
    pivot: int


def restrict_to_plane(F: Poly, h) -> PlaneRestriction:
    hq = tuple(Fraction(c) for c in h)
    if len(hq) != 4 or all(c == 0 for c in hq):
        raise ValueError("plane must be a nonzero 4-vector")
    pivot = max(range(4), key=lambda i: (abs(hq[i]), i))
    free = tuple(i for i in range(4) if i != pivot)
    # plane coordinate k rides in the ambient slot named AMBIENT_VARS[k]
    xs = [Poly.parse(v, vars=AMBIENT_VARS) for v in AMBIENT_VARS[:3]]
    images = {}
    acc = Poly(AMBIENT_VARS, {})
    for k, j in enumerate(free):
        images[AMBIENT_VARS[j]] = xs[k]
        acc = acc + xs[k] * Poly(AMBIENT_VARS,
                                 {(0, 0, 0, 0): -hq[j] / hq[pivot]})
    images[AMBIENT_VARS[pivot]] = acc
    G4 = F.substitute(images)
    if G4.degree("w") > 0:
        raise InternalInconsistency("plane restriction left a w term")
    G = Poly(PLANE_VARS, {e[:3]: c for e, c in G4.terms.items()})
    embed = []
    for i in range(4):
        if i == pivot:
            embed.append(tuple(-hq[j] / hq[pivot] for j in free))
        else:
            embed.append(tuple(Fraction(1) if j == i else Fraction(0)
                               for j in free))
    return PlaneRestriction(G, tuple(embed), free, pivot)


def transversal_at_infinity(F: Poly, h=(0, 0, 0, 1)) -> bool:
    """True when the plane cuts the surface in a nonsingular curve."""
    G = restrict_to_plane(F, h).ternary
    if G.is_zero() or G.total_degree() != 3:
        return False
    parts = [G.derivative(v) for v in PLANE_VARS]
    return quadric_triple_resultant(*parts, PLANE_VARS) != 0


# ---------------------------------------------------------------------------
# projective class
# ---------------------------------------------------------------------------

def real_tritangent_count(lineset: LineSet, triples=None) -> int:
    if triples is None:
        triples = tritangent_triples(lineset)
    return sum(1 for t in triples if t["real"])


def projective_class(lineset: LineSet, warnings: Optional[list] = None) -> str:
    n = lineset.real_count
    nreal = real_tritangent_count(lineset)
    if n in _LINE_COUNT_CLASS:
        cls = _LINE_COUNT_CLASS[n]
        if nreal != REAL_TRITANGENT_PLANES[cls] and warnings is not None:
            warnings.append(
                f"{cls} surface shows {nreal} real tritangent planes, "
                f"expected {REAL_TRITANGENT_PLANES[cls]}")
        return cls
    if n != 3:
        raise InternalInconsistency(f"impossible real line count {n}")
    for cls in ("C3a", "C3b"):
        if nreal == REAL_TRITANGENT_PLANES[cls]:
            return cls
    raise Undecided(
        f"three real lines but {nreal} real tritangent planes matches "
        f"neither three-line type")


# ---------------------------------------------------------------------------
# probe lines: fast float evaluation of F along projective segments
# ---------------------------------------------------------------------------

_T_NODES = np.array([0.0, 1.0, 2.0, 3.0])
_VAND_INV = np.linalg.inv(np.vander(_T_NODES, 4, increasing=True))


class _SurfaceProbe:
    def __init__(self, F: Poly, seed: int):
        self.expo, self.coeff = poly_arrays(F)
        self.scale = float(np.abs(self.coeff).sum())
        self.rng = np.random.default_rng(seed)

    def eval(self, pts: np.ndarray) -> np.ndarray:
        return eval_many(self.expo, self.coeff, pts).real

    def segment_coeffs(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Coefficients of F((1-t) a + t b) as a cubic in t, low to high."""
        pts = np.array([(1 - t) * a + t * b for t in _T_NODES])
        return _VAND_INV @ self.eval(pts)

    def real_roots_separated(self, c: np.ndarray, sep: float = 1e-7):
        """All-real-and-separated test for a probe cubic; None when unclear."""
        mag = np.abs(c).max()
        if mag == 0 or abs(c[3]) < 1e-12 * mag:
            return None                  # third root escaped to infinity
        r = np.roots(c[::-1])
        realness = np.abs(r.imag) <= 1e-7 * (1 + np.abs(r.real))
        if not realness.all():
            return sorted(r[realness].real) if realness.sum() == 1 else None
        rr = np.sort(r.real)
        if np.diff(rr).min() < sep * (1 + np.abs(rr).max()):
            return None                  # tangential contact, retry elsewhere
        return list(rr)


def _find_sphere_interior(probe: _SurfaceProbe, cfg) -> Optional[np.ndarray]:
    """A point of the open ball bounded by the spherical component.

    A projective line meets the surface in at most three points, so it
    crosses the sphere at most twice and the region it bounds meets every
    line in a single arc.  A point is inside exactly when every line
    through it sees three real intersections; candidates are midpoints of
    adjacent intersections along random probe lines.
    """
    rng = probe.rng
    for _ in range(cfg.probe_lines * 20):
        a = np.append(rng.uniform(-4, 4, 3), 1.0)
        b = np.append(rng.uniform(-4, 4, 3), 1.0)
        c = probe.segment_coeffs(a, b)
        rr = probe.real_roots_separated(c)
        if rr is None or len(rr) != 3:
            continue
        for lo, hi in zip(rr, rr[1:]):
            t = 0.5 * (lo + hi)
            q = (1 - t) * a + t * b
            mag = max(1.0, float(np.abs(q).max())) ** 3
            if abs(probe.eval(q[None, :])[0]) < 1e-4 * probe.scale * mag:
                continue
            if _verify_interior(probe, q, cfg.probe_extra + 24):
                return q
    return None


def _verify_interior(probe: _SurfaceProbe, q: np.ndarray, ndir: int) -> bool:
    rng = probe.rng
    good = 0
    for _ in range(ndir * 3):
        if good >= ndir:
            return True
        d = rng.normal(size=4)
        d[3] = 0.0                      # direction point on the far plane
        b = q + d / np.linalg.norm(d)
        c = probe.segment_coeffs(q, b)
        rr = probe.real_roots_separated(c)
        if rr is None:
            continue                    # tangential direction, resample
        if len(rr) != 3:
            return False
        good += 1
    return good >= ndir


def _point_separated_from(probe: _SurfaceProbe, q: np.ndarray,
                          p: np.ndarray) -> Optional[bool]:
    """True when p's intersection is cyclically adjacent to q along qp.

    Walking from q to the surface point p inside the region bounded by the
    sphere crosses nothing, so adjacency along one of the two arcs of the
    projective line is equivalent to p lying on the sphere.
    """
    c = probe.segment_coeffs(q, p)
    r = np.roots(c[::-1])
    near_p = np.argmin(np.abs(r - 1.0))
    if abs(r[near_p] - 1.0) > 5e-3:
        return None
    rest = np.delete(r, near_p)
    if (np.abs(rest.imag) > 1e-7 * (1 + np.abs(rest.real))).any():
        return None                     # probe line missed the sphere
    rest = rest.real
    if (np.abs(rest) < 1e-6).any() or (np.abs(rest - 1.0) < 1e-6).any():
        return None
    inside = ((rest > 0) & (rest < 1)).sum()
    if inside == 1:
        return False                    # both arcs blocked: p off the sphere
    return True                         # one arc clean: p on the sphere


def oval_in_sphere(probe: _SurfaceProbe, q: np.ndarray,
                   oval_pts: list) -> bool:
    votes = []
    for p in oval_pts:
        v = _point_separated_from(probe, q, np.asarray(p, dtype=float))
        if v is not None:
            votes.append(v)
    if not votes:
        raise SamplingInconclusive(
            "every probe from the sphere interior to the oval was tangential")
    if len(set(votes)) != 1:
        raise Undecided(f"oval placement votes disagree: {votes}")
    return votes[0]


# ---------------------------------------------------------------------------
# section geometry
# ---------------------------------------------------------------------------

def _embed_matrix(restriction: PlaneRestriction) -> np.ndarray:
    return np.array([[float(c) for c in row] for row in restriction.embed])


def oval_curve_points(analysis: CurveAnalysis, count: int = 3) -> list:
    """Float points on the oval, in input plane coordinates."""
    cells = sorted(analysis.oval_cells)
    if not cells:
        raise ValueError("curve has no oval")
    chosen = []
    for cell in (cells[len(cells) // 2],) + tuple(cells):
        if cell not in chosen:
            chosen.append(cell)
        if len(chosen) >= count:
            break
    T = np.array([[float(c) for c in row] for row in analysis.transform])
    pts = []
    for cell in chosen:
        x0 = analysis.cell_samples[cell]
        fibre = _fibre_dense(analysis.f, x0)
        roots = real_roots(fibre)
        for branch in analysis.oval_cells[cell]:
            iv = refine_root(fibre, roots[branch], Fraction(1, 2 ** 48))
            y = float((iv.lo + iv.hi) / 2)
            pts.append(T @ np.array([float(x0), y, 1.0]))
    return pts


def _line_section_tally(lineset: LineSet, restriction: PlaneRestriction,
                        analysis: CurveAnalysis, h) -> dict:
    hnp = np.array([float(Fraction(c)) for c in h])
    counts = {"oval": 0, "pseudoline": 0}
    for line in lineset.lines:
        if not line.real:
            continue
        x4 = line_plane_point(line, hnp)
        u = tuple(float(np.real(x4[i])) for i in restriction.free)
        counts[locate(analysis, u)] += 1
    return counts


# ---------------------------------------------------------------------------
# complement sampling cross check
# ---------------------------------------------------------------------------

def complement_components_estimate(probe: _SurfaceProbe, n: int) -> int:
    """Union-find estimate of the affine complement component count.

    Only segments with zero surface crossings join samples, so the result
    can only overcount.  Advisory: feeds a warning, never a decision.
    """
    rng = probe.rng
    pts = []
    half = n // 2
    for i in range(n):
        r = 2.5 if i < half else 8.0
        p = np.append(rng.uniform(-r, r, 3), 1.0)
        mag = max(1.0, float(np.abs(p).max())) ** 3
        if abs(probe.eval(p[None, :])[0]) > 1e-5 * probe.scale * mag:
            pts.append(p)
    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            c = probe.segment_coeffs(pts[i], pts[j])
            r = np.roots(c[::-1]) if abs(c[3]) > 1e-12 * np.abs(c).max() \
                else np.array([2.0])
            real = r[np.abs(r.imag) <= 1e-9 * (1 + np.abs(r.real))].real
            margin = 1e-9
            if ((real > margin) & (real < 1 - margin)).any():
                continue
            if (np.abs(real) <= margin).any() or \
                    (np.abs(real - 1) <= margin).any():
                continue                 # grazing, skip the edge
            parent[find(i)] = find(j)
    return len({find(i) for i in range(len(pts))})


# ---------------------------------------------------------------------------
# top level
# ---------------------------------------------------------------------------

@dataclass
class SurfaceReport:
    nonsingular: bool
    transversal: bool
    real_lines: int
    projective_class: str
    curve_components: int
    oval_line_count: Optional[int]
    b0_complement: int
    oval_in_sphere: Optional[bool]
    class_id: int
    warnings: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "nonsingular": self.nonsingular,
            "transversal": self.transversal,
            "real_lines": self.real_lines,
            "projective_class": self.projective_class,
            "curve_components": self.curve_components,
            "oval_line_count": self.oval_line_count,
            "b0_complement": self.b0_complement,
            "oval_in_sphere": self.oval_in_sphere,
            "class_id": self.class_id,
            "warnings": list(self.warnings),
        }


def classify_surface(surface, plane=(0, 0, 0, 1),
                     cfg: Config = DEFAULT) -> SurfaceReport:
    F = as_projective_cubic(surface)
    h = parse_plane(plane)
    warnings: list = []

    restriction = restrict_to_plane(F, h)
    if not transversal_at_infinity(F, h):
        raise NotTransversal(
            "the plane at infinity meets the surface in a singular curve")

    # a full set of 27 well-separated lines doubles as the smoothness check:
    # surfaces at or near the discriminant are rejected by the solver
    lineset = solve_lines(F, cfg.lines)
    cls = projective_class(lineset, warnings)
    if lineset.real_count != PROJECTIVE_CLASSES[cls]["real_lines"]:
        raise InternalInconsistency("line count does not match class")

    analysis = analyze_cubic(restriction.ternary, cfg.sweep)
    components = analysis.components

    tally = _line_section_tally(lineset, restriction, analysis, h)
    if tally["oval"] + tally["pseudoline"] != lineset.real_count:
        raise InternalInconsistency(f"lost a line in the section tally {tally}")

    sphere_flag = None
    if cls == "C3b" and components == 2:
        probe = _SurfaceProbe(F, cfg.classify.seed)
        q = _find_sphere_interior(probe, cfg.classify)
        if q is None:
            raise SamplingInconclusive(
                "no verified interior point of the spherical component")
        embed = _embed_matrix(restriction)
        oval_pts = [embed @ p for p in oval_curve_points(analysis)]
        sphere_flag = oval_in_sphere(probe, q, oval_pts)

    oval_lines = tally["oval"] if components == 2 else None
    class_id = class_id_for(cls, components,
                            oval_lines=None if cls == "C3b" else oval_lines,
                            oval_in_sphere=sphere_flag)
    if cls == "C3b":
        oval_lines = None               # count left open for these classes

    info = CLASSES[class_id]
    if class_id not in (2, 3) and cfg.classify.sample_points > 0:
        probe = _SurfaceProbe(F, cfg.classify.seed)
        est = complement_components_estimate(probe,
                                             cfg.classify.sample_points)
        if est != info["b0"]:
            warnings.append(
                f"complement sampling found {est} components, "
                f"table value is {info['b0']}")

    return SurfaceReport(
        nonsingular=True,
        transversal=True,
        real_lines=lineset.real_count,
        projective_class=cls,
        curve_components=components,
        oval_line_count=oval_lines,
        b0_complement=info["b0"],
        oval_in_sphere=sphere_flag,
        class_id=class_id,
        warnings=warnings,
    )


# ---------------------------------------------------------------------------
# nodal wall representatives from conic/cubic pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WallLabel:
    """Crossing record of a real conic against a nonsingular plane cubic.

    The real intersections of the two curves, split by cubic component:
    `oval_crossings` is None when the cubic is connected, and the `label`
    property then collapses to the single one-sided count.  `surface` is
    the quaternary form w*conic + cubic; its only singular point is the
    node at the affine origin, and its section at infinity is the cubic,
    so it exhibits the wall that the label names.
    """

    pseudoline_crossings: int
    oval_crossings: Optional[int]
    curve_components: int
    surface: Poly

    @property
    def label(self):
        if self.oval_crossings is None:
            return self.pseudoline_crossings
        return (self.pseudoline_crossings, self.oval_crossings)

    def as_dict(self) -> dict:
        lab = self.label
        return {
            "label": list(lab) if isinstance(lab, tuple) else lab,
            "pseudoline_crossings": self.pseudoline_crossings,
            "oval_crossings": self.oval_crossings,
            "curve_components": self.curve_components,
            "real_crossings": self.pseudoline_crossings
            + (self.oval_crossings or 0),
            "surface": str(self.surface),
        }


def _plane_form(p, degree: int, what: str) -> Poly:
    """Coerce text or Poly input to a homogeneous ternary form.

    Affine input in x, y is homogenized with z; ternary input must already
    be homogeneous of the requested degree.
    """
    if isinstance(p, str):
        p = Poly.parse(p, vars=PLANE_VARS)
    if not isinstance(p, Poly):
        raise TypeError(f"{what} must be text or a Poly")
    if tuple(p.vars) == ("x", "y"):
        p = Poly(PLANE_VARS, {(e[0], e[1], 0): c for e, c in p.terms.items()})
    if tuple(p.vars) != PLANE_VARS:
        raise ValueError(f"{what} must use variables x, y[, z]")
    if not p.is_exact():
        raise ValueError(f"{what} needs exact rational coefficients")
    if p.homogeneous_degree() == degree:
        return p
    if p.degree("z") > 0:
        raise ValueError(
            f"{what} must be homogeneous of degree {degree} when it uses z")
    if p.is_zero() or p.total_degree() > degree:
        raise ValueError(f"{what} must have degree {degree}")
    return Poly(PLANE_VARS,
                {e[:2] + (degree - e[0] - e[1],): c
                 for e, c in p.terms.items()})


def wall_label(f2, f3) -> WallLabel:
    """Label of the nodal wall spanned by a conic and a transversal cubic.

    `f2` is a real conic and `f3` a nonsingular real cubic in the plane,
    each given as a ternary form in x, y, z or an affine polynomial in
    x, y (text or Poly).  The six complex intersection points must be
    distinct; tangency raises NotTransversal and a singular cubic raises
    SingularCurve.  Counts the real intersections per component of the
    cubic and packages them with the one-nodal surface w*f2 + f3.
    """
    B = _plane_form(f2, 2, "conic")
    C = _plane_form(f3, 3, "cubic")
    t = B.terms
    # nondegeneracy of the quadratic form: a rank-drop conic would give the
    # surface a singularity worse than a node
    a, b, c = t.get((2, 0, 0), 0), t.get((1, 1, 0), 0), t.get((1, 0, 1), 0)
    d, e, f = t.get((0, 2, 0), 0), t.get((0, 1, 1), 0), t.get((0, 0, 2), 0)
    det = (2 * a) * ((2 * d) * (2 * f) - e * e) \
        - b * (b * (2 * f) - e * c) + c * (b * e - (2 * d) * c)
    if det == 0:
        raise DegenerateConfiguration("conic is degenerate")
    analysis = analyze_cubic(C)

    # chart where all six intersections are affine with distinct x: the
    # resultant in y then has degree exactly 6 and is squarefree
    for M in _chart_candidates(60):
        b_aff = _dehomogenize(_apply_chart(B, M))
        c_aff = _dehomogenize(_apply_chart(C, M))
        res = resultant(b_aff, c_aff, "y")
        if res.is_zero():
            raise SharedComponent("conic and cubic share a component")
        dense = strip_high([q.constant_value() for q in res.coeffs_in("x")])
        if univ_degree(dense) != 6 or not _is_squarefree(dense):
            continue
        points = conic_cubic_intersection(b_aff, c_aff)
        break
    else:
        raise NotTransversal("conic and cubic meet non-transversally")

    on = {"oval": 0, "pseudoline": 0}
    for u, v in points:
        original = tuple(
            float(M[i][0]) * u + float(M[i][1]) * v + float(M[i][2])
            for i in range(3))
        on[locate(analysis, original)] += 1
    if on["pseudoline"] % 2 or on["oval"] % 2:
        raise InternalInconsistency("odd crossing count against a conic")

    nodal = Poly(AMBIENT_VARS,
                 {**{mono + (1,): coef for mono, coef in B.terms.items()},
                  **{mono + (0,): coef for mono, coef in C.terms.items()}})
    return WallLabel(
        pseudoline_crossings=on["pseudoline"],
        oval_crossings=on["oval"] if analysis.components == 2 else None,
        curve_components=analysis.components,
        surface=nodal,
    )


def load_witnesses() -> list:
    """The shipped per-class witness suite: one rational surface per class.

    Each record carries the surface text, the plane at infinity as a linear
    form, and the expected report fields.
    """
    import json
    from importlib import resources

    text = resources.files("realcubic.data").joinpath(
        "witnesses.json").read_text()
    return json.loads(text)["witnesses"]
