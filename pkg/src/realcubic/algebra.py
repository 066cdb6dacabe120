"""Exact multivariate polynomials and the root machinery built on them.

Coefficients are `fractions.Fraction` in exact mode; anything numeric
(float/complex) switches a polynomial to approximate mode, in which only
evaluation and arithmetic are supported.  Root isolation and resultants
demand exact input.

Real roots are isolated with Descartes bisection on the square-free part
(Yun decomposition first, so multiplicities are exact).  Complex roots use
simultaneous Aberth iteration.  Resultants go through the Sylvester matrix:
scalar entries get fraction-free elimination, polynomial entries a memoized
Laplace expansion.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import NonConvergence

CANONICAL_VARS = ("x", "y", "z", "w")

Scalar = Union[int, Fraction, float, complex]


def _is_exact(c: Scalar) -> bool:
    return isinstance(c, (int, Fraction))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

class Poly:
    """Sparse polynomial over an ordered variable tuple.

    Terms map exponent tuples (aligned with ``vars``) to coefficients.
    Instances are immutable by convention; every operation returns a new
    Poly.  Equality is structural.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: Mapping[tuple, Scalar]):
        vs = tuple(vars)
        clean = {}
        for expo, c in terms.items():
            if isinstance(c, float):
                c = complex(c)
            if c == 0:
                continue
            expo = tuple(int(e) for e in expo)
            if len(expo) != len(vs):
                raise ValueError("exponent arity mismatch")
            clean[expo] = c
        object.__setattr__(self, "vars", vs)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *a):  # pragma: no cover
        raise AttributeError("Poly is immutable")

    # -- constructors --

    @classmethod
    def zero(cls, vars: Sequence[str] = CANONICAL_VARS) -> "Poly":
        return cls(vars, {})

    @classmethod
    def const(cls, c: Scalar, vars: Sequence[str] = CANONICAL_VARS) -> "Poly":
        return cls(vars, {(0,) * len(tuple(vars)): c})

    @classmethod
    def var(cls, name: str, vars: Sequence[str] = CANONICAL_VARS) -> "Poly":
        vs = tuple(vars)
        e = [0] * len(vs)
        e[vs.index(name)] = 1
        return cls(vs, {tuple(e): Fraction(1)})

    @classmethod
    def from_univariate(cls, coeffs: Sequence[Scalar], var: str,
                        vars: Sequence[str] = CANONICAL_VARS) -> "Poly":
        vs = tuple(vars)
        i = vs.index(var)
        terms = {}
        for k, c in enumerate(coeffs):
            if c == 0:
                continue
            e = [0] * len(vs)
            e[i] = k
            terms[tuple(e)] = c
        return cls(vs, terms)

    # -- predicates / views --

    def is_zero(self) -> bool:
        return not self.terms

    def is_exact(self) -> bool:
        return all(_is_exact(c) for c in self.terms.values())

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Scalar:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree(self, var: str) -> int:
        i = self.vars.index(var)
        return max((e[i] for e in self.terms), default=-1)

    def homogeneous_degree(self):
        """Common total degree of all terms, or None if inhomogeneous."""
        degs = {sum(e) for e in self.terms}
        if len(degs) == 1:
            return degs.pop()
        return None if degs else 0

    def variables_present(self) -> tuple:
        out = []
        for i, v in enumerate(self.vars):
            if any(e[i] for e in self.terms):
                out.append(v)
        return tuple(out)

    # -- arithmetic --

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.vars != self.vars:
                raise ValueError(f"variable mismatch {self.vars} vs {other.vars}")
            return other
        return Poly.const(other, self.vars)

    def __add__(self, other) -> "Poly":
        o = self._coerce(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return Poly(self.vars, t)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        o = self._coerce(other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return Poly(self.vars, t)

    __rmul__ = __mul__

    def __truediv__(self, c: Scalar) -> "Poly":
        if isinstance(c, Poly):
            c = c.constant_value()
        if _is_exact(c):
            c = Fraction(c)
        return Poly(self.vars, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(Fraction(1), self.vars)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            if self.is_constant() or self.is_zero():
                return (next(iter(self.terms.values()), 0)) == other
            return NotImplemented
        return self.vars == other.vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    # -- substitution / evaluation --

    def substitute(self, assignment: Mapping[str, Union["Poly", Scalar]]) -> "Poly":
        """Replace variables by polynomials or scalars (simultaneously)."""
        images = []
        for i, v in enumerate(self.vars):
            if v in assignment:
                img = assignment[v]
                if not isinstance(img, Poly):
                    img = Poly.const(img, self.vars)
                elif img.vars != self.vars:
                    raise ValueError("substitution image has wrong variables")
                images.append(img)
            else:
                images.append(Poly.var(v, self.vars))
        out = Poly.zero(self.vars)
        # Horner-free: powers are small (degree <= 3 everywhere we use this)
        pow_cache: dict = {}

        def power(i: int, k: int) -> Poly:
            key = (i, k)
            if key not in pow_cache:
                pow_cache[key] = images[i] ** k
            return pow_cache[key]

        for expo, c in self.terms.items():
            term = Poly.const(c, self.vars)
            for i, k in enumerate(expo):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def eval(self, point: Union[Mapping[str, Scalar], Sequence[Scalar]]) -> Scalar:
        if not isinstance(point, Mapping):
            point = dict(zip(self.vars, point))
        vals = [point[v] for v in self.vars]
        total = None
        for expo, c in self.terms.items():
            t = c
            for v, k in zip(vals, expo):
                if k:
                    t = t * v ** k
            total = t if total is None else total + t
        if total is None:
            return Fraction(0) if self.is_exact() else 0.0
        return total

    def derivative(self, var: str) -> "Poly":
        i = self.vars.index(var)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                t[tuple(ne)] = c * e[i]
        return Poly(self.vars, t)

    # -- univariate views --

    def coeffs_in(self, var: str) -> list:
        """Coefficients of powers of var, low to high, as Polys in the rest."""
        i = self.vars.index(var)
        d = self.degree(var)
        if d < 0:
            return []
        buckets: list = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            ne = list(e)
            k = ne[i]
            ne[i] = 0
            buckets[k][tuple(ne)] = c
        return [Poly(self.vars, b) for b in buckets]

    def to_univariate(self, var: str = None) -> list:
        """Dense coefficient list, low to high, requiring all other vars absent."""
        present = self.variables_present()
        if var is None:
            if len(present) > 1:
                raise ValueError(f"polynomial is multivariate: {present}")
            var = present[0] if present else self.vars[0]
        i = self.vars.index(var)
        d = self.degree(var)
        out = [Fraction(0)] * (d + 1)
        for e, c in self.terms.items():
            if any(e[j] for j in range(len(e)) if j != i):
                raise ValueError("extra variables present")
            out[e[i]] = c
        return out

    # -- parsing / printing --

    @classmethod
    def parse(cls, text: str, vars: Sequence[str] = None) -> "Poly":
        return _parse_poly(text, vars)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        keys = sorted(self.terms, key=lambda e: (-sum(e), tuple(-k for k in e)))
        parts = []
        for e in keys:
            c = self.terms[e]
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v
                for v, k in zip(self.vars, e) if k
            )
            if isinstance(c, complex):
                cs = repr(c) if c.imag else repr(c.real)
                body = f"{cs}*{mono}" if mono else cs
                sign = "+"
            else:
                neg = c < 0
                a = -c if neg else c
                if mono and a == 1:
                    body = mono
                else:
                    body = f"{a}*{mono}" if mono else str(a)
                sign = "-" if neg else "+"
            parts.append((sign, body))
        s0, b0 = parts[0]
        out = ("-" if s0 == "-" else "") + b0
        for s, b in parts[1:]:
            out += f" {s} {b}"
        return out

    def __repr__(self) -> str:
        return f"Poly({self})"


# -- recursive-descent parser -------------------------------------------------

_TOKEN = re.compile(r"\s*(\d+\.\d+|\d+|[A-Za-z_]\w*|\*\*|[-+*/^()])")


def _tokenize(text: str) -> list:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad character in polynomial at {text[pos:pos + 10]!r}")
        tok = m.group(1)
        out.append("^" if tok == "**" else tok)
        pos = m.end()
    out.append(None)
    return out


def _parse_poly(text: str, vars) -> Poly:
    toks = _tokenize(text)
    if vars is None:
        names = {t for t in toks if t and t[0].isalpha()}
        bad = names - set(CANONICAL_VARS)
        if bad:
            raise ValueError(f"unknown variables {sorted(bad)}")
        vars = CANONICAL_VARS
    vs = tuple(vars)
    i = 0

    def peek():
        return toks[i]

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    def parse_expr() -> Poly:
        if peek() in ("+", "-"):
            sign = take()
            node = parse_term()
            if sign == "-":
                node = -node
        else:
            node = parse_term()
        while peek() in ("+", "-"):
            op = take()
            rhs = parse_term()
            node = node - rhs if op == "-" else node + rhs
        return node

    def parse_term() -> Poly:
        node = parse_factor()
        while True:
            t = peek()
            if t in ("*", "/"):
                op = take()
                rhs = parse_factor()
                if op == "/":
                    node = node / rhs.constant_value()
                else:
                    node = node * rhs
            elif t is not None and (t[0].isdigit() or t[0].isalpha() or t == "("):
                node = node * parse_factor()   # implicit multiplication
            else:
                return node

    def parse_factor() -> Poly:
        t = peek()
        if t in ("+", "-"):
            take()
            f = parse_factor()
            return -f if t == "-" else f
        base = parse_atom()
        if peek() == "^":
            take()
            e = take()
            if e is None or not e.isdigit():
                raise ValueError("exponent must be a nonnegative integer")
            base = base ** int(e)
        return base

    def parse_atom() -> Poly:
        t = take()
        if t == "(":
            node = parse_expr()
            if take() != ")":
                raise ValueError("unbalanced parenthesis")
            return node
        if t is None:
            raise ValueError("unexpected end of polynomial")
        if t[0].isdigit():
            return Poly.const(Fraction(t), vs)
        if t[0].isalpha():
            if t not in vs:
                raise ValueError(f"unknown variable {t!r}")
            return Poly.var(t, vs)
        raise ValueError(f"unexpected token {t!r}")

    node = parse_expr()
    if peek() is not None:
        raise ValueError(f"trailing input at token {peek()!r}")
    return node


# ---------------------------------------------------------------------------
# univariate exact helpers (dense Fraction/int lists, low degree first)
# ---------------------------------------------------------------------------

def strip_high(c: list) -> list:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def univ_degree(c: Sequence) -> int:
    return len(strip_high(c)) - 1


def univ_eval(c: Sequence, x) -> Scalar:
    acc = 0
    for a in reversed(c):
        acc = acc * x + a
    return acc


def univ_derivative(c: Sequence) -> list:
    return [k * a for k, a in enumerate(c)][1:]


def univ_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def univ_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return strip_high([
        (a[k] if k < len(a) else 0) - (b[k] if k < len(b) else 0)
        for k in range(n)
    ])


def univ_divmod(a: Sequence, b: Sequence) -> tuple:
    """Exact Fraction division with remainder."""
    a = [Fraction(t) for t in strip_high(a)]
    b = [Fraction(t) for t in strip_high(b)]
    if not b:
        raise ZeroDivisionError("univariate division by zero polynomial")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    r = a
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        f = r[-1] / b[-1]
        q[k] = f
        for i, bi in enumerate(b):
            r[k + i] -= f * bi
        r = strip_high(r)
    return q, r


def univ_gcd(a: Sequence, b: Sequence) -> list:
    """Monic gcd over the rationals."""
    a = strip_high([Fraction(t) for t in a])
    b = strip_high([Fraction(t) for t in b])
    while b:
        _, r = univ_divmod(a, b)
        a, b = b, r
    if not a:
        return []
    lead = a[-1]
    return [t / lead for t in a]


def to_int_primitive(c: Sequence) -> list:
    """Clear denominators and content; preserves roots."""
    c = strip_high([Fraction(t) for t in c])
    if not c:
        return []
    den = 1
    for t in c:
        den = den * t.denominator // math.gcd(den, t.denominator)
    ints = [int(t * den) for t in c]
    g = 0
    for t in ints:
        g = math.gcd(g, abs(t))
    return [t // g for t in ints]


def squarefree_decomposition(c: Sequence) -> list:
    """Yun's algorithm: [(factor, multiplicity)] with factors monic, coprime."""
    f = strip_high([Fraction(t) for t in c])
    if univ_degree(f) < 1:
        return []
    fp = univ_derivative(f)
    d = univ_gcd(f, fp)
    if univ_degree(d) < 1:
        lead = f[-1]
        return [([t / lead for t in f], 1)]
    b, _ = univ_divmod(f, d)
    cpart, _ = univ_divmod(fp, d)
    out = []
    i = 1
    dd = univ_sub(cpart, univ_derivative(b))
    while univ_degree(b) > 0:
        a = univ_gcd(b, dd)
        if univ_degree(a) > 0:
            out.append((a, i))
        b, _ = univ_divmod(b, a)
        c2, _ = univ_divmod(dd, a)
        dd = univ_sub(c2, univ_derivative(b))
        i += 1
    return out


# ---------------------------------------------------------------------------
# real root isolation (Descartes / bisection on integer polynomials)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    """Isolating interval for one real root.

    lo == hi marks an exactly known rational root.  Otherwise the open
    interval (lo, hi) contains exactly one root and neither endpoint is one.
    """
    lo: Fraction
    hi: Fraction
    multiplicity: int = 1

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def is_point(self) -> bool:
        return self.lo == self.hi

    def __contains__(self, x) -> bool:
        if self.is_point():
            return x == self.lo
        return self.lo < x < self.hi


def _sign_variations(c: Sequence[int]) -> int:
    n, prev = 0, 0
    for a in c:
        if a != 0:
            if prev != 0 and (a > 0) != (prev > 0):
                n += 1
            prev = a
    return n


def _taylor_shift1(c: list) -> list:
    """p(x+1) for integer coefficients, low to high, in place convention."""
    c = list(c)
    n = len(c)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] += c[j + 1]
    return c


def _div_linear_root1(c: list) -> list:
    """Divide by (x - 1) assuming c(1) == 0."""
    n = len(c) - 1
    q = [0] * n
    acc = c[n]
    for k in range(n - 1, -1, -1):
        q[k] = acc
        acc += c[k]
    assert acc == 0
    return q


def _vca(c: list, lo: Fraction, hi: Fraction, out: list):
    """Collect isolating intervals for roots of the original poly in (lo, hi).

    c encodes those roots mapped onto (0, 1); c has no root at 0 or 1.
    """
    v = _sign_variations(_taylor_shift1(c[::-1]))
    if v == 0:
        return
    if v == 1:
        out.append((lo, hi))
        return
    n = len(c) - 1
    mid = (lo + hi) / 2
    left = [a << (n - k) for k, a in enumerate(c)]     # 2^n c(x/2)
    right = _taylor_shift1(left)                       # 2^n c((x+1)/2)
    if right[0] == 0:
        out.append((mid, mid))
        right = right[1:]
        while right and right[0] == 0:  # pragma: no cover - squarefree input
            right = right[1:]
        left = _div_linear_root1(left)
    _vca(left, lo, mid, out)
    _vca(right, mid, hi, out)


def _root_bound_pow2(c: Sequence[int]) -> int:
    """Power of two strictly exceeding the Cauchy bound 1 + max|ai/an|."""
    an = abs(c[-1])
    m = max(abs(a) for a in c[:-1]) if len(c) > 1 else 0
    b = 1
    # want b > 1 + m/an  <=>  (b - 1) * an > m
    while (b - 1) * an <= m:
        b <<= 1
    return b


def _isolate_squarefree(c: list) -> list:
    """Isolating intervals for a squarefree integer polynomial."""
    c = strip_high(c)
    out = []
    if c and c[0] == 0:
        out.append((Fraction(0), Fraction(0)))
        c = c[1:]
    if univ_degree(c) < 1:
        return out
    B = _root_bound_pow2(c)
    # positive roots: map (0, B) to (0, 1)
    pos = [a * B ** k for k, a in enumerate(c)]
    buf: list = []
    _vca(pos, Fraction(0), Fraction(1), buf)
    out.extend((B * lo, B * hi) for lo, hi in buf)
    # negative roots
    neg = [a if k % 2 == 0 else -a for k, a in enumerate(c)]
    buf = []
    _vca([a * B ** k for k, a in enumerate(neg)], Fraction(0), Fraction(1), buf)
    out.extend((-B * hi, -B * lo) for lo, hi in buf)
    return out


def _bisect_once(c: Sequence, lo: Fraction, hi: Fraction) -> tuple:
    mid = (lo + hi) / 2
    vm = univ_eval(c, mid)
    if vm == 0:
        return mid, mid
    if (univ_eval(c, lo) > 0) != (vm > 0):
        return lo, mid
    return mid, hi


def refine_root(c: Sequence, iv: Interval, width: Fraction) -> Interval:
    """Shrink an isolating interval below the requested width."""
    lo, hi = iv.lo, iv.hi
    c = [Fraction(t) for t in c]
    while hi - lo > width and lo != hi:
        lo, hi = _bisect_once(c, lo, hi)
    return Interval(lo, hi, iv.multiplicity)


def real_roots(p: Union[Poly, Sequence], var: str = None) -> list:
    """Isolating intervals for all real roots, sorted increasing.

    Accepts a Poly (univariate in `var` or in its only present variable) or
    a dense coefficient list.  Multiplicities are exact.
    """
    if isinstance(p, Poly):
        coeffs = p.to_univariate(var)
    else:
        coeffs = list(p)
    coeffs = strip_high([Fraction(t) for t in coeffs])
    if not coeffs:
        raise ValueError("zero polynomial has every number as a root")
    if univ_degree(coeffs) == 0:
        return []
    found = []   # (lo, hi, mult, refinement poly)
    for factor, mult in squarefree_decomposition(coeffs):
        fi = to_int_primitive(factor)
        ivs = _isolate_squarefree(fi)
        # exact rational roots found during subdivision sit at endpoints of
        # the neighbouring intervals; divide them out so sign bisection keeps
        # a valid bracket on those intervals
        refine_poly = [Fraction(t) for t in fi]
        for lo, hi in ivs:
            if lo == hi:
                refine_poly, rem = univ_divmod(refine_poly, [-lo, Fraction(1)])
                assert not rem
        for lo, hi in ivs:
            found.append([lo, hi, mult, None if lo == hi else refine_poly])
    # separate intervals coming from different factors; roots are distinct
    # (coprime factors), so half-splitting terminates.  Closures must end up
    # strictly disjoint: no endpoint may equal any root.
    changed = True
    while changed:
        changed = False
        found.sort(key=lambda r: (r[0], r[1]))
        for a, b in zip(found, found[1:]):
            both_points = a[0] == a[1] and b[0] == b[1]
            if a[1] >= b[0] and not both_points:
                for r in (a, b):
                    if r[0] != r[1]:
                        r[0], r[1] = _bisect_once(r[3], r[0], r[1])
                changed = True
    return [Interval(lo, hi, m) for lo, hi, m, _ in found]


def real_root_count(p: Union[Poly, Sequence], var: str = None,
                    with_multiplicity: bool = False) -> int:
    rts = real_roots(p, var)
    return sum(r.multiplicity for r in rts) if with_multiplicity else len(rts)


def count_roots_below(c: Sequence, bound: Fraction, strict: bool = True) -> int:
    """Number of distinct real roots < bound (or <= bound when not strict)."""
    bound = Fraction(bound)
    coeffs = strip_high([Fraction(t) for t in c])
    vanishes = univ_eval(coeffs, bound) == 0
    # refine against the squarefree part so sign bisection is sound
    dc = univ_derivative(coeffs)
    g = univ_gcd(coeffs, dc) if dc else []
    sf = univ_divmod(coeffs, g)[0] if univ_degree(g) > 0 else coeffs
    n = 0
    for iv in real_roots(coeffs):
        if vanishes and bound in iv:
            if not strict:
                n += 1
            continue
        lo, hi = iv.lo, iv.hi
        while lo != hi and lo < bound < hi:
            lo, hi = _bisect_once(sf, lo, hi)
        if lo == hi:
            if lo < bound or (not strict and lo == bound):
                n += 1
        elif hi <= bound:
            n += 1
    return n


# ---------------------------------------------------------------------------
# complex roots (Aberth simultaneous iteration)
# ---------------------------------------------------------------------------

def _to_complex(t) -> complex:
    if isinstance(t, (int, float, complex)):
        return complex(t)
    return complex(float(t))


def _aberth(coeffs: np.ndarray, tol: float, max_iter: int) -> np.ndarray:
    c = coeffs / coeffs[-1]
    n = len(c) - 1
    dc = c[1:] * np.arange(1, n + 1)
    radius = 1.0 + float(np.max(np.abs(c[:-1])))
    k = np.arange(n)
    z = radius * np.exp(2j * np.pi * (k / n) + 0.4j)
    scale = float(np.max(np.abs(coeffs)))
    chi = np.polynomial.polynomial.polyval
    for _ in range(max_iter):
        pv = chi(z, c)
        dv = chi(z, dc)
        bad = np.abs(dv) < 1e-300
        if bad.any():
            z = z + 1e-8 * (1 + 1j) * bad
            continue
        w = pv / dv
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        denom = 1.0 - w * s
        denom = np.where(np.abs(denom) < 1e-300, 1.0, denom)
        dz = w / denom
        z = z - dz
        resid = np.abs(chi(z, coeffs)) / (scale * np.maximum(1.0, np.abs(z)) ** n)
        if float(resid.max()) < tol:
            return z
    raise NonConvergence(f"Aberth iteration did not converge in {max_iter} steps")


def complex_roots(p: Union[Poly, Sequence], var: str = None,
                  tol: float = 1e-12, max_iter: int = 200) -> list:
    """All complex roots with multiplicity, sorted by (real, imag).

    Exact input is square-freed first so multiplicities come out exact;
    numeric input is solved as given.
    """
    if isinstance(p, Poly):
        coeffs = p.to_univariate(var)
    else:
        coeffs = list(p)
    exact = all(_is_exact(t) for t in coeffs)
    if exact:
        coeffs = strip_high([Fraction(t) for t in coeffs])
    else:
        coeffs = list(coeffs)
        while coeffs and abs(_to_complex(coeffs[-1])) == 0:
            coeffs.pop()
    if not coeffs:
        raise ValueError("zero polynomial")
    if len(coeffs) == 1:
        return []
    roots: list = []
    if exact:
        for factor, mult in squarefree_decomposition(coeffs):
            arr = np.array([_to_complex(t) for t in factor], dtype=complex)
            if len(arr) == 2:
                rs = np.array([-arr[0] / arr[1]])
            else:
                rs = _aberth(arr, tol, max_iter)
            roots.extend(list(rs) * mult)
    else:
        arr = np.array([_to_complex(t) for t in coeffs], dtype=complex)
        if len(arr) == 2:
            roots = [complex(-arr[0] / arr[1])]
        else:
            roots = list(_aberth(arr, tol, max_iter))
    roots = [complex(r) for r in roots]
    roots.sort(key=lambda r: (r.real, r.imag))
    return roots


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------

def _det_scalar(m: list) -> Fraction:
    """Exact determinant by Gaussian elimination over Fraction."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            if a[r][col] == 0:
                continue
            f = a[r][col] * inv
            for cc in range(col, n):
                a[r][cc] -= f * a[col][cc]
    return det


def _det_poly(m: list, vars: tuple) -> Poly:
    """Determinant with Poly entries via Laplace expansion, memoized on
    (row, remaining column mask).  Fine for the sizes resultants need."""
    n = len(m)
    one = Poly.const(Fraction(1), vars)
    zero = Poly.zero(vars)
    memo: dict = {}

    def minor(row: int, mask: int) -> Poly:
        if row == n:
            return one
        key = (row, mask)
        if key in memo:
            return memo[key]
        total = zero
        sign = 1
        for col in range(n):
            bit = 1 << col
            if not mask & bit:
                continue    # sign only advances over columns of the submatrix
            entry = m[row][col]
            if not entry.is_zero():
                sub = minor(row + 1, mask & ~bit)
                term = entry * sub
                total = total + term if sign > 0 else total - term
            sign = -sign
        memo[key] = total
        return total

    return minor(0, (1 << n) - 1)


def sylvester_matrix(p: Poly, q: Poly, var: str) -> list:
    cp = p.coeffs_in(var)
    cq = q.coeffs_in(var)
    m, n = len(cp) - 1, len(cq) - 1
    size = m + n
    zero = Poly.zero(p.vars)
    rows = []
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(reversed(cp)):
            row[i + k] = c
        rows.append(row)
    for j in range(m):
        row = [zero] * size
        for k, c in enumerate(reversed(cq)):
            row[j + k] = c
        rows.append(row)
    return rows


def resultant(p: Poly, q: Poly, var: str) -> Poly:
    """Sylvester resultant eliminating var; a Poly in the remaining variables."""
    if p.vars != q.vars:
        raise ValueError("variable mismatch")
    if p.is_zero() or q.is_zero():
        return Poly.zero(p.vars)
    m, n = p.degree(var), q.degree(var)
    if m == 0:
        return p ** n if n > 0 else Poly.const(Fraction(1), p.vars)
    if n == 0:
        return q ** m
    rows = sylvester_matrix(p, q, var)
    if all(e.is_constant() for row in rows for e in row):
        val = _det_scalar([[e.constant_value() for e in row] for row in rows])
        return Poly.const(val, p.vars)
    return _det_poly(rows, p.vars)


def discriminant(p: Poly, var: str) -> Poly:
    """Resultant of p and its derivative; zero iff p has a repeated root."""
    return resultant(p, p.derivative(var), var)


# ---------------------------------------------------------------------------
# resultant of three ternary quadrics
# ---------------------------------------------------------------------------

def quadric_triple_resultant(q1: Poly, q2: Poly, q3: Poly,
                             vars3: Sequence[str]) -> Fraction:
    """Resultant (up to a fixed nonzero constant) of three quadratic forms in
    three variables.  Vanishes iff they share a projective zero.

    The construction: J is the Jacobian determinant of the three forms, a
    cubic form; the 6x6 matrix of coefficients of q1, q2, q3 and the three
    partials of J in the six degree-2 monomials has the resultant as its
    determinant.
    """
    vs = tuple(vars3)
    forms = [q1, q2, q3]
    for f in forms:
        if f.homogeneous_degree() not in (2, 0):
            raise ValueError("inputs must be quadratic forms")
    jac = [[f.derivative(v) for v in vs] for f in forms]
    J = (jac[0][0] * (jac[1][1] * jac[2][2] - jac[1][2] * jac[2][1])
         - jac[0][1] * (jac[1][0] * jac[2][2] - jac[1][2] * jac[2][0])
         + jac[0][2] * (jac[1][0] * jac[2][1] - jac[1][1] * jac[2][0]))
    rows_src = forms + [J.derivative(v) for v in vs]
    monos = []
    idx = {v: k for k, v in enumerate(q1.vars)}
    pos = [idx[v] for v in vs]
    for i in range(3):
        for j in range(i, 3):
            e = [0] * len(q1.vars)
            e[pos[i]] += 1
            e[pos[j]] += 1
            monos.append(tuple(e))
    mat = []
    for f in rows_src:
        extra = set(f.terms) - set(monos)
        if extra:
            raise ValueError("form involves unexpected monomials")
        mat.append([f.terms.get(mo, Fraction(0)) for mo in monos])
    return _det_scalar(mat)
