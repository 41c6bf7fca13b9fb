"""Univariate polynomials in the discount parameter and their positive roots.

Coefficients are stored densely, constant term first, and may be exact
Fractions or floats (see scalars). Root extraction isolates positive real
roots with a Sturm sequence, refines each isolated interval by bisection with
a Newton polish, and, for exact-coefficient polynomials, snaps the refined
value to a nearby small-denominator rational whenever that rational is an
exact zero. The snap step is what lets rational roots such as 5/12 or 1/729
flow through the rest of the pipeline exactly.

The root alpha = 0 is never reported: factors of alpha are stripped before
isolation, and anything at or below the tolerance is dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DegreeCapExceeded, ZeroPolynomial
from .scalars import Scalar, is_exact

DEGREE_CAP = 16
DEFAULT_TOL = 1e-10


@dataclass(frozen=True)
class Poly:
    """coeffs[k] multiplies alpha**k; the empty tuple is the zero polynomial."""

    coeffs: tuple

    def __post_init__(self):
        if self.coeffs and self.coeffs[-1] == 0:
            raise ValueError("trailing zero coefficient; use poly()")
        if len(self.coeffs) - 1 > DEGREE_CAP:
            raise DegreeCapExceeded(
                f"degree {len(self.coeffs) - 1} exceeds cap {DEGREE_CAP}")

    @property
    def degree(self) -> int:
        # zero polynomial reports -1
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(f"{c}")
            elif k == 1:
                parts.append(f"{c}*a")
            else:
                parts.append(f"{c}*a^{k}")
        return " + ".join(parts)


def poly(coeffs) -> Poly:
    """Build a Poly from any coefficient iterable, trimming trailing zeros."""
    cs = list(coeffs)
    while cs and cs[-1] == 0:
        cs.pop()
    return Poly(tuple(cs))


ZERO = poly(())
ONE = poly((1,))


def padd(a: Poly, b: Poly) -> Poly:
    la, lb = a.coeffs, b.coeffs
    if len(la) < len(lb):
        la, lb = lb, la
    out = list(la)
    for i, c in enumerate(lb):
        out[i] = out[i] + c
    return poly(out)


def pneg(a: Poly) -> Poly:
    return Poly(tuple(-c for c in a.coeffs))


def psub(a: Poly, b: Poly) -> Poly:
    return padd(a, pneg(b))


def pmul(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return ZERO
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, ca in enumerate(a.coeffs):
        if ca == 0:
            continue
        for j, cb in enumerate(b.coeffs):
            out[i + j] = out[i + j] + ca * cb
    return poly(out)


def pscale(a: Poly, s) -> Poly:
    if s == 0:
        return ZERO
    return poly(tuple(c * s for c in a.coeffs))


def poly_arith(a: Poly, b: Poly, kind: str) -> Poly:
    if kind == "add":
        return padd(a, b)
    if kind == "sub":
        return psub(a, b)
    if kind == "mul":
        return pmul(a, b)
    raise ValueError(f"unknown kind: {kind!r}")


def peval(p: Poly, x) -> Scalar:
    """Horner evaluation; exact when both coefficients and x are exact."""
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def pdiff(p: Poly) -> Poly:
    return poly(tuple(k * c for k, c in enumerate(p.coeffs) if k > 0))


def pdivmod(a: Poly, b: Poly):
    """Euclidean division. Exact over Fractions; floats divide numerically."""
    if b.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a.coeffs)
    quo = [0] * max(len(a.coeffs) - len(b.coeffs) + 1, 0)
    lead = b.coeffs[-1]
    db = len(b.coeffs) - 1
    for k in range(len(rem) - 1, db - 1, -1):
        q = rem[k] / lead
        quo[k - db] = q
        if q != 0:
            for j, c in enumerate(b.coeffs):
                rem[k - db + j] = rem[k - db + j] - q * c
    return poly(quo), poly(rem[:db])


def _is_exact_poly(p: Poly) -> bool:
    return all(is_exact(c) for c in p.coeffs)


def _pgcd(a: Poly, b: Poly) -> Poly:
    # exact-coefficient gcd, monic result
    while not b.is_zero():
        a, b = b, pdivmod(a, b)[1]
    if a.is_zero():
        return a
    return pscale(a, Fraction(1) / Fraction(a.coeffs[-1]))


def _square_free(p: Poly) -> Poly:
    """p / gcd(p, p') for exact polynomials; floats are passed through
    (the float path assumes simple roots and falls back to derivative
    analysis inside refinement when a bracket has no sign change)."""
    if not _is_exact_poly(p) or p.degree < 2:
        return p
    g = _pgcd(p, pdiff(p))
    if g.degree < 1:
        return p
    return pdivmod(p, g)[0]


def _float_trim(p: Poly, rel: float = 1e-13) -> Poly:
    big = max((abs(float(c)) for c in p.coeffs), default=0.0)
    if big == 0.0:
        return ZERO
    return poly(tuple(0 if abs(float(c)) <= rel * big else c for c in p.coeffs))


def _sturm_chain(p: Poly) -> list:
    chain = [p, pdiff(p)]
    exact_chain = _is_exact_poly(p)
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        rem = pdivmod(chain[-2], chain[-1])[1]
        if not exact_chain:
            rem = _float_trim(rem)
        chain.append(pneg(rem))
    if chain[-1].is_zero():
        chain.pop()
    return chain


def _variations(chain: list, x) -> int:
    signs = []
    for q in chain:
        v = peval(q, x)
        if v > 0:
            signs.append(1)
        elif v < 0:
            signs.append(-1)
    count = 0
    for a, b in zip(signs, signs[1:]):
        if a != b:
            count += 1
    return count


def _cauchy_bound(p: Poly) -> float:
    lead = abs(float(p.coeffs[-1]))
    rest = max((abs(float(c)) for c in p.coeffs[:-1]), default=0.0)
    return 1.0 + rest / lead


def _isolate_positive(p: Poly, hi) -> list:
    """Intervals (a, b] each holding exactly one distinct root of square-free p."""
    chain = _sturm_chain(p)

    def count(a, b):
        return _variations(chain, a) - _variations(chain, b)

    out = []
    stack = [(0, hi, count(0, hi))]
    while stack:
        a, b, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            out.append((a, b))
            continue
        mid = (a + b) / 2
        ka = count(a, mid)
        stack.append((a, mid, ka))
        stack.append((mid, b, k - ka))
    out.sort(key=lambda ab: float(ab[0]))
    return out


def _bisect(p: Poly, lo: float, hi: float, flo: float) -> float:
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = float(peval(p, mid))
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _refine(p: Poly, a, b, tol: float) -> float:
    """One root of square-free p inside (a, b]: bisection, then Newton polish."""
    fa, fb = float(peval(p, a)), float(peval(p, b))
    if fb == 0.0:
        r = float(b)
    elif fa == 0.0:
        r = float(a)
    elif (fa > 0) != (fb > 0):
        r = _bisect(p, float(a), float(b), fa)
    else:
        # No endpoint sign change: the root does not cross zero here, which
        # for float input means an even-multiplicity touch. Walk the
        # derivative's sign change to the extremum and accept it if p
        # vanishes there.
        dp = pdiff(p)
        da, db = float(peval(dp, a)), float(peval(dp, b))
        if (da > 0) == (db > 0):
            r = 0.5 * (float(a) + float(b))
        else:
            r = _bisect(dp, float(a), float(b), da)
    d = pdiff(p)
    for _ in range(4):
        dv = float(peval(d, r))
        if dv == 0.0:
            break
        step = float(peval(p, r)) / dv
        nxt = r - step
        if not (float(a) - tol <= nxt <= float(b) + tol):
            break
        r = nxt
    return r


def _snap_rational(p: Poly, r: float, a, b):
    """Identify r as an exact rational root of exact-coefficient p, if it is one.

    The candidate must stay inside the isolating interval (a, b]: a nearby
    rational that happens to be a DIFFERENT root of p must not capture this
    interval's root.
    """
    for limit in (1, 12, 100, 10_000, 1_000_000, 10**9):
        cand = Fraction(r).limit_denominator(limit)
        if a < cand <= b and peval(p, cand) == 0:
            return cand
    return r


def _multiplicity(p: Poly, r) -> int:
    if not (_is_exact_poly(p) and isinstance(r, Fraction)):
        return 1
    m = 0
    d = p
    while not d.is_zero() and peval(d, r) == 0:
        m += 1
        d = pdiff(d)
    return max(m, 1)


def positive_roots(p: Poly, tol: float = DEFAULT_TOL) -> list:
    """All real roots > tol, ascending, each repeated per its multiplicity.

    Raises ZeroPolynomial for the identically-zero input: that case means the
    parametric system is dependent for every alpha and the caller must treat
    it as such, not pick a root.
    """
    if p.is_zero():
        raise ZeroPolynomial("cannot extract roots of the zero polynomial")
    cs = list(p.coeffs)
    while cs and cs[0] == 0:  # factor out alpha^k; 0 is never a reported root
        cs.pop(0)
    q = poly(cs)
    if q.degree < 1:
        return []
    sf = _square_free(q)
    hi = 1 + _cauchy_bound(sf)
    if _is_exact_poly(sf):
        hi = Fraction(hi).limit_denominator(4096)
    roots = []
    for a, b in _isolate_positive(sf, hi):
        r = _refine(sf, a, b, tol)
        if _is_exact_poly(q):
            r = _snap_rational(q, r, a, b)
        if not r > tol:
            continue
        scale = tol * (1 + max(abs(float(c)) for c in q.coeffs))
        if abs(float(peval(q, r))) > scale:
            continue
        roots.extend([r] * _multiplicity(q, r))
    roots.sort(key=float)
    return roots
