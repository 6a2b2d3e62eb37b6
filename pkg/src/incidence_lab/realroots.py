"""Exact real-root isolation for univariate rational polynomials.

Internally polynomials are primitive integer coefficient lists
(ascending powers, sign preserved). Root counting uses Sturm sequences
on the squarefree part; isolation bisects from a Cauchy bound, always
keeping interval endpoints off the root set so every count is
unambiguous. Everything returns Fractions; no floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import InvalidInputError
from .fields import RATIONAL
from .poly import UniPoly


def to_int_coeffs(coeffs) -> list[int]:
    """Clear denominators and divide by the (positive) integer content."""
    fr = [Fraction(c) for c in coeffs]
    while fr and fr[-1] == 0:
        fr.pop()
    if not fr:
        return []
    den = 1
    for c in fr:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in fr]
    g = 0
    for c in ints:
        g = gcd(g, abs(c))
    return [c // g for c in ints]


def eval_int_at(p: list[int], t: Fraction) -> int:
    """Sign-faithful integer value: p(t) * den**deg, exact."""
    if not p:
        return 0
    num, den = t.numerator, t.denominator
    acc = p[-1]
    dp = 1
    for k in range(len(p) - 2, -1, -1):
        dp *= den
        acc = acc * num + p[k] * dp
    return acc


def sign_at(p: list[int], t: Fraction) -> int:
    v = eval_int_at(p, t)
    return (v > 0) - (v < 0)


def derivative_int(p: list[int]) -> list[int]:
    return [k * c for k, c in enumerate(p)][1:]


def _to_unipoly(p: list[int]) -> UniPoly:
    return UniPoly(RATIONAL, [Fraction(c) for c in p])


def squarefree_int(p: list[int]) -> list[int]:
    """Squarefree part: p / gcd(p, p'), primitive integer coefficients."""
    if not p:
        raise InvalidInputError("zero polynomial")
    if len(p) <= 2:
        return list(p)
    u = _to_unipoly(p)
    from .poly import uni_gcd
    g = uni_gcd(u, u.derivative())
    if g.degree <= 0:
        return list(p)
    q = u.exact_div(g)
    return to_int_coeffs(q.coeffs)


def sturm_chain(p: list[int]) -> list[list[int]]:
    """Sturm sequence of the squarefree part, primitive integer entries."""
    sq = squarefree_int(p)
    chain = [sq, derivative_int(sq)]
    while chain[-1]:
        a, b = _to_unipoly(chain[-2]), _to_unipoly(chain[-1])
        r = a.divmod(b)[1]
        if r.is_zero:
            break
        chain.append(to_int_coeffs([-c for c in r.coeffs]))
    return [c for c in chain if c]


def _variations(signs) -> int:
    v = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            v += 1
        prev = s
    return v


def variations_at(chain, t: Fraction) -> int:
    return _variations([sign_at(p, t) for p in chain])


def variations_at_inf(chain, positive: bool) -> int:
    signs = []
    for p in chain:
        s = (p[-1] > 0) - (p[-1] < 0)
        if not positive and (len(p) - 1) % 2 == 1:
            s = -s
        signs.append(s)
    return _variations(signs)


def count_roots_between(chain, a: Fraction, b: Fraction) -> int:
    """Distinct real roots of the squarefree part in (a, b]; a, b non-roots."""
    return variations_at(chain, a) - variations_at(chain, b)


def count_distinct_real_roots(p: list[int]) -> int:
    chain = sturm_chain(p)
    if len(chain[0]) <= 1:
        return 0
    return variations_at_inf(chain, False) - variations_at_inf(chain, True)


def cauchy_bound(p: list[int]) -> int:
    """Integer B with every real root in (-B, B)."""
    lc = abs(p[-1])
    m = max(abs(c) for c in p[:-1]) if len(p) > 1 else 0
    return 1 + (m + lc - 1) // lc + 1


def _nonroot_between(p: list[int], a: Fraction, b: Fraction) -> Fraction:
    """A rational in (a, b) that is not a root of p (exists: roots are finite)."""
    k = 2
    while True:
        t = a + (b - a) / k
        if sign_at(p, t) != 0:
            return t
        k += 1


def isolate_real_roots(coeffs, width=None) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open intervals, one per distinct real root.

    coeffs: ascending rational coefficients of a nonzero polynomial.
    width: optional positive rational cap on interval length.
    Endpoints are never roots; intervals are sorted left to right.
    """
    p = to_int_coeffs(coeffs)
    if not p:
        raise InvalidInputError("zero polynomial")
    if width is not None and Fraction(width) <= 0:
        raise InvalidInputError("width must be positive")
    if len(p) == 1:
        return []
    sq = squarefree_int(p)
    chain = sturm_chain(sq)
    B = Fraction(cauchy_bound(sq))
    total = count_roots_between(chain, -B, B)
    out = []
    stack = [(-B, B, total)]
    while stack:
        a, b, cnt = stack.pop()
        if cnt == 0:
            continue
        if cnt == 1:
            lo, hi = a, b
            if width is not None:
                w = Fraction(width)
                while hi - lo > w:
                    mid = _nonroot_between(sq, lo, hi)
                    if count_roots_between(chain, lo, mid) == 1:
                        hi = mid
                    else:
                        lo = mid
            out.append((lo, hi))
            continue
        mid = _nonroot_between(sq, a, b)
        left = count_roots_between(chain, a, mid)
        stack.append((a, mid, left))
        stack.append((mid, b, cnt - left))
    out.sort()

    # bisection leaves neighbours touching at shared non-root endpoints;
    # shrink until strictly disjoint
    def shrink(iv):
        a, b = iv
        m = _nonroot_between(sq, a, b)
        if count_roots_between(chain, a, m) == 1:
            return (a, m)
        return (m, b)

    for i in range(len(out) - 1):
        while out[i][1] >= out[i + 1][0]:
            if out[i][1] - out[i][0] >= out[i + 1][1] - out[i + 1][0]:
                out[i] = shrink(out[i])
            else:
                out[i + 1] = shrink(out[i + 1])
    return out


def refine_interval(p: list[int], interval, width) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval of squarefree p below the given width."""
    sq = squarefree_int(p)
    chain = sturm_chain(sq)
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    w = Fraction(width)
    while hi - lo > w:
        mid = _nonroot_between(sq, lo, hi)
        if count_roots_between(chain, lo, mid) >= 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def separating_samples(intervals) -> list[Fraction]:
    """Rationals strictly between consecutive intervals, plus one on each side."""
    if not intervals:
        return [Fraction(0)]
    pts = [Fraction(intervals[0][0]) - 1]
    for (a1, b1), (a2, b2) in zip(intervals, intervals[1:]):
        pts.append(Fraction(b1 + a2) / 2)
    pts.append(Fraction(intervals[-1][1]) + 1)
    return pts
