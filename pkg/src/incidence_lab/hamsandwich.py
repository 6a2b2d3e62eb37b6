"""Exact simultaneous bisection of point sets by a low-degree curve.

The search works in the lifted coefficient space: a candidate curve is an
integer vector c, and its value at a point is the dot product with the
point's integer monomial lift. Feasibility means every part has at most
ceil(size/2) points on each strict side; points on the curve leave the
parts, which only helps.

The engine is an exact anchored pivot descent. A state is a curve
through a set of anchor points (one per part, then extras). A move drops
one anchor and sweeps the pencil of curves through the rest: each
point's value is linear in the pencil parameter, so its sign flips at
one rational event, and sorting events (by exact cross-multiplication;
the pairs are never reduced) gives the exact infeasibility score at
every event and gap. The sweep is a global 1-D minimization; landing on
an event re-anchors the curve on that point. Anchors keep moves inside
the almost-feasible stratum, which is what makes the walk converge where
naive random directions stall.

Anchored interpolation makes coefficients grow (kernel vectors are
minors of lift matrices), so vectors are periodically replaced by coarse
roundings whenever the exact score allows it. Restarts re-randomize;
failure after the ladder raises, and the caller re-verifies any accepted
vector independently.
"""

from __future__ import annotations

from functools import cmp_to_key
from math import gcd

from .errors import ConstructionFailureError
from .rng import SplitMix64


def _dot(c, v) -> int:
    s = 0
    for a, b in zip(c, v):
        s += a * b
    return s


def _primitive(vec):
    g = 0
    for v in vec:
        g = gcd(g, abs(v))
    if g == 0:
        return None
    return tuple(v // g for v in vec)


def _proportional(u, v) -> bool:
    n = len(u)
    for i in range(n):
        for j in range(i + 1, n):
            if u[i] * v[j] != u[j] * v[i]:
                return False
    return True


class _State:
    """Parts, caps and exact infeasibility scoring for candidate vectors."""

    def __init__(self, lifts, parts):
        self.lifts = lifts
        self.parts = [list(p) for p in parts]
        self.caps = [(len(p) + 1) // 2 for p in self.parts]
        self.active = [i for p in self.parts for i in p]

    def score_counts(self, pos, neg) -> int:
        s = 0
        for p, cap in enumerate(self.caps):
            s += max(0, pos[p] - cap) + max(0, neg[p] - cap)
        return s

    def score(self, c) -> int:
        npart = len(self.parts)
        pos = [0] * npart
        neg = [0] * npart
        for pid, idxs in enumerate(self.parts):
            for i in idxs:
                d = _dot(c, self.lifts[i])
                if d > 0:
                    pos[pid] += 1
                elif d < 0:
                    neg[pid] += 1
        return self.score_counts(pos, neg)

    def on_curve_points(self, c):
        return [i for i in self.active if _dot(c, self.lifts[i]) == 0]


def _cmp_events(a, b) -> int:
    # a, b = (num, den, ...) with den > 0; compare num/den exactly
    lhs = a[0] * b[1]
    rhs = b[0] * a[1]
    return (lhs > rhs) - (lhs < rhs)


def _line_search(state: _State, c, h):
    """Best exact score along the pencil c + l*h.

    Returns (score, (num, den) or None); the rational l = num/den may
    equal an event (those points land on the curve) or sit in a gap.
    """
    lifts = state.lifts
    npart = len(state.parts)
    pos = [0] * npart
    neg = [0] * npart
    events = []  # (num, den, part id, post-crossing sign), den > 0
    for pid, idxs in enumerate(state.parts):
        for i in idxs:
            dc = _dot(c, lifts[i])
            dh = _dot(h, lifts[i])
            if dh == 0:
                if dc > 0:
                    pos[pid] += 1
                elif dc < 0:
                    neg[pid] += 1
            elif dh > 0:
                events.append((-dc, dh, pid, 1))
                neg[pid] += 1  # pre-side of an up-crossing is negative
            else:
                events.append((dc, -dh, pid, -1))
                pos[pid] += 1
    if not events:
        return state.score_counts(pos, neg), None

    events.sort(key=cmp_to_key(_cmp_events))
    best_score = state.score_counts(pos, neg)
    best_lam = (events[0][0] - events[0][1], events[0][1])
    best_event = False
    k = 0
    n = len(events)
    while k < n and best_score > 0:
        num, den = events[k][0], events[k][1]
        g = k
        while g < n and events[g][0] * den == num * events[g][1]:
            _, _, pid, post = events[g]
            if post > 0:
                neg[pid] -= 1
            else:
                pos[pid] -= 1
            g += 1
        s_on = state.score_counts(pos, neg)
        # event landings are preferred at ties: they re-anchor the curve,
        # which keeps coefficients minor-bounded
        if s_on < best_score or (s_on == best_score and not best_event):
            best_score, best_lam, best_event = s_on, (num, den), True
        for e in range(k, g):
            _, _, pid, post = events[e]
            if post > 0:
                pos[pid] += 1
            else:
                neg[pid] += 1
        s_after = state.score_counts(pos, neg)
        if s_after < best_score:
            if g < n:
                n2, d2 = events[g][0], events[g][1]
                best_score, best_lam = s_after, (num * d2 + n2 * den, 2 * den * d2)
            else:
                best_score, best_lam = s_after, (num + den, den)
            best_event = False
        k = g
    return best_score, best_lam


def _apply_move(c, h, lam):
    num, den = lam
    return _primitive(tuple(ci * den + hi * num for ci, hi in zip(c, h)))


def _shrink(state: _State, c, score: int, bit_limit: int = 96):
    """Coarsely round c when its entries outgrow the bit budget.

    Only roundings whose exact score does not regress are accepted, so
    this is purely a representation change, never a correctness risk.
    """
    m = max(abs(v) for v in c)
    if m.bit_length() <= bit_limit:
        return c
    for bits in (24, 40, 64, 96):
        shift = m.bit_length() - bits
        if shift <= 0:
            continue
        cand = _primitive(tuple((v + (1 << (shift - 1))) >> shift for v in c))
        if cand is not None and state.score(cand) <= score:
            return cand
    return c


def _random_vec(dim, rng):
    while True:
        p = _primitive(tuple(rng.randint(-5, 5) for _ in range(dim)))
        if p is not None:
            return p


def _initial_anchors(state: _State, plane_points, dim, rng):
    """dim-1 anchor indices: one near the centroid of each part, then extras."""
    from fractions import Fraction
    ranked = []
    for idxs in state.parts:
        n = len(idxs)
        cx = sum((plane_points[i][0] for i in idxs), Fraction(0)) / n
        cy = sum((plane_points[i][1] for i in idxs), Fraction(0)) / n
        order = sorted(idxs, key=lambda i: ((plane_points[i][0] - cx) ** 2
                                            + (plane_points[i][1] - cy) ** 2, i))
        ranked.append(order)
    anchors = []
    rank = 0
    while len(anchors) < dim - 1:
        added = False
        for order in sorted(ranked, key=len, reverse=True):
            if rank < len(order) and len(anchors) < dim - 1:
                anchors.append(order[rank])
                added = True
        if not added:
            break
        rank += 1
    return anchors[:dim - 1]


def _kernel_curve(lifts, anchors, dim, rng, kernel_fn, avoid=None):
    """Random primitive vector in the kernel of the anchors' lift rows."""
    rows = [lifts[i] for i in anchors]
    basis = kernel_fn(rows) if rows else []
    if not basis:
        return None
    if len(basis) == 1:
        v = basis[0]
        if avoid is not None and _proportional(v, avoid):
            return None
        return _primitive(v)
    for _ in range(8):
        combo = [0] * dim
        for vec in basis:
            w = rng.randint(-3, 3)
            for t in range(dim):
                combo[t] += w * vec[t]
        v = _primitive(combo)
        if v is not None and (avoid is None or not _proportional(v, avoid)):
            return v
    return None


def bisect_sets(lifts, parts, plane_points, rng: SplitMix64, kernel_fn,
                max_steps: int = 1200, max_restarts: int = 80):
    """Integer coefficient vector whose curve bisects every part, or raises.

    lifts: integer lift vectors, one per point, in a common monomial order.
    parts: lists of point indices; the cap per part is ceil(size/2) on
        each strict side, points on the curve excluded.
    kernel_fn: exact solver mapping integer rows to integer kernel vectors.
    """
    parts = [p for p in parts if p]
    dim = len(lifts[0]) if lifts else 0
    if dim == 0:
        return tuple()
    if not parts:
        return tuple([1] + [0] * (dim - 1))
    state = _State(lifts, parts)

    for restart in range(max_restarts):
        anchors = _initial_anchors(state, plane_points, dim, rng)
        if restart % 4 == 3 or not anchors:
            c = _random_vec(dim, rng)
        else:
            if restart > 0:
                rng.shuffle(anchors)
                drop = rng.randint(0, max(0, len(anchors) // 3))
                anchors = anchors[:len(anchors) - drop]
            c = _kernel_curve(lifts, anchors, dim, rng, kernel_fn) \
                or _random_vec(dim, rng)
        score = state.score(c)
        stall = 0
        for _step in range(max_steps):
            if score == 0:
                return _final_shrink(state, c, kernel_fn)
            h = None
            mode = rng.randint(0, 9)
            if mode <= 6:
                on_pts = state.on_curve_points(c)
                if on_pts:
                    rng.shuffle(on_pts)
                    keep = on_pts[:min(len(on_pts), dim - 2)]
                    if len(keep) >= 1:
                        drop_at = rng.randint(0, len(keep) - 1)
                        keep = keep[:drop_at] + keep[drop_at + 1:]
                    h = _kernel_curve(lifts, keep, dim, rng, kernel_fn, avoid=c)
            if h is None and mode <= 8:
                a = lifts[rng.choice(state.active)]
                b = lifts[rng.choice(state.active)]
                h = _primitive(tuple(x - y for x, y in zip(a, b)))
            if h is None:
                h = _random_vec(dim, rng)
            s, lam = _line_search(state, c, h)
            if lam is None:
                stall += 1
                continue
            if s <= score:
                nc = _apply_move(c, h, lam)
                if nc is None:
                    stall += 1
                    continue
                c = _rebase(state, nc, s, kernel_fn)
                stall = 0 if s < score else stall + 1
                score = s
            else:
                stall += 1
            if stall > 150:
                break
        if score == 0:
            return _final_shrink(state, c, kernel_fn)
    raise ConstructionFailureError(
        f"bisection search failed for {len(parts)} parts "
        f"(sizes {[len(p) for p in state.parts]}) in dimension {dim}")


def _rebase(state: _State, c, score: int, kernel_fn):
    """Replace c by the minor-bounded kernel generator of its on-curve set.

    After an event landing the curve interpolates dim-1 points, so the
    kernel of those lift rows is one-dimensional and its primitive
    generator is proportional to c with entries bounded by lift minors;
    this is what stops coefficient bits from compounding move over move.
    """
    dim = len(c)
    if max(abs(v) for v in c).bit_length() <= 8 * dim:
        return c
    on = state.on_curve_points(c)
    if len(on) >= dim - 1:
        basis = kernel_fn([state.lifts[i] for i in on])
        if len(basis) == 1:
            return _primitive(basis[0])
    return _shrink(state, c, score)


def _final_shrink(state: _State, c, kernel_fn):
    """Bounded, verified representation of an accepted vector (score 0 kept)."""
    c = _rebase(state, c, 0, kernel_fn)
    m = max(abs(v) for v in c)
    for bits in (8, 12, 16, 24, 40, 64):
        shift = m.bit_length() - bits
        if shift <= 0:
            break
        cand = _primitive(tuple((v + (1 << (shift - 1))) >> shift for v in c))
        if cand is not None and state.score(cand) == 0:
            return cand
    return c
