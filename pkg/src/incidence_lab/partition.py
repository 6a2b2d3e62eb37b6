"""Real polynomial partitioning of the plane with exact post-hoc verification.

A partition is an ordered list of bisecting factors; level j splits every
current part (sign class of the previous factors) with one new factor of
degree at most r_j, the least degree whose curve space can bisect 2**(j-1)
sets. Cells are sign vectors, points on any factor join the boundary set,
and every guarantee (occupancy, degree budget, crossing bounds, count
decomposition) is re-checked by exact evaluation, never trusted from the
search.

Curve/cell crossing profiles use a sheared coordinate frame in which the
curve is regular in y, critical x-values from resultants, and exact sign
determination at one rational sample point per branch segment.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb, gcd

from .errors import (ConstructionFailureError, InternalConsistencyError,
                     InvalidInputError)
from .fields import RATIONAL
from .hamsandwich import bisect_sets
from .incidence import (IncidenceReport, PlaneCurve, PointConfiguration,
                        _curve_hit_flags, incidence_count_bruteforce,
                        int_nth_root, validate_configuration)
from .linalg import ExactMatrix, mat_kernel
from .poly import BiPoly, UniPoly, poly_gcd, resultant, squarefree_part_in
from .realroots import (count_roots_between, isolate_real_roots, separating_samples,
                        sign_at, sturm_chain, to_int_coeffs, _nonroot_between)
from .rng import SplitMix64
from .veronese import homogeneous_monomials


def harnack_bound(d: int) -> int:
    """Maximum connected components of a real plane curve of degree d."""
    if d < 1:
        raise InvalidInputError("degree must be >= 1")
    return 1 + (d - 1) * (d - 2) // 2


def level_degree(j: int) -> int:
    """Least r whose curve space (dimension C(r+2,2)-1) can bisect 2**(j-1) sets."""
    need = 1 << (j - 1)
    r = 1
    while comb(r + 2, 2) - 1 < need:
        r += 1
    return r


def max_partition_degree(t: int) -> int:
    """Degree budget D_max(t): sum of per-level factor degrees."""
    return sum(level_degree(j) for j in range(1, t + 1))


@dataclass(frozen=True)
class PartitionDegree:
    D: int
    levels: int
    skip: bool = False
    reason: str = ""


def choose_partition_degree(num_points: int, num_curves: int, A: int) -> PartitionDegree:
    """Partition degree for the balanced regime, or a skip sentinel.

    Outside sqrt(|P|) <= |L| <= |P|^A the caller should fall back to the
    two counting bounds instead of partitioning.
    """
    if num_points <= 0 or num_curves <= 0:
        raise InvalidInputError("point and curve counts must be positive")
    if num_curves * num_curves < num_points:
        return PartitionDegree(0, 0, True, "|L| below sqrt(|P|): trivial-bound regime")
    if num_curves > num_points ** A:
        return PartitionDegree(0, 0, True, "|L| above |P|^A: counting-bound regime")
    e = 2 * A - 1
    d_raw = int_nth_root(num_points ** A // num_curves, e)
    while (d_raw + 1) ** e * num_curves <= num_points ** A:
        d_raw += 1
    while d_raw > 1 and d_raw ** e * num_curves > num_points ** A:
        d_raw -= 1
    D = min(d_raw, num_curves // 2)
    if D < 1:
        return PartitionDegree(0, 0, True, "degree cap |L|/2 below 1")
    t = 0
    while max_partition_degree(t + 1) <= D:
        t += 1
    return PartitionDegree(D, t)


def _int_lift(x: Fraction, y: Fraction, monos):
    z = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
    xx, yy = int(x * z), int(y * z)
    zp = {0: 1}
    out = []
    for i, j, k in monos:
        if k not in zp:
            zp[k] = z ** k
        out.append(xx ** i * yy ** j * zp[k])
    return tuple(out)


def _int_kernel(rows):
    """Kernel of an integer matrix as primitive integer vectors."""
    kern = mat_kernel(ExactMatrix(RATIONAL, rows))
    out = []
    for vec in kern:
        den = 1
        for f in vec:
            den = den * f.denominator // gcd(den, f.denominator)
        ints = [int(f * den) for f in vec]
        g = 0
        for v in ints:
            g = gcd(g, abs(v))
        out.append(tuple(v // g for v in ints))
    return out


def _vector_to_poly(vec, monos) -> BiPoly:
    coeffs = {}
    for (i, j, _k), c in zip(monos, vec):
        if c:
            coeffs[(i, j)] = Fraction(c) + coeffs.get((i, j), Fraction(0))
    return BiPoly(RATIONAL, coeffs)


class PartitionResult:
    """Ordered bisecting factors with the induced cell decomposition."""

    def __init__(self, points, levels, factors, cells, boundary):
        self.points = points
        self.levels = levels
        self.factors = factors
        self.cells = cells              # sign tuple -> list of point indices
        self.boundary_points = boundary  # indices with some factor zero
        self.factor_degrees = [f.degree for f in factors]

    @property
    def deg_q(self) -> int:
        return sum(self.factor_degrees)

    @property
    def q_poly(self) -> BiPoly:
        q = BiPoly.const(RATIONAL, 1)
        for f in self.factors:
            q = q * f
        return q

    @property
    def max_occupancy(self) -> int:
        return max((len(v) for v in self.cells.values()), default=0)

    @property
    def occupancy(self) -> dict:
        return {k: len(v) for k, v in self.cells.items()}

    def locate(self, point):
        """Sign vector of the point, or 'boundary' if any factor vanishes."""
        x, y = Fraction(point[0]), Fraction(point[1])
        signs = []
        for f in self.factors:
            v = f.eval(x, y)
            if not v:
                return "boundary"
            signs.append(1 if v > 0 else -1)
        return tuple(signs)

    def dump_factors(self) -> list[str]:
        """Exact coefficient text of every factor: 'i,j:num/den' terms."""
        out = []
        for f in self.factors:
            items = sorted(f.coeffs.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]),
                                                             -kv[0][0]))
            out.append(" ".join(f"{i},{j}:{c}" for (i, j), c in items))
        return out


def locate(point, part: PartitionResult):
    return part.locate(point)


def build_partition(points, t: int, seed: int = 0) -> PartitionResult:
    """t levels of verified simultaneous bisection over rational points.

    Every level's factor is re-checked by exact sign evaluation: each
    part's strict sides hold at most ceil(size/2) points, so the final
    occupancy is at most ceil(|P|/2**t). Degrees follow the level budget.
    A failed search raises ConstructionFailureError; a bad factor is
    never silently accepted.
    """
    if t < 0:
        raise InvalidInputError("level count must be >= 0")
    pts = []
    seen = set()
    for p in points:
        q = (Fraction(p[0]), Fraction(p[1]))
        if q in seen:
            raise InvalidInputError(f"duplicate point {q}")
        seen.add(q)
        pts.append(q)
    rng = SplitMix64(seed)
    cells = {(): list(range(len(pts)))}
    boundary: list[int] = []
    factors: list[BiPoly] = []
    for j in range(1, t + 1):
        r = level_degree(j)
        monos = homogeneous_monomials(r)
        if pts:
            lifts = [_int_lift(x, y, monos) for x, y in pts]
            parts = [idxs for idxs in cells.values() if idxs]
            vec = bisect_sets(lifts, parts, pts, rng, _int_kernel)
            factor = _vector_to_poly(vec, monos)
        else:
            factor = BiPoly(RATIONAL, {(1, 0): 1, (0, 0): -j})
        if factor.is_zero:
            raise ConstructionFailureError("search produced the zero polynomial")
        if factor.degree > r:
            raise ConstructionFailureError("factor exceeds level degree budget")
        new_cells: dict = {}
        for key, idxs in cells.items():
            pos, neg = [], []
            for i in idxs:
                v = factor.eval(pts[i][0], pts[i][1])
                if v > 0:
                    pos.append(i)
                elif v < 0:
                    neg.append(i)
                else:
                    boundary.append(i)
            cap = (len(idxs) + 1) // 2
            if len(pos) > cap or len(neg) > cap:
                raise ConstructionFailureError(
                    f"level {j} factor fails verification on part {key}: "
                    f"{len(pos)}/{len(neg)} vs cap {cap}")
            new_cells[key + (1,)] = pos
            new_cells[key + (-1,)] = neg
        cells = new_cells
        factors.append(factor)
    cells = {k: v for k, v in cells.items() if v}
    result = PartitionResult(pts, t, factors, cells, sorted(boundary))
    if result.deg_q > max_partition_degree(t):
        raise InternalConsistencyError("deg Q exceeds D_max(t)")
    n = len(pts)
    if n and result.max_occupancy > -(-n // (1 << t)):
        raise InternalConsistencyError("cell occupancy exceeds ceil(|P|/2^t)")
    return result


# ---------------------------------------------------------------------------
# curve vs partition geometry


@dataclass
class CrossingProfile:
    curve_label: str
    contained: bool
    visited_cells: set = dc_field(default_factory=set)
    crossing_abscissae: int = 0

    def cell_budget_ok(self, curve_degree: int, deg_q: int) -> bool:
        limit = curve_degree * deg_q + harnack_bound(curve_degree)
        return len(self.visited_cells) <= limit


def _shear_regular(poly: BiPoly):
    """Shear x -> x + s*y so the top y-coefficient is a nonzero constant."""
    d = poly.degree
    s = 0
    seq = [0]
    for k in range(1, 40):
        seq.extend([k, -k])
    for s in seq:
        sheared = poly.shear_x(Fraction(s))
        ys = sheared.coeffs_in("y")
        if len(ys) == d + 1 and ys[-1].degree == 0:
            return Fraction(s), sheared
    raise InternalConsistencyError("no regularizing shear found")


def _univariate_at(poly_ys, q: Fraction):
    """Evaluate the x-coefficients of an F[x][y] list at x=q: rational y-poly."""
    return [u.eval(q) for u in poly_ys]


def _branch_sign(fi_at_q, g_int, g_chain, interval):
    """Exact sign of a y-polynomial at the single g-root inside the interval."""
    fi_int = to_int_coeffs(fi_at_q)
    if len(fi_int) <= 1:
        v = fi_int[0] if fi_int else 0
        return (v > 0) - (v < 0)
    chain_f = sturm_chain(fi_int)
    lo, hi = interval
    while True:
        if (sign_at(fi_int, lo) and sign_at(fi_int, hi)
                and count_roots_between(chain_f, lo, hi) == 0):
            return sign_at(fi_int, lo)
        mid = _nonroot_between(g_int, lo, hi)
        if count_roots_between(g_chain, lo, mid) == 1:
            hi = mid
        else:
            lo = mid


def curve_cells(curve, part: PartitionResult) -> CrossingProfile:
    """Which sign-vector cells a curve visits, or containment in Z(Q).

    Containment means some factor shares a component with the curve
    (nonconstant gcd). Transverse curves get their visited cells from
    exact arc sampling; the count is asserted against the crossing
    budget deg_c * deg_Q + harnack(deg_c) by the caller.
    """
    poly = curve.poly if isinstance(curve, PlaneCurve) else curve
    label = curve.label if isinstance(curve, PlaneCurve) else ""
    if poly.is_zero:
        raise InvalidInputError("curve polynomial must be nonzero")
    for f in part.factors:
        if not poly_gcd(poly, f).is_constant:
            return CrossingProfile(label, True)
    if not part.factors:
        return CrossingProfile(label, False, {()}, 0)
    if poly.degree == 1:
        return _line_profile(poly, label, part)
    return _general_profile(poly, label, part)


def _line_profile(poly: BiPoly, label, part: PartitionResult) -> CrossingProfile:
    a = poly.coeffs.get((1, 0), Fraction(0))
    b = poly.coeffs.get((0, 1), Fraction(0))
    c = poly.coeffs.get((0, 0), Fraction(0))
    F = RATIONAL
    tvar = BiPoly.variable(F, "x")
    if b:
        xt = tvar
        yt = (tvar.scale(-a) + BiPoly.const(F, -c)).scale(1 / b)
    else:
        xt = BiPoly.const(F, -c / a)
        yt = tvar
    per_factor = []
    for f in part.factors:
        g = f.substitute(xt, yt).to_univariate("x")
        # a vanishing restriction would mean containment, handled earlier
        per_factor.append(g)
    prod = UniPoly.const(F, 1)
    for g in per_factor:
        prod = prod * g
    intervals = isolate_real_roots(prod.coeffs)
    samples = separating_samples(intervals)
    visited = set()
    for s in samples:
        sig = []
        good = True
        for g in per_factor:
            v = g.eval(s)
            if not v:
                good = False
                break
            sig.append(1 if v > 0 else -1)
        if good:
            visited.add(tuple(sig))
    return CrossingProfile(label, False, visited, len(intervals))


def _general_profile(poly: BiPoly, label, part: PartitionResult) -> CrossingProfile:
    s, F_sh = _shear_regular(poly)
    factors_sh = [f.shear_x(s) for f in part.factors]
    F_red = squarefree_part_in(F_sh, "y")
    if F_red.degree_in("y") < 1:
        raise InternalConsistencyError("sheared curve lost its y-degree")
    dFy = F_red.derivative("y")
    crit = UniPoly.const(RATIONAL, 1)
    if dFy.degree_in("y") >= 1:
        crit = crit * resultant(F_red, dFy, "y")
    elif not dFy.is_zero:
        # derivative free of y: its x-roots are the critical abscissae
        crit = crit * dFy.to_univariate("x")
    cross_poly = UniPoly.const(RATIONAL, 1)
    for f in factors_sh:
        if f.degree_in("y") >= 1:
            res = resultant(F_red, f, "y")
        else:
            res = f.to_univariate("x")
        if res.is_zero:
            raise InternalConsistencyError("vanishing resultant for a transverse pair")
        cross_poly = cross_poly * res
    total_crit = crit * cross_poly
    lc_drop = F_red.coeffs_in("y")[-1]
    if lc_drop.degree > 0:
        total_crit = total_crit * lc_drop
    intervals = isolate_real_roots(total_crit.coeffs) if total_crit.degree >= 1 else []
    samples = separating_samples(intervals)
    crossings = len(isolate_real_roots(cross_poly.coeffs)) if cross_poly.degree >= 1 else 0

    F_ys = F_red.coeffs_in("y")
    factor_ys = [f.coeffs_in("y") for f in factors_sh]
    visited = set()
    for q in samples:
        g_coeffs = _univariate_at(F_ys, q)
        g_int = to_int_coeffs(g_coeffs)
        if len(g_int) <= 1:
            continue
        roots = isolate_real_roots(g_coeffs)
        if not roots:
            continue
        g_chain = sturm_chain(g_int)
        fi_at_q = [_univariate_at(fys, q) for fys in factor_ys]
        for iv in roots:
            sig = []
            for fi in fi_at_q:
                sgn = _branch_sign(fi, g_int, g_chain, iv)
                if sgn == 0:
                    raise InternalConsistencyError(
                        "factor vanished at a non-critical sample column")
                sig.append(sgn)
            visited.add(tuple(sig))
    return CrossingProfile(label, False, visited, crossings)


# ---------------------------------------------------------------------------
# partition-based counting


@dataclass
class PartitionCountLedger:
    cell_cell: int = 0
    alg_cell: int = 0
    alg_alg: int = 0
    cell_alg: int = 0          # residual: P_cell points on partially contained curves
    isolated_patch: int = 0    # pairs found by the singular-point guard
    candidate_pairs: int = 0
    total_pairs: int = 0
    sum_visited_cells: int = 0
    profiles: list = dc_field(default_factory=list)

    @property
    def total(self) -> int:
        return self.cell_cell + self.alg_cell + self.alg_alg + self.cell_alg


def _singular_guard(cfg, curve, part, cell_of, visited):
    """Add cells carrying isolated real points of the curve (exact, rare).

    Isolated points are singular: both partials vanish there. Returns the
    number of point-curve pairs recovered this way.
    """
    F = curve.poly
    fx = F.derivative("x")
    fy = F.derivative("y")
    patched = 0
    for i, pt in enumerate(cfg.points):
        cell = cell_of[i]
        if cell is None or cell in visited:
            continue
        if fx.eval(pt[0], pt[1]) or fy.eval(pt[0], pt[1]):
            continue
        if not F.eval(pt[0], pt[1]):
            visited.add(cell)
            patched += 1
    return patched


def incidence_count_partitioned(cfg: PointConfiguration, part: PartitionResult):
    """Three-term partitioned count; must equal brute force exactly.

    Returns (IncidenceReport, PartitionCountLedger). Any mismatch with
    the brute-force oracle raises InternalConsistencyError.
    """
    if cfg.field.kind != "rational":
        raise InvalidInputError("partitioned counting runs over rational points only")
    if not validate_configuration(cfg):
        raise InvalidInputError("configuration fails curve-set validation")
    if len(part.points) != cfg.n_points or any(
            part.points[i] != cfg.points[i] for i in range(cfg.n_points)):
        raise InvalidInputError("partition was not built on this configuration")

    ledger = PartitionCountLedger(total_pairs=cfg.n_points * cfg.n_curves)
    cell_of = [None] * cfg.n_points
    for key, idxs in part.cells.items():
        for i in idxs:
            cell_of[i] = key
    alg_points = part.boundary_points
    cell_points = [i for i in range(cfg.n_points) if cell_of[i] is not None]

    profiles = []
    contained_idx = []
    transverse_idx = []
    for ci, curve in enumerate(cfg.curves):
        prof = curve_cells(curve, part)
        profiles.append(prof)
        if prof.contained:
            contained_idx.append(ci)
        else:
            transverse_idx.append(ci)
            if not prof.cell_budget_ok(curve.degree, part.deg_q):
                raise InternalConsistencyError(
                    f"curve {ci} visits {len(prof.visited_cells)} cells, over budget")
    ledger.profiles = profiles
    ledger.sum_visited_cells = sum(len(profiles[i].visited_cells)
                                   for i in transverse_idx)

    per_curve = [0] * cfg.n_curves
    for ci in transverse_idx:
        curve = cfg.curves[ci]
        prof = profiles[ci]
        if curve.degree >= 2:
            ledger.isolated_patch += _singular_guard(cfg, curve, part, cell_of,
                                                     prof.visited_cells)
        candidates = [i for i in cell_points if cell_of[i] in prof.visited_cells]
        ledger.candidate_pairs += len(candidates)
        if candidates:
            flags = _curve_hit_flags(cfg, curve, candidates)
            hits = sum(map(bool, flags))
            ledger.cell_cell += hits
            per_curve[ci] += hits
        if alg_points:
            flags = _curve_hit_flags(cfg, curve, alg_points)
            hits = sum(map(bool, flags))
            ledger.alg_cell += hits
            per_curve[ci] += hits
    for ci in contained_idx:
        curve = cfg.curves[ci]
        if alg_points:
            flags = _curve_hit_flags(cfg, curve, alg_points)
            hits = sum(map(bool, flags))
            ledger.alg_alg += hits
            per_curve[ci] += hits
        if cell_points:
            flags = _curve_hit_flags(cfg, curve, cell_points)
            hits = sum(map(bool, flags))
            ledger.cell_alg += hits
            per_curve[ci] += hits

    report = IncidenceReport(ledger.total, per_curve)
    oracle = incidence_count_bruteforce(cfg)
    if oracle.incidence_count != report.incidence_count or \
            oracle.per_curve != report.per_curve:
        raise InternalConsistencyError(
            f"partitioned count {report.incidence_count} != "
            f"brute force {oracle.incidence_count}")
    return report, ledger


# ---------------------------------------------------------------------------
# dyadic peeling of curves inside the partition surface


@dataclass
class DyadicIteration:
    n_points: int
    n_curves: int
    D: int
    levels: int
    deg_q: int
    n_alg_curves: int
    n_alg_points: int
    counted: int
    note: str = ""


@dataclass
class DyadicTrace:
    iterations: list
    total: int


def dyadic_ledger(cfg: PointConfiguration, seed: int = 0) -> DyadicTrace:
    """Iterated partition-and-peel; the summed ledger must match brute force.

    Each round partitions the current points, counts every incidence
    except those between boundary points and fully contained curves, and
    recurses on that remainder. The curve count at least halves per round
    (|L_alg| <= D <= |L|/2); violation raises.
    """
    from .veronese import degrees_of_freedom
    if cfg.field.kind != "rational":
        raise InvalidInputError("dyadic ledger runs over rational points only")
    if not validate_configuration(cfg):
        raise InvalidInputError("configuration fails curve-set validation")
    A = degrees_of_freedom(cfg.d).dof
    rng = SplitMix64(seed ^ 0x9E3779B97F4A7C15)
    points = list(cfg.points)
    curves = list(cfg.curves)
    iterations = []
    total = 0
    while True:
        nP, nL = len(points), len(curves)
        if nP == 0 or nL == 0:
            iterations.append(DyadicIteration(nP, nL, 0, 0, 0, 0, 0, 0,
                                              "empty side: nothing to count"))
            break
        regime = choose_partition_degree(nP, nL, A)
        sub = PointConfiguration(cfg.field, cfg.d, points, curves)
        if regime.skip or regime.levels == 0:
            cnt = incidence_count_bruteforce(sub).incidence_count
            total += cnt
            iterations.append(DyadicIteration(
                nP, nL, regime.D, regime.levels, 0, 0, 0, cnt,
                regime.reason or "degree budget below first level"))
            break
        part = build_partition(points, regime.levels, seed=rng.next_u64())
        contained = []
        transverse = []
        for ci, curve in enumerate(curves):
            if curve_cells(curve, part).contained:
                contained.append(ci)
            else:
                transverse.append(ci)
        if len(contained) > regime.D or 2 * len(contained) > nL:
            raise InternalConsistencyError(
                f"|L_alg| = {len(contained)} exceeds the halving budget "
                f"(D = {regime.D}, |L| = {nL})")
        alg_set = set(part.boundary_points)
        counted = 0
        for ci in transverse:
            flags = _curve_hit_flags(sub, curves[ci])
            counted += sum(map(bool, flags))
        for ci in contained:
            flags = _curve_hit_flags(sub, curves[ci])
            counted += sum(1 for i, f in enumerate(flags)
                           if f and i not in alg_set)
        total += counted
        iterations.append(DyadicIteration(
            nP, nL, regime.D, regime.levels, part.deg_q,
            len(contained), len(part.boundary_points), counted))
        if not contained:
            break
        points = [points[i] for i in sorted(alg_set)]
        curves = [curves[i] for i in contained]
        if not points:
            iterations.append(DyadicIteration(0, len(curves), 0, 0, 0, 0, 0, 0,
                                              "no boundary points remain"))
            break
    oracle = incidence_count_bruteforce(cfg).incidence_count
    if total != oracle:
        raise InternalConsistencyError(
            f"dyadic ledger total {total} != brute force {oracle}")
    return DyadicTrace(iterations, total)
