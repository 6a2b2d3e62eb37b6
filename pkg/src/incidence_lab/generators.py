"""Deterministic, seedable configuration generators.

Every generator draws exclusively from SplitMix64, so a GeneratorSpec is
a complete recipe: identical specs give bit-identical configurations on
any platform. All outputs pass curve-set validation before leaving the
module; point collisions are deduplicated and counted, never silently
dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import GenerationError, InvalidInputError
from .fields import Field, RATIONAL
from .incidence import PlaneCurve, PointConfiguration, make_curve, validate_curve_set
from .poly import BiPoly
from .rng import SplitMix64
from .veronese import CurveFamily, curves_through, degrees_of_freedom

_COORD_SPAN = 60


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one configuration; identical specs generate identical output."""

    kind: str                   # random | grid_lines | on_curves | family
    field: str = "rational"
    d: int = 1
    seed: int = 0
    n_points: int = 0
    n_curves: int = 0
    points_per_curve: int = 0   # on_curves
    k: int = 0                  # grid_lines
    family: str = ""            # family kind: circles | vertical_parabolas | pencil_through_point

    @staticmethod
    def from_dict(d: dict) -> "GeneratorSpec":
        allowed = {f.name for f in GeneratorSpec.__dataclass_fields__.values()}
        unknown = set(d) - allowed
        if unknown:
            raise InvalidInputError(f"unknown generator fields: {sorted(unknown)}")
        return GeneratorSpec(**d)


@dataclass
class GeneratorOutput:
    config: PointConfiguration
    family: CurveFamily | None = None
    collisions: int = 0
    notes: list = dc_field(default_factory=list)


def generate(spec: GeneratorSpec) -> GeneratorOutput:
    if spec.kind == "random":
        return gen_random_config(spec)
    if spec.kind == "grid_lines":
        return gen_grid_lines(spec.k)
    if spec.kind == "on_curves":
        return gen_on_curves(spec)
    if spec.kind == "family":
        return gen_family_config(spec.family, spec.n_curves, spec.n_points,
                                 spec.d, spec.seed, field_tag=spec.field)
    raise InvalidInputError(f"unknown generator kind {spec.kind!r}")


def _rand_scalar(field: Field, rng: SplitMix64, span: int = _COORD_SPAN):
    if field.kind == "fp":
        return field.coerce(rng.randint(0, field.p - 1))
    return field.coerce(rng.randint(-span, span))


def _distinct_points(field: Field, rng: SplitMix64, n: int, span: int):
    if field.kind == "fp" and n > field.p ** 2:
        raise GenerationError(f"F_{field.p} has only {field.p ** 2} points")
    pts = []
    seen = set()
    budget = 200 * n + 1000
    while len(pts) < n and budget:
        budget -= 1
        p = (_rand_scalar(field, rng, span), _rand_scalar(field, rng, span))
        if p not in seen:
            seen.add(p)
            pts.append(p)
    if len(pts) < n:
        raise GenerationError("could not draw enough distinct points")
    return pts


def _random_curve(field: Field, rng: SplitMix64, d: int) -> PlaneCurve:
    for _ in range(200):
        coeffs = {}
        for i in range(d + 1):
            for j in range(d + 1 - i):
                c = rng.randint(-5, 5)
                if c:
                    coeffs[(i, j)] = c
        poly = BiPoly(field, coeffs)
        if not poly.is_zero and poly.degree >= 1:
            return make_curve(poly)
    raise GenerationError("random curve draw kept collapsing to constants")


def _assemble_validated(field: Field, d: int, rng: SplitMix64, n_curves: int,
                        make_one) -> list[PlaneCurve]:
    """Draw curves until the set passes pairwise validation."""
    curves: list[PlaneCurve] = []
    attempts = 0
    while len(curves) < n_curves:
        attempts += 1
        if attempts > 200 * n_curves + 400:
            raise GenerationError("exhausted attempts building a validated curve set")
        cand = make_one(rng)
        if any(cand.poly == c.poly for c in curves):
            continue
        ok = True
        if curves:
            trial = validate_curve_set(curves + [cand], d)
            ok = trial.passed
        elif cand.degree > d:
            ok = False
        if ok:
            curves.append(cand)
    return curves


def gen_random_config(spec: GeneratorSpec) -> GeneratorOutput:
    """Random distinct points and a validated random curve set."""
    field = Field.from_tag(spec.field)
    rng = SplitMix64(spec.seed)
    pts = _distinct_points(field, rng, spec.n_points, _COORD_SPAN)
    curves = _assemble_validated(field, spec.d, rng, spec.n_curves,
                                 lambda r: _random_curve(field, r, spec.d))
    cfg = PointConfiguration(field, spec.d, pts, curves,
                             label=f"random-{spec.field}-d{spec.d}-s{spec.seed}")
    return GeneratorOutput(cfg)


def gen_grid_lines(k: int) -> GeneratorOutput:
    """The classic sharp configuration for lines: |P|=2k^3, |L|=k^3, I=k^4.

    P = {0..k-1} x {0..2k^2-1}; lines y = m*x + b with slopes 0..k-1 and
    intercepts 0..k^2-1 each meet exactly k grid columns.
    """
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    F = RATIONAL
    pts = [(Fraction(x), Fraction(y)) for x in range(k) for y in range(2 * k * k)]
    curves = []
    for m in range(k):
        for b in range(k * k):
            poly = BiPoly(F, {(0, 1): 1, (1, 0): -m, (0, 0): -b})
            curves.append(make_curve(poly, label=f"y={m}x+{b}"))
    cfg = PointConfiguration(F, 1, pts, curves, label=f"grid-lines-k{k}")
    return GeneratorOutput(cfg)


# -- sampling exact points on curves ----------------------------------------


def _line_points(poly: BiPoly, field: Field, rng: SplitMix64, n: int):
    a = poly.coeffs.get((1, 0), field.zero)
    b = poly.coeffs.get((0, 1), field.zero)
    c = poly.coeffs.get((0, 0), field.zero)
    out = []
    seen = set()
    budget = 80 * n + 200
    while len(out) < n and budget:
        budget -= 1
        t = _rand_scalar(field, rng, 6 * n + 20)
        if b:
            p = (t, (-c - a * t) / b)
        else:
            p = ((-c) / a, t)
        if p not in seen:
            seen.add(p)
            out.append(p)
    if len(out) < n:
        raise GenerationError("line sampling exhausted")
    return out


def _conic_points_through(poly: BiPoly, base, field: Field, rng: SplitMix64, n: int):
    """Chord parametrization from a known point: second intersection of the
    line through `base` with direction (1, t) is rational in t."""
    x0, y0 = base
    fx = poly.derivative("x")
    fy = poly.derivative("y")
    out = []
    seen = {base}
    budget = 120 * n + 300
    while len(out) < n and budget:
        budget -= 1
        t = _rand_scalar(field, rng, 4 * n + 24)
        # F(x0 + s, y0 + t s) = A s^2 + B s with F(base) = 0
        a2 = poly.coeffs.get((2, 0), field.zero)
        a11 = poly.coeffs.get((1, 1), field.zero)
        a02 = poly.coeffs.get((0, 2), field.zero)
        A = a2 + a11 * t + a02 * t * t
        B = fx.eval(x0, y0) + fy.eval(x0, y0) * t
        if not A:
            continue
        s = -B / A
        if not s:
            continue
        p = (x0 + s, y0 + t * s)
        if p not in seen:
            seen.add(p)
            out.append(p)
    if len(out) < n:
        raise GenerationError("conic sampling exhausted")
    return out


def _random_conic_with_point(field: Field, rng: SplitMix64):
    """Random irreducible-ish conic through a random rational point."""
    for _ in range(300):
        x0 = _rand_scalar(field, rng, 12)
        y0 = _rand_scalar(field, rng, 12)
        coeffs = {}
        for (i, j) in ((2, 0), (1, 1), (0, 2), (1, 0), (0, 1)):
            c = rng.randint(-4, 4)
            if c:
                coeffs[(i, j)] = c
        poly = BiPoly(field, coeffs)
        if poly.degree != 2:
            continue
        const = -poly.eval(x0, y0)
        if const:
            poly = poly + BiPoly.const(field, const)
        # base must be a smooth point, otherwise the chord map degenerates
        if not poly.derivative("x").eval(x0, y0) and \
                not poly.derivative("y").eval(x0, y0):
            continue
        return poly, (x0, y0)
    raise GenerationError("no smooth-pointed conic found")


def _nodal_cubic(field: Field, rng: SplitMix64):
    """Random affine image of y^2 = x^2 (x+1), with its parametrization.

    The base curve has the rational parametrization x = t^2-1, y = t(t^2-1);
    applying an invertible affine map keeps degree 3 and rationality.
    """
    x = BiPoly.variable(field, "x")
    y = BiPoly.variable(field, "y")
    for _ in range(200):
        a, b, c, d = (rng.randint(-3, 3) for _ in range(4))
        if a * d - b * c == 0:
            continue
        e, f = rng.randint(-8, 8), rng.randint(-8, 8)
        # map T(u,v) = (au+bv+e, cu+dv+f); curve F(T^{-1}(x,y)) needs the inverse
        det = Fraction(a * d - b * c)
        inv = [(Fraction(d) / det, Fraction(-b) / det),
               (Fraction(-c) / det, Fraction(a) / det)]
        u_expr = x.scale(inv[0][0]) + y.scale(inv[0][1]) + BiPoly.const(
            field, -(inv[0][0] * e + inv[0][1] * f))
        v_expr = x.scale(inv[1][0]) + y.scale(inv[1][1]) + BiPoly.const(
            field, -(inv[1][0] * e + inv[1][1] * f))
        base = y * y - x * x * (x + BiPoly.const(field, 1))
        poly = base.substitute(u_expr, v_expr)
        if poly.degree != 3:
            continue

        def param(t, _a=a, _b=b, _c=c, _d=d, _e=e, _f=f):
            u = t * t - 1
            v = t * u
            return (_a * u + _b * v + _e, _c * u + _d * v + _f)

        return poly, param
    raise GenerationError("nodal cubic construction failed")


def _fp_curve_points(poly: BiPoly, field: Field, rng: SplitMix64, n: int):
    """Enumerate the curve's points over F_p and sample deterministically."""
    p = field.p
    sols = []
    for xv in range(p):
        for yv in range(p):
            if not poly.eval(xv, yv):
                sols.append((field.coerce(xv), field.coerce(yv)))
    if len(sols) < n:
        raise GenerationError(
            f"curve has only {len(sols)} points over F_{p}, need {n}")
    return rng.sample(sols, n)


def gen_on_curves(spec: GeneratorSpec) -> GeneratorOutput:
    """Curves each carrying >= points_per_curve exact points of the field."""
    field = Field.from_tag(spec.field)
    if spec.d not in (1, 2, 3):
        raise InvalidInputError("on_curves supports d in {1, 2, 3}")
    rng = SplitMix64(spec.seed)
    n = spec.points_per_curve

    def make_one(r: SplitMix64) -> PlaneCurve:
        if spec.d == 1:
            a, b = r.randint(-6, 6), r.randint(-6, 6)
            while a == 0 and b == 0:
                a, b = r.randint(-6, 6), r.randint(-6, 6)
            poly = BiPoly(field, {(1, 0): a, (0, 1): b, (0, 0): r.randint(-20, 20)})
            return make_curve(poly)
        if spec.d == 2:
            poly, _base = _random_conic_with_point(field, r)
            return make_curve(poly)
        if field.kind == "fp":
            return make_curve(_random_curve(field, r, 3).poly)
        poly, _param = _nodal_cubic(field, r)
        return make_curve(poly)

    curves = _assemble_validated(field, spec.d, rng, spec.n_curves, make_one)
    pts = []
    seen = set()
    collisions = 0
    for curve in curves:
        if spec.d == 1:
            cand = _line_points(curve.poly, field, rng, n)
        elif field.kind == "fp":
            cand = _fp_curve_points(curve.poly, field, rng, n)
        elif spec.d == 2:
            base = _find_point_on_conic(curve.poly, field, rng)
            cand = _conic_points_through(curve.poly, base, field, rng, n)
        else:
            cand = _cubic_points(curve.poly, field, rng, n)
        for p in cand:
            if p in seen:
                collisions += 1
            else:
                seen.add(p)
                pts.append(p)
    extra = spec.n_points - len(pts)
    if extra > 0:
        for p in _distinct_points(field, rng, 4 * extra + 20, _COORD_SPAN):
            if extra <= 0:
                break
            if p not in seen:
                seen.add(p)
                pts.append(p)
                extra -= 1
    cfg = PointConfiguration(field, spec.d, pts, curves,
                             label=f"on-curves-{spec.field}-d{spec.d}-s{spec.seed}")
    out = GeneratorOutput(cfg, collisions=collisions)
    if collisions:
        out.notes.append(f"{collisions} duplicate curve points deduplicated")
    return out


def _find_point_on_conic(poly: BiPoly, field: Field, rng: SplitMix64):
    """Rational smooth point on a conic via sweeping lines x = const."""
    fx, fy = poly.derivative("x"), poly.derivative("y")
    for _ in range(4000):
        x0 = _rand_scalar(field, rng, 40)
        # F(x0, y) = ay^2 + by + c with a from the (0,2) coefficient
        a = poly.coeffs.get((0, 2), field.zero)
        b = poly.derivative("y").eval(x0, field.zero)
        c = poly.eval(x0, field.zero)
        if not a:
            if b:
                y0 = -c / b
                if fx.eval(x0, y0) or fy.eval(x0, y0):
                    return (x0, y0)
            continue
        # rational root of the quadratic needs a square discriminant
        disc = b * b - 4 * a * c
        root = _rational_sqrt(disc, field)
        if root is None:
            continue
        for sgn in (1, -1):
            y0 = (-b + root * sgn) / (2 * a)
            if fx.eval(x0, y0) or fy.eval(x0, y0):
                return (x0, y0)
    raise GenerationError("no rational point found on conic")


def _rational_sqrt(v, field: Field):
    if field.kind != "rational":
        return None
    if v < 0:
        return None
    num, den = v.numerator, v.denominator
    rn = _isqrt(num)
    rd = _isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def _isqrt(n: int) -> int:
    from math import isqrt
    return isqrt(n)


def _cubic_points(poly: BiPoly, field: Field, rng: SplitMix64, n: int):
    """Points on a cubic via rational roots of vertical slices."""
    out = []
    seen = set()
    budget = 5000 + 200 * n
    while len(out) < n and budget:
        budget -= 1
        x0 = field.coerce(Fraction(rng.randint(-240, 240), rng.randint(1, 4)))
        ys = poly.coeffs_in("y")
        uni = [u.eval(x0) for u in ys]
        for y0 in _rational_roots(uni):
            p = (x0, y0)
            if p not in seen:
                seen.add(p)
                out.append(p)
    if len(out) < n:
        raise GenerationError("cubic sampling exhausted")
    return out[:n]


def _rational_roots(coeffs):
    """Rational roots of a low-degree rational polynomial, exactly."""
    from .realroots import to_int_coeffs
    ints = to_int_coeffs(coeffs)
    if len(ints) <= 1:
        return []
    roots = []
    # candidate p/q: p | constant term, q | leading (degree <= 3 keeps this tiny)
    a0, an = ints[0], ints[-1]
    if a0 == 0:
        roots.append(Fraction(0))
        while ints and ints[0] == 0:
            ints = ints[1:]
        ints = ints or [1]
        if len(ints) <= 1:
            return roots
        a0, an = ints[0], ints[-1]
    for p in _divisors(abs(a0)):
        for q in _divisors(abs(an)):
            for s in (1, -1):
                cand = Fraction(s * p, q)
                v = 0
                for c in reversed(ints):
                    v = v * cand + c
                if v == 0 and cand not in roots:
                    roots.append(cand)
    return roots


def _divisors(n: int):
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


# -- linear families ---------------------------------------------------------


def standard_family(name: str, field: Field, d: int,
                    pencil_base=None) -> CurveFamily:
    """The named linear families: circles, vertical parabolas, pencils."""
    x = BiPoly.variable(field, "x")
    y = BiPoly.variable(field, "y")
    one = BiPoly.const(field, 1)
    if name == "circles":
        return CurveFamily("circles", [x * x + y * y, x, y, one], 2, field)
    if name == "vertical_parabolas":
        return CurveFamily("vertical_parabolas", [x * x, x, y, one], 2, field)
    if name == "pencil_through_point":
        if pencil_base is None:
            raise InvalidInputError("pencil family needs a base point")
        span = curves_through([pencil_base], d, field)
        return CurveFamily("pencil_through_point", span, d, field)
    raise InvalidInputError(f"unknown family {name!r}")


def gen_family_config(name: str, n_curves: int, n_points: int, d: int,
                      seed: int, field_tag: str = "rational") -> GeneratorOutput:
    """Curves inside a named linear family plus points, many on the curves."""
    field = Field.from_tag(field_tag)
    rng = SplitMix64(seed)
    collisions = 0
    pts: list = []
    seen: set = set()

    if name == "circles":
        family = standard_family(name, field, 2)

        def make_one(r):
            cx = Fraction(r.randint(-12, 12), r.randint(1, 3))
            cy = Fraction(r.randint(-12, 12), r.randint(1, 3))
            rad = Fraction(r.randint(1, 14), r.randint(1, 3))
            x = BiPoly.variable(field, "x")
            y = BiPoly.variable(field, "y")
            poly = (x * x + y * y + x.scale(-2 * cx) + y.scale(-2 * cy)
                    + BiPoly.const(field, cx * cx + cy * cy - rad * rad))
            return make_curve(poly, label=f"circle({cx},{cy};{rad})")

        curves = _assemble_validated(field, 2, rng, n_curves, make_one)
        per = max(1, (2 * n_points // 3) // max(1, n_curves))
        for curve in curves:
            # recover center/radius from the canonical coefficients
            cx = -curve.poly.coeffs.get((1, 0), field.zero) / 2
            cy = -curve.poly.coeffs.get((0, 1), field.zero) / 2
            rad2 = cx * cx + cy * cy - curve.poly.coeffs.get((0, 0), field.zero)
            r_rat = _rational_sqrt(rad2, field)
            if r_rat is None:
                continue
            got = 0
            while got < per and len(pts) < n_points:
                got += 1
                t = Fraction(rng.randint(-60, 60), rng.randint(1, 5))
                den = 1 + t * t
                p = (cx + r_rat * (1 - t * t) / den, cy + r_rat * 2 * t / den)
                if p in seen:
                    collisions += 1
                else:
                    seen.add(p)
                    pts.append(p)
        gen_d = 2
    elif name == "vertical_parabolas":
        family = standard_family(name, field, 2)

        def make_one(r):
            a = r.randint(1, 5) * r.choice([1, -1])
            b, c = r.randint(-9, 9), r.randint(-9, 9)
            x = BiPoly.variable(field, "x")
            y = BiPoly.variable(field, "y")
            poly = y - (x * x).scale(a) - x.scale(b) - BiPoly.const(field, c)
            return make_curve(poly, label=f"y={a}x^2+{b}x+{c}")

        curves = _assemble_validated(field, 2, rng, n_curves, make_one)
        per = max(1, (2 * n_points // 3) // max(1, n_curves))
        for curve in curves:
            # canonical form is x^2 + Bx + Cy + E with C nonzero
            B = curve.poly.coeffs.get((1, 0), field.zero)
            C = curve.poly.coeffs.get((0, 1), field.zero)
            E = curve.poly.coeffs.get((0, 0), field.zero)
            got = 0
            while got < per and len(pts) < n_points:
                got += 1
                t = Fraction(rng.randint(-80, 80), rng.randint(1, 4))
                p = (t, -(t * t + B * t + E) / C)
                if p in seen:
                    collisions += 1
                else:
                    seen.add(p)
                    pts.append(p)
        gen_d = 2
    elif name == "pencil_through_point":
        base = (Fraction(rng.randint(-8, 8)), Fraction(rng.randint(-8, 8)))
        family = standard_family(name, field, d, pencil_base=base)

        def make_one(r):
            combo = BiPoly.zero(field)
            for basis in family.span:
                w = r.randint(-4, 4)
                if w:
                    combo = combo + basis.scale(w)
            if combo.is_zero or combo.degree < 1:
                combo = family.span[0]
            return make_curve(combo)

        curves = _assemble_validated(field, d, rng, n_curves, make_one)
        if base not in seen and n_points > 0:
            seen.add(base)
            pts.append(base)
        if d == 1:
            per = max(1, (2 * n_points // 3) // max(1, n_curves))
            for curve in curves:
                for p in _line_points(curve.poly, field, rng, per):
                    if p in seen:
                        collisions += 1
                    elif len(pts) < n_points:
                        seen.add(p)
                        pts.append(p)
        gen_d = d
    else:
        raise InvalidInputError(f"unknown family {name!r}")

    for p in _distinct_points(field, rng, 3 * max(0, n_points - len(pts)) + 30,
                              _COORD_SPAN):
        if len(pts) >= n_points:
            break
        if p not in seen:
            seen.add(p)
            pts.append(p)
    cfg = PointConfiguration(field, gen_d, pts, curves,
                             label=f"family-{name}-s{seed}")
    out = GeneratorOutput(cfg, family=family, collisions=collisions)
    if collisions:
        out.notes.append(f"{collisions} duplicate curve points deduplicated")
    return out
