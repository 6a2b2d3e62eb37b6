"""Degree-d monomial lifting and the linear algebra of curves through points.

A plane point lifts to the vector of its degree-d monomials (graded lex
order with x > y > z), turning "curve passes through point" into one
linear condition on the curve's coefficient vector. Everything here is
a statement about ranks and kernels of the resulting lift matrices:
the dimension of the space of curves through a tuple, canonical bases
of that space, size-A subtuples that pin down the same curve space, and
linear curve families.

Dimensions are projective: dim 0 means a unique curve, -1 means none.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .errors import InvalidFamilyError, InvalidInputError
from .fields import Field
from .linalg import ExactMatrix, mat_kernel, mat_rank
from .poly import BiPoly


@dataclass(frozen=True)
class CurveSpaceParams:
    """Degree bound d with its derived counts."""

    d: int

    @property
    def dof(self) -> int:
        """Projective dimension of the space of degree-<=d curves."""
        return comb(self.d + 2, 2) - 1

    @property
    def bezout_threshold(self) -> int:
        """Point count that forces uniqueness among component-disjoint curves."""
        return self.d * self.d + 1


def degrees_of_freedom(d: int) -> CurveSpaceParams:
    if d < 1:
        raise InvalidInputError(f"degree bound must be >= 1, got {d}")
    return CurveSpaceParams(d)


def homogeneous_monomials(d: int) -> list[tuple[int, int, int]]:
    """Exponent triples (i, j, k), i+j+k = d, graded lex with x > y > z."""
    out = []
    for i in range(d, -1, -1):
        for j in range(d - i, -1, -1):
            out.append((i, j, d - i - j))
    return out


def as_projective(point, field: Field):
    """Accept (x, y) or (x, y, z); return a coerced projective triple."""
    if len(point) == 2:
        coords = (field.coerce(point[0]), field.coerce(point[1]), field.one)
    elif len(point) == 3:
        coords = tuple(field.coerce(c) for c in point)
    else:
        raise InvalidInputError("point must have 2 or 3 coordinates")
    if not any(coords):
        raise InvalidInputError("projective point must have a nonzero coordinate")
    return coords


@dataclass(frozen=True)
class LiftedPoint:
    source: tuple
    coords: tuple

    def __len__(self):
        return len(self.coords)


def veronese_lift(point, d: int, field: Field) -> LiftedPoint:
    """All degree-d monomials of the point, length C(d+2,2)."""
    if d < 1:
        raise InvalidInputError(f"degree bound must be >= 1, got {d}")
    x, y, z = as_projective(point, field)
    xp = [field.one]
    yp = [field.one]
    zp = [field.one]
    for _ in range(d):
        xp.append(xp[-1] * x)
        yp.append(yp[-1] * y)
        zp.append(zp[-1] * z)
    coords = tuple(xp[i] * yp[j] * zp[k] for i, j, k in homogeneous_monomials(d))
    return LiftedPoint((x, y, z), coords)


def _check_distinct(points, field: Field):
    seen = set()
    proj = []
    for p in points:
        t = as_projective(p, field)
        # normalize to compare projectively: scale last nonzero coord to 1
        for c in reversed(t):
            if c:
                key = tuple(e / c for e in t)
                break
        if key in seen:
            raise InvalidInputError(f"duplicate point {p!r}")
        seen.add(key)
        proj.append(t)
    return proj


def lift_matrix(points, d: int, field: Field) -> ExactMatrix:
    rows = [veronese_lift(p, d, field).coords for p in points]
    if not rows:
        return ExactMatrix(field, [[field.zero] * len(homogeneous_monomials(d))][:0])
    return ExactMatrix(field, rows)


def curve_space_dim(points, d: int, field: Field) -> int:
    """Projective dimension of degree-<=d curves through all the points.

    A - rank of the lift matrix; -1 means no curve, A means no constraint.
    """
    params = degrees_of_freedom(d)
    proj = _check_distinct(points, field)
    if not proj:
        return params.dof
    return params.dof - mat_rank(lift_matrix(proj, d, field))


def curves_through(points, d: int, field: Field) -> list[BiPoly]:
    """Canonical basis of degree-<=d forms vanishing on all the points.

    Basis size is curve_space_dim + 1; polynomials are dehomogenized
    (z = 1) and in canonical form, ordered by the kernel's free columns.
    """
    params = degrees_of_freedom(d)
    proj = _check_distinct(points, field)
    monos = homogeneous_monomials(d)
    if not proj:
        kernel = [tuple(field.one if t == s else field.zero for t in range(len(monos)))
                  for s in range(len(monos))]
    else:
        kernel = mat_kernel(lift_matrix(proj, d, field))
    out = []
    for vec in kernel:
        coeffs = {}
        for (i, j, _k), c in zip(monos, vec):
            if c:
                coeffs[(i, j)] = c
        out.append(BiPoly(field, coeffs).canonical())
    return out


def extract_good_tuple(points, d: int, field: Field):
    """Size-A subtuple with the same curve space as the full tuple.

    Input must have exactly d**2 + 1 distinct points. Greedy scan keeps
    a point iff it raises the rank of the running lift matrix, then pads
    with the earliest unused points; the result's span equals the full
    span, so every curve through the subtuple contains every input point.
    """
    params = degrees_of_freedom(d)
    proj = _check_distinct(points, field)
    if len(proj) != params.bezout_threshold:
        raise InvalidInputError(
            f"need exactly d^2+1 = {params.bezout_threshold} points, got {len(proj)}")
    A = params.dof
    reduced: list[list] = []  # row echelon basis of kept lifts
    kept_idx = []
    for idx, p in enumerate(proj):
        row = list(veronese_lift(p, d, field).coords)
        for base in reduced:
            lead = next(i for i, v in enumerate(base) if v)
            if row[lead]:
                f = row[lead] / base[lead]
                row = [a - f * b for a, b in zip(row, base)]
        if any(row):
            reduced.append(row)
            kept_idx.append(idx)
    if len(kept_idx) > A:
        raise InvalidInputError("points impose full-rank conditions; no size-A "
                                "subtuple can preserve an empty curve space")
    pad = [i for i in range(len(proj)) if i not in set(kept_idx)]
    for i in pad:
        if len(kept_idx) == A:
            break
        kept_idx.append(i)
    kept_idx.sort()
    return [points[i] for i in kept_idx]


class CurveFamily:
    """Linear family of curves: the projective span of a basis of polynomials."""

    def __init__(self, name: str, span: list[BiPoly], d: int, field: Field):
        if not span:
            raise InvalidFamilyError("empty family span")
        self.name = name
        self.span = list(span)
        self.d = d
        self.field = field
        monos = homogeneous_monomials(d)
        self._mono_index = {(i, j): t for t, (i, j, _k) in enumerate(monos)}
        self._vectors = [self._coeff_vector(b) for b in span]
        if mat_rank(ExactMatrix(field, self._vectors)) != len(span):
            raise InvalidFamilyError(f"family {name!r} span is linearly dependent")

    @property
    def k(self) -> int:
        """Family dimension: span size minus one."""
        return len(self.span) - 1

    def _coeff_vector(self, poly: BiPoly):
        if poly.is_zero or poly.degree > self.d:
            raise InvalidFamilyError("family members must be nonzero of degree <= d")
        vec = [self.field.zero] * len(self._mono_index)
        for (i, j), c in poly.coeffs.items():
            vec[self._mono_index[(i, j)]] = c
        return vec

    def contains(self, poly: BiPoly) -> bool:
        """Linear membership test of the canonicalized polynomial."""
        try:
            vec = self._coeff_vector(poly)
        except InvalidFamilyError:
            return False
        m = ExactMatrix(self.field, self._vectors + [vec])
        return mat_rank(m) == len(self.span)


def family_restrict(family: CurveFamily, points) -> int:
    """Projective dimension of family members through all the points; -1 if none."""
    proj = _check_distinct(points, family.field)
    field = family.field
    if not proj:
        return family.k
    rows = []
    for p in proj:
        lift = veronese_lift(p, family.d, field).coords
        rows.append([sum((v * l for v, l in zip(vec, lift)), field.zero)
                     for vec in family._vectors])
    kernel = mat_kernel(ExactMatrix(field, rows))
    return len(kernel) - 1


def family_solutions(family: CurveFamily, points) -> list[BiPoly]:
    """Basis of family members vanishing on the points (canonical forms)."""
    proj = _check_distinct(points, family.field)
    field = family.field
    if not proj:
        combos = [tuple(field.one if t == s else field.zero
                        for t in range(len(family.span)))
                  for s in range(len(family.span))]
    else:
        rows = []
        for p in proj:
            lift = veronese_lift(p, family.d, field).coords
            rows.append([sum((v * l for v, l in zip(vec, lift)), field.zero)
                         for vec in family._vectors])
        combos = mat_kernel(ExactMatrix(field, rows))
    out = []
    for combo in combos:
        poly = BiPoly.zero(field)
        for c, basis in zip(combo, family.span):
            if c:
                poly = poly + basis.scale(c)
        out.append(poly.canonical())
    return out
