"""Univariate and bivariate polynomial algebra over an exact field.

BiPoly is the working representation of a plane curve's defining
polynomial: a sparse map from exponent pairs (i, j) to nonzero field
scalars, with x**i * y**j meaning the affine monomial. The monomial
order used for leading terms and canonical forms is graded lex with
x > y. Canonical form divides by the leading coefficient, so equality
of curves is dictionary equality of canonical polynomials.

poly_gcd uses a primitive pseudo-remainder sequence in F[x][y] (Gauss'
lemma over the coefficient ring F[x]); resultant builds the Sylvester
matrix with UniPoly entries and runs fraction-free Bareiss elimination,
whose exact divisions stay in F[x].
"""

from __future__ import annotations

from .errors import FieldMismatchError, InvalidInputError
from .fields import Field


def _same_field(a: Field, b: Field) -> Field:
    if a != b:
        raise FieldMismatchError(f"{a.tag} vs {b.tag}")
    return a


class UniPoly:
    """Dense univariate polynomial; coeffs[k] multiplies t**k, no trailing zeros."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs):
        self.field = field
        cs = [field.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = cs

    @staticmethod
    def zero(field: Field) -> "UniPoly":
        return UniPoly(field, [])

    @staticmethod
    def const(field: Field, c) -> "UniPoly":
        return UniPoly(field, [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self):
        if self.is_zero:
            raise InvalidInputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other):
        return (isinstance(other, UniPoly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, tuple(self.coeffs)))

    def __add__(self, other):
        _same_field(self.field, other.field)
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.field.zero
        a = self.coeffs + [z] * (n - len(self.coeffs))
        b = other.coeffs + [z] * (n - len(other.coeffs))
        return UniPoly(self.field, [x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return UniPoly(self.field, [-c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return self.scale(other)
        _same_field(self.field, other.field)
        if self.is_zero or other.is_zero:
            return UniPoly.zero(self.field)
        z = self.field.zero
        out = [z] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(self.field, out)

    def scale(self, c) -> "UniPoly":
        c = self.field.coerce(c)
        return UniPoly(self.field, [a * c for a in self.coeffs])

    def divmod(self, other):
        """Division with remainder over the field."""
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        _same_field(self.field, other.field)
        q = UniPoly.zero(self.field)
        r = self
        d = other.degree
        inv_lc = self.field.one / other.lc
        while not r.is_zero and r.degree >= d:
            shift = r.degree - d
            c = r.lc * inv_lc
            term = UniPoly(self.field, [self.field.zero] * shift + [c])
            q = q + term
            r = r - term * other
        return q, r

    def exact_div(self, other) -> "UniPoly":
        q, r = self.divmod(other)
        if not r.is_zero:
            raise InvalidInputError("division is not exact")
        return q

    def monic(self) -> "UniPoly":
        if self.is_zero:
            return self
        return self.scale(self.field.one / self.lc)

    def derivative(self) -> "UniPoly":
        return UniPoly(self.field, [c * k for k, c in enumerate(self.coeffs)][1:])

    def eval(self, t):
        t = self.field.coerce(t)
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __repr__(self):
        return f"UniPoly({self.field.tag}, {self.coeffs!r})"


def uni_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd via the Euclidean algorithm; gcd(0, 0) = 0."""
    _same_field(a.field, b.field)
    while not b.is_zero:
        a, b = b, a.divmod(b)[1]
    return a.monic()


class BiPoly:
    """Sparse bivariate polynomial: {(i, j): coeff} over a Field."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: dict):
        self.field = field
        self.coeffs = {}
        for (i, j), c in coeffs.items():
            c = field.coerce(c)
            if c:
                self.coeffs[(int(i), int(j))] = c

    @staticmethod
    def zero(field: Field) -> "BiPoly":
        return BiPoly(field, {})

    @staticmethod
    def const(field: Field, c) -> "BiPoly":
        return BiPoly(field, {(0, 0): c})

    @staticmethod
    def variable(field: Field, name: str) -> "BiPoly":
        if name == "x":
            return BiPoly(field, {(1, 0): 1})
        if name == "y":
            return BiPoly(field, {(0, 1): 1})
        raise InvalidInputError(f"unknown variable {name!r}")

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self.coeffs)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.coeffs:
            return -1
        return max(i + j for i, j in self.coeffs)

    def degree_in(self, var: str) -> int:
        if not self.coeffs:
            return -1
        k = 0 if var == "x" else 1
        return max(e[k] for e in self.coeffs)

    def __eq__(self, other):
        return (isinstance(other, BiPoly) and self.field == other.field
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.field, frozenset(self.coeffs.items())))

    def __add__(self, other):
        _same_field(self.field, other.field)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, self.field.zero) + c
        return BiPoly(self.field, out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return BiPoly(self.field, {k: -c for k, c in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, BiPoly):
            return self.scale(other)
        _same_field(self.field, other.field)
        out: dict = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                k = (i1 + i2, j1 + j2)
                v = c1 * c2
                if k in out:
                    out[k] = out[k] + v
                else:
                    out[k] = v
        return BiPoly(self.field, out)

    def scale(self, c) -> "BiPoly":
        c = self.field.coerce(c)
        return BiPoly(self.field, {k: v * c for k, v in self.coeffs.items()})

    def pow(self, n: int) -> "BiPoly":
        out = BiPoly.const(self.field, 1)
        for _ in range(n):
            out = out * self
        return out

    def eval(self, x, y):
        x = self.field.coerce(x)
        y = self.field.coerce(y)
        xp = {0: self.field.one}
        yp = {0: self.field.one}
        acc = self.field.zero
        for (i, j), c in self.coeffs.items():
            if i not in xp:
                m = max(k for k in xp if k <= i)
                v = xp[m]
                for _ in range(i - m):
                    v = v * x
                xp[i] = v
            if j not in yp:
                m = max(k for k in yp if k <= j)
                v = yp[m]
                for _ in range(j - m):
                    v = v * y
                yp[j] = v
            acc = acc + c * xp[i] * yp[j]
        return acc

    def derivative(self, var: str) -> "BiPoly":
        out = {}
        for (i, j), c in self.coeffs.items():
            if var == "x" and i > 0:
                out[(i - 1, j)] = out.get((i - 1, j), self.field.zero) + c * i
            elif var == "y" and j > 0:
                out[(i, j - 1)] = out.get((i, j - 1), self.field.zero) + c * j
        return BiPoly(self.field, out)

    def leading_monomial(self):
        """Leading exponent pair under graded lex with x > y."""
        if self.is_zero:
            raise InvalidInputError("zero polynomial has no leading monomial")
        return max(self.coeffs, key=lambda e: (e[0] + e[1], e[0]))

    def canonical(self) -> "BiPoly":
        """Scale so the graded-lex leading coefficient is 1."""
        if self.is_zero:
            return self
        lead = self.coeffs[self.leading_monomial()]
        return self.scale(self.field.one / lead)

    def swap_xy(self) -> "BiPoly":
        return BiPoly(self.field, {(j, i): c for (i, j), c in self.coeffs.items()})

    def substitute(self, x_expr: "BiPoly", y_expr: "BiPoly") -> "BiPoly":
        """Compose: replace x and y by the given polynomials."""
        acc = BiPoly.zero(self.field)
        xyp: dict = {}
        for (i, j), c in self.coeffs.items():
            if (i, j) not in xyp:
                xyp[(i, j)] = x_expr.pow(i) * y_expr.pow(j)
            acc = acc + xyp[(i, j)].scale(c)
        return acc

    def shear_x(self, s) -> "BiPoly":
        """x -> x + s*y; used to make curves regular in y."""
        x = BiPoly(self.field, {(1, 0): 1, (0, 1): s})
        y = BiPoly.variable(self.field, "y")
        return self.substitute(x, y)

    def coeffs_in(self, var: str) -> list[UniPoly]:
        """View as univariate in `var` with UniPoly coefficients in the other."""
        if self.is_zero:
            return []
        main = 1 if var == "y" else 0
        other = 1 - main
        deg = max(e[main] for e in self.coeffs)
        buckets: list[dict] = [{} for _ in range(deg + 1)]
        for e, c in self.coeffs.items():
            buckets[e[main]][e[other]] = c
        out = []
        for b in buckets:
            n = max(b) + 1 if b else 0
            out.append(UniPoly(self.field, [b.get(k, 0) for k in range(n)]))
        return out

    @staticmethod
    def from_coeffs_in(var: str, field: Field, polys: list[UniPoly]) -> "BiPoly":
        out = {}
        for k, u in enumerate(polys):
            for m, c in enumerate(u.coeffs):
                if c:
                    key = (m, k) if var == "y" else (k, m)
                    out[key] = c
        return BiPoly(field, out)

    def to_univariate(self, var: str) -> UniPoly:
        """Strict conversion; raises if the other variable actually occurs."""
        other = 1 if var == "x" else 0
        if any(e[other] for e in self.coeffs):
            raise InvalidInputError(f"polynomial is not univariate in {var}")
        n = self.degree_in(var) + 1
        z = [self.field.zero] * max(n, 0)
        for e, c in self.coeffs.items():
            z[e[0] if var == "x" else e[1]] = c
        return UniPoly(self.field, z)

    def __repr__(self):
        if self.is_zero:
            return "BiPoly(0)"
        terms = []
        for (i, j) in sorted(self.coeffs, key=lambda e: (-(e[0] + e[1]), -e[0])):
            c = self.coeffs[(i, j)]
            mono = "".join(s for s, e in (("x", i), ("y", j)) for _ in [0] if e) or ""
            part = []
            if i:
                part.append(f"x^{i}" if i > 1 else "x")
            if j:
                part.append(f"y^{j}" if j > 1 else "y")
            mono = "*".join(part) if part else "1"
            terms.append(f"({c})*{mono}")
        return " + ".join(terms)


def _content_primitive(ys: list[UniPoly], field: Field):
    """Content (monic gcd of coefficients) and primitive part of an F[x][y] list."""
    cont = UniPoly.zero(field)
    for u in ys:
        cont = uni_gcd(cont, u)
    if cont.is_zero:
        return cont, ys
    return cont, [u.exact_div(cont) for u in ys]


def _prem(a: list[UniPoly], b: list[UniPoly], field: Field) -> list[UniPoly]:
    """Pseudo-remainder of dense F[x][y] coefficient lists (in y)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        da = len(a) - 1
        if a[-1].is_zero:
            a.pop()
            continue
        la = a[-1]
        a = [c * lb for c in a]
        shift = da - db
        for k in range(db + 1):
            a[shift + k] = a[shift + k] - la * b[k]
        while a and a[-1].is_zero:
            a.pop()
    return a


def poly_gcd(f: BiPoly, g: BiPoly) -> BiPoly:
    """Gcd of two nonzero bivariate polynomials, in canonical form.

    A constant result means the curves share no component.
    """
    if f.is_zero or g.is_zero:
        raise InvalidInputError("gcd of the zero polynomial is undefined here")
    field = _same_field(f.field, g.field)
    dy_f, dy_g = f.degree_in("y"), g.degree_in("y")
    if dy_f == 0 and dy_g == 0:
        u = uni_gcd(f.to_univariate("x"), g.to_univariate("x"))
        return BiPoly.from_coeffs_in("y", field, [u]).canonical()
    if dy_f == 0 or dy_g == 0:
        u = f.to_univariate("x") if dy_f == 0 else g.to_univariate("x")
        other = g if dy_f == 0 else f
        cont, _ = _content_primitive(other.coeffs_in("y"), field)
        w = uni_gcd(u, cont)
        return BiPoly.from_coeffs_in("y", field, [w]).canonical()

    fy, gy = f.coeffs_in("y"), g.coeffs_in("y")
    cont_f, pf = _content_primitive(fy, field)
    cont_g, pg = _content_primitive(gy, field)
    a, b = (pf, pg) if len(pf) >= len(pg) else (pg, pf)
    while True:
        r = _prem(a, b, field)
        if not r:
            break
        _, r = _content_primitive(r, field)
        a, b = b, r
    cont = uni_gcd(cont_f, cont_g)
    prim = BiPoly.from_coeffs_in("y", field, b)
    cont_poly = BiPoly.from_coeffs_in("y", field, [cont])
    return (prim * cont_poly).canonical()


def bi_divmod_exact(f: BiPoly, g: BiPoly):
    """Return q with f = q*g, or None if g does not divide f exactly.

    Works through pseudo-division in y (or x when g is free of y) and
    then peels off the leading-coefficient power, which must divide
    exactly whenever the true quotient has coefficients in F[x].
    """
    field = _same_field(f.field, g.field)
    if g.is_zero:
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero:
        return BiPoly.zero(field)
    if g.degree_in("y") == 0 and g.degree_in("x") == 0:
        return f.scale(field.one / g.coeffs[(0, 0)])
    var = "y" if g.degree_in("y") > 0 else "x"
    a = f.coeffs_in(var)
    b = g.coeffs_in(var)
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return None
    lb = b[-1]
    # long division over F(x): multiply through by lb each step instead
    q: list[UniPoly] = [UniPoly.zero(field) for _ in range(da - db + 1)]
    steps = 0
    while a and len(a) - 1 >= db:
        if a[-1].is_zero:
            a.pop()
            continue
        qc_num = a[-1]
        # quotient coefficient is qc_num / lb; keep exactness by scaling q and a
        shift = len(a) - 1 - db
        q = [c * lb for c in q]
        q[shift] = q[shift] + qc_num
        a = [c * lb for c in a]
        for k in range(db + 1):
            a[shift + k] = a[shift + k] - qc_num * b[k]
        while a and a[-1].is_zero:
            a.pop()
        steps += 1
    if a:
        return None
    # invariant: lb**steps * f = q*g + a, so q equals true_q * lb**steps
    denom = UniPoly.const(field, 1)
    for _ in range(steps):
        denom = denom * lb
    try:
        q = [c.exact_div(denom) for c in q]
    except InvalidInputError:
        return None
    return BiPoly.from_coeffs_in(var, field, q)


def divides_exactly(g: BiPoly, f: BiPoly) -> bool:
    return bi_divmod_exact(f, g) is not None


def sylvester_matrix(f: BiPoly, g: BiPoly, var: str) -> list[list[UniPoly]]:
    field = _same_field(f.field, g.field)
    a = f.coeffs_in(var)
    b = g.coeffs_in(var)
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    z = UniPoly.zero(field)
    rows = []
    for k in range(n):
        row = [z] * size
        for t, c in enumerate(reversed(a)):
            row[k + t] = c
        rows.append(row)
    for k in range(m):
        row = [z] * size
        for t, c in enumerate(reversed(b)):
            row[k + t] = c
        rows.append(row)
    return rows


def _bareiss_det(mat: list[list[UniPoly]], field: Field) -> UniPoly:
    """Fraction-free determinant; exact divisions stay in F[x]."""
    n = len(mat)
    if n == 0:
        return UniPoly.const(field, 1)
    m = [row[:] for row in mat]
    sign = 1
    prev = UniPoly.const(field, 1)
    for k in range(n - 1):
        if m[k][k].is_zero:
            for r in range(k + 1, n):
                if not m[r][k].is_zero:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return UniPoly.zero(field)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[i][j] * m[k][k] - m[i][k] * m[k][j]
                m[i][j] = num.exact_div(prev)
            m[i][k] = UniPoly.zero(field)
        prev = m[k][k]
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


def resultant(f: BiPoly, g: BiPoly, var: str = "y") -> UniPoly:
    """Sylvester resultant eliminating `var`; result is univariate in the other.

    Vanishes identically iff f and g share a factor of positive degree
    in `var`.
    """
    field = _same_field(f.field, g.field)
    if f.is_zero or g.is_zero:
        raise InvalidInputError("resultant of the zero polynomial")
    if f.degree_in(var) < 1 or g.degree_in(var) < 1:
        raise InvalidInputError(f"both inputs must have positive degree in {var}")
    return _bareiss_det(sylvester_matrix(f, g, var), field)


def squarefree_part_in(f: BiPoly, var: str) -> BiPoly:
    """f divided by gcd(f, df/dvar); same zero set, squarefree in `var`."""
    d = f.derivative(var)
    if d.is_zero:
        return f
    g = poly_gcd(f, d)
    if g.is_constant:
        return f
    q = bi_divmod_exact(f, g)
    if q is None:
        raise InvalidInputError("squarefree division failed")
    return q
