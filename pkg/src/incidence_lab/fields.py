"""Exact field arithmetic: Q, F_p and Q(i).

Scalars are immutable and exact: Q elements are `fractions.Fraction`
(always reduced, positive denominator), F_p elements are canonical
residues 0..p-1 wrapped in FpElement, and Q(i) elements are pairs of
Fractions wrapped in GaussianRational. Equality is decidable; there are
no epsilon comparisons anywhere.

A Field object carries the declared field of a configuration and is the
single place where parsing, formatting and coercion happen. Mixing
scalars from different declared fields raises FieldMismatchError.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import FieldMismatchError, InvalidInputError


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all 64-bit integers."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FpElement:
    """Residue in F_p; arithmetic stays in canonical range 0..p-1."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _check(self, other):
        if isinstance(other, int):
            return FpElement(other, self.p)
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise FieldMismatchError(f"F_{self.p} vs F_{other.p}")
            return other
        raise FieldMismatchError(f"cannot mix F_{self.p} with {type(other).__name__}")

    def __add__(self, other):
        o = self._check(other)
        return FpElement(self.value + o.value, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return FpElement(self.value - o.value, self.p)

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        o = self._check(other)
        return FpElement(self.value * o.value, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._check(other)
        if o.value == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return FpElement(self.value * pow(o.value, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        return self._check(other) / self

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def __eq__(self, other):
        if isinstance(other, FpElement):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FpElement({self.value}, {self.p})"


class GaussianRational:
    """Element of Q(i): re + im*i with exact Fraction parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(other, 0)
        raise FieldMismatchError(f"cannot mix Q(i) with {type(other).__name__}")

    def __add__(self, other):
        o = self._coerce(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        return GaussianRational((self.re * o.re + self.im * o.im) / n,
                                (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"


class Field:
    """Declared field of a configuration: 'rational', 'fp:<p>' or 'gaussian_rational'."""

    def __init__(self, kind: str, p: int | None = None):
        if kind not in ("rational", "fp", "gaussian_rational"):
            raise InvalidInputError(f"unknown field kind {kind!r}")
        if kind == "fp":
            if p is None or not is_prime(p):
                raise InvalidInputError(f"F_p modulus must be prime, got {p!r}")
        elif p is not None:
            raise InvalidInputError("modulus only applies to fp fields")
        self.kind = kind
        self.p = p

    @staticmethod
    def from_tag(tag: str) -> "Field":
        """Parse a field tag as used in config files ('rational', 'fp:101', ...)."""
        if tag == "rational":
            return Field("rational")
        if tag == "gaussian_rational":
            return Field("gaussian_rational")
        if tag.startswith("fp:"):
            try:
                p = int(tag[3:])
            except ValueError:
                raise InvalidInputError(f"bad field tag {tag!r}") from None
            return Field("fp", p)
        raise InvalidInputError(f"bad field tag {tag!r}")

    @property
    def tag(self) -> str:
        return f"fp:{self.p}" if self.kind == "fp" else self.kind

    def __eq__(self, other):
        return isinstance(other, Field) and self.kind == other.kind and self.p == other.p

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"Field({self.tag!r})"

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, x):
        """Bring x (int, Fraction, same-field scalar, or exact string) into the field."""
        if isinstance(x, str):
            return self.parse(x)
        if self.kind == "rational":
            if isinstance(x, Fraction):
                return x
            if isinstance(x, int):
                return Fraction(x)
        elif self.kind == "fp":
            if isinstance(x, FpElement):
                if x.p != self.p:
                    raise FieldMismatchError(f"F_{x.p} element in F_{self.p} context")
                return x
            if isinstance(x, int):
                return FpElement(x, self.p)
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise ZeroDivisionError("denominator divisible by p")
                return FpElement(x.numerator, self.p) / FpElement(x.denominator, self.p)
        else:
            if isinstance(x, GaussianRational):
                return x
            if isinstance(x, (int, Fraction)):
                return GaussianRational(x, 0)
        raise FieldMismatchError(f"cannot coerce {type(x).__name__} into {self.tag}")

    def contains(self, x) -> bool:
        if self.kind == "rational":
            return isinstance(x, Fraction)
        if self.kind == "fp":
            return isinstance(x, FpElement) and x.p == self.p
        return isinstance(x, GaussianRational)

    def parse(self, s: str):
        """Parse an exact scalar string: 'p/q', and 'p/q+r/s i' over Q(i)."""
        s = s.strip()
        try:
            if self.kind == "gaussian_rational":
                return _parse_gaussian(s)
            if self.kind == "rational":
                return Fraction(s)
            return self.coerce(Fraction(s))
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidInputError(f"bad {self.tag} scalar {s!r}: {e}") from None

    def format(self, x) -> str:
        """Canonical exact string; round-trips through parse()."""
        x = self.coerce(x)
        if self.kind == "fp":
            return str(x.value)
        if self.kind == "rational":
            return str(x)
        if x.im == 0:
            return str(x.re)
        sep = "+" if x.im > 0 else "-"
        return f"{x.re}{sep}{abs(x.im)} i"


def _parse_gaussian(s: str) -> GaussianRational:
    if s.endswith("i"):
        body = s[:-1].strip()
        # split the imaginary part off at the last +/- that is not a leading sign
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-" and body[k - 1] not in "+-/":
                re_part = body[:k]
                im_part = body[k:] if body[k] == "-" else body[k + 1:]
                return GaussianRational(Fraction(re_part), Fraction(im_part))
        return GaussianRational(0, Fraction(body))
    return GaussianRational(Fraction(s), 0)


RATIONAL = Field("rational")
GAUSSIAN_RATIONAL = Field("gaussian_rational")


def prime_field(p: int) -> Field:
    return Field("fp", p)
