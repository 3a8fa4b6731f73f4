"""Exact base arithmetic.

Fields (Q and F_p), univariate polynomials over a field, the Euclidean
rings Z and k[z] used by Smith normal form, and the adic rings Z_p and
k[[z]] represented through their level-N quotients Z/p^N and k[z]/z^N.

Nothing here uses floating point.
"""

from __future__ import annotations

import re
import threading
from fractions import Fraction
from typing import Callable, Iterable

try:  # gmpy2's mpq is a much faster exact rational with the same semantics
    from gmpy2 import mpq as Rational, mpz as _mpz
    RATIONAL_TYPES = (Fraction, type(Rational(0)))
    INTEGER_TYPES = (int, type(_mpz(0)))
except ImportError:  # pragma: no cover
    Rational = Fraction
    RATIONAL_TYPES = (Fraction,)
    INTEGER_TYPES = (int,)

from .errors import InvalidArgument, ParseError, ProfileUnavailable, SupportViolation


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# Fields

class Field:
    """The rationals (``p is None``) or the prime field F_p.

    Elements are exact rationals (``Rational``) over Q and canonical ints in
    [0, p) over F_p.
    """

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None and not is_prime(p):
            raise InvalidArgument(f"{p} is not prime")
        self.p = p

    @classmethod
    def Q(cls) -> "Field":
        return cls(None)

    @classmethod
    def Fp(cls, p: int) -> "Field":
        return cls(p)

    @property
    def char(self) -> int:
        return self.p or 0

    @property
    def zero(self):
        return 0 if self.p else Rational(0)

    @property
    def one(self):
        return 1 if self.p else Rational(1)

    def __call__(self, x):
        if isinstance(x, str):
            return self.parse(x)
        if self.p:
            if isinstance(x, RATIONAL_TYPES):
                return int(x.numerator) * pow(int(x.denominator), -1, self.p) % self.p
            return int(x) % self.p
        return Rational(x)

    def reduce(self, x):
        return x % self.p if self.p else x

    def is_zero(self, x) -> bool:
        return x == 0

    def neg(self, x):
        return (-x) % self.p if self.p else -x

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p:
            return pow(x, -1, self.p)
        return 1 / Rational(x)

    def div(self, a, b):
        if self.p:
            return a * pow(b, -1, self.p) % self.p
        return Rational(a) / b

    def parse(self, s: str):
        try:
            return self(Fraction(s.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad coefficient {s!r}") from exc

    def fmt(self, x) -> str:
        return str(x)

    def elements(self):
        if not self.p:
            raise InvalidArgument("Q is infinite")
        return range(self.p)

    def random(self, rng, bound: int = 3):
        if self.p:
            return rng.randrange(self.p)
        return Rational(rng.randint(-bound, bound))

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Q" if self.p is None else f"F{self.p}"

    def to_json(self) -> dict:
        return {"type": "Q"} if self.p is None else {"type": "Fp", "p": self.p}

    @classmethod
    def from_json(cls, obj) -> "Field":
        if not isinstance(obj, dict) or "type" not in obj:
            raise ParseError(f"bad field description {obj!r}")
        if obj["type"] == "Q":
            return cls(None)
        if obj["type"] == "Fp":
            try:
                return cls(int(obj["p"]))
            except (KeyError, InvalidArgument, TypeError, ValueError) as exc:
                raise ParseError(f"bad prime field {obj!r}") from exc
        raise ParseError(f"unknown field type {obj['type']!r}")


QQ = Field()


# ---------------------------------------------------------------------------
# Polynomials

class Poly:
    """Polynomial in z over a field; coefficients stored low degree first."""

    __slots__ = ("field", "c")

    def __init__(self, field: Field, coeffs: Iterable = ()):
        c = [field.reduce(field(x)) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.field = field
        self.c = tuple(c)

    @classmethod
    def _raw(cls, field, c):
        # c already reduced and stripped
        obj = object.__new__(cls)
        obj.field = field
        obj.c = c
        return obj

    @classmethod
    def const(cls, field, a) -> "Poly":
        return cls(field, [a])

    @classmethod
    def monomial(cls, field, e: int, a=1) -> "Poly":
        return cls(field, [0] * e + [a])

    @classmethod
    def z(cls, field) -> "Poly":
        return cls.monomial(field, 1)

    @property
    def deg(self) -> int:
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    @property
    def lead(self):
        return self.c[-1] if self.c else self.field.zero

    def coeff(self, i: int):
        return self.c[i] if 0 <= i < len(self.c) else self.field.zero

    def val(self) -> int | None:
        """Lowest degree with a nonzero coefficient (None for 0)."""
        for i, a in enumerate(self.c):
            if a != 0:
                return i
        return None

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            if other.field != self.field:
                raise InvalidArgument("polynomials over different fields")
            return other
        if isinstance(other, INTEGER_TYPES + RATIONAL_TYPES):
            return Poly(self.field, [other])
        return NotImplemented

    def _strip(self, c):
        F = self.field
        c = [F.reduce(x) for x in c]
        while c and c[-1] == 0:
            c.pop()
        return Poly._raw(F, tuple(c))

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for i, x in enumerate(b):
            c[i] += x
        return self._strip(c)

    __radd__ = __add__

    def __neg__(self):
        return self._strip([-x for x in self.c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.c or not o.c:
            return Poly._raw(self.field, ())
        c = [0] * (len(self.c) + len(o.c) - 1)
        for i, x in enumerate(self.c):
            if x == 0:
                continue
            for j, y in enumerate(o.c):
                c[i + j] += x * y
        return self._strip(c)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        r = Poly(self.field, [1])
        b = self
        while e:
            if e & 1:
                r = r * b
            b = b * b
            e >>= 1
        return r

    def __divmod__(self, other):
        o = self._coerce(other)
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        r = list(self.c)
        inv = F.inv(o.lead)
        q = [F.zero] * max(len(r) - len(o.c) + 1, 0)
        for k in range(len(r) - len(o.c), -1, -1):
            t = F.reduce(r[k + len(o.c) - 1] * inv)
            q[k] = t
            if t:
                for j, y in enumerate(o.c):
                    r[k + j] = F.reduce(r[k + j] - t * y)
        return self._strip(q), self._strip(r[: len(o.c) - 1])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def truncate(self, n: int) -> "Poly":
        if len(self.c) <= n:
            return self
        c = list(self.c[:n])
        while c and c[-1] == 0:
            c.pop()
        return Poly._raw(self.field, tuple(c))

    def monic(self):
        """Return (lead, monic) with ``self == lead * monic``; zero stays zero."""
        if not self.c:
            return self.field.one, self
        lc = self.lead
        return lc, self * self.field.inv(lc)

    def __call__(self, x):
        acc = self.field.zero
        for a in reversed(self.c):
            acc = self.field.reduce(acc * x + a)
        return acc

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.c == other.c
        if isinstance(other, INTEGER_TYPES + RATIONAL_TYPES):
            return self.c == Poly(self.field, [other]).c
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.field, self.c))

    def __bool__(self):
        return bool(self.c)

    def __repr__(self):
        if not self.c:
            return "0"
        terms = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if a == 0:
                continue
            if i == 0:
                terms.append(str(a))
            else:
                mono = "z" if i == 1 else f"z^{i}"
                terms.append(mono if a == 1 else f"{a}*{mono}")
        return " + ".join(terms)

    def to_json(self):
        return [str(a) for a in self.c]

    @classmethod
    def parse(cls, field: Field, s) -> "Poly":
        """Parse a coefficient list (low degree first) or a string like ``z^2 + 3*z - 1``."""
        if isinstance(s, list):
            return cls(field, [field(x) if not isinstance(x, str) else field.parse(x) for x in s])
        if isinstance(s, int):
            return cls(field, [s])
        if not isinstance(s, str):
            raise ParseError(f"cannot parse polynomial from {s!r}")
        txt = s.replace(" ", "").replace("**", "^")
        if not txt:
            raise ParseError("empty polynomial")
        if txt[0] not in "+-":
            txt = "+" + txt
        acc = cls(field)
        for sign, body in re.findall(r"([+-])([^+-]+)", txt):
            m = re.fullmatch(r"(?:([0-9/]+)\*?)?(z(?:\^([0-9]+))?)?", body)
            if not m or not (m.group(1) or m.group(2)):
                raise ParseError(f"bad polynomial term {body!r} in {s!r}")
            a = field.parse(m.group(1)) if m.group(1) else field.one
            e = 0 if not m.group(2) else int(m.group(3) or 1)
            t = cls.monomial(field, e, a)
            acc = acc + t if sign == "+" else acc - t
        return acc


# ---------------------------------------------------------------------------
# Euclidean rings for Smith normal form

class IntegerRing:
    """Z with the conventions used by the SNF engine."""

    name = "Z"
    zero = 0
    one = 1

    def reduce(self, x):
        return x

    def __call__(self, x):
        return int(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def norm(self, x) -> int:
        return abs(x)

    def divmod(self, a, b):
        # remainder of least absolute value keeps entries small
        q, r = divmod(a, b)
        if 2 * abs(r) > abs(b):
            # r has the sign of b, so one more step of b moves it across zero
            q += 1
            r -= b
        return q, r

    def normalize(self, a):
        """Unit u with u*a canonical (nonnegative)."""
        return -1 if a < 0 else 1

    def unit_inverse(self, u):
        return u

    def is_unit(self, a) -> bool:
        return a in (1, -1)

    def divides(self, a, b) -> bool:
        return b == 0 if a == 0 else b % a == 0

    def gcd(self, a, b):
        while b:
            a, b = b, a % b
        return abs(a)

    def fmt(self, x) -> str:
        return str(x)

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("ZZ")

    def __repr__(self):
        return "ZZ"


ZZ = IntegerRing()


class PolynomialRing:
    """k[z] over a Field."""

    def __init__(self, field: Field):
        self.field = field
        self.zero = Poly(field)
        self.one = Poly(field, [1])
        self.name = f"{field!r}[z]"

    def reduce(self, x):
        return x

    def __call__(self, x):
        if isinstance(x, Poly):
            return x
        return Poly.parse(self.field, x)

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def norm(self, x) -> int:
        return x.deg

    def divmod(self, a, b):
        return divmod(a, b)

    def normalize(self, a):
        if a.is_zero():
            return self.one
        return Poly(self.field, [self.field.inv(a.lead)])

    def unit_inverse(self, u):
        return Poly(self.field, [self.field.inv(u.lead)])

    def is_unit(self, a) -> bool:
        return a.deg == 0

    def divides(self, a, b) -> bool:
        if a.is_zero():
            return b.is_zero()
        return (b % a).is_zero()

    def gcd(self, a, b):
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()[1]

    def fmt(self, x) -> str:
        return repr(x)

    def __eq__(self, other):
        return isinstance(other, PolynomialRing) and other.field == self.field

    def __hash__(self):
        return hash(("kz", self.field))

    def __repr__(self):
        return self.name


# ---------------------------------------------------------------------------
# Valuations

class Valuation:
    """An m-adic valuation: a natural number, +inf (``value is None``), or a lower bound.

    ``lower_bound`` is set when the element vanished at the working precision,
    in which case ``value`` is that precision and the true valuation is >= it.
    """

    __slots__ = ("value", "lower_bound")

    def __init__(self, value: int | None, lower_bound: bool = False):
        self.value = value
        self.lower_bound = lower_bound and value is not None

    @property
    def exact(self) -> bool:
        return not self.lower_bound

    @property
    def infinite(self) -> bool:
        return self.value is None

    def __add__(self, other):
        if isinstance(other, int):
            other = Valuation(other)
        if self.value is None or other.value is None:
            return Valuation(None)
        return Valuation(self.value + other.value, self.lower_bound or other.lower_bound)

    def at_least(self, n: int) -> bool:
        return self.value is None or self.value >= n

    def __eq__(self, other):
        if isinstance(other, Valuation):
            return self.value == other.value and self.lower_bound == other.lower_bound
        if isinstance(other, int):
            return self.exact and self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.lower_bound))

    def __repr__(self):
        if self.value is None:
            return "inf"
        return f">={self.value}" if self.lower_bound else str(self.value)


# ---------------------------------------------------------------------------
# Adic rings

class AdicRing:
    """Z_p or k[[z]], handled through the quotients R/m^N."""

    def __init__(self, kind: str, p: int | None = None, field: Field | None = None):
        if kind == "zp":
            if p is None or not is_prime(p):
                raise InvalidArgument(f"Z_p needs a prime, got {p!r}")
            field = Field.Fp(p)
        elif kind == "kz":
            if field is None:
                raise InvalidArgument("k[[z]] needs a field")
        else:
            raise InvalidArgument(f"unknown adic ring kind {kind!r}")
        self.kind = kind
        self.p = p
        self.field = field

    @classmethod
    def zp(cls, p: int) -> "AdicRing":
        return cls("zp", p=p)

    @classmethod
    def kz(cls, field: Field) -> "AdicRing":
        return cls("kz", field=field)

    @property
    def residue_field(self) -> Field:
        return self.field

    @property
    def pi(self):
        """The uniformizer as an exact element (p, or the polynomial z)."""
        return self.p if self.kind == "zp" else Poly.z(self.field)

    def pi_pow(self, e: int):
        return self.p ** e if self.kind == "zp" else Poly.monomial(self.field, e)

    def exact_zero(self):
        return 0 if self.kind == "zp" else Poly(self.field)

    def exact_one(self):
        return 1 if self.kind == "zp" else Poly(self.field, [1])

    def coerce_exact(self, x):
        if self.kind == "zp":
            if isinstance(x, Fraction):
                if x.denominator % self.p == 0:
                    raise InvalidArgument(f"{x} is not a p-adic integer")
                return x if x.denominator != 1 else int(x.numerator)
            return int(x)
        if isinstance(x, Poly):
            return x
        return Poly(self.field, [x])

    def exact_val(self, x) -> int | None:
        """Valuation of an exact element (int, Fraction without p in the denominator, or Poly)."""
        x = self.coerce_exact(x)
        if self.kind == "kz":
            return x.val()
        if x == 0:
            return None
        n = x.numerator if isinstance(x, Fraction) else x
        v = 0
        while n % self.p == 0:
            n //= self.p
            v += 1
        return v

    def residue(self, x, N: int):
        """Canonical representative of an exact element in R/m^N."""
        x = self.coerce_exact(x)
        if self.kind == "zp":
            m = self.p ** N
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, m) % m
            return x % m
        return x.truncate(N)

    def element(self, x, N: int) -> "AdicElement":
        return AdicElement(self, N, self.residue(x, N))

    def quotient(self, N: int) -> "AdicQuotientRing":
        return AdicQuotientRing(self, N)

    def level_order(self, N: int) -> int:
        """Cardinality of R/m^N (only meaningful over a finite residue field)."""
        q = self.p if self.kind == "zp" else self.field.p
        if not q:
            raise InvalidArgument("residue field is infinite")
        return q ** N

    def parse_exact(self, s):
        if self.kind == "zp":
            try:
                return self.coerce_exact(Fraction(str(s)))
            except ValueError as exc:
                raise ParseError(f"bad p-adic integer {s!r}") from exc
        return Poly.parse(self.field, s)

    def __eq__(self, other):
        return (isinstance(other, AdicRing) and other.kind == self.kind
                and other.p == self.p and other.field == self.field)

    def __hash__(self):
        return hash(("AdicRing", self.kind, self.p, self.field))

    def __repr__(self):
        return f"Z_{self.p}" if self.kind == "zp" else f"{self.field!r}[[z]]"

    def to_json(self) -> dict:
        if self.kind == "zp":
            return {"kind": "Zp", "p": self.p}
        return {"kind": "kz", "field": self.field.to_json()}

    @classmethod
    def from_json(cls, obj) -> "AdicRing":
        if not isinstance(obj, dict):
            raise ParseError(f"bad ring description {obj!r}")
        kind = obj.get("kind")
        try:
            if kind == "Zp":
                return cls.zp(int(obj["p"]))
            if kind == "kz":
                return cls.kz(Field.from_json(obj.get("field", {"type": "Fp", "p": 5})))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad ring description {obj!r}") from exc
        raise ParseError(f"unknown ring kind {kind!r}")


class AdicElement:
    """A residue in R/m^N.  Immutable; arithmetic runs at the smaller precision."""

    __slots__ = ("ring", "precision", "residue")

    def __init__(self, ring: AdicRing, precision: int, residue):
        if precision < 0:
            raise InvalidArgument("precision must be nonnegative")
        self.ring = ring
        self.precision = precision
        self.residue = ring.residue(residue, precision)

    def _binary(self, other, op):
        if not isinstance(other, AdicElement):
            other = self.ring.element(other, self.precision)
        elif other.ring != self.ring:
            raise InvalidArgument("elements of different adic rings")
        N = min(self.precision, other.precision)
        a = self.residue if self.precision == N else self.ring.residue(self.residue, N)
        b = other.residue if other.precision == N else self.ring.residue(other.residue, N)
        return AdicElement(self.ring, N, op(a, b))

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return AdicElement(self.ring, self.precision, -self.residue)

    def __pow__(self, e: int):
        r = self.ring.element(1, self.precision)
        for _ in range(e):
            r = r * self
        return r

    def reduce(self, n: int) -> "AdicElement":
        if n > self.precision:
            raise InvalidArgument(f"cannot raise precision {self.precision} to {n}")
        return AdicElement(self.ring, n, self.residue)

    def is_zero(self) -> bool:
        return self.residue == 0 if self.ring.kind == "zp" else self.residue.is_zero()

    def val(self) -> Valuation:
        return val(self)

    def lift(self):
        """The canonical exact representative."""
        return self.residue

    def is_unit(self) -> bool:
        return self.precision == 0 or self.ring.exact_val(self.residue) == 0

    def inverse(self) -> "AdicElement":
        if not self.is_unit():
            raise ZeroDivisionError(f"{self} is not a unit")
        N = self.precision
        if self.ring.kind == "zp":
            return AdicElement(self.ring, N, pow(self.residue, -1, self.ring.p ** N))
        # Newton iteration on truncated power series
        F = self.ring.field
        inv = Poly(F, [F.inv(self.residue.coeff(0))])
        k = 1
        while k < N:
            k = min(2 * k, N)
            inv = (inv * (2 - self.residue.truncate(k) * inv)).truncate(k)
        return AdicElement(self.ring, N, inv)

    def __eq__(self, other):
        if isinstance(other, AdicElement):
            return (self.ring == other.ring and self.precision == other.precision
                    and self.residue == other.residue)
        if isinstance(other, int):
            return self.residue == self.ring.residue(other, self.precision)
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.precision, self.residue))

    def __repr__(self):
        return f"{self.residue} mod m^{self.precision}"


def val(x: AdicElement) -> Valuation:
    """m-adic valuation of ``x``, reported as ">= N" when x vanishes at its precision N."""
    if x.is_zero():
        return Valuation(x.precision, lower_bound=True)
    return Valuation(x.ring.exact_val(x.residue))


class AdicQuotientRing:
    """R/m^N as a Euclidean-like ring: the norm is the valuation."""

    def __init__(self, adic: AdicRing, N: int):
        self.adic = adic
        self.N = N
        self.zero = adic.element(0, N)
        self.one = adic.element(1, N)
        self.name = f"{adic!r}/m^{N}"

    def reduce(self, x):
        return x

    def __call__(self, x):
        if isinstance(x, AdicElement):
            return x.reduce(self.N) if x.precision != self.N else x
        return self.adic.element(x, self.N)

    def is_zero(self, x) -> bool:
        return x.is_zero()

    def norm(self, x) -> int:
        return val(x).value

    def valuation(self, x) -> int:
        """Valuation capped at N (zero has valuation N)."""
        return val(x).value

    def divmod(self, a, b):
        vb = self.norm(b)
        va = self.norm(a)
        if va < vb:
            return self.zero, a
        pe = self.adic.pi_pow(vb)
        b_unit = self.adic.element(self._divide_exact(b.residue, pe), self.N)
        a_shift = self.adic.element(self._divide_exact(a.residue, pe), self.N)
        return a_shift * b_unit.inverse(), self.zero

    def _divide_exact(self, x, pe):
        if self.adic.kind == "zp":
            return x // pe
        return x // pe

    def normalize(self, a):
        if a.is_zero():
            return self.one
        pe = self.adic.pi_pow(self.norm(a))
        u = self.adic.element(self._divide_exact(a.residue, pe), self.N)
        return u.inverse()

    def unit_inverse(self, u):
        return u.inverse()

    def is_unit(self, a) -> bool:
        return self.norm(a) == 0

    def divides(self, a, b) -> bool:
        return self.norm(a) <= self.norm(b)

    def fmt(self, x) -> str:
        return str(x.residue)

    def __eq__(self, other):
        return isinstance(other, AdicQuotientRing) and other.adic == self.adic and other.N == self.N

    def __hash__(self):
        return hash(("AdicQuotient", self.adic, self.N))

    def __repr__(self):
        return self.name


# ---------------------------------------------------------------------------
# Exponent profiles and coefficient families

class ExponentProfile:
    """A function n -> N u {inf} on a finite range or on the naturals.

    Values on ``range(len(prefix))`` are listed (``None`` is inf).  For the
    naturals, later values follow the affine tail ``slope*n + offset``, or are
    all inf when ``tail is None``.
    """

    __slots__ = ("prefix", "size", "tail")

    def __init__(self, prefix: Iterable = (), size: int | None = None,
                 tail: tuple[int, int] | None = None):
        prefix = tuple(None if v is None else int(v) for v in prefix)
        if size is not None:
            if len(prefix) != size:
                raise InvalidArgument("finite profile needs exactly `size` values")
            tail = None
        if any(v is not None and v < 0 for v in prefix):
            raise InvalidArgument("exponents must be nonnegative")
        if tail is not None:
            slope, offset = tail
            if slope < 0 or slope * len(prefix) + offset < 0:
                raise InvalidArgument("affine tail must be nonnegative and nondecreasing")
        self.prefix = prefix
        self.size = size
        self.tail = tail

    @classmethod
    def finite(cls, values) -> "ExponentProfile":
        values = list(values)
        return cls(values, size=len(values))

    @classmethod
    def affine(cls, slope: int, offset: int = 0, prefix=()) -> "ExponentProfile":
        return cls(prefix, None, (slope, offset))

    def __call__(self, n: int) -> int | None:
        if n < 0 or (self.size is not None and n >= self.size):
            raise IndexError(n)
        if n < len(self.prefix):
            return self.prefix[n]
        if self.tail is None:
            return None
        return self.tail[0] * n + self.tail[1]

    @property
    def start(self) -> int:
        """First index governed by the tail."""
        return len(self.prefix)

    def is_finite_range(self) -> bool:
        return self.size is not None

    def indices_below(self, level: int) -> list[int]:
        """Indices with value < level; raises if there are infinitely many."""
        out = [n for n, v in enumerate(self.prefix) if v is not None and v < level]
        if self.tail is not None:
            slope, offset = self.tail
            n = self.start
            if slope == 0:
                if offset < level:
                    raise InvalidArgument("infinitely many indices below the level")
            else:
                while slope * n + offset < level:
                    out.append(n)
                    n += 1
        return out

    def values_set(self, upto: int | None = None) -> set:
        """The distinct values taken (finite ones capped by ``upto`` if given)."""
        vals = set(self.prefix)
        if self.tail is not None:
            slope, offset = self.tail
            first = slope * self.start + offset
            if slope == 0:
                vals.add(first)
            else:
                bound = first if upto is None else max(upto, first)
                v, n = first, self.start
                while v <= bound:
                    vals.add(v)
                    n += 1
                    v = slope * n + offset
        return vals

    def __eq__(self, other):
        return (isinstance(other, ExponentProfile) and other.prefix == self.prefix
                and other.size == self.size and other.tail == self.tail)

    def __hash__(self):
        return hash((self.prefix, self.size, self.tail))

    def __repr__(self):
        if self.size is not None:
            return f"ExponentProfile({list(self.prefix)})"
        return f"ExponentProfile(prefix={list(self.prefix)}, tail={self.tail})"

    @classmethod
    def parse_formula(cls, expr: str) -> "ExponentProfile":
        """Parse an affine formula in n such as ``n``, ``2*n+1``, ``3`` or ``inf``."""
        txt = str(expr).replace(" ", "")
        if txt in ("inf", "oo", "infinity"):
            return cls((), None, None)
        m = re.fullmatch(r"(?:(\d*)\*?n)?([+-]?\d+)?", txt)
        if not txt or not m or ("n" in txt and m.group(2) and m.group(2)[0] not in "+-"):
            raise ParseError(f"unsupported exponent formula {expr!r} (expected a*n+b)")
        slope = (int(m.group(1)) if m.group(1) else 1) if "n" in txt else 0
        offset = int(m.group(2) or 0)
        if offset < 0:
            raise ParseError(f"formula {expr!r} is negative at n=0")
        return cls((), None, (slope, offset))


class CoefficientFamily:
    """A family (a_n) in R indexed by range(size) or the naturals (size None),
    converging to zero in the m-adic topology.

    Subclasses supply ``coeff(n, level)`` and ``support(level)``; the support
    S_N must contain every index whose coefficient is nonzero mod m^N.
    """

    ring: AdicRing
    size: int | None

    def coeff(self, n: int, level: int) -> AdicElement:
        raise NotImplementedError

    def support(self, level: int) -> list[int]:
        raise NotImplementedError

    def valuation(self, n: int) -> int | None:
        raise ProfileUnavailable("family does not expose exact valuations")

    def profile(self) -> ExponentProfile:
        raise ProfileUnavailable("family does not expose exact valuations")

    def has_profile(self) -> bool:
        try:
            self.profile()
        except ProfileUnavailable:
            return False
        return True

    def level(self, N: int) -> dict:
        """Nonzero level-N residues as {index: residue}."""
        return {n: a.residue for n, a in finite_support(self, N)}


class ExactFamily(CoefficientFamily):
    """Coefficients given exactly: a finite prefix of exact elements of R,
    followed on the naturals by a_n = c * pi^(slope*n + offset).

    Exact valuations are available, so membership questions that depend on
    the whole infinite family are decidable.
    """

    def __init__(self, ring: AdicRing, prefix: Iterable = (), size: int | None = None,
                 tail: tuple | None = None):
        prefix = tuple(ring.coerce_exact(x) for x in prefix)
        if size is not None:
            if len(prefix) > size:
                raise InvalidArgument("prefix longer than the index set")
            prefix = prefix + (ring.exact_zero(),) * (size - len(prefix))
            tail = None
        if tail is not None:
            c, slope, offset = tail
            c = ring.coerce_exact(c)
            if ring.exact_val(c) is None:
                tail = None
            else:
                if slope < 1:
                    raise InvalidArgument("a nonzero tail must have slope >= 1 to converge")
                if slope * len(prefix) + offset < 0:
                    raise InvalidArgument("tail exponent negative at its first index")
                tail = (c, int(slope), int(offset))
        self.ring = ring
        self.size = size
        self.prefix = prefix
        self.tail = tail

    @classmethod
    def finite(cls, ring, values) -> "ExactFamily":
        values = list(values)
        return cls(ring, values, size=len(values))

    @classmethod
    def basis(cls, ring, n: int, size: int | None = None) -> "ExactFamily":
        vals = [0] * n + [1]
        if size is not None:
            vals += [0] * (size - n - 1)
        return cls(ring, vals, size=size)

    @classmethod
    def geometric(cls, ring, start: int = 0, slope: int = 1, offset: int = 0, c=1,
                  size: int | None = None) -> "ExactFamily":
        """a_n = c*pi^(slope*n+offset) for n >= start, zero before."""
        if size is not None:
            vals = [0] * start + [ring.coerce_exact(c) * ring.pi_pow(slope * n + offset)
                                  for n in range(start, size)]
            return cls(ring, vals[:size], size=size)
        return cls(ring, [0] * start, None, (c, slope, offset))

    def value(self, n: int):
        """The exact coefficient a_n."""
        if n < 0 or (self.size is not None and n >= self.size):
            raise IndexError(n)
        if n < len(self.prefix):
            return self.prefix[n]
        if self.tail is None:
            return self.ring.exact_zero()
        c, slope, offset = self.tail
        return c * self.ring.pi_pow(slope * n + offset)

    def coeff(self, n: int, level: int) -> AdicElement:
        return self.ring.element(self.value(n), level)

    def valuation(self, n: int) -> int | None:
        return self.ring.exact_val(self.value(n))

    def profile(self) -> ExponentProfile:
        prefix = [self.ring.exact_val(x) for x in self.prefix]
        if self.size is not None:
            return ExponentProfile(prefix, self.size)
        if self.tail is None:
            return ExponentProfile(prefix, None, None)
        c, slope, offset = self.tail
        return ExponentProfile(prefix, None, (slope, offset + self.ring.exact_val(c)))

    def support(self, level: int) -> list[int]:
        return self.profile().indices_below(level)

    def _compatible(self, other):
        if not isinstance(other, ExactFamily) or other.ring != self.ring or other.size != self.size:
            raise InvalidArgument("families over different rings or index sets")

    def _combine(self, other, sign: int):
        self._compatible(other)
        L = max(len(self.prefix), len(other.prefix))
        pre = [self.value(n) + sign * other.value(n) for n in range(L)] if self.size is None else \
            [a + sign * b for a, b in zip(self.prefix, other.prefix)]
        if self.size is not None:
            return ExactFamily(self.ring, pre, self.size)
        t1, t2 = self.tail, other.tail
        if t1 is None and t2 is None:
            return ExactFamily(self.ring, pre)
        if t2 is None:
            return ExactFamily(self.ring, pre, None, t1)
        if t1 is None:
            c, s, o = t2
            return ExactFamily(self.ring, pre, None, (sign * c, s, o))
        if t1[1] != t2[1]:
            return _LazyDifference(self, other, sign)
        o = min(t1[2], t2[2])
        c = t1[0] * self.ring.pi_pow(t1[2] - o) + sign * t2[0] * self.ring.pi_pow(t2[2] - o)
        return ExactFamily(self.ring, pre, None, (c, t1[1], o))

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "ExactFamily":
        c = self.ring.coerce_exact(c)
        pre = [c * x for x in self.prefix]
        tail = None
        if self.tail is not None:
            tail = (self.tail[0] * c, self.tail[1], self.tail[2])
        return ExactFamily(self.ring, pre, self.size, tail)

    def __repr__(self):
        if self.size is not None:
            return f"ExactFamily({list(self.prefix)})"
        return f"ExactFamily(prefix={list(self.prefix)}, tail={self.tail})"


class LazyFamily(CoefficientFamily):
    """Coefficients computed on demand from ``fn(n, level)``.

    ``support_fn(level)`` must return the finite set S_N.  Evaluations are
    memoized; the memo is filled under a lock so concurrent readers are safe.
    """

    def __init__(self, ring: AdicRing, fn: Callable[[int, int], object],
                 support_fn: Callable[[int], Iterable[int]] | None = None,
                 size: int | None = None):
        if size is None and support_fn is None:
            raise InvalidArgument("families on the naturals must declare a support bound")
        self.ring = ring
        self.size = size
        self._fn = fn
        self._support_fn = support_fn
        self._memo: dict = {}
        self._lock = threading.Lock()

    @classmethod
    def staircase(cls, ring, fn, floor: Callable[[int], int]) -> "LazyFamily":
        """Family on the naturals with a nondecreasing unbounded lower bound
        ``floor(n) <= val(a_n)``; then S_N is the prefix where floor < N."""
        def support(level):
            out, n = [], 0
            while floor(n) < level:
                out.append(n)
                n += 1
            return out
        return cls(ring, fn, support, None)

    def coeff(self, n: int, level: int) -> AdicElement:
        key = (n, level)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        val_ = self._fn(n, level)
        if not isinstance(val_, AdicElement):
            val_ = self.ring.element(val_, level)
        elif val_.precision != level:
            val_ = val_.reduce(level)
        with self._lock:
            self._memo.setdefault(key, val_)
        return val_

    def support(self, level: int) -> list[int]:
        if self._support_fn is None:
            return list(range(self.size))
        return sorted(set(self._support_fn(level)))


class _LazyDifference(LazyFamily):
    def __init__(self, a, b, sign):
        super().__init__(a.ring, lambda n, N: a.coeff(n, N) + sign * b.coeff(n, N).residue,
                         lambda N: set(a.support(N)) | set(b.support(N)), a.size)


def finite_support(fam: CoefficientFamily, level: int, guard: int = 8) -> list:
    """Indices with coefficient nonzero mod m^level, with their residues.

    The declared support S_level is enumerated, and additionally a guard window
    (S_{level+1} minus S_level, plus ``guard`` indices past the largest one) is
    checked to be zero mod m^level.  A nonzero coefficient there means the family
    broke its support guarantee.
    """
    if level < 0:
        raise InvalidArgument("level must be nonnegative")
    S = fam.support(level)
    Sset = set(S)
    S_next = fam.support(level + 1)
    if not Sset <= set(S_next):
        raise SupportViolation(f"support at level {level} is not contained in the next level's")
    out = []
    for n in S:
        a = fam.coeff(n, level)
        if not a.is_zero():
            out.append((n, a))
    probe = [n for n in S_next if n not in Sset]
    top = max(S_next, default=-1)
    limit = fam.size if fam.size is not None else top + 1 + guard
    probe += list(range(top + 1, limit))
    for n in probe:
        if n in Sset:
            continue
        if not fam.coeff(n, level).is_zero():
            raise SupportViolation(f"index {n} lies outside S_{level} but is nonzero mod m^{level}")
    return out
