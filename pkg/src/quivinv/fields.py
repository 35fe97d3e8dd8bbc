"""Exact scalar backends.

Three backends are provided:

* ``QQ`` -- arbitrary precision rationals (``fractions.Fraction``);
* ``GF(p)`` -- the prime field Z/p;
* ``DualField(base)`` -- first order dual numbers ``a + b*eps`` with
  ``eps**2 == 0`` over another backend, used for exact forward-mode
  derivatives of polynomial invariants.

A backend is a callable that coerces ints, strings, ``Fraction`` and its own
elements into its element type.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache


class FieldError(ValueError):
    pass


class RationalField:
    characteristic = 0
    name = "rational"
    is_field = True

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def __call__(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, bool):
            raise FieldError(f"cannot coerce {x!r} to a rational")
        if isinstance(x, (int, str)):
            try:
                return Fraction(x)
            except (ValueError, ZeroDivisionError) as exc:
                raise FieldError(f"bad rational literal {x!r}") from exc
        raise FieldError(f"cannot coerce {type(x).__name__} to a rational")

    def contains(self, x):
        return isinstance(x, Fraction)

    def to_json(self, x):
        return str(x)

    def lift(self, x):
        """Return ``x`` as an int when it is integral, else ``None``."""
        return x.numerator if x.denominator == 1 else None

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Fp:
    """Element of Z/p. Compares equal to ints congruent mod p."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _other(self, other):
        if isinstance(other, Fp):
            if other.p != self.p:
                raise FieldError(f"mixing Z/{self.p} and Z/{other.p}")
            return other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return other
        if isinstance(other, Fraction):
            if other.denominator % self.p == 0:
                raise ZeroDivisionError(f"{other} has no image in Z/{self.p}")
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Fp(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Fp(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Fp(o - self.value, self.p)

    def __mul__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Fp(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.value, self.p)

    def __pos__(self):
        return self

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError(f"division by zero in Z/{self.p}")
        return Fp(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return self * Fp(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return o
        return Fp(o, self.p) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return Fp(pow(self.value, k, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return (other - self.value) % self.p == 0
        if isinstance(other, Fraction):
            try:
                return self.value == self._other(other) % self.p
            except ZeroDivisionError:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Fp({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class PrimeField:
    is_field = True

    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"fp:{p}"
        self.zero = Fp(0, p)
        self.one = Fp(1, p)

    def __call__(self, x):
        if isinstance(x, Fp):
            if x.p != self.p:
                raise FieldError(f"element of Z/{x.p} given to Z/{self.p}")
            return x
        if isinstance(x, bool):
            raise FieldError(f"cannot coerce {x!r} to Z/{self.p}")
        if isinstance(x, int):
            return Fp(x, self.p)
        if isinstance(x, str):
            try:
                x = Fraction(x)
            except (ValueError, ZeroDivisionError) as exc:
                raise FieldError(f"bad literal {x!r}") from exc
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise FieldError(f"{x} has no image in Z/{self.p}")
            return Fp(x.numerator * pow(x.denominator, -1, self.p), self.p)
        raise FieldError(f"cannot coerce {type(x).__name__} to Z/{self.p}")

    def contains(self, x):
        return isinstance(x, Fp) and x.p == self.p

    def to_json(self, x):
        return str(x.value)

    def lift(self, x):
        return x.value

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


class Dual:
    """``a + b*eps`` with ``eps**2 == 0``."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        self.a = a
        self.b = b

    @staticmethod
    def _split(x):
        if isinstance(x, Dual):
            return x.a, x.b
        return x, 0

    def __add__(self, other):
        a, b = self._split(other)
        return Dual(self.a + a, self.b + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._split(other)
        return Dual(self.a - a, self.b - b)

    def __rsub__(self, other):
        a, b = self._split(other)
        return Dual(a - self.a, b - self.b)

    def __mul__(self, other):
        a, b = self._split(other)
        return Dual(self.a * a, self.a * b + self.b * a)

    __rmul__ = __mul__

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __truediv__(self, other):
        a, b = self._split(other)
        return Dual(self.a / a, (self.b * a - self.a * b) / (a * a))

    def __eq__(self, other):
        a, b = self._split(other)
        return self.a == a and self.b == b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return f"Dual({self.a}, {self.b})"


class DualField:
    is_field = False

    def __init__(self, base=QQ):
        self.base = base
        self.characteristic = base.characteristic
        self.name = f"dual[{base.name}]"
        self.zero = Dual(base.zero, base.zero)
        self.one = Dual(base.one, base.zero)

    def __call__(self, x):
        if isinstance(x, Dual):
            return Dual(self.base(x.a), self.base(x.b))
        return Dual(self.base(x), self.base.zero)

    def contains(self, x):
        return isinstance(x, Dual)

    def __repr__(self):
        return f"DualField({self.base!r})"

    def __eq__(self, other):
        return isinstance(other, DualField) and other.base == self.base

    def __hash__(self):
        return hash(("dual", self.base))


def parse_field(spec: str):
    """Parse ``rational`` or ``fp:<prime>``."""
    if spec == "rational":
        return QQ
    if spec.startswith("fp:"):
        try:
            p = int(spec[3:])
        except ValueError as exc:
            raise FieldError(f"bad field spec {spec!r}") from exc
        return GF(p)
    raise FieldError(f"unknown field {spec!r}; expected 'rational' or 'fp:<prime>'")
