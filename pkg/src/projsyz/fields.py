"""Exact coefficient fields: the rationals and prime fields F_p.

A field descriptor carries the arithmetic; scalars are stored as plain
Python ints (reduced to [0, p) for F_p) or ``fractions.Fraction`` values,
which keeps hot loops free of wrapper objects.  ``FieldElement`` is the
boxed form used in public matrix entries.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Scalar = Union[int, Fraction]

DEFAULT_PRIME = 32003


class FieldError(ValueError):
    """Mixed-field operands or an invalid field descriptor."""


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24 with these witnesses
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Field:
    """Abstract field descriptor; concrete fields are singletons per spec."""

    name: str

    def normalize(self, x) -> Scalar:
        raise NotImplementedError

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        raise NotImplementedError

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        raise NotImplementedError

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        raise NotImplementedError

    def neg(self, a: Scalar) -> Scalar:
        raise NotImplementedError

    def inv(self, a: Scalar) -> Scalar:
        raise NotImplementedError

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    @property
    def zero(self) -> Scalar:
        return self.normalize(0)

    @property
    def one(self) -> Scalar:
        return self.normalize(1)

    def element(self, x) -> "FieldElement":
        return FieldElement(self.normalize(x), self)

    def scalar_str(self, a: Scalar) -> str:
        return str(a)


class PrimeField(Field):
    """F_p with scalars as ints in [0, p)."""

    __slots__ = ("p", "name")

    def __init__(self, p: int):
        if not _is_probable_prime(p):
            raise FieldError(f"modulus {p} is not prime")
        self.p = p
        self.name = f"F{p}"

    def normalize(self, x) -> int:
        if isinstance(x, Fraction):
            if x.denominator == 1:
                return x.numerator % self.p
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in " + self.name)
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


class RationalField(Field):
    """The rationals; scalars are Fractions (lowest terms, positive denominator)."""

    name = "Q"

    def normalize(self, x) -> Fraction:
        return Fraction(x)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return 1 / Fraction(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "RationalField()"


QQ = RationalField()
GF = PrimeField
DEFAULT_FIELD = PrimeField(DEFAULT_PRIME)


@dataclass(frozen=True)
class FieldElement:
    """A boxed exact scalar together with its field descriptor."""

    value: Scalar
    field: Field

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mixed fields {self.field.name} / {other.field.name}")
            return other
        return FieldElement(self.field.normalize(other), self.field)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field.add(self.value, o.value), self.field)

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field.sub(self.value, o.value), self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field.mul(self.value, o.value), self.field)

    def __neg__(self):
        return FieldElement(self.field.neg(self.value), self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        return FieldElement(self.field.div(self.value, o.value), self.field)

    def __bool__(self):
        return self.value != self.field.zero

    def __str__(self):
        return self.field.scalar_str(self.value)


def field_from_tag(tag: str) -> Field:
    """Parse a field tag: ``Q`` or ``F <prime>`` / ``F<prime>``."""
    parts = tag.split()
    if parts == ["Q"]:
        return QQ
    if len(parts) == 2 and parts[0] == "F":
        return PrimeField(int(parts[1]))
    if len(parts) == 1 and parts[0].startswith("F"):
        return PrimeField(int(parts[0][1:]))
    raise FieldError(f"unknown field tag {tag!r}")


def field_tag(field: Field) -> str:
    if isinstance(field, RationalField):
        return "Q"
    if isinstance(field, PrimeField):
        return f"F {field.p}"
    raise FieldError(f"untaggable field {field!r}")
