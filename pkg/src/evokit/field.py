"""Exact scalar arithmetic over the rationals and over odd prime fields.

Scalars are plain Python values: ``fractions.Fraction`` over the rationals
(always in reduced form with positive denominator), ``int`` residues in
``[0, p)`` over a prime field.  A field handle carries the operations; it
never wraps the values themselves, so hot loops can work on raw ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DivisionByZero,
    EvenCharacteristic,
    FieldMismatch,
    InfiniteFieldUnsupported,
    NonPrimeModulus,
    ParseError,
)

MAX_MODULUS = 1 << 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Serializable description of a field: kind 'Q' or 'F' with a modulus."""

    kind: str  # "Q" or "F"
    modulus: int | None = None

    def __str__(self) -> str:
        return "Q" if self.kind == "Q" else f"F{self.modulus}"

    @staticmethod
    def parse(text: str) -> "FieldSpec":
        text = text.strip()
        if text == "Q":
            return FieldSpec("Q")
        if text.startswith("F") and text[1:].isdigit():
            return FieldSpec("F", int(text[1:]))
        raise ParseError(f"unrecognized field spec {text!r}")


class Rationals:
    """The field of rational numbers, with arbitrary-precision scalars."""

    spec = FieldSpec("Q")
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, value):
        if isinstance(value, bool):
            raise FieldMismatch("bool is not a rational scalar")
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, str):
            return self.parse_scalar(value)
        raise FieldMismatch(f"cannot coerce {value!r} into Q")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0 in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        if b == 0:
            raise DivisionByZero("division by 0 in Q")
        return Fraction(a) / b

    def eq(self, a, b) -> bool:
        return a == b

    def is_zero(self, a) -> bool:
        return a == 0

    def format_scalar(self, a) -> str:
        return str(Fraction(a))

    def parse_scalar(self, text: str):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational scalar {text!r}") from exc

    def elements(self):
        raise InfiniteFieldUnsupported("Q cannot be enumerated")

    def random_scalar(self, rng):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))

    def random_nonzero(self, rng):
        while True:
            x = self.random_scalar(rng)
            if x != 0:
                return x

    @property
    def order(self):
        return None

    def __eq__(self, other) -> bool:
        return isinstance(other, (Rationals, PrimeField)) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __repr__(self) -> str:
        return "Field(Q)"


class PrimeField:
    """The prime field of odd order p, scalars stored as residues in [0, p)."""

    def __init__(self, p: int):
        if not isinstance(p, int) or not _is_prime(p) or p >= MAX_MODULUS:
            raise NonPrimeModulus(f"modulus must be an odd prime < 2^16, got {p}")
        if p == 2:
            raise EvenCharacteristic("characteristic 2 is not supported")
        self.p = p
        self.spec = FieldSpec("F", p)
        self.zero = 0
        self.one = 1

    def coerce(self, value):
        if isinstance(value, bool):
            raise FieldMismatch("bool is not a field scalar")
        if isinstance(value, int):
            return value % self.p
        if isinstance(value, str):
            return self.parse_scalar(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise DivisionByZero(f"{value} has no image in F{self.p}")
            return (value.numerator * pow(value.denominator, -1, self.p)) % self.p
        raise FieldMismatch(f"cannot coerce {value!r} into F{self.p}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return -a % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise DivisionByZero(f"inverse of 0 in F{self.p}")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        if b % self.p == 0:
            raise DivisionByZero(f"division by 0 in F{self.p}")
        return (a * pow(b, self.p - 2, self.p)) % self.p

    def eq(self, a, b) -> bool:
        return (a - b) % self.p == 0

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def format_scalar(self, a) -> str:
        return str(a % self.p)

    def parse_scalar(self, text: str):
        try:
            return int(text.strip(), 10) % self.p
        except ValueError as exc:
            raise ParseError(f"bad residue {text!r} for F{self.p}") from exc

    def elements(self):
        return range(self.p)

    def random_scalar(self, rng):
        return rng.randrange(self.p)

    def random_nonzero(self, rng):
        return rng.randrange(1, self.p)

    @property
    def order(self) -> int:
        return self.p

    def __eq__(self, other) -> bool:
        return isinstance(other, (Rationals, PrimeField)) and self.spec == other.spec

    def __hash__(self) -> int:
        return hash(self.spec)

    def __repr__(self) -> str:
        return f"Field(F{self.p})"


_CACHE: dict[FieldSpec, object] = {}


def make_field(spec):
    """Return the field handle for a spec, a spec string ("Q", "F5"), or a prime.

    Raises NonPrimeModulus / EvenCharacteristic on invalid moduli.
    """
    if isinstance(spec, (Rationals, PrimeField)):
        return spec
    if isinstance(spec, str):
        spec = FieldSpec.parse(spec)
    elif isinstance(spec, int):
        spec = FieldSpec("F", spec)
    if not isinstance(spec, FieldSpec):
        raise ParseError(f"not a field spec: {spec!r}")
    if spec not in _CACHE:
        if spec.kind == "Q":
            _CACHE[spec] = Rationals()
        elif spec.modulus == 2:
            raise EvenCharacteristic("characteristic 2 is not supported")
        else:
            _CACHE[spec] = PrimeField(spec.modulus)
    return _CACHE[spec]


def check_same_field(a, b):
    """Raise FieldMismatch unless the two handles denote the same field."""
    if a != b:
        raise FieldMismatch(f"{a!r} vs {b!r}")


def scalar_arith(field, a, b, op: str):
    """Apply one of add/sub/mul/div to two scalars of the given field."""
    a = field.coerce(a)
    b = field.coerce(b)
    if op == "add":
        return field.add(a, b)
    if op == "sub":
        return field.sub(a, b)
    if op == "mul":
        return field.mul(a, b)
    if op == "div":
        return field.div(a, b)
    raise ValueError(f"unknown op {op!r}")
