"""Exact scalar arithmetic over the rationals and over prime fields.

Scalars are plain Python numbers: ``int`` or ``Fraction`` over the
rationals (integer-valued results are kept as ``int``), and ``int``
residues in ``[0, p)`` over a prime field.  Builtin numbers keep the
matrix kernels fast, and equality/hashing stays consistent across the
two representations of the same rational.
"""

from __future__ import annotations

from fractions import Fraction

Scalar = int | Fraction


def is_prime(n: int) -> bool:
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


class Field:
    """Arithmetic context: the rationals when ``p`` is None, else F_p."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None and not is_prime(p):
            raise ValueError(f"field order must be prime, got {p!r}")
        self.p = p

    @property
    def is_rationals(self) -> bool:
        return self.p is None

    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    def of(self, value: int | str | Fraction) -> Scalar:
        """Coerce an int, Fraction or string like ``"-7/2"`` into the field.

        Strings go through ``Fraction``, so ``"1/0"`` raises
        ``ZeroDivisionError``.  Over F_p a fraction p/q is read as
        p * q^(-1) mod p.
        """
        if isinstance(value, str):
            value = Fraction(value)
        if self.p is None:
            if isinstance(value, Fraction):
                return int(value) if value.denominator == 1 else value
            if isinstance(value, int):
                return value
        else:
            if isinstance(value, Fraction):
                return value.numerator * pow(value.denominator, -1, self.p) % self.p
            if isinstance(value, int):
                return value % self.p
        raise TypeError(f"cannot coerce {value!r} into {self!r}")

    def inv(self, a: Scalar) -> Scalar:
        if self.p is None:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            r = Fraction(1, 1) / a if isinstance(a, Fraction) else Fraction(1, a)
            return int(r) if r.denominator == 1 else r
        return pow(a, -1, self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self) -> int:
        return hash(("Field", self.p))

    def __repr__(self) -> str:
        return "QQ" if self.p is None else f"GF({self.p})"


#: The field of rational numbers.
QQ = Field()


def GF(p: int) -> Field:
    """The prime field with ``p`` elements."""
    return Field(p)
