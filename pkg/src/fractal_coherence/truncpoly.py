"""Exact polynomials truncated modulo ``x**3``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class TruncPoly:
    """``c0 + c1 x + c2 x**2`` over the rationals; products drop degree >= 3."""

    c0: Fraction = Fraction(0)
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for name in ("c0", "c1", "c2"):
            val = getattr(self, name)
            if isinstance(val, float):
                raise TypeError("TruncPoly coefficients must be exact (int or Fraction)")
            object.__setattr__(self, name, Fraction(val))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Scalar]) -> "TruncPoly":
        """Truncate an ascending coefficient list."""
        c = list(coeffs[:3]) + [0] * (3 - min(len(coeffs), 3))
        return cls(*c)

    @classmethod
    def one(cls) -> "TruncPoly":
        return cls(1)

    @property
    def coeffs(self) -> tuple[Fraction, Fraction, Fraction]:
        return (self.c0, self.c1, self.c2)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]

    def __add__(self, other: "TruncPoly | Scalar") -> "TruncPoly":
        if not isinstance(other, TruncPoly):
            other = TruncPoly(other)
        return TruncPoly(self.c0 + other.c0, self.c1 + other.c1, self.c2 + other.c2)

    __radd__ = __add__

    def __neg__(self) -> "TruncPoly":
        return TruncPoly(-self.c0, -self.c1, -self.c2)

    def __sub__(self, other: "TruncPoly | Scalar") -> "TruncPoly":
        return self + (-other)

    def __rsub__(self, other: Scalar) -> "TruncPoly":
        return (-self) + other

    def __mul__(self, other: "TruncPoly | Scalar") -> "TruncPoly":
        if not isinstance(other, TruncPoly):
            if isinstance(other, float):
                raise TypeError("cannot scale a TruncPoly by a float")
            k = Fraction(other)
            return TruncPoly(k * self.c0, k * self.c1, k * self.c2)
        a0, a1, a2 = self.coeffs
        b0, b1, b2 = other.coeffs
        return TruncPoly(a0 * b0, a0 * b1 + a1 * b0, a0 * b2 + a1 * b1 + a2 * b0)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "TruncPoly":
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"power must be a nonnegative integer, got {k!r}")
        result, base = TruncPoly.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def times_x(self) -> "TruncPoly":
        return TruncPoly(0, self.c0, self.c1)

    def __call__(self, x: Scalar) -> Fraction:
        x = Fraction(x)
        return self.c0 + self.c1 * x + self.c2 * x * x

    def __repr__(self) -> str:
        return f"TruncPoly({self.c0}, {self.c1}, {self.c2})"
