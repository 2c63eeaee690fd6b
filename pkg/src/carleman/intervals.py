"""Rational interval arithmetic with directed rounding for root-taking.

Sums, products and integer powers of Fractions are exact, so intervals only
widen at nth roots. Roots are enclosed by scaled integer root extraction:
both endpoints are rationals whose correctness is checkable by raising back
to the nth power. Inequality certificates then compare conservative
endpoints only; an interval answer of "unknown" is reported, never guessed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

DEFAULT_ROOT_DIGITS = 40

Number = Union[int, Fraction]


def integer_nth_root(N: int, n: int) -> int:
    """floor(N ** (1/n)) for N >= 0, exact."""
    if N < 0 or n < 1:
        raise ValueError("need N >= 0 and n >= 1")
    if N in (0, 1) or n == 1:
        return N if n == 1 else int(N > 0)
    if n == 2:
        return math.isqrt(N)
    hi = 1 << (N.bit_length() // n + 1)
    lo = 0
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid**n <= N:
            lo = mid
        else:
            hi = mid
    return lo


def exact_nth_root(x: Fraction, n: int) -> Union[Fraction, None]:
    """x^(1/n) when it is rational, else None."""
    x = Fraction(x)
    if x < 0 or n < 1:
        return None
    rn = integer_nth_root(x.numerator, n)
    rd = integer_nth_root(x.denominator, n)
    if rn**n == x.numerator and rd**n == x.denominator:
        return Fraction(rn, rd)
    return None


def nth_root_bounds(x: Fraction, n: int, digits: int = DEFAULT_ROOT_DIGITS) -> tuple[Fraction, Fraction]:
    """Rationals lo <= x^(1/n) <= hi with hi - lo <= 10^-digits * scale."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("no real root of a negative number")
    if x == 0:
        return Fraction(0), Fraction(0)
    r_exact = exact_nth_root(x, n)
    if r_exact is not None:
        return r_exact, r_exact
    scale = 10**digits
    # x^(1/n) = (num * scale^n / den)^(1/n) / scale
    N = x.numerator * scale**n // x.denominator
    r = integer_nth_root(N, n)
    lo = Fraction(r, scale)
    hi = Fraction(r + 1, scale)
    # endpoints are certified: lo^n <= x iff r^n <= x*scale^n, which floor
    # division guarantees; hi^n > x likewise
    return lo, hi


@dataclass(frozen=True)
class RInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @classmethod
    def exactly(cls, v: Number) -> "RInterval":
        f = Fraction(v)
        return cls(f, f)

    @classmethod
    def nth_root(cls, x: Number, n: int, digits: int = DEFAULT_ROOT_DIGITS) -> "RInterval":
        lo, hi = nth_root_bounds(Fraction(x), n, digits)
        return cls(lo, hi)

    @classmethod
    def rational_power(cls, x: Number, p: Fraction, digits: int = DEFAULT_ROOT_DIGITS) -> "RInterval":
        """x^p for x > 0 and rational p."""
        p = Fraction(p)
        base = Fraction(x) ** p.numerator  # exact; may invert
        return cls.nth_root(base, p.denominator, digits)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.mid)

    def _coerce(self, other) -> "RInterval":
        if isinstance(other, RInterval):
            return other
        return RInterval.exactly(other)

    def __add__(self, other) -> "RInterval":
        o = self._coerce(other)
        return RInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "RInterval":
        return RInterval(-self.hi, -self.lo)

    def __sub__(self, other) -> "RInterval":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "RInterval":
        return self._coerce(other) + (-self)

    def __mul__(self, other) -> "RInterval":
        o = self._coerce(other)
        cands = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RInterval(min(cands), max(cands))

    __rmul__ = __mul__

    def reciprocal(self) -> "RInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval straddles zero")
        return RInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "RInterval":
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other) -> "RInterval":
        return self._coerce(other) * self.reciprocal()

    def __pow__(self, n: int) -> "RInterval":
        if n == 0:
            return RInterval.exactly(1)
        if n < 0:
            return (self**-n).reciprocal()
        if self.lo >= 0:
            return RInterval(self.lo**n, self.hi**n)
        if self.hi <= 0:
            lo, hi = self.lo**n, self.hi**n
            return RInterval(min(lo, hi), max(lo, hi))
        if n % 2 == 0:
            return RInterval(Fraction(0), max(self.lo**n, self.hi**n))
        return RInterval(self.lo**n, self.hi**n)

    def sqrt(self, digits: int = DEFAULT_ROOT_DIGITS) -> "RInterval":
        lo, _ = nth_root_bounds(self.lo, 2, digits)
        _, hi = nth_root_bounds(self.hi, 2, digits)
        return RInterval(lo, hi)

    def root(self, n: int, digits: int = DEFAULT_ROOT_DIGITS) -> "RInterval":
        lo, _ = nth_root_bounds(self.lo, n, digits)
        _, hi = nth_root_bounds(self.hi, n, digits)
        return RInterval(lo, hi)

    def abs(self) -> "RInterval":
        if self.lo >= 0:
            return self
        if self.hi <= 0:
            return -self
        return RInterval(Fraction(0), max(-self.lo, self.hi))

    # certified comparisons: True/False only when the intervals prove it
    def certainly_ge(self, other) -> bool:
        return self.lo >= self._coerce(other).hi

    def certainly_le(self, other) -> bool:
        return self.hi <= self._coerce(other).lo

    def certainly_lt(self, other) -> bool:
        return self.hi < self._coerce(other).lo

    def certainly_gt(self, other) -> bool:
        return self.lo > self._coerce(other).hi
