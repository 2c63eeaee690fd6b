"""Sign/log-magnitude scalars for products and sums far outside float range."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

LOG_ZERO = float("-inf")


def log_of_fraction(x: Fraction | int) -> float:
    """log|x| for an exact rational, safe for huge numerators/denominators."""
    if x == 0:
        return LOG_ZERO
    n, d = abs(Fraction(x)).as_integer_ratio()
    return math.log(n) - math.log(d)


@dataclass(frozen=True)
class LogMagnitude:
    """A real number stored as (sign, log|x|).

    sign is -1, 0, or +1; log_abs is -inf exactly when sign == 0.
    """

    sign: int
    log_abs: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0, or 1, got {self.sign!r}")
        if (self.sign == 0) != (self.log_abs == LOG_ZERO):
            raise ValueError("sign 0 exactly when log_abs is -inf")

    @classmethod
    def zero(cls) -> "LogMagnitude":
        return cls(0, LOG_ZERO)

    @classmethod
    def from_float(cls, x: float) -> "LogMagnitude":
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    @classmethod
    def from_fraction(cls, x: Fraction | int) -> "LogMagnitude":
        if x == 0:
            return cls.zero()
        return cls(1 if x > 0 else -1, log_of_fraction(x))

    @classmethod
    def from_log(cls, log_abs: float, sign: int = 1) -> "LogMagnitude":
        if sign == 0 or log_abs == LOG_ZERO:
            return cls.zero()
        return cls(sign, log_abs)

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_abs)
        except OverflowError:
            return self.sign * math.inf

    def __mul__(self, other: "LogMagnitude") -> "LogMagnitude":
        if self.sign == 0 or other.sign == 0:
            return LogMagnitude.zero()
        return LogMagnitude(self.sign * other.sign, self.log_abs + other.log_abs)

    def __truediv__(self, other: "LogMagnitude") -> "LogMagnitude":
        if other.sign == 0:
            raise ZeroDivisionError("LogMagnitude division by zero")
        if self.sign == 0:
            return LogMagnitude.zero()
        return LogMagnitude(self.sign * other.sign, self.log_abs - other.log_abs)

    def __neg__(self) -> "LogMagnitude":
        return LogMagnitude(-self.sign, self.log_abs)

    def __abs__(self) -> "LogMagnitude":
        return LogMagnitude(abs(self.sign), self.log_abs)

    def __add__(self, other: "LogMagnitude") -> "LogMagnitude":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        hi, lo = (self, other) if self.log_abs >= other.log_abs else (other, self)
        d = lo.log_abs - hi.log_abs  # <= 0
        if self.sign == other.sign:
            return LogMagnitude(hi.sign, hi.log_abs + math.log1p(math.exp(d)))
        # opposite signs: |e^a - e^b|; exact cancellation gives zero
        if d == 0.0:
            return LogMagnitude.zero()
        m = -math.expm1(d)  # 1 - e^d in (0, 1)
        return LogMagnitude(hi.sign, hi.log_abs + math.log(m))

    def __sub__(self, other: "LogMagnitude") -> "LogMagnitude":
        return self + (-other)

    def pow_int(self, n: int) -> "LogMagnitude":
        if self.sign == 0:
            if n <= 0:
                raise ZeroDivisionError("0 to a nonpositive power")
            return LogMagnitude.zero()
        sign = 1 if (self.sign > 0 or n % 2 == 0) else -1
        return LogMagnitude(sign, n * self.log_abs)

    def root(self, n: int) -> "LogMagnitude":
        """Positive n-th root; requires a nonnegative value."""
        if self.sign < 0:
            raise ValueError("root of a negative LogMagnitude")
        if self.sign == 0:
            return LogMagnitude.zero()
        return LogMagnitude(1, self.log_abs / n)

    def compare_abs(self, other: "LogMagnitude") -> int:
        if self.log_abs < other.log_abs:
            return -1
        if self.log_abs > other.log_abs:
            return 1
        return 0

    def __lt__(self, other: "LogMagnitude") -> bool:
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        c = self.compare_abs(other)
        return c < 0 if self.sign > 0 else c > 0


def logsumexp(logs) -> float:
    """log(sum e^l) for nonnegative-term sums; tolerates -inf entries."""
    logs = list(logs)
    if not logs:
        return LOG_ZERO
    m = max(logs)
    if m == LOG_ZERO:
        return LOG_ZERO
    return m + math.log(math.fsum(math.exp(l - m) for l in logs))
