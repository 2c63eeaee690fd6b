"""Single rational bump functions and certified derivative bounds.

The bump with parameters (q, m, rho) is

    u(x) = rho^2 / (rho^2 + (x1 - rho*q)^2 + (m*x2)^2),

an anisotropic Cauchy kernel centered at (rho*q, 0). Taylor coefficients come
from exact jet arithmetic; the derivative bounds carry half-integer powers of
the denominator, so exact certification compares squares of both sides, which
stay rational.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .jets import EXACT, FLOAT, Jet2, jet_sin_cos
from .logscale import log_of_fraction

Scalar = Union[int, float, Fraction]

POLAR_C_DEFAULT = 8**5


@dataclass(frozen=True)
class BrickParams:
    q: Fraction
    m: Fraction
    rho: Fraction

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        object.__setattr__(self, "m", Fraction(self.m))
        object.__setattr__(self, "rho", Fraction(self.rho))
        if self.q < 0:
            raise ValueError("offset q must be >= 0")
        if self.m < 1:
            raise ValueError("aspect m must be >= 1")
        if not 0 < self.rho <= 1:
            raise ValueError("scale rho must lie in (0, 1]")

    @property
    def center(self) -> tuple[Fraction, Fraction]:
        return (self.rho * self.q, Fraction(0))


def brick_value(p: BrickParams, x1: Scalar, x2: Scalar) -> Scalar:
    return p.rho**2 / (p.rho**2 + (x1 - p.rho * p.q) ** 2 + (p.m * x2) ** 2)


def brick_jet(p: BrickParams, base: tuple, degree: int, kind: str = EXACT) -> Jet2:
    x1 = Jet2.variable(0, base, degree, kind)
    x2 = Jet2.variable(1, base, degree, kind)
    denom = p.rho**2 + (x1 - p.rho * p.q) ** 2 + (p.m * x2) ** 2
    return denom.reciprocal().scale(p.rho**2)


def polar_brick_jet(p: BrickParams, base: tuple, degree: int, kind: str = EXACT) -> Jet2:
    """Jet of u composed with (r, theta) -> (r cos theta, r sin theta).

    Exact kind requires base theta = 0 (the angle jet must have no constant
    term for the exact sine/cosine expansion).
    """
    r = Jet2.variable(0, base, degree, kind)
    theta = Jet2.variable(1, base, degree, kind)
    s, c = jet_sin_cos(theta)
    x1 = r * c
    x2 = r * s
    denom = p.rho**2 + (x1 - p.rho * p.q) ** 2 + (p.m * x2) ** 2
    return denom.reciprocal().scale(p.rho**2)


@dataclass
class BoundCheck:
    """Outcome of sweeping |coefficient| <= bound over points and orders."""

    checked: int = 0
    failures: list = field(default_factory=list)
    max_log_ratio: float = -math.inf  # log(lhs/rhs), <= 0 everywhere when ok
    empirical_constant: float = 0.0  # smallest constant the sweep would allow

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, lhs_sq: Scalar, rhs_sq: Scalar, tag) -> None:
        """Compare lhs^2 <= rhs^2 (exact when both rational)."""
        self.checked += 1
        if lhs_sq > rhs_sq:
            self.failures.append(tag)
        if lhs_sq > 0 and rhs_sq > 0:
            def _log(v):
                return log_of_fraction(v) if isinstance(v, Fraction) else math.log(v)

            self.max_log_ratio = max(
                self.max_log_ratio, (_log(lhs_sq) - _log(rhs_sq)) / 2
            )


def _alpha_range(degree: int) -> list[tuple[int, int]]:
    return [
        (i, j)
        for total in range(degree + 1)
        for i in range(total + 1)
        for j in [total - i]
    ]


def _rational_points(rng: random.Random, n: int, span: int = 12) -> list[tuple[Fraction, Fraction]]:
    pts = [(Fraction(0), Fraction(0))]
    while len(pts) < n:
        pts.append(
            (
                Fraction(rng.randint(-4 * span, 4 * span), rng.randint(1, span)),
                Fraction(rng.randint(-4 * span, 4 * span), rng.randint(1, span)),
            )
        )
    return pts


def cauchy_kernel_check(
    c_values: Sequence[Fraction],
    degree: int = 8,
    points: int = 6,
    seed: int = 0,
) -> BoundCheck:
    """Certify |d^a g / a!| <= 8 * 8^|a| / (c + |x|^2)^(1 + |a|/2) for the
    kernel g(x) = 1/(c + x1^2 + x2^2), exactly at rational sample points."""
    rng = random.Random(seed)
    res = BoundCheck()
    emp = 0.0
    for c in c_values:
        c = Fraction(c)
        if c <= 0:
            raise ValueError("kernel offset c must be positive")
        for x in _rational_points(rng, points):
            x1 = Jet2.variable(0, x, degree, EXACT)
            x2 = Jet2.variable(1, x, degree, EXACT)
            g = (c + x1 * x1 + x2 * x2).reciprocal()
            base_sq = c + x[0] ** 2 + x[1] ** 2
            for a in _alpha_range(degree):
                coef = g.coefficient(a)
                n = a[0] + a[1]
                lhs_sq = coef * coef
                rhs_sq = Fraction(64 * 64**n) / base_sq ** (n + 2)
                res.record(lhs_sq, rhs_sq, (c, x, a))
                if coef != 0:
                    log_lhs = log_of_fraction(abs(coef)) + (1 + n / 2) * log_of_fraction(base_sq)
                    emp = max(emp, math.exp(log_lhs / (n + 1)))
    res.empirical_constant = emp
    return res


def brick_taylor_check(
    params: Iterable[BrickParams],
    degree: int = 8,
    points: int = 5,
    seed: int = 1,
) -> BoundCheck:
    """Certify |d^a u / a!| <= rho^2 m^a2 8^(|a|+1) (u(x)/rho^2)^(1+|a|/2)
    exactly, squaring both sides to clear the half-integer power."""
    rng = random.Random(seed)
    res = BoundCheck()
    emp = 0.0
    for p in params:
        for x in _rational_points(rng, points):
            jet = brick_jet(p, x, degree, EXACT)
            u = brick_value(p, x[0], x[1])
            scaled = u / p.rho**2
            for a in _alpha_range(degree):
                coef = jet.coefficient(a)
                n = a[0] + a[1]
                lhs_sq = coef * coef
                rhs_sq = p.rho**4 * p.m ** (2 * a[1]) * Fraction(64) ** (n + 1) * scaled ** (n + 2)
                res.record(lhs_sq, rhs_sq, (p, x, a))
                if coef != 0:
                    log_rho2 = 2 * log_of_fraction(p.rho)
                    log_norm = (
                        log_of_fraction(abs(coef))
                        - log_rho2
                        - a[1] * log_of_fraction(p.m)
                        - (1 + n / 2) * (log_of_fraction(u) - log_rho2)
                    )
                    emp = max(emp, math.exp(log_norm / (n + 1)))
    res.empirical_constant = emp
    return res


def polar_sample_radii(rng: random.Random, n: int) -> list[float]:
    """Log-uniform radii in [1e-4, 10], always including r = 0."""
    out = [0.0]
    lo, hi = math.log(1e-4), math.log(10.0)
    while len(out) < n:
        out.append(math.exp(rng.uniform(lo, hi)))
    return out


def polar_brick_bound_check(
    params: Iterable[BrickParams],
    degree: int = 6,
    radii: int = 5,
    angles: int = 4,
    C: float = POLAR_C_DEFAULT,
    seed: int = 2,
) -> BoundCheck:
    """Sweep |d^a (u o polar) / a!| <= m^|a| (1 + q rho)^a2 C^(|a|+1) in float
    arithmetic over log-uniform radii and uniform angles."""
    rng = random.Random(seed)
    res = BoundCheck()
    emp = 0.0
    for p in params:
        m = float(p.m)
        growth2 = 1.0 + float(p.q * p.rho)
        for r in polar_sample_radii(rng, radii):
            for _ in range(angles):
                th = rng.uniform(-math.pi, math.pi)
                jet = polar_brick_jet(p, (r, th), degree, FLOAT)
                for a in _alpha_range(degree):
                    coef = abs(jet.coefficient(a))
                    n = a[0] + a[1]
                    rhs = m**n * growth2 ** a[1] * C ** (n + 1)
                    res.record(coef * coef, rhs * rhs, (p, r, th, a))
                    if coef > 0:
                        norm = coef / (m**n * growth2 ** a[1])
                        emp = max(emp, norm ** (1.0 / (n + 1)))
    res.empirical_constant = emp
    return res


def polar_symmetry_check(p: BrickParams, degree: int = 8) -> bool:
    """At theta = 0 the composed jet is even in theta, so odd angular
    coefficients must vanish identically (checked exactly)."""
    for r0 in (Fraction(0), Fraction(1, 3), Fraction(7, 2)):
        jet = polar_brick_jet(p, (r0, Fraction(0)), degree, EXACT)
        for (i, j), v in jet.coeffs.items():
            if j % 2 == 1 and v != 0:
                return False
    return True
