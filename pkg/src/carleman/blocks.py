"""The base superposition of bumps and its rescaled, recentered blocks.

The base function for a weight sequence M is

    h(x) = sum_{k>=1} w_k / (1 + x1^2 + (m_k x2)^2),  w_k = m_k^2 / (2^k phi(m_k)),

where m_k = M_{k+1}/M_k and phi is the trace-growth function (the sum starts
at k = 1). Two facts make h certifiable at finite order: the weights are
summable with an explicit geometric tail (w_k m_k^j <= M_j 2^-k for every j),
and pure-x2 derivatives on the axis have a closed form whose terms all share
one sign, so truncation error is controlled and no cancellation occurs.

A block is h((x - c)/rho) with c = (q rho, 0), q >= 1, 0 < rho < 1; it
concentrates the same profile at scale rho around c.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .intervals import RInterval
from .jets import EXACT, FLOAT, Jet2, jet_sin_cos
from .logscale import LOG_ZERO, LogMagnitude, log_of_fraction, logsumexp
from .ostrowski import phi_at_ratio
from .weights import WeightSequence

DEFAULT_TERMS = 40
POLAR_BLOCK_C = 2 * 8**5

Scalar = Union[int, float, Fraction]


@dataclass(frozen=True)
class AxisDerivative:
    """A pure-x2 derivative on the axis x2 = 0, with truncation control.

    value is the truncated sum (k <= terms); the dropped part has magnitude
    at most exp(truncation_log) and the same sign, so the true derivative
    lies between value and value + sign * exp(truncation_log).
    """

    order: int
    value: LogMagnitude
    exact: Optional[Fraction]
    truncation_log: float
    terms: int
    symmetry_zero: bool = False


class BaseFunction:
    """K-term truncation of h; exact weights when the family has them."""

    def __init__(self, M: WeightSequence, terms: int = DEFAULT_TERMS):
        if terms < 4:
            raise ValueError("need at least 4 bump terms")
        self.M = M
        self.terms = terms  # series runs over 1 <= k <= terms
        self._log_w: dict[int, float] = {}
        self._exact_w: Optional[dict[int, Fraction]] = {} if M.has_exact else None
        for k in range(1, terms + 1):
            pv = phi_at_ratio(M, k)
            if pv.saturated:
                self._log_w[k] = LOG_ZERO
                if self._exact_w is not None:
                    self._exact_w[k] = Fraction(0)
                continue
            self._log_w[k] = 2 * M.log_ratio(k) - k * math.log(2) - pv.log_phi
            if self._exact_w is not None:
                self._exact_w[k] = M.exact_ratio(k) ** 2 / (2**k * pv.exact)

    @property
    def k_range(self) -> range:
        return range(1, self.terms + 1)

    def weight_log(self, k: int) -> float:
        return self._log_w[k]

    def weight_exact(self, k: int) -> Fraction:
        if self._exact_w is None:
            raise ValueError(f"{self.M.name} has no exact rational path")
        return self._exact_w[k]

    def ratio_exact(self, k: int) -> Fraction:
        return self.M.exact_ratio(k)

    # -- evaluation ----------------------------------------------------------

    def value(self, x1: Scalar, x2: Scalar, exact: bool = False) -> Scalar:
        if exact:
            return sum(
                self.weight_exact(k)
                / (1 + Fraction(x1) ** 2 + (self.ratio_exact(k) * Fraction(x2)) ** 2)
                for k in self.k_range
            )
        logs = []
        for k in self.k_range:
            m = math.exp(self.M.log_ratio(k))
            logs.append(self._log_w[k] - math.log(1 + x1 * x1 + (m * x2) ** 2))
        return math.exp(logsumexp(logs))

    def value_tail_log(self) -> float:
        """The dropped k > terms part of the value series is below this."""
        return self.M.log_weight(0) - self.terms * math.log(2)

    def jet(self, base: tuple, degree: int, kind: str = FLOAT) -> Jet2:
        x1 = Jet2.variable(0, base, degree, kind)
        x2 = Jet2.variable(1, base, degree, kind)
        total = Jet2.constant(0, base, degree, kind)
        for k in self.k_range:
            if kind == EXACT:
                w, m = self.weight_exact(k), self.ratio_exact(k)
            else:
                w, m = math.exp(self._log_w[k]), math.exp(self.M.log_ratio(k))
            denom = 1 + x1 * x1 + (x2.scale(m)) ** 2
            total = total + denom.reciprocal().scale(w)
        return total

    # -- axis derivatives ----------------------------------------------------

    def axis_sum_log(self, order: int, log_one_plus_t2: float) -> float:
        """log of sum_k w_k m_k^order / (1+t^2)^(order/2+1), truncated."""
        p = order // 2 + 1
        logs = [
            self._log_w[k] + order * self.M.log_ratio(k) - p * log_one_plus_t2
            for k in self.k_range
        ]
        return logsumexp(logs)

    def axis_sum_exact(self, order: int, one_plus_t2: Fraction) -> Fraction:
        p = order // 2 + 1
        return sum(
            self.weight_exact(k) * self.ratio_exact(k) ** order / one_plus_t2**p
            for k in self.k_range
        )

    def axis_sum_interval(self, order: int, one_plus_t2: RInterval) -> RInterval:
        p = order // 2 + 1
        inv = (one_plus_t2**p).reciprocal()
        total = RInterval.exactly(0)
        for k in self.k_range:
            total = total + inv * (self.weight_exact(k) * self.ratio_exact(k) ** order)
        return total

    def axis_tail_exact(self, order: int, one_plus_t2: Fraction) -> Fraction:
        """Rigorous bound on the dropped axis-sum part: M_order 2^-K scaled."""
        if self._exact_w is None or self.M.exact(order) is None:
            raise ValueError("exact tail needs an exact family")
        p = order // 2 + 1
        return self.M.exact(order) / (2**self.terms * one_plus_t2**p)

    def axis_truncation_log(self, order: int, log_one_plus_t2: float) -> float:
        p = order // 2 + 1
        return self.M.log_weight(order) - self.terms * math.log(2) - p * log_one_plus_t2

    def axis_derivative(self, order: int, x1: Scalar) -> AxisDerivative:
        """d^order/dx2^order of h at (x1, 0); odd orders vanish by symmetry."""
        if order % 2 == 1:
            return AxisDerivative(
                order, LogMagnitude.zero(), Fraction(0), LOG_ZERO, self.terms, True
            )
        sign = -1 if (order // 2) % 2 else 1
        exact = None
        if self._exact_w is not None and isinstance(x1, (int, Fraction)):
            opt = 1 + Fraction(x1) ** 2
            exact = sign * math.factorial(order) * self.axis_sum_exact(order, opt)
            log_opt = log_of_fraction(opt)
            val = LogMagnitude.from_fraction(exact)
        else:
            log_opt = math.log1p(float(x1) ** 2)
            lg = self.axis_sum_log(order, log_opt)
            val = LogMagnitude(sign, math.lgamma(order + 1) + lg)
        trunc = math.lgamma(order + 1) + self.axis_truncation_log(order, log_opt)
        return AxisDerivative(order, val, exact, trunc, self.terms)


# -- finite-order bound checks on the base ----------------------------------

@dataclass
class SweepResult:
    checked: int = 0
    failures: Optional[list] = None
    max_log_ratio: float = -math.inf
    empirical_constant: float = 0.0
    seed: Optional[int] = None

    def __post_init__(self):
        if self.failures is None:
            self.failures = []

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, log_lhs: float, log_rhs: float, tag) -> None:
        self.checked += 1
        if log_lhs > log_rhs:
            self.failures.append(tag)
        if log_lhs > LOG_ZERO:
            self.max_log_ratio = max(self.max_log_ratio, log_lhs - log_rhs)


def _alphas(degree: int):
    return [(i, t - i) for t in range(degree + 1) for i in range(t + 1)]


def base_upper_check(
    M: WeightSequence,
    degree: int = 6,
    points: int = 25,
    terms: int = DEFAULT_TERMS,
    seed: int = 3,
) -> SweepResult:
    """Sweep |d^a h| <= 64 * 8^(|a|+1) a! M_a2 / (1+|x|^2)^(1+|a|/2).

    Jets are truncated at K terms; the dropped contribution is bounded by
    8^(|a|+1) a! M_a2 2^-K over the same denominator power and is added to
    the left side, so the certified inequality covers the full series.
    """
    rng = random.Random(seed)
    h = BaseFunction(M, terms)
    res = SweepResult(seed=seed)
    pts = [(0.0, 0.0)] + [
        (rng.uniform(-8, 8), rng.uniform(-8, 8)) for _ in range(points - 1)
    ]
    log8 = math.log(8)
    for x in pts:
        jet = h.jet(x, degree, FLOAT)
        log_opt = math.log1p(x[0] ** 2 + x[1] ** 2)
        for a in _alphas(degree):
            n = a[0] + a[1]
            scale = (1 + n / 2) * log_opt
            coef = abs(jet.coefficient(a))
            log_coef = math.log(coef) if coef else LOG_ZERO
            log_tail = (n + 1) * log8 + M.log_weight(a[1]) - terms * math.log(2) - scale
            log_lhs = logsumexp([log_coef, log_tail])
            log_rhs = math.log(64) + (n + 1) * log8 + M.log_weight(a[1]) - scale
            res.record(log_lhs, log_rhs, (x, a))
    return res


@dataclass
class LowerBoundRow:
    order: int
    log_lhs: float  # log(|truncated derivative| - rigorous tail)
    log_rhs: float
    exact_ok: Optional[bool]

    @property
    def ok(self) -> bool:
        if self.exact_ok is not None:
            return self.exact_ok
        return self.log_lhs >= self.log_rhs - 1e-12


def base_lower_check(
    M: WeightSequence, orders: Sequence[int], terms: int = DEFAULT_TERMS
) -> list[LowerBoundRow]:
    """|d^(2n) h / dx2^(2n) (0,0)| >= (2n)! M_2n / 4^n for n >= 1, checked
    with the rigorous tail bound subtracted from the truncated sum."""
    h = BaseFunction(M, terms)
    rows = []
    for order in orders:
        if order % 2 or order < 2:
            raise ValueError("orders must be even and >= 2")
        if order > terms:
            raise ValueError(f"need terms >= order, got {terms} < {order}")
        n = order // 2
        ax = h.axis_derivative(order, 0)
        log_rhs = math.lgamma(order + 1) + M.log_weight(order) - n * math.log(4)
        exact_ok = None
        if ax.exact is not None:
            tail = Fraction(math.factorial(order)) * h.axis_tail_exact(order, Fraction(1))
            rhs = Fraction(math.factorial(order)) * M.exact(order) / 4**n
            lhs = abs(ax.exact) - tail
            exact_ok = lhs >= rhs
            log_lhs = log_of_fraction(lhs) if lhs > 0 else LOG_ZERO
        else:
            lhs_mag = abs(ax.value) + LogMagnitude(-1, ax.truncation_log)
            log_lhs = lhs_mag.log_abs if lhs_mag.sign > 0 else LOG_ZERO
        rows.append(LowerBoundRow(order, log_lhs, log_rhs, exact_ok))
    return rows


# -- blocks ------------------------------------------------------------------

class Block:
    """h((x - c)/rho) with c = (q rho, 0), q >= 1, 0 < rho < 1."""

    def __init__(self, base: BaseFunction, q: Fraction, rho: Fraction):
        q, rho = Fraction(q), Fraction(rho)
        if q < 1:
            raise ValueError("block offset q must be >= 1")
        if not 0 < rho < 1:
            raise ValueError("block scale rho must lie in (0, 1)")
        self.base = base
        self.q = q
        self.rho = rho

    @property
    def center(self) -> tuple[Fraction, Fraction]:
        return (self.q * self.rho, Fraction(0))

    def value(self, x1: Scalar, x2: Scalar, exact: bool = False) -> Scalar:
        if exact:
            return self.base.value(
                Fraction(x1) / self.rho - self.q, Fraction(x2) / self.rho, True
            )
        r = float(self.rho)
        return self.base.value(x1 / r - float(self.q), x2 / r)

    def jet(self, base_pt: tuple, degree: int, kind: str = FLOAT) -> Jet2:
        x1 = Jet2.variable(0, base_pt, degree, kind)
        x2 = Jet2.variable(1, base_pt, degree, kind)
        if kind == EXACT:
            inv_rho, q = 1 / self.rho, self.q
        else:
            inv_rho, q = 1 / float(self.rho), float(self.q)
        y1 = x1.scale(inv_rho) - q
        y2 = x2.scale(inv_rho)
        total = Jet2.constant(0, base_pt, degree, kind)
        for k in self.base.k_range:
            if kind == EXACT:
                w, m = self.base.weight_exact(k), self.base.ratio_exact(k)
            else:
                w = math.exp(self.base.weight_log(k))
                m = math.exp(self.base.M.log_ratio(k))
            denom = 1 + y1 * y1 + (y2.scale(m)) ** 2
            total = total + denom.reciprocal().scale(w)
        return total

    def axis_derivative(self, order: int, x1: Scalar) -> AxisDerivative:
        """d^order/dx2^order at (x1, 0): rho^-order times the base value at
        the rescaled abscissa."""
        if isinstance(x1, (int, Fraction)) and self.base._exact_w is not None:
            t = Fraction(x1) / self.rho - self.q
        else:
            t = float(x1) / float(self.rho) - float(self.q)
        ax = self.base.axis_derivative(order, t)
        if ax.symmetry_zero:
            return ax
        log_scale = -order * log_of_fraction(self.rho)
        exact = None if ax.exact is None else ax.exact / self.rho**order
        return AxisDerivative(
            order,
            LogMagnitude(ax.value.sign, ax.value.log_abs + log_scale),
            exact,
            ax.truncation_log + log_scale,
            ax.terms,
        )


def block_upper_check(
    M: WeightSequence,
    geometries: Sequence[tuple[Fraction, Fraction]],
    degree: int = 6,
    points: int = 6,
    terms: int = DEFAULT_TERMS,
    seed: int = 4,
) -> SweepResult:
    """Sweep |d^a f| <= 64 rho^2 8^(|a|+1) a! M_a2 / (|x-c|^2 + rho^2)^(1+|a|/2)."""
    rng = random.Random(seed)
    h = BaseFunction(M, terms)
    res = SweepResult(seed=seed)
    log8 = math.log(8)
    for q, rho in geometries:
        blk = Block(h, q, rho)
        c1, rr = float(blk.center[0]), float(rho)
        pts = [(c1, 0.0)] + [
            (c1 + rng.uniform(-6, 6), rng.uniform(-6, 6)) for _ in range(points - 1)
        ]
        for x in pts:
            jet = blk.jet(x, degree, FLOAT)
            dist = (x[0] - c1) ** 2 + x[1] ** 2 + rr * rr
            for a in _alphas(degree):
                n = a[0] + a[1]
                scale = (1 + n / 2) * math.log(dist)
                coef = abs(jet.coefficient(a))
                log_coef = math.log(coef) if coef else LOG_ZERO
                log_tail = (
                    2 * math.log(rr)
                    + (n + 1) * log8
                    + M.log_weight(a[1])
                    - terms * math.log(2)
                    - scale
                )
                log_lhs = logsumexp([log_coef, log_tail])
                log_rhs = (
                    math.log(64)
                    + 2 * math.log(rr)
                    + (n + 1) * log8
                    + M.log_weight(a[1])
                    - scale
                )
                res.record(log_lhs, log_rhs, ((q, rho), x, a))
    return res


def block_lower_check(
    M: WeightSequence,
    geometries: Sequence[tuple[Fraction, Fraction]],
    orders: Sequence[int],
    terms: int = DEFAULT_TERMS,
) -> list[LowerBoundRow]:
    """At the block center, |d^(2n)/dx2^(2n) f| >= (2n)! M_2n / (4^n rho^2n),
    with the rigorous tail subtracted."""
    h = BaseFunction(M, terms)
    rows = []
    for q, rho in geometries:
        q, rho = Fraction(q), Fraction(rho)
        blk = Block(h, q, rho)
        for order in orders:
            if order % 2 or order < 2 or order > terms:
                raise ValueError("orders must be even, >= 2 and <= terms")
            n = order // 2
            ax = blk.axis_derivative(order, blk.center[0])
            log_rhs = (
                math.lgamma(order + 1)
                + M.log_weight(order)
                - n * math.log(4)
                - order * log_of_fraction(rho)
            )
            exact_ok = None
            if ax.exact is not None:
                fact = Fraction(math.factorial(order))
                tail = fact * h.axis_tail_exact(order, Fraction(1)) / rho**order
                rhs = fact * M.exact(order) / (4**n * rho**order)
                lhs = abs(ax.exact) - tail
                exact_ok = lhs >= rhs
                log_lhs = log_of_fraction(lhs) if lhs > 0 else LOG_ZERO
            else:
                lhs_mag = abs(ax.value) + LogMagnitude(-1, ax.truncation_log)
                log_lhs = lhs_mag.log_abs if lhs_mag.sign > 0 else LOG_ZERO
            rows.append(LowerBoundRow(order, log_lhs, log_rhs, exact_ok))
    return rows


# -- polar composition -------------------------------------------------------

def polar_block_jet(blk: Block, base_pt: tuple, degree: int, kind: str = FLOAT) -> Jet2:
    """Jet of f(r cos theta, r sin theta); exact kind needs base theta = 0."""
    r = Jet2.variable(0, base_pt, degree, kind)
    theta = Jet2.variable(1, base_pt, degree, kind)
    s, c = jet_sin_cos(theta)
    x1 = r * c
    x2 = r * s
    if kind == EXACT:
        inv_rho, q = 1 / blk.rho, blk.q
    else:
        inv_rho, q = 1 / float(blk.rho), float(blk.q)
    y1 = x1.scale(inv_rho) - q
    y2 = x2.scale(inv_rho)
    total = Jet2.constant(0, base_pt, degree, kind)
    for k in blk.base.k_range:
        if kind == EXACT:
            w, m = blk.base.weight_exact(k), blk.base.ratio_exact(k)
        else:
            w = math.exp(blk.base.weight_log(k))
            m = math.exp(blk.base.M.log_ratio(k))
        denom = 1 + y1 * y1 + (y2.scale(m)) ** 2
        total = total + denom.reciprocal().scale(w)
    return total


def polar_block_bound_check(
    M: WeightSequence,
    geometries: Sequence[tuple[Fraction, Fraction]],
    degree: int = 5,
    radii: int = 5,
    angles: int = 4,
    C: float = POLAR_BLOCK_C,
    terms: int = DEFAULT_TERMS,
    seed: int = 5,
) -> SweepResult:
    """Sweep |d^a (f o polar)| <= (1 + q rho)^a2 C^(|a|+1) a! M_|a| in float.

    Needs M_1 = 1 (the lemma's normalization; it makes the weighted ratio
    sums collapse to M_|a|)."""
    if abs(M.log_weight(1)) > 1e-12:
        raise ValueError("polar block bound requires M_1 = 1")
    from .bricks import polar_sample_radii

    rng = random.Random(seed)
    h = BaseFunction(M, terms)
    res = SweepResult(seed=seed)
    logC = math.log(C)
    emp = 0.0
    for q, rho in geometries:
        blk = Block(h, q, rho)
        growth = math.log1p(float(q * rho))
        for r in polar_sample_radii(rng, radii):
            for _ in range(angles):
                th = rng.uniform(-math.pi, math.pi)
                jet = polar_block_jet(blk, (r, th), degree, FLOAT)
                for a in _alphas(degree):
                    n = a[0] + a[1]
                    coef = abs(jet.coefficient(a))
                    log_coef = math.log(coef) if coef else LOG_ZERO
                    log_tail = (
                        a[1] * growth
                        + 5 * (n + 1) * math.log(8)
                        + M.log_weight(n)
                        - terms * math.log(2)
                    )
                    log_lhs = logsumexp([log_coef, log_tail])
                    log_rhs = a[1] * growth + (n + 1) * logC + M.log_weight(n)
                    res.record(log_lhs, log_rhs, ((q, rho), r, th, a))
                    if coef > 0:
                        norm = math.log(coef) - a[1] * growth - M.log_weight(n)
                        emp = max(emp, math.exp(norm / (n + 1)))
    res.empirical_constant = emp
    return res
