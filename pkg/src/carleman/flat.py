"""A flat superposition of blocks with certified large pure-x2 derivatives.

Blocks at shrinking scales rho_k = M_k/M_{k+1} are placed along the x1 axis
at centers E(rho_k) chosen by a center map E (square root by default), with
summable weights 1/(2^k phi(1/rho_k)). Greedy selection keeps only orders
whose centers at least halve, so the blocks are well separated and the
derivative of order k at the k-th center is dominated by its own block.

Every certified inequality is evaluated two ways: in rational interval
arithmetic with directed rounding (the certificate) and in log-domain floats
(the cross-check). Irrational centers never touch the exact path except
through certified root enclosures.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .blocks import BaseFunction, Block, SweepResult, _alphas, polar_block_jet
from .intervals import RInterval, exact_nth_root
from .jets import FLOAT, Jet2
from .logscale import LOG_ZERO, LogMagnitude, log_of_fraction, logsumexp
from .weights import WeightSequence, parse_family, shift

POLAR_FLAT_C = 2 * 8**5
LOG2 = math.log(2.0)
LOG8 = math.log(8.0)


class LayoutError(ValueError):
    pass


class EFunction:
    """Center map rho -> E(rho). Rational powers keep an exact interval path."""

    def __init__(self, spec: str, power: Optional[Fraction] = None,
                 fn: Optional[Callable[[float], float]] = None):
        self.spec = spec
        self.power = power
        self._fn = fn
        if power is not None and not 0 < power < 1:
            raise LayoutError("center map power must lie in (0, 1)")
        if power is None and fn is None:
            raise LayoutError("center map needs a power or a callable")

    @classmethod
    def parse(cls, spec: str) -> "EFunction":
        if spec == "sqrt":
            return cls("sqrt", Fraction(1, 2))
        head, _, rest = spec.partition(":")
        if head == "power":
            return cls(spec, Fraction(rest))
        raise LayoutError(f"unknown center map {spec!r}")

    @classmethod
    def custom(cls, fn: Callable[[float], float], label: str = "custom") -> "EFunction":
        return cls(label, fn=fn)

    @property
    def has_exact(self) -> bool:
        return self.power is not None

    def __call__(self, rho: float) -> float:
        if self._fn is not None:
            return self._fn(rho)
        return rho ** float(self.power)

    def interval(self, rho: Fraction) -> RInterval:
        if self.power is None:
            raise LayoutError(f"center map {self.spec!r} has no exact path")
        return RInterval.rational_power(Fraction(rho), self.power)


@dataclass(frozen=True)
class LayoutEntry:
    order: int
    rho: Fraction
    center_iv: RInterval
    weight: Fraction  # 1/(2^order phi(1/rho)) = M_order rho^(order+2) / 2^order

    @property
    def center(self) -> float:
        return float(self.center_iv)

    @property
    def offset_ratio(self) -> float:
        return self.center / float(self.rho)

    @property
    def weight_log(self) -> float:
        return log_of_fraction(self.weight)


@dataclass
class Layout:
    m_family: str
    e_spec: str
    lambda_max: int
    sparsity_enforced: bool
    terms: int
    entries: list[LayoutEntry]
    eps_lo: Fraction = Fraction(0)
    eps_hi: Fraction = Fraction(0)
    eps_exact: Optional[Fraction] = None
    delta_min_lo: Fraction = Fraction(0)

    @property
    def orders(self) -> list[int]:
        return [e.order for e in self.entries]

    def entry(self, order: int) -> LayoutEntry:
        for e in self.entries:
            if e.order == order:
                return e
        raise LayoutError(f"no block of order {order}")

    @property
    def eps(self) -> float:
        return float(self.eps_exact) if self.eps_exact is not None else float(
            (self.eps_lo + self.eps_hi) / 2
        )

    @property
    def B(self) -> float:
        return 8**5 / self.eps

    def to_json_dict(self) -> dict:
        return {
            "m_family": self.m_family,
            "e_spec": self.e_spec,
            "lambda_max": self.lambda_max,
            "sparsity_enforced": self.sparsity_enforced,
            "terms": self.terms,
            "orders": self.orders,
            "entries": [
                {
                    "order": e.order,
                    "rho": str(e.rho),
                    "center": e.center,
                    "offset_ratio": e.offset_ratio,
                    "weight_log": e.weight_log,
                }
                for e in self.entries
            ],
            "eps": self.eps,
            "eps_exact": None if self.eps_exact is None else str(self.eps_exact),
            "delta_min": float(self.delta_min_lo),
            "B": self.B,
        }

    def save(self, path) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_json_dict(cls, data: dict) -> "Layout":
        M = parse_family(data["m_family"])
        E = EFunction.parse(data["e_spec"])
        rebuilt = layout_from_orders(
            M,
            E,
            data["orders"],
            lambda_max=data["lambda_max"],
            require_sparsity=data["sparsity_enforced"],
            terms=data["terms"],
        )
        for want, have in zip(data["entries"], rebuilt.entries):
            if Fraction(want["rho"]) != have.rho or abs(want["center"] - have.center) > 1e-9:
                raise LayoutError("stored layout disagrees with its rebuild")
        return rebuilt

    @classmethod
    def load(cls, path) -> "Layout":
        with open(path) as fh:
            return cls.from_json_dict(json.load(fh))


def _entry_for(M: WeightSequence, E: EFunction, order: int) -> LayoutEntry:
    rho = M.exact(order) / M.exact(order + 1)
    return LayoutEntry(
        order=order,
        rho=rho,
        center_iv=E.interval(rho),
        weight=M.exact(order) * rho ** (order + 2) / 2**order,
    )


def _finish_layout(layout: Layout) -> Layout:
    roots = []
    for e in layout.entries:
        ex = exact_nth_root(e.rho**2, e.order)
        roots.append(
            RInterval.exactly(ex) if ex is not None else RInterval.nth_root(e.rho**2, e.order)
        )
    layout.eps_lo = min(r.lo for r in roots)
    layout.eps_hi = min(r.hi for r in roots)
    for r in roots:
        if r.width == 0 and r.hi == layout.eps_hi and all(
            r.lo <= other.lo for other in roots
        ):
            layout.eps_exact = r.lo
            break
    gaps = [
        (a.center_iv - b.center_iv).abs().lo
        for i, a in enumerate(layout.entries)
        for b in layout.entries[i + 1 :]
    ]
    layout.delta_min_lo = min(gaps) if gaps else Fraction(0)
    return layout


def _require_exact(M: WeightSequence, E: EFunction) -> None:
    if not M.has_exact:
        raise LayoutError(f"layout requires an exact weight family, got {M.name}")
    if not E.has_exact:
        raise LayoutError("layout requires a rational-power center map")


def build_layout(
    M: WeightSequence,
    E: EFunction,
    lambda_max: int,
    terms: Optional[int] = None,
) -> Layout:
    """Greedy selection: even orders whose center is below half the previous
    accepted center, starting from the first admissible order (offset ratio
    above one, so the block sits to the right of its own scale)."""
    _require_exact(M, E)
    entries: list[LayoutEntry] = []
    prev: Optional[RInterval] = None
    for order in range(2, lambda_max + 1, 2):
        e = _entry_for(M, E, order)
        if not e.center_iv.certainly_gt(e.rho):
            continue
        if prev is not None and not e.center_iv.certainly_lt(prev * Fraction(1, 2)):
            continue
        entries.append(e)
        prev = e.center_iv
    if not entries:
        raise LayoutError(f"no admissible orders up to {lambda_max}")
    layout = Layout(
        m_family=M.name,
        e_spec=E.spec,
        lambda_max=lambda_max,
        sparsity_enforced=True,
        terms=terms if terms is not None else max(64, entries[-1].order + 12),
        entries=entries,
    )
    return _finish_layout(layout)


def layout_from_orders(
    M: WeightSequence,
    E: EFunction,
    orders: Sequence[int],
    lambda_max: Optional[int] = None,
    require_sparsity: bool = False,
    terms: Optional[int] = None,
) -> Layout:
    """Layout with a caller-chosen order list. Sparsity (halving centers) is
    validated only when requested; admissibility (center > rho) always is."""
    _require_exact(M, E)
    if not orders or sorted(set(orders)) != list(orders):
        raise LayoutError("orders must be strictly increasing and nonempty")
    entries = []
    prev = None
    for order in orders:
        if order % 2 or order < 2:
            raise LayoutError("orders must be even and >= 2")
        e = _entry_for(M, E, order)
        if not e.center_iv.certainly_gt(e.rho):
            raise LayoutError(f"order {order} is inadmissible: center <= rho")
        if require_sparsity and prev is not None and not e.center_iv.certainly_lt(
            prev * Fraction(1, 2)
        ):
            raise LayoutError(f"order {order} violates the halving rule")
        entries.append(e)
        prev = e.center_iv
    layout = Layout(
        m_family=M.name,
        e_spec=E.spec,
        lambda_max=lambda_max if lambda_max is not None else orders[-1],
        sparsity_enforced=require_sparsity,
        terms=terms if terms is not None else max(64, orders[-1] + 12),
        entries=entries,
    )
    return _finish_layout(layout)


# -- evaluation --------------------------------------------------------------

class FlatFunction:
    """The weighted sum of blocks described by a layout."""

    def __init__(self, layout: Layout, M: Optional[WeightSequence] = None):
        self.layout = layout
        self.M = M if M is not None else parse_family(layout.m_family)
        self.base = BaseFunction(self.M, layout.terms)
        self._blocks = [
            Block(self.base, Fraction(e.center) / e.rho, e.rho)
            for e in layout.entries
        ]

    def value(self, x1: float, x2: float) -> float:
        return math.fsum(
            float(e.weight) * b.value(x1, x2)
            for e, b in zip(self.layout.entries, self._blocks)
        )

    def jet(self, pt: tuple, degree: int) -> Jet2:
        total = Jet2.constant(0, pt, degree, FLOAT)
        for e, b in zip(self.layout.entries, self._blocks):
            total = total + b.jet(pt, degree, FLOAT).scale(math.exp(e.weight_log))
        return total

    def polar_jet(self, pt: tuple, degree: int) -> Jet2:
        total = Jet2.constant(0, pt, degree, FLOAT)
        for e, b in zip(self.layout.entries, self._blocks):
            total = total + polar_block_jet(b, pt, degree, FLOAT).scale(
                math.exp(e.weight_log)
            )
        return total

    def polar_value(self, r: float, theta: float) -> float:
        return self.value(r * math.cos(theta), r * math.sin(theta))


# -- the pure-x2 derivative at a block center --------------------------------

@dataclass
class SourceTerm:
    source_order: int
    magnitude_iv: Optional[RInterval]
    magnitude_log: float
    tail_log: float


@dataclass
class FlatAxisValue:
    """|d^order/dx2^order F| at the center of block `at`, split by source.

    All sources share the sign (-1)^(order/2); magnitudes add. The interval
    path gives a certified lower bound (truncation drops positive terms),
    and total plus tail bounds the full sum above.
    """

    order: int
    at: int
    sign: int
    dominant_exact: Fraction
    cross_iv: RInterval
    total_iv: RInterval
    tail_exact: Fraction
    total_log_float: float
    per_source: list[SourceTerm] = field(default_factory=list)

    @property
    def total_lower(self) -> Fraction:
        return self.total_iv.lo

    @property
    def paths_agree(self) -> bool:
        return abs(log_of_fraction(self.total_iv.hi) - self.total_log_float) < 1e-9

    @property
    def magnitude(self) -> LogMagnitude:
        return LogMagnitude(self.sign, log_of_fraction(self.total_iv.lo))


def flat_axis_derivative(
    fn: FlatFunction, order: int, at: int
) -> FlatAxisValue:
    if order % 2:
        raise LayoutError("axis derivatives of odd order vanish; use even order")
    layout, base = fn.layout, fn.base
    if order >= layout.terms:
        raise LayoutError("order must be below the term horizon")
    target = layout.entry(at)
    sign = -1 if (order // 2) % 2 else 1
    fact = Fraction(math.factorial(order))
    lf = math.lgamma(order + 1)

    dominant = (
        target.weight
        * fact
        / target.rho**order
        * base.axis_sum_exact(order, Fraction(1))
    )
    dom_log = target.weight_log + lf - order * log_of_fraction(target.rho) + base.axis_sum_log(order, 0.0)

    cross = RInterval.exactly(0)
    tail = target.weight * fact * base.M.exact(order) / (
        2**base.terms * target.rho**order
    )
    logs = [dom_log]
    per = [SourceTerm(at, None, dom_log, LOG_ZERO)]
    for e in layout.entries:
        if e.order == at:
            continue
        t_iv = (target.center_iv - e.center_iv) / e.rho
        one_plus = RInterval.exactly(1) + t_iv**2
        s_iv = base.axis_sum_interval(order, one_plus)
        term_iv = s_iv * (e.weight * fact / e.rho**order)
        cross = cross + term_iv
        t_f = (target.center - e.center) / float(e.rho)
        term_log = (
            e.weight_log
            + lf
            - order * log_of_fraction(e.rho)
            + base.axis_sum_log(order, math.log1p(t_f * t_f))
        )
        logs.append(term_log)
        term_tail = e.weight * fact * base.M.exact(order) / (2**base.terms * e.rho**order)
        tail += term_tail
        per.append(SourceTerm(e.order, term_iv, term_log, log_of_fraction(term_tail)))

    total = cross + dominant
    return FlatAxisValue(
        order,
        at,
        sign,
        dominant,
        cross,
        total,
        tail,
        logsumexp(logs),
        per,
    )


# -- the lower-bound certificate ---------------------------------------------

@dataclass
class CertificateRow:
    order: int
    lhs_log: float  # certified lower bound on |d^order F / dx2^order|
    rhs_log: float  # eps^order order! M_order^2 / 4^order (upper end)
    ratio_root: float  # (lhs/rhs)^(1/order)
    ok: bool
    dominant_log: float
    dominant_floor_log: float  # order! rho^2 M^2 / 4^order, proved <= dominant
    dominant_ok: bool
    cross_log: float
    cross_bound_log: float  # proof-side envelope for the cross terms
    cross_ok: bool
    tail_log: float
    paths_agree: bool


@dataclass
class LowerCertificate:
    layout: Layout
    rows: list[CertificateRow]
    lambda0_estimate: Optional[int]
    lambda0_cap: int

    @property
    def all_ok(self) -> bool:
        return all(r.ok and r.dominant_ok and r.cross_ok for r in self.rows)

    def csv_rows(self) -> list[tuple[int, float, float, float]]:
        return [(r.order, r.lhs_log, r.rhs_log, r.ratio_root) for r in self.rows]


def _lambda0_scan(
    M: WeightSequence, layout: Layout, cap: int = 10**6
) -> Optional[int]:
    """Smallest even order at which the proof-side cross envelope falls below
    half the dominant floor, using this layout's separation. Diagnostic only."""
    delta = layout.delta_min_lo
    if delta <= 0:
        return None
    log_delta = log_of_fraction(delta)
    log_s2 = math.log(math.fsum(2.0 ** -o for o in layout.orders))
    lam = 2
    while lam <= cap:
        lhs = 2 * (M.log_weight(lam) - M.log_weight(lam + 1)) + M.log_weight(lam) - lam * math.log(4)
        rhs = (lam + 3) * LOG8 + log_s2 - lam * log_delta + LOG2
        if lhs >= rhs:
            return lam
        lam += 2
    return None


def lower_bound_certificate(
    fn: FlatFunction, lambda0_cap: int = 10**6
) -> LowerCertificate:
    layout = fn.layout
    M = fn.M
    rows = []
    log_s2 = {}
    for target in layout.entries:
        lam = target.order
        ax = flat_axis_derivative(fn, lam, lam)
        fact = Fraction(math.factorial(lam))

        rhs_hi = layout.eps_hi**lam * fact * M.exact(lam) ** 2 / 4**lam
        ok = ax.total_lower >= rhs_hi

        floor = fact * target.rho**2 * M.exact(lam) ** 2 / 4**lam
        dominant_ok = ax.dominant_exact >= floor

        others = [o for o in layout.orders if o != lam]
        s2 = sum(Fraction(1, 2**o) for o in others)
        log_s2[lam] = s2
        cross_bound = (
            fact * M.exact(lam) * Fraction(8) ** (lam + 3) / layout.delta_min_lo**lam * s2
        )
        cross_ok = ax.cross_iv.hi + ax.tail_exact <= cross_bound

        lhs_log = log_of_fraction(ax.total_lower)
        rhs_log = log_of_fraction(rhs_hi)
        rows.append(
            CertificateRow(
                order=lam,
                lhs_log=lhs_log,
                rhs_log=rhs_log,
                ratio_root=math.exp((lhs_log - rhs_log) / lam),
                ok=ok,
                dominant_log=log_of_fraction(ax.dominant_exact),
                dominant_floor_log=log_of_fraction(floor),
                dominant_ok=dominant_ok,
                cross_log=log_of_fraction(ax.cross_iv.hi) if ax.cross_iv.hi > 0 else LOG_ZERO,
                cross_bound_log=log_of_fraction(cross_bound),
                cross_ok=cross_ok,
                tail_log=log_of_fraction(ax.tail_exact),
                paths_agree=ax.paths_agree,
            )
        )
    return LowerCertificate(
        layout, rows, _lambda0_scan(M, layout, lambda0_cap), lambda0_cap
    )


# -- finite-order upper bounds for the superposition -------------------------

def flat_upper_check(
    fn: FlatFunction, degree: int = 6, points: int = 8, seed: int = 6
) -> SweepResult:
    """Sweep |d^a F| <= 8^(|a|+3) a! M_|a|^2 at float points, truncation tail
    added to the left side."""
    import random

    rng = random.Random(seed)
    layout = fn.layout
    res = SweepResult()
    pts = [(e.center, 0.0) for e in layout.entries[:2]] + [
        (rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(points)
    ]
    for x in pts:
        jet = fn.jet(x, degree)
        for a in _alphas(degree):
            n = a[0] + a[1]
            coef = abs(jet.coefficient(a))
            log_coef = math.log(coef) if coef else LOG_ZERO
            tail_logs = [
                e.weight_log
                + (n + 1) * LOG8
                + fn.M.log_weight(a[1])
                - layout.terms * LOG2
                - n * log_of_fraction(e.rho)
                for e in layout.entries
            ]
            log_lhs = logsumexp([log_coef] + tail_logs)
            log_rhs = (n + 3) * LOG8 + 2 * fn.M.log_weight(n)
            res.record(log_lhs, log_rhs, (x, a))
    return res


def polar_flat_check(
    fn: FlatFunction,
    degree: int = 5,
    radii: int = 4,
    angles: int = 3,
    C: float = POLAR_FLAT_C,
    seed: int = 7,
) -> SweepResult:
    """Sweep |d^a (F o polar)| <= (2C)^(|a|+1) a! M_|a| in float arithmetic."""
    import random

    from .bricks import polar_sample_radii

    if abs(fn.M.log_weight(1)) > 1e-12:
        raise LayoutError("polar bound requires M_1 = 1")
    rng = random.Random(seed)
    layout = fn.layout
    res = SweepResult()
    log2C = math.log(2 * C)
    for r in polar_sample_radii(rng, radii):
        for _ in range(angles):
            th = rng.uniform(-math.pi, math.pi)
            jet = fn.polar_jet((r, th), degree)
            for a in _alphas(degree):
                n = a[0] + a[1]
                coef = abs(jet.coefficient(a))
                log_coef = math.log(coef) if coef else LOG_ZERO
                tail_logs = [
                    e.weight_log
                    + a[1] * math.log1p(e.center)
                    + 5 * (n + 1) * LOG8
                    + fn.M.log_weight(n)
                    - layout.terms * LOG2
                    for e in layout.entries
                ]
                log_lhs = logsumexp([log_coef] + tail_logs)
                log_rhs = (n + 1) * log2C + fn.M.log_weight(n)
                res.record(log_lhs, log_rhs, (r, th, a))
    return res


# -- sharpness against a target family ---------------------------------------

@dataclass
class SharpnessRow:
    order: int
    deriv_log: float
    root: float  # (|d^order F| / (order! N_order))^(1/order)
    ratio_to_prev: Optional[float]


@dataclass
class SharpnessReport:
    target_family: str
    rows: list[SharpnessRow]
    verdict: str  # growing-diagnostic | bounded-diagnostic | inconclusive
    hypothesis_verdict: str
    hypothesis_note: str


def sharpness_scan(
    fn: FlatFunction, N: WeightSequence, compare_horizon: int = 64
) -> SharpnessReport:
    """Roots r_order = (|d^order F|/(order! N_order))^(1/order) over the
    layout's orders. Bounded roots are the signature of membership in the
    target class at finite order; growing roots witness escape.

    The report also labels, never enforces, the comparison hypothesis
    between the target and the square-shifted build family."""
    from .weights import compare

    rows: list[SharpnessRow] = []
    prev = None
    for lam in fn.layout.orders:
        ax = flat_axis_derivative(fn, lam, lam)
        dlog = log_of_fraction(ax.total_lower)
        root = math.exp((dlog - math.lgamma(lam + 1) - N.log_weight(lam)) / lam)
        rows.append(
            SharpnessRow(lam, dlog, root, None if prev is None else root / prev)
        )
        prev = root
    roots = [r.root for r in rows]
    if roots[-1] >= 2 * roots[0] and roots[-1] == max(roots):
        verdict = "growing-diagnostic"
    elif max(roots) <= 2 * min(roots):
        verdict = "bounded-diagnostic"
    else:
        verdict = "inconclusive"
    hyp = compare(N, shift(fn.M, 2), compare_horizon)
    return SharpnessReport(
        N.name,
        rows,
        verdict,
        hyp.verdict,
        "target vs square-shifted build family over k <= "
        f"{compare_horizon}: {hyp.verdict}",
    )
