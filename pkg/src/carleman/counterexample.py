"""A ratio-step weight schedule separating two finite-order diagnostics.

The log-ratio sequence a_k takes the constant value log v_n on the block
lam_n < k <= lam_(n+1), where v_n = prod_{j<=n} (1 + 1/sqrt(j)). Constant
ratios on blocks make the sequence exactly log-convex, and v_n -> infinity
slowly enough that b_k = (M_{k+1}/M_k)^(1/k) stays below 4.

The boundary schedule has three parts:
  * a burst 100, 102, ..., 114, 200 whose tightly stepped levels push
    g_k = (M_k^2 / M_{2k})^(1/k) below 0.1 throughout the window
    [100, 114] while g = 1 exactly on the first block;
  * doubling pairs (mu_j, 2 mu_j) with mu_j = 2 * prev * 3^m and
    m = ceil(v^2 / log 3): each gap contributes about 1 to the running
    gap-certificate sum, which is what defeats the quasianalyticity-style
    summation term by term;
  * one closing boundary generated by the same gap rule.

Boundary values reach ~10^700000, so nothing here converts them to floats
or decimal strings: k-th-root quantities go through math.log on integers
(exact for the sizes involved to ~1e-15 relative), and reports serialize
big entries by their log10.
"""

from __future__ import annotations

import bisect
import functools
import math
import time
from dataclasses import dataclass, field
from typing import Optional

from .weights import WeightError, WeightSequence

LOG3 = math.log(3.0)
BURST = (0, 100, 102, 104, 106, 108, 110, 112, 114, 200)
WITNESS_WINDOW = tuple(range(100, 115, 2))
FLOAT_SAFE_BITS = 900  # beyond this the float paths refuse instead of overflowing

_lv_cache = [0.0]


def log_v(n: int) -> float:
    """log of v_n = prod_{j<=n} (1 + 1/sqrt(j)), v_0 = 1."""
    if n < 0:
        raise ValueError("negative level index")
    while len(_lv_cache) <= n:
        j = len(_lv_cache)
        _lv_cache.append(_lv_cache[-1] + math.log(1 + 1 / math.sqrt(j)))
    return _lv_cache[n]


def v_sq(n: int) -> float:
    return math.exp(2 * log_v(n))


@dataclass
class ScheduleData:
    pairs: int
    boundaries: list[int]
    levels: list[float]  # levels[i] rules (boundaries[i], boundaries[i+1]]; last rules the tail
    doubled: list[int]  # the mu with both mu and 2 mu in the schedule
    gap_terms: list[float]  # m * log3 / v^2 at each generated append decision
    build_seconds: float


def build_schedule(pairs: int = 8) -> ScheduleData:
    if pairs < 2:
        raise ValueError("need at least 2 pairs (the burst plus one generated)")
    t0 = time.perf_counter()
    lam = list(BURST)
    doubled = [100]
    gap_terms = []
    for _ in range(2, pairs + 1):
        pos = len(lam) - 1
        m = math.ceil(v_sq(pos) / LOG3)
        gap_terms.append(m * LOG3 / v_sq(pos))
        mu = 2 * lam[-1] * 3**m
        lam.append(mu)
        lam.append(2 * mu)
        doubled.append(mu)
    pos = len(lam) - 1
    m = math.ceil(v_sq(pos) / LOG3)
    gap_terms.append(m * LOG3 / v_sq(pos))
    lam.append(2 * lam[-1] * 3**m)
    levels = [log_v(n) for n in range(len(lam))]
    return ScheduleData(
        pairs, lam, levels, doubled, gap_terms, time.perf_counter() - t0
    )


def _log_big(k: int) -> float:
    return math.log(k)  # math.log takes arbitrary ints without overflow


class CounterexampleSequence:
    def __init__(self, pairs: int = 8):
        self.schedule = build_schedule(pairs)
        self.pairs = pairs
        lam = self.schedule.boundaries
        # float prefix of log M at boundaries, only while it fits a float
        self._prefix: list[float] = [0.0]
        for i in range(len(lam) - 1):
            if lam[i + 1].bit_length() > FLOAT_SAFE_BITS:
                break
            self._prefix.append(
                self._prefix[-1] + (lam[i + 1] - lam[i]) * self.schedule.levels[i]
            )
        self._weights: Optional[WeightSequence] = None

    @property
    def boundaries(self) -> list[int]:
        return self.schedule.boundaries

    @property
    def levels(self) -> list[float]:
        return self.schedule.levels

    @property
    def doubled(self) -> list[int]:
        return self.schedule.doubled

    @property
    def gap_terms(self) -> list[float]:
        return self.schedule.gap_terms

    @property
    def last_digits(self) -> float:
        return self.boundaries[-1].bit_length() * math.log10(2)

    def block_index(self, k: int) -> int:
        if k < 1:
            raise ValueError("index must be positive")
        i = bisect.bisect_left(self.boundaries, k) - 1
        return min(i, len(self.boundaries) - 1)

    def level(self, k: int) -> float:
        """a_k, the log-ratio in force at index k."""
        return self.levels[self.block_index(k)]

    def log_weight(self, k: int) -> float:
        """log M_k on the float-safe range; big indices must use root_log."""
        if k == 0:
            return 0.0
        if k.bit_length() > FLOAT_SAFE_BITS:
            raise WeightError("index too large for the float log-weight path")
        lam = self.boundaries
        i = self.block_index(k)
        if i >= len(self._prefix):
            raise WeightError("index beyond the float-safe prefix")
        return self._prefix[i] + (k - lam[i]) * self.levels[i]

    def root_log(self, k: int) -> float:
        """log of M_k^(1/k); safe for boundary-sized integers."""
        if k < 1:
            raise ValueError("index must be positive")
        lam = self.boundaries
        lk = _log_big(k)
        terms = []
        for i in range(len(lam) - 1):
            if lam[i] >= k:
                break
            gap = min(lam[i + 1], k) - lam[i]
            if gap > 0 and self.levels[i] != 0.0:
                terms.append(math.exp(_log_big(gap) - lk) * self.levels[i])
        if k > lam[-1]:
            terms.append(math.exp(_log_big(k - lam[-1]) - lk) * self.levels[-1])
        return math.fsum(terms)

    def step_log(self, k: int) -> float:
        """log of the level value v at k; root_log never exceeds it."""
        return self.level(k)

    def gap_ratio_log(self, k: int) -> float:
        """log g_k with g_k = (M_k^2 / M_{2k})^(1/k), via k-th roots."""
        return 2 * (self.root_log(k) - self.root_log(2 * k))

    def g(self, k: int) -> float:
        return math.exp(self.gap_ratio_log(k))

    def b(self, k: int) -> float:
        """(M_{k+1}/M_k)^(1/k), computed without converting k to float."""
        lv = self.level(k + 1)
        if lv == 0.0:
            return 1.0
        return math.exp(math.exp(math.log(lv) - _log_big(k)))

    @property
    def weights(self) -> WeightSequence:
        if self._weights is None:
            self._weights = WeightSequence(
                f"counterexample:{self.pairs}", self.log_weight, validate_on_init=8
            )
        return self._weights


@functools.lru_cache(maxsize=4)
def counterexample_sequence(pairs: int = 8) -> CounterexampleSequence:
    return CounterexampleSequence(pairs)


# -- verification ------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    ok: bool
    details: dict = field(default_factory=dict)


def verify_log_convex(seq: CounterexampleSequence, scan_to: int = 256) -> CheckReport:
    """Levels nondecreasing (so ratios are nondecreasing everywhere), plus a
    direct ratio scan through the burst region via the adapter."""
    lv = seq.levels
    monotone = all(lv[i + 1] >= lv[i] for i in range(len(lv) - 1))
    ok = monotone
    try:
        seq.weights.validate(scan_to)
    except WeightError:
        ok = False
    return CheckReport(
        "log-convexity",
        ok,
        {"levels_monotone": monotone, "scan_to": scan_to},
    )


def verify_diff_closed(seq: CounterexampleSequence, bound: float = 4.0) -> CheckReport:
    """max_k b_k <= bound. Within a block the level is constant and 1/k
    decreases, so the maximum is attained where a block begins; scanning the
    boundary set covers every candidate."""
    best, best_at = 1.0, 1
    for i in range(1, len(seq.boundaries)):
        k = seq.boundaries[i]
        b = seq.b(k)
        if b > best:
            best, best_at = b, k if k.bit_length() < 64 else -i
    return CheckReport(
        "difference-closedness",
        best <= bound,
        {"max_b": best, "argmax": best_at, "bound": bound},
    )


def verify_gap_sums(
    seq: CounterexampleSequence, min_fraction: float = 0.9
) -> CheckReport:
    """Each generated gap certifies about one unit; the total must reach
    min_fraction per pair. Also the k-th root level never exceeds the step
    level at the doubled elements and their doubles."""
    total = math.fsum(seq.gap_terms)
    target = min_fraction * seq.pairs
    dyadics_ok = all(
        seq.root_log(k) <= seq.step_log(k) + 1e-12
        for mu in seq.doubled
        for k in (mu, 2 * mu)
    )
    return CheckReport(
        "gap-sums",
        total >= target and dyadics_ok,
        {
            "sum": total,
            "target": target,
            "terms": list(seq.gap_terms),
            "dyadic_root_le_step": dyadics_ok,
        },
    )


def verify_strict_window(
    seq: CounterexampleSequence, cutoff: float = 0.1
) -> CheckReport:
    """g = 1 exactly on the first block, g <= cutoff on the whole burst
    window, and the doubled elements keep g strictly below 1. The two g
    computations (k-th roots vs direct log-weights) must agree to 1e-12
    wherever the float path is defined."""
    g_first = seq.g(1)
    window = {k: seq.g(k) for k in WITNESS_WINDOW}
    window_ok = all(v <= cutoff for v in window.values())
    g_min_at = min(window, key=window.get)
    pair_g = [seq.g(mu) for mu in seq.doubled]
    pair_ok = all(v < 0.9 for v in pair_g)
    dual_ok = True
    for k in (1, 2, 50) + WITNESS_WINDOW:
        direct = math.exp((2 * seq.log_weight(k) - seq.log_weight(2 * k)) / k)
        if abs(direct - seq.g(k)) > 1e-12 * max(1.0, direct):
            dual_ok = False
    return CheckReport(
        "strict-gap-window",
        g_first == 1.0 and window_ok and pair_ok and dual_ok,
        {
            "g_at_1": g_first,
            "window": {str(k): v for k, v in window.items()},
            "g_min": window[g_min_at],
            "g_min_at": g_min_at,
            "pair_g_max": max(pair_g),
            "dual_path_ok": dual_ok,
        },
    )


def verify_level_growth(seq: CounterexampleSequence, horizon: int = 512) -> CheckReport:
    """Pin down which ratio of the level scale v actually grows.

    The one-step ratio v_{n+1}/v_n = 1 + 1/sqrt(n+1) is decreasing with
    limit 1; it is only the doubling ratio v_{2n}/v_n that increases without
    bound, and that is the quantity the gap argument leans on. Both
    directions are checked numerically and recorded so the report states
    the behaviour explicitly instead of leaving it implied.
    """
    steps = [math.exp(log_v(n + 1) - log_v(n)) for n in range(1, 41)]
    one_step_decreasing = all(a > b for a, b in zip(steps, steps[1:]))
    ns, doubles = [], []
    n = 1
    while n <= horizon:
        ns.append(n)
        doubles.append(math.exp(log_v(2 * n) - log_v(n)))
        n *= 2
    doubling_increasing = all(a < b for a, b in zip(doubles, doubles[1:]))
    doubling_large = doubles[-1] > 100.0
    return CheckReport(
        "level-growth-direction",
        one_step_decreasing and doubling_increasing and doubling_large,
        {
            "one_step_ratio_decreasing_to_1": one_step_decreasing,
            "one_step_first_last": (steps[0], steps[-1]),
            "doubling_ratio_increasing": doubling_increasing,
            "doubling_at": {str(n): d for n, d in zip(ns, doubles)},
            "note": (
                "only the doubling ratio v(2n)/v(n) grows without bound; "
                "the one-step ratio decreases to 1"
            ),
        },
    )


def full_verification(pairs: int = 8) -> dict:
    """All five checks plus schedule statistics, JSON-ready (big boundaries
    reported by log10, never expanded)."""
    seq = counterexample_sequence(pairs)
    checks = [
        verify_log_convex(seq),
        verify_diff_closed(seq),
        verify_gap_sums(seq),
        verify_strict_window(seq),
        verify_level_growth(seq),
    ]
    entries = []
    for i, lam in enumerate(seq.boundaries):
        small = lam.bit_length() < 64
        entries.append(
            {
                "index": i,
                "value": lam if small else None,
                "log10": 0.0 if lam == 0 else lam.bit_length() * math.log10(2),
                "level": seq.levels[i],
            }
        )
    return {
        "pairs": pairs,
        "entry_count": len(seq.boundaries),
        "doubled_count": len(seq.doubled),
        "last_entry_digits": seq.last_digits,
        "build_seconds": seq.schedule.build_seconds,
        "boundaries": entries,
        "checks": {
            c.name: {"ok": c.ok, **c.details} for c in checks
        },
        "all_ok": all(c.ok for c in checks),
    }
