"""Order finding for odd-order units by decoding ``1 / p_n(e)``.

Full-bound mode walks the provable number of steps and makes one measurement.
Early-stop mode inspects a few vertices every ``check_every`` iterations and
stops once the bracket around ``1/r`` holds only a handful of integers, one
of which verifies digitally.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .cayley import build_cayley_graph, build_power_table, find_repetition
from .diffusion import StepLedger, WalkState, half_lazy_step, measure
from .errors import (
    DecodeFailure,
    EmptyMeasurements,
    NonpositiveProbability,
    NotAUnit,
    OrderNotOdd,
)
from .numtheory import (
    euclid,
    exponent_bound,
    factorize,
    is_order,
    mod_pow,
    modpow_cost,
    order_from_multiple,
)


class Mode(enum.Enum):
    FULL_BOUND = "full"
    EARLY_STOP = "early"


class MeasureSet(enum.Enum):
    START_ONLY = "start"
    S_POWERS = "s-powers"
    ALL = "all"


class ErrorBound(enum.Enum):
    # (1 - 1/(2(M+1)))**m: provable, but uninformative until m is near the full bound
    PROVABLE = "provable"
    # max - min over the measured vertices: the raw measurement bracket
    SPREAD = "spread"


class DecodePath(enum.Enum):
    FULL_BOUND_DECODE = "full_bound"
    EARLY_STOP_DECODE = "early_stop"
    REPETITION_SHORTCUT = "repetition_shortcut"


@dataclass(frozen=True)
class OrderFindConfig:
    mode: Mode = Mode.FULL_BOUND
    check_every: int = 25
    max_candidates: int = 8
    measure_set: MeasureSet = MeasureSet.S_POWERS
    error_bound: ErrorBound = ErrorBound.SPREAD
    repetition_shortcut: bool = True
    steps: int | None = None

    def __post_init__(self):
        if self.check_every < 1:
            raise ValueError("check_every must be >= 1")
        if self.max_candidates < 1:
            raise ValueError("max_candidates must be >= 1")
        if self.steps is not None and self.steps < 0:
            raise ValueError("steps must be nonnegative")


@dataclass(frozen=True)
class CandidateInterval:
    lower: float
    upper: float
    candidates: range
    A_m: float

    def as_dict(self) -> dict:
        c = self.candidates
        return {
            "lower": f"{self.lower:.17g}",
            "upper": f"{self.upper:.17g}",
            "A_m": f"{self.A_m:.17g}",
            "first_candidate": c.start if c else None,
            "last_candidate": c[-1] if c else None,
            "count": len(c),
        }


@dataclass
class OrderResult:
    order: int
    ledger: StepLedger
    decode_path: DecodePath
    candidates_tried: list[int] = field(default_factory=list)
    state: WalkState | None = None
    intervals: dict[str, CandidateInterval] = field(default_factory=dict)
    measured: dict[int, float] = field(default_factory=dict)


def required_steps(n: int) -> int:
    """Smallest integer exceeding ``4 (M+1) ln N`` with ``M = floor(log2 N) + 1``."""
    if n < 2:
        raise ValueError("N must be >= 2")
    M = exponent_bound(n)
    return math.floor(4 * (M + 1) * math.log(n)) + 1


def decode_order(p_at_e: float, n: int) -> list[int]:
    """Nearest integer to ``1/p``, clamped to ``[1, N]``; both neighbours on an exact tie."""
    if not p_at_e > 0:
        raise NonpositiveProbability(p_at_e)
    x = 1 / Fraction(p_at_e)
    lo = math.floor(x)
    frac = x - lo
    if frac == Fraction(1, 2):
        out = [lo, lo + 1]
    else:
        out = [lo + 1 if frac > Fraction(1, 2) else lo]
    clamped = sorted({min(max(h, 1), n) for h in out})
    return clamped


def candidate_interval(measurements, A_m: float, n: int) -> CandidateInterval:
    """Integers ``h`` with ``1/h`` inside ``[L_m, U_m]``.

    ``L_m = max(1/N, max(p - A_m))`` and ``U_m = min(1, min(p + A_m))``.
    The candidate list is the closed range ``ceil(1/U_m) .. floor(1/L_m)``
    clipped to ``[1, N]``, and is empty when ``L_m > U_m``.
    """
    probs = [float(p) for p in measurements]
    if not probs:
        raise EmptyMeasurements("no measurements supplied")
    if A_m < 0:
        raise ValueError("A_m must be nonnegative")
    lower = max(Fraction(1, n), max(Fraction(p) - Fraction(A_m) for p in probs))
    upper = min(Fraction(1), min(Fraction(p) + Fraction(A_m) for p in probs))
    if lower > upper or upper <= 0:
        cands = range(0)
    else:
        first = max(1, math.ceil(1 / upper))
        last = min(n, math.floor(1 / lower))
        cands = range(first, max(first, last + 1))
    return CandidateInterval(float(lower), float(upper), cands, A_m)


def _verify_cost(h: int) -> int:
    return modpow_cost(h) + sum(modpow_cost(h // p) for p, _ in factorize(h))


def verify_candidates(b: int, n: int, candidates, ledger: StepLedger | None = None) -> int | None:
    """Smallest candidate that is exactly ``ord_N(b)``, or None."""
    for h in candidates:
        if ledger is not None:
            ledger.digital_ops += _verify_cost(h)
        if is_order(b, h, n):
            return h
    return None


def _measure_ids(graph, table, config: OrderFindConfig) -> list[int]:
    if config.measure_set is MeasureSet.START_ONLY:
        return [0]
    if config.measure_set is MeasureSet.ALL:
        return list(range(graph.order))
    ids = []
    for t in range(1, table.M + 1):
        v = graph.vertex_id(table.plus_powers[t])
        if v not in ids:
            ids.append(v)
    return ids


def _bracket(probs, m: int, M: int, n: int) -> dict[str, CandidateInterval]:
    provable = (1 - 1 / (2 * (M + 1))) ** m
    spread = max(probs) - min(probs)
    return {
        ErrorBound.PROVABLE.value: candidate_interval(probs, provable, n),
        ErrorBound.SPREAD.value: candidate_interval(probs, spread, n),
    }


def find_order(b: int, n: int, config: OrderFindConfig | None = None) -> OrderResult:
    """Determine ``ord_N(b)`` for a unit ``b`` of odd order.

    Args:
        b: the element; its order must be odd (checked only after the fact).
        n: the modulus N >= 3.
        config: walk mode and measurement knobs; full-bound by default.

    Returns:
        An :class:`OrderResult` whose ledger counts every ``W`` application
        and every measurement.

    Raises:
        NotAUnit: ``gcd(b, N) > 1``.
        OrderNotOdd: the decoded order is even, so the premise was violated.
        DecodeFailure: no candidate verified after the walk.
    """
    config = config or OrderFindConfig()
    b %= n
    g, steps = euclid(b, n)
    if g != 1:
        raise NotAUnit(f"{b} is not a unit modulo {n}")
    ledger = StepLedger(digital_ops=steps)

    table = build_power_table(b, n)
    ledger.digital_ops += table.squarings

    if config.repetition_shortcut:
        witness = find_repetition(table)
        if witness is not None:
            multiple = witness.q << witness.power
            order = order_from_multiple(b, multiple, n)
            ledger.digital_ops += _verify_cost(multiple)
            if order % 2 == 0:
                raise OrderNotOdd(f"ord({b}) = {order} is even")
            return OrderResult(order, ledger, DecodePath.REPETITION_SHORTCUT, [order])

    graph = build_cayley_graph(b, n)
    state = WalkState.point_mass(graph)
    state.ledger = ledger
    total = required_steps(n) if config.steps is None else config.steps
    early = config.mode is Mode.EARLY_STOP
    ids = _measure_ids(graph, table, config) if early else []
    tried: list[int] = []

    for m in range(1, total + 1):
        half_lazy_step(state)
        if not early or m % config.check_every or m == total:
            continue
        probs = [measure(state, v) for v in ids]
        brackets = _bracket(probs, m, table.M, n)
        cands = brackets[config.error_bound.value].candidates
        if 1 <= len(cands) <= config.max_candidates:
            tried.extend(cands)
            order = verify_candidates(b, n, cands, ledger)
            if order is not None:
                return _finish(OrderResult(order, ledger, DecodePath.EARLY_STOP_DECODE, tried,
                                           state, brackets, dict(zip(ids, probs))))

    p_e = measure(state, 0)
    cands = decode_order(p_e, n)
    tried.extend(cands)
    order = verify_candidates(b, n, cands, ledger)
    if order is None:
        raise DecodeFailure(f"no verified order near 1/p = {1 / p_e!r} after {total} steps")
    return _finish(OrderResult(order, ledger, DecodePath.FULL_BOUND_DECODE, tried, state,
                               measured={0: p_e}))


def _finish(result: OrderResult) -> OrderResult:
    if result.order % 2 == 0:
        raise OrderNotOdd(f"decoded order {result.order} is even")
    return result
