"""The five-step factoring pipeline, retry driver and exhaustive success-rate evaluator."""

from __future__ import annotations

import enum
import os
import secrets
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cayley import RepetitionWitness, build_power_table, find_repetition
from .diffusion import StepLedger
from .errors import LiftFailure, NotAUnit, ScreenRejected, TooLarge, WitnessInvalid
from .numtheory import (
    ScreenKind,
    euclid,
    exponent_bound,
    factorize,
    gcd,
    mod_pow,
    modpow_cost,
    p_success,
    screen_input,
)
from .orderfind import OrderFindConfig, find_order

RNG_ALGORITHM = "numpy.random.PCG64"
THREADS_ENV = "DIFFUSION_FACTOR_THREADS"
EXHAUSTIVE_LIMIT = 10**5


class Path(enum.Enum):
    STEP1_GCD = "step1"
    STEP3_REPETITION = "step3"
    STEP5_ORDER = "step5"


class NoAnswer(enum.Enum):
    S_ZERO = "s_zero"
    TRIVIAL_GCD = "trivial_gcd"
    ORDER_ODD_AT_STEP5 = "order_odd_at_step5"


@dataclass
class FactorOutcome:
    """Result of one pass through the pipeline for a fixed ``a``.

    Exactly one of ``divisor`` and ``reason`` is set. The optional fields
    record the intermediate quantities of whichever path ran.
    """

    modulus: int
    chosen_a: int
    path: Path
    ledger: StepLedger
    divisor: int | None = None
    reason: NoAnswer | None = None
    witness: RepetitionWitness | None = None
    s: int | None = None
    q: int | None = None
    x: int | None = None
    r_b: int | None = None
    k: int | None = None
    r_a: int | None = None

    @property
    def found(self) -> bool:
        return self.divisor is not None

    @property
    def cofactor(self) -> int | None:
        return None if self.divisor is None else self.modulus // self.divisor

    def as_dict(self) -> dict:
        out = {
            "status": "found" if self.found else "no_answer",
            "divisor": self.divisor,
            "cofactor": self.cofactor,
            "reason": self.reason.value if self.reason else None,
            "path": self.path.value,
            "chosen_a": self.chosen_a,
        }
        if self.witness is not None:
            w = self.witness
            out["repetition"] = {"l": w.l, "l_prime": w.l_prime, "sign": w.sign, "q": w.q}
        for name in ("s", "q", "x", "r_b", "k", "r_a"):
            value = getattr(self, name)
            if value is not None:
                out[name] = value
        return out


def compute_s(a: int, q: int, l_prime: int, n: int) -> int:
    """Least ``s >= 0`` with ``a**(2**s * q) == 1 (mod N)``, searched up to ``l_prime``."""
    x = mod_pow(a, q, n)
    for s in range(l_prime + 1):
        if x == 1:
            return s
        x = x * x % n
    raise WitnessInvalid(f"a^(2^s * {q}) != 1 mod {n} for every s <= {l_prime}")


def square_root_factor(a: int, s: int, q: int, n: int) -> tuple[int, int | None]:
    """Form ``x = a**(2**(s-1) * q)`` and split N with ``gcd(x -+ 1, N)``.

    Returns ``(x, d)`` where ``d`` is the first nontrivial divisor among
    ``gcd(x - 1, N)`` and ``gcd(x + 1, N)``, or None if both are trivial.
    """
    if s < 1:
        raise ValueError("s must be >= 1")
    x = mod_pow(a, q << (s - 1), n)
    assert x * x % n == 1, "x is not a square root of 1"
    assert x != 1, "s was not minimal"
    for d in (gcd((x - 1) % n, n), gcd(x + 1, n)):
        if 1 < d < n:
            return x, d
    return x, None


def lift_order(a: int, r_b: int, n: int) -> tuple[int, int]:
    """Recover ``ord_N(a) = 2**k * r_b`` from ``r_b = ord_N(a**(2**M))``."""
    M = exponent_bound(n)
    x = mod_pow(a, r_b, n)
    for k in range(M + 1):
        if x == 1:
            return k, r_b << k
        x = x * x % n
    raise LiftFailure(f"no k <= {M} with {a}^(2^k * {r_b}) == 1 mod {n}")


def _require_composite(n: int) -> None:
    screen = screen_input(n)
    if screen.kind is not ScreenKind.COMPOSITE:
        raise ScreenRejected(f"{n}: {screen}")


def factor_once(n: int, a: int, order_config: OrderFindConfig | None = None, *,
                screen: bool = True) -> FactorOutcome:
    """Run the five steps once with a fixed choice of ``a`` in ``1..N``.

    Raises:
        ScreenRejected: N is even, prime or a prime power.
    """
    if screen:
        _require_composite(n)
    if not 1 <= a <= n:
        raise ValueError(f"a must lie in 1..{n}")
    ledger = StepLedger()
    out = FactorOutcome(n, a, Path.STEP1_GCD, ledger)

    d, steps = euclid(a, n)
    ledger.digital_ops += steps
    if 1 < d < n:
        out.divisor = d
        return out
    if d == n:
        out.reason = NoAnswer.TRIVIAL_GCD
        return out

    table = build_power_table(a, n)
    ledger.digital_ops += table.squarings
    witness = find_repetition(table)
    if witness is not None:
        out.path = Path.STEP3_REPETITION
        out.witness = witness
        out.q = witness.q
        out.s = compute_s(a, witness.q, witness.power, n)
        ledger.digital_ops += modpow_cost(witness.q) + out.s
        if out.s == 0:
            out.reason = NoAnswer.S_ZERO
            return out
        out.x, out.divisor = square_root_factor(a, out.s, witness.q, n)
        ledger.digital_ops += modpow_cost(witness.q << (out.s - 1))
        if out.divisor is None:
            out.reason = NoAnswer.TRIVIAL_GCD
        return out

    out.path = Path.STEP5_ORDER
    b = table.plus_powers[table.M]
    result = find_order(b, n, order_config)
    ledger.absorb(result.ledger)
    out.r_b = result.order
    out.k, out.r_a = lift_order(a, out.r_b, n)
    ledger.digital_ops += modpow_cost(out.r_b) + out.k
    if out.k == 0:
        out.reason = NoAnswer.ORDER_ODD_AT_STEP5
        return out
    out.s, out.q = out.k, out.r_b
    out.x, out.divisor = square_root_factor(a, out.k, out.r_b, n)
    ledger.digital_ops += modpow_cost(out.r_a // 2)
    if out.divisor is None:
        out.reason = NoAnswer.TRIVIAL_GCD
    return out


@dataclass
class TrialReport:
    modulus: int
    attempts: int
    seed: int
    outcomes: list[FactorOutcome] = field(default_factory=list)
    rng_algorithm: str = RNG_ALGORITHM

    @property
    def success(self) -> int | None:
        for o in self.outcomes:
            if o.found:
                return o.divisor
        return None

    @property
    def empirical_failure_rate(self) -> Fraction | None:
        if not self.outcomes:
            return None
        failed = sum(not o.found for o in self.outcomes)
        return Fraction(failed, len(self.outcomes))

    def ledger(self) -> StepLedger:
        total = StepLedger()
        for o in self.outcomes:
            total.absorb(o.ledger)
        return total


def factor_with_retries(n: int, attempts: int, seed: int | None = None,
                        order_config: OrderFindConfig | None = None) -> TrialReport:
    """Draw ``a`` uniformly from ``1..N`` until a divisor turns up or attempts run out.

    With ``seed=None`` a fresh 64-bit seed is drawn and recorded in the report,
    so every run can be replayed.
    """
    _require_composite(n)
    if attempts < 0:
        raise ValueError("attempts must be nonnegative")
    if seed is None:
        seed = secrets.randbits(64)
    rng = np.random.Generator(np.random.PCG64(seed))
    report = TrialReport(n, attempts, seed)
    for _ in range(attempts):
        a = int(rng.integers(1, n, endpoint=True))
        outcome = factor_once(n, a, order_config, screen=False)
        report.outcomes.append(outcome)
        if outcome.found:
            break
    return report


@dataclass
class SuccessRate:
    modulus: int
    distinct_primes: int
    bound: Fraction
    rate_over_units: Fraction
    rate_over_all: Fraction
    histogram: dict[str, int]
    outcomes: list[FactorOutcome] = field(repr=False, default_factory=list)


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def exhaustive_success_rate(n: int, order_config: OrderFindConfig | None = None,
                            limit: int = EXHAUSTIVE_LIMIT) -> SuccessRate:
    """Run :func:`factor_once` for every ``a`` in ``1..N`` and tally the results.

    Rates are exact fractions. ``rate_over_units`` counts only ``a`` coprime to
    N; ``rate_over_all`` includes the Step-1 gcd hits and ``a = N``.
    """
    if n > limit:
        raise TooLarge(f"{n} exceeds the exhaustive limit {limit}")
    _require_composite(n)

    def run(a):
        return factor_once(n, a, order_config, screen=False)

    threads = _threads()
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            outcomes = list(pool.map(run, range(1, n + 1)))
    else:
        outcomes = [run(a) for a in range(1, n + 1)]

    histogram = Counter()
    units = found_units = found_all = 0
    for o in outcomes:
        key = f"{o.path.value}:{'found' if o.found else o.reason.value}"
        histogram[key] += 1
        found_all += o.found
        if gcd(o.chosen_a, n) == 1:
            units += 1
            found_units += o.found
    m = len(factorize(n))
    return SuccessRate(
        modulus=n,
        distinct_primes=m,
        bound=p_success(m),
        rate_over_units=Fraction(found_units, units),
        rate_over_all=Fraction(found_all, n),
        histogram=dict(sorted(histogram.items())),
        outcomes=outcomes,
    )


def higher_repetition_scan(a: int, n: int, max_weight: int = 3) -> tuple[int, int] | None:
    """Find ``k < l`` with ``a**k == a**l (mod N)`` among short signed binary exponents.

    Exponents are the positive integers ``sum(+-2**t_i)`` with at most
    ``max_weight`` terms and ``t_i`` in ``0..M``. The pair with the smallest
    ``l`` wins. Cost grows like ``(2(M+1))**max_weight``.
    """
    if gcd(a % n, n) != 1:
        raise NotAUnit(f"{a} is not a unit modulo {n}")
    if max_weight < 1:
        raise ValueError("max_weight must be >= 1")
    M = exponent_bound(n)
    steps = [1 << t for t in range(M + 1)]
    steps += [-s for s in steps]
    level = {0}
    exponents = set()
    for _ in range(max_weight):
        level = {e + s for e in level for s in steps}
        exponents |= level
    seen: dict[int, int] = {}
    for e in sorted(x for x in exponents if x > 0):
        value = mod_pow(a, e, n)
        if value in seen:
            return seen[value], e
        seen[value] = e
    return None
