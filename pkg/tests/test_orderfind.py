import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import TEST_MODULI, brute_order, units
from diffusion_factor.diffusion import StepLedger
from diffusion_factor.errors import (
    EmptyMeasurements,
    NonpositiveProbability,
    NotAUnit,
    OrderNotOdd,
)
from diffusion_factor.numtheory import mod_pow
from diffusion_factor.orderfind import (
    DecodePath,
    ErrorBound,
    MeasureSet,
    Mode,
    OrderFindConfig,
    candidate_interval,
    decode_order,
    find_order,
    required_steps,
    verify_candidates,
)

FULL_WALK = OrderFindConfig(repetition_shortcut=False)
EARLY = OrderFindConfig(mode=Mode.EARLY_STOP, repetition_shortcut=False)


@pytest.mark.parametrize("n, steps", [(2, 9), (33, 98), (1363, 347)])
def test_required_steps(n, steps):
    M = n.bit_length()
    assert 4 * (M + 1) * math.log(n) < steps <= 4 * (M + 1) * math.log(n) + 1
    assert required_steps(n) == steps


def test_required_steps_domain():
    with pytest.raises(ValueError):
        required_steps(1)


def test_decode_nearest():
    assert decode_order(1 / 10 + 1 / 33**2, 33) == [10]
    assert decode_order(1 / 10 - 1 / 33**2, 33) == [10]
    assert decode_order(1 / 161, 1363) == [161]


def test_decode_exact_tie():
    # 1/p = 10.5 exactly; no binary float hits a tie, so pass a rational
    assert decode_order(Fraction(2, 21), 33) == [10, 11]


def test_decode_clamps_to_modulus():
    assert decode_order(1e-9, 33) == [33]
    assert decode_order(1.0, 33) == [1]


def test_decode_nonpositive():
    for p in (0.0, -0.1, float("nan")):
        with pytest.raises(NonpositiveProbability):
            decode_order(p, 33)


@given(st.integers(2, 3000), st.data())
@settings(max_examples=100, deadline=None)
def test_distinct_reciprocal_separation(n, data):
    m1 = data.draw(st.integers(1, n - 1))
    m2 = data.draw(st.integers(m1 + 1, n))
    assert Fraction(1, m1) - Fraction(1, m2) >= Fraction(1, n**2)


@given(st.integers(3, 3000).filter(lambda n: n % 2), st.data())
@settings(max_examples=100, deadline=None)
def test_decode_within_tolerance(n, data):
    # an odd order divides the even group exponent, hence r < N/2, and then an
    # error below 1/N^2 moves 1/p by less than 1/2
    r = data.draw(st.integers(1, (n - 1) // 2))
    delta = data.draw(st.floats(-0.99, 0.99)) / n**2
    assert decode_order(1 / r + delta, n) == [r]


def test_decode_tolerance_is_tight_near_n():
    # for r close to N an error of 1/N^2 is not enough on its own
    n, r = 1001, 1000
    assert decode_order(1 / r - 0.99 / n**2, n) != [r]


def test_candidate_interval_example():
    iv = candidate_interval([1 / 161, 1 / 161 + 1e-7], 1e-6, 1363)
    assert 161 in iv.candidates
    assert all(abs(1 / h - 1 / 161) < 3e-6 for h in iv.candidates)


def test_candidate_interval_closed_ends():
    iv = candidate_interval([0.125], 0.0, 33)
    assert list(iv.candidates) == [8]
    assert iv.lower == iv.upper == 0.125


def test_candidate_interval_empty_when_inconsistent():
    iv = candidate_interval([0.1, 0.2], 0.01, 33)
    assert len(iv.candidates) == 0


def test_candidate_interval_clipped():
    iv = candidate_interval([0.5], 0.6, 33)
    assert iv.candidates.start == 1 and iv.candidates[-1] == 33
    assert iv.upper == 1.0 and iv.lower == pytest.approx(1 / 33)


def test_candidate_interval_errors():
    with pytest.raises(EmptyMeasurements):
        candidate_interval([], 0.1, 33)
    with pytest.raises(ValueError):
        candidate_interval([0.1], -0.1, 33)


def test_candidate_interval_dict():
    d = candidate_interval([0.125], 0.0, 33).as_dict()
    assert d["first_candidate"] == d["last_candidate"] == 8
    assert d["count"] == 1


@given(st.lists(st.floats(1e-4, 1.0), min_size=1, max_size=6), st.floats(0, 0.5))
@settings(max_examples=80, deadline=None)
def test_candidate_interval_membership(probs, A):
    n = 10_000
    iv = candidate_interval(probs, A, n)
    lower = max(Fraction(1, n), max(Fraction(p) - Fraction(A) for p in probs))
    upper = min(Fraction(1), min(Fraction(p) + Fraction(A) for p in probs))
    for h in iv.candidates:
        assert lower <= Fraction(1, h) <= upper
    for h in (iv.candidates.start - 1, iv.candidates.stop):
        if 1 <= h <= n:
            assert not lower <= Fraction(1, h) <= upper


def test_verify_candidates_examples():
    assert verify_candidates(5, 33, [9, 10, 11]) == 10
    ledger = StepLedger()
    assert verify_candidates(944, 1363, [160, 161, 162], ledger) == 161
    assert ledger.digital_ops > 0
    assert verify_candidates(944, 1363, [160, 162]) is None


@pytest.mark.parametrize("n", TEST_MODULI)
def test_find_order_sweep(n):
    for b in units(n):
        r = brute_order(b, n)
        if r % 2 == 0:
            continue
        for config in (None, FULL_WALK, EARLY):
            assert find_order(b, n, config).order == r


def test_find_order_full_bound_ledger():
    res = find_order(944, 1363, FULL_WALK)
    assert res.order == 161
    assert res.decode_path is DecodePath.FULL_BOUND_DECODE
    assert res.ledger.matrix_applications == 347
    assert res.ledger.measurements == 1


def test_find_order_early_stop():
    res = find_order(944, 1363, EARLY)
    assert res.order == 161
    assert res.decode_path is DecodePath.EARLY_STOP_DECODE
    assert res.ledger.diffusion_steps == 36
    assert set(res.candidates_tried) <= {160, 161, 162}
    for p in res.measured.values():
        assert 1 / 162 - 1e-12 < p < 1 / 160 + 1e-12


def test_find_order_provable_bound_stops_later():
    cfg = OrderFindConfig(mode=Mode.EARLY_STOP, error_bound=ErrorBound.PROVABLE,
                          repetition_shortcut=False)
    res = find_order(944, 1363, cfg)
    assert res.order == 161
    assert res.ledger.matrix_applications > 25


@pytest.mark.parametrize("ms", list(MeasureSet))
def test_measure_sets(ms):
    cfg = OrderFindConfig(mode=Mode.EARLY_STOP, measure_set=ms, repetition_shortcut=False)
    assert find_order(944, 1363, cfg).order == 161


def test_repetition_shortcut():
    res = find_order(25, 33)
    assert res.order == 5
    assert res.decode_path is DecodePath.REPETITION_SHORTCUT
    assert res.ledger.diffusion_steps == 0


def test_find_order_not_unit():
    with pytest.raises(NotAUnit):
        find_order(11, 33)


def test_find_order_even_order():
    # 2 has order 10 mod 33
    assert mod_pow(2, 10, 33) == 1
    with pytest.raises(OrderNotOdd):
        find_order(2, 33)
    with pytest.raises(OrderNotOdd):
        find_order(2, 33, FULL_WALK)


def test_config_validation():
    for kwargs in ({"check_every": 0}, {"max_candidates": 0}, {"steps": -1}):
        with pytest.raises(ValueError):
            OrderFindConfig(**kwargs)


def test_short_walk_still_verifies_or_fails_loudly():
    # one step is far from uniform; decode gives a wrong h that must not verify
    from diffusion_factor.errors import DecodeFailure

    with pytest.raises(DecodeFailure):
        find_order(944, 1363, OrderFindConfig(repetition_shortcut=False, steps=1))
