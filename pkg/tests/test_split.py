import pytest
from hypothesis import given
from hypothesis import strategies as st

from polypack.errors import CorruptStream, DegenerateBase
from polypack.ring import BaseParams, capacity
from polypack.split import (
    SplitStep,
    SplitValue,
    advanced_word_count,
    next_step,
    pack_advanced,
    split_schedule,
    step_cycle,
    unpack_advanced,
)

from oracles import WORD_MAX, brute_capacity


def test_schedule_b1000():
    first = next_step(1000, 1)
    assert first == SplitStep(3, 4, 250)
    assert next_step(1000, first.Rp) == SplitStep(2, (2**32 - 1) // (250 * 10**6), 59)
    assert next_step(1000, 250).R == 17


def test_schedule_b100000():
    first = next_step(100000, 1)
    assert first == SplitStep(1, 42949, 3)
    assert next_step(100000, 3) == SplitStep(1, 14316, 7)


def test_schedule_single_value():
    sched = split_schedule(2, 1)
    assert len(sched) == 1
    assert sched.steps[0].final and sched.steps[0].p == 1


def test_schedule_matches_spelled_out_series():
    sched = split_schedule(1000, 5)
    assert sched.steps == (SplitStep(3, 4, 250), SplitStep(1, 1, 1, final=True))
    assert sched.consumed == (0, 4)


def test_schedule_degenerate():
    with pytest.raises(DegenerateBase):
        split_schedule(1, 4)
    with pytest.raises(DegenerateBase):
        split_schedule(2**32, 4)


def test_pack_advanced_b1000():
    # 444 splits against R=4 into r=0, r'=111; word 2 holds r' on top of 555
    assert 0 + 4 * (111 * 10**6 + 222 * 10**3 + 333) == 444889332
    assert 111 * 1000 + 555 == 111555
    words = pack_advanced([111, 222, 333, 444, 555], BaseParams(0, 999))
    assert words == [444889332, 111555]


def test_pack_advanced_b100000():
    assert 24941 + 42949 * 12345 == 530230346
    assert SplitValue.split(67890, 42949) == SplitValue(24941, 1)
    words = pack_advanced([12345, 67890, 99999], BaseParams(0, 99999))
    assert words == [530230346, 199999]
    assert 530230346 % 42949 == 24941


def test_pack_advanced_single():
    assert pack_advanced([17], BaseParams(12, 40)) == [5]


def test_unpack_advanced_examples():
    assert unpack_advanced([444889332, 111555], BaseParams(0, 999), 5) == [111, 222, 333, 444, 555]
    assert unpack_advanced([530230346, 199999], BaseParams(0, 99999), 3) == [12345, 67890, 99999]
    assert unpack_advanced([5], BaseParams(12, 40), 1) == [17]


@pytest.mark.parametrize(
    "words, n",
    [
        ([444889332, 111555, 0], 5),  # too many words
        ([444889332], 5),  # too few
        ([444889332, 250 * 1000 + 555], 5),  # carry >= R'
        ([2**32 - 1, 111555], 5),  # split value beyond the base
        ([444889332, 111555 + 1000 * 1000 * 250], 5),
    ],
)
def test_unpack_advanced_corrupt(words, n):
    with pytest.raises(CorruptStream):
        unpack_advanced(words, BaseParams(0, 999), n)


def test_unpack_advanced_first_word_has_no_carry():
    # a one-word stream whose top holds a nonzero "carry"
    with pytest.raises(CorruptStream):
        unpack_advanced([5 + 29 * 7], BaseParams(0, 28), 1)


@pytest.mark.parametrize("B, n, expected", [(1000, 5, 2), (100000, 3, 2), (2, 1, 1)])
def test_advanced_word_count(B, n, expected):
    assert advanced_word_count(B, n) == expected


bases = st.one_of(
    st.integers(2, 64),
    st.integers(2, 2**32 - 1),
    st.sampled_from([2, 3, 256, 1000, 3200, 43000, 65535, 65536, 65537, 100000, 2**31, 2**32 - 1]),
)


@given(bases, st.integers(1, 3000))
def test_schedule_invariants(B, n):
    sched = split_schedule(B, n)
    carry_base = 1
    consumed = 0
    for step, q in zip(sched.steps, sched.consumed):
        assert q == consumed
        assert step.p <= brute_capacity(B, carry_base)
        if step.final:
            assert n - q == step.p
            consumed += step.p
            break
        assert step.p == brute_capacity(B, carry_base)
        assert step.R * step.Rp >= B
        assert step.R * carry_base * B**step.p <= WORD_MAX < (step.R + 1) * carry_base * B**step.p
        consumed += step.p + 1
        carry_base = step.Rp
    assert consumed == n
    assert sched.steps[-1].final
    assert advanced_word_count(B, n) == len(sched)


@given(bases, st.integers(1, 10**6))
def test_word_count_matches_schedule_length(B, n):
    if n > 20000 and B < 2**16:
        n = n % 20000 + 1
    assert advanced_word_count(B, n) == len(split_schedule(B, n))


@given(bases)
def test_step_cycle_reproduces_series(B):
    steps, start = step_cycle(B)
    carry = 1
    for i in range(len(steps) + 3 * (len(steps) - start)):
        expected = steps[i] if i < len(steps) else steps[start + (i - start) % (len(steps) - start)]
        assert next_step(B, carry) == expected
        carry = expected.Rp


@st.composite
def ranged_vectors(draw):
    B = draw(bases)
    v_min = draw(st.integers(0, 2**32 - B))
    values = draw(st.lists(st.integers(v_min, v_min + B - 1), min_size=1, max_size=300))
    return BaseParams.from_base(v_min, B), values


@given(ranged_vectors())
def test_advanced_round_trip(case):
    params, values = case
    words = pack_advanced(values, params)
    assert len(words) == advanced_word_count(params.B, len(values))
    assert all(0 <= w <= WORD_MAX for w in words)
    assert unpack_advanced(words, params, len(values)) == values


def test_steady_state_b3200():
    n = 10**4
    words = advanced_word_count(3200, n)
    per_word = n / words
    assert 2.6 <= per_word <= 2.76
    assert per_word > capacity(3200) == 2

