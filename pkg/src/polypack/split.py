"""Split-base codec: gap-free packing with bases carried across words.

Each non-final word holds ``p_i`` full base-B digits (highest exponent
first) plus the low part ``r`` of one more value, split against a base
``R_i``; the high part ``r'`` (base ``R'_i``) sits at the top of the next
word. The sequence of ``(p_i, R_i, R'_i)`` depends on ``B`` and the
previous ``R'`` only, so packer and unpacker derive it independently.
"""

from dataclasses import dataclass
from functools import lru_cache

from .errors import CorruptStream, DegenerateBase, EmptyInput, ValueOutOfRange
from .ring import WORD_MAX, capacity


@dataclass(frozen=True)
class SplitStep:
    """Layout of one packed word.

    ``p`` is the number of full digits stored in the word. For a non-final
    word ``R`` is the low split base and ``Rp`` the high split base carried
    into the next word. The final word stores no split value and has
    ``R = Rp = 1``.
    """

    p: int
    R: int
    Rp: int
    final: bool = False


@dataclass(frozen=True)
class SplitValue:
    r: int
    rp: int

    @classmethod
    def split(cls, value, R):
        rp, r = divmod(value, R)
        return cls(r, rp)

    def join(self, R):
        return self.rp * R + self.r


@dataclass(frozen=True)
class SplitSchedule:
    B: int
    n: int
    steps: tuple
    consumed: tuple  # values consumed before each step (q_i)

    def __len__(self):
        return len(self.steps)


def _check_base(B):
    if B < 2:
        raise DegenerateBase(f"base {B} < 2: constant data carries no payload")
    if capacity(B) == 0:
        raise DegenerateBase(f"base {B} exceeds the word range; store raw words")


def next_step(B, carry_base):
    """Non-final step ``(p, R, R')`` following a carry of base ``carry_base``."""
    p = capacity(B, carry_base)
    R = WORD_MAX // (carry_base * B**p)
    return SplitStep(p, R, -(-B // R))


@lru_cache(maxsize=65536)
def step_cycle(B):
    """Non-final steps from ``R'_0 = 1`` until the carry base repeats.

    Returns ``(steps, start)``: the schedule continues forever as
    ``steps[:start]`` followed by ``steps[start:]`` repeated.
    """
    _check_base(B)
    seen = {}
    steps = []
    carry = 1
    while carry not in seen:
        seen[carry] = len(steps)
        step = next_step(B, carry)
        steps.append(step)
        carry = step.Rp
    return tuple(steps), seen[carry]


def split_schedule(B, n):
    """Word layouts needed to pack ``n`` values of base ``B``."""
    _check_base(B)
    if n < 1:
        raise EmptyInput("schedule needs at least one value")
    steps, consumed = [], []
    carry, q = 1, 0
    while True:
        step = next_step(B, carry)
        consumed.append(q)
        if n - q <= step.p:
            steps.append(SplitStep(n - q, 1, 1, final=True))
            return SplitSchedule(B, n, tuple(steps), tuple(consumed))
        steps.append(step)
        q += step.p + 1
        carry = step.Rp


def advanced_word_count(B, n):
    """Number of words :func:`pack_advanced` emits, without packing."""
    steps, start = step_cycle(B)
    if n < 1:
        raise EmptyInput("word count needs at least one value")
    words, remaining = 0, n
    cycle = steps[start:]
    per_cycle = sum(s.p + 1 for s in cycle)
    max_p = max(s.p for s in steps)
    i = 0
    while True:
        if i == len(steps):
            skip = max(0, (remaining - max_p) // per_cycle - 1)
            words += skip * len(cycle)
            remaining -= skip * per_cycle
            i = start
        step = steps[i]
        words += 1
        if remaining <= step.p:
            return words
        remaining -= step.p + 1
        i += 1


def pack_advanced(values, params):
    """Pack ``values`` with split bases; returns a list of word values."""
    B = params.B
    n = len(values)
    offsets = []
    for v in values:
        v = int(v)
        if not params.v_min <= v <= params.v_max:
            raise ValueOutOfRange(f"value {v} outside [{params.v_min}, {params.v_max}]")
        offsets.append(v - params.v_min)
    schedule = split_schedule(B, n)
    words = []
    carry = 0
    for step, q in zip(schedule.steps, schedule.consumed):
        acc = carry
        for k in range(step.p):
            acc = acc * B + offsets[q + k]
        if step.final:
            words.append(acc)
        else:
            part = SplitValue.split(offsets[q + step.p], step.R)
            words.append(part.r + step.R * acc)
            carry = part.rp
    return words


def unpack_advanced(words, params, n):
    """Inverse of :func:`pack_advanced`; returns ``n`` values."""
    B = params.B
    schedule = split_schedule(B, n)
    if len(words) != len(schedule):
        raise CorruptStream(f"expected {len(schedule)} words for {n} values, got {len(words)}")
    out = [0] * n
    prev = SplitStep(0, 1, 1)  # R'_0 = 1
    pending = None  # (position, low part) of the value split in the previous word
    for i, (step, q, word) in enumerate(zip(schedule.steps, schedule.consumed, words)):
        word = int(word)
        if not 0 <= word <= WORD_MAX:
            raise CorruptStream(f"word {i} is not a 32-bit value")
        r, t = (0, word) if step.final else (word % step.R, word // step.R)
        for k in range(step.p - 1, -1, -1):
            t, out[q + k] = divmod(t, B)
        if t >= prev.Rp:
            raise CorruptStream(f"carry {t} in word {i} exceeds its base {prev.Rp}")
        if pending is not None:
            pos, low = pending
            value = SplitValue(low, t).join(prev.R)
            if value >= B:
                raise CorruptStream(f"split value {value} in word {i - 1} exceeds base {B}")
            out[pos] = value
        if not step.final:
            pending = (q + step.p, r)
            prev = step
    return [v + params.v_min for v in out]
