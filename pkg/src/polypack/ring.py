"""Compression base, word capacity and the basic positional codec.

Values in ``[v_min, v_max]`` are shifted by ``v_min`` and treated as
digits of base ``B = v_max - v_min + 1``; as many digits as fit are
stored in each 32-bit word. These functions work on plain Python
integers and are the reference for the vectorised engine in
``polypack._engine``.
"""

from dataclasses import dataclass
from functools import lru_cache

from .errors import CorruptStream, DegenerateBase, EmptyInput, ValueOutOfRange

WORD_MAX = 2**32 - 1  # largest value of an unsigned 32-bit word
WORD_RING = 2**32


@dataclass(frozen=True)
class BaseParams:
    """Value range of a vector: ``v_min``, ``v_max`` and the base ``B``."""

    v_min: int
    v_max: int

    def __post_init__(self):
        if not 0 <= self.v_min <= self.v_max <= WORD_MAX:
            raise ValueOutOfRange(f"invalid range [{self.v_min}, {self.v_max}]")

    @property
    def B(self):
        return self.v_max - self.v_min + 1

    @classmethod
    def from_base(cls, v_min, B):
        return cls(int(v_min), int(v_min) + int(B) - 1)


def derive_base(values):
    """Return the :class:`BaseParams` spanning ``values``."""
    if len(values) == 0:
        raise EmptyInput("cannot derive a base from an empty vector")
    return BaseParams(int(min(values)), int(max(values)))


@lru_cache(maxsize=65536)
def capacity(B, carry_base=1):
    """Largest ``p`` with ``carry_base * B**p <= 2**32 - 1``.

    Exact integer arithmetic; ``carry_base=1`` gives the number of base-B
    digits that fit in an empty word.
    """
    if B < 2:
        raise DegenerateBase(f"base {B} < 2 has no finite capacity")
    if not 1 <= carry_base <= WORD_MAX:
        raise ValueOutOfRange(f"carry base {carry_base} outside [1, 2**32 - 1]")
    p = 0
    acc = carry_base
    while acc <= WORD_MAX // B:  # acc * B <= WORD_MAX without forming the product
        acc *= B
        p += 1
    return p


def _basic_capacity(B):
    if B < 2:
        raise DegenerateBase(f"base {B} < 2: constant data carries no payload")
    p = capacity(B)
    if p == 0:
        raise DegenerateBase(f"base {B} exceeds the word range; store raw words")
    return p


def basic_word_count(B, n):
    p = _basic_capacity(B)
    return -(-n // p)


def pack_basic(values, params):
    """Pack ``values`` p digits per word, first value at ``B**0``."""
    B = params.B
    p = _basic_capacity(B)
    words = []
    for start in range(0, len(values), p):
        word = 0
        scale = 1
        for v in values[start : start + p]:
            v = int(v)
            if not params.v_min <= v <= params.v_max:
                raise ValueOutOfRange(f"value {v} outside [{params.v_min}, {params.v_max}]")
            word += (v - params.v_min) * scale
            scale *= B
        words.append(word)
    return words


def unpack_basic(words, params, n):
    """Inverse of :func:`pack_basic`; returns ``n`` values."""
    B = params.B
    p = _basic_capacity(B)
    if len(words) != -(-n // p):
        raise CorruptStream(f"{len(words)} words cannot hold {n} values at {p} per word")
    out = []
    for j, word in enumerate(words):
        word = int(word)
        if not 0 <= word <= WORD_MAX:
            raise CorruptStream(f"word {word} is not a 32-bit value")
        for _ in range(min(p, n - j * p)):
            word, digit = divmod(word, B)
            out.append(digit + params.v_min)
        if word:
            raise CorruptStream(f"nonzero residue in word {j}")
    return out
