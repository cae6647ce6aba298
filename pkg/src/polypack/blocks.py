"""Blocked compression: independent per-block bases and codec selection."""

from dataclasses import dataclass, field
from enum import IntEnum
from fractions import Fraction

import numpy as np

from . import _engine
from .errors import CorruptStream, EmptyInput, ValueOutOfRange
from .ring import WORD_RING
from .split import advanced_word_count
from .validation import check_source_vector, dtype_for_width

BLOCK_HEADER_BYTES = 16  # v_min, B - 1, value count, word count


class Codec(IntEnum):
    RAW = _engine.RAW
    CONSTANT = _engine.CONSTANT
    BASIC = _engine.BASIC
    ADVANCED = _engine.ADVANCED


class CodecPolicy(IntEnum):
    FORCE_BASIC = 0
    FORCE_ADVANCED = 1
    AUTO = 2

    @classmethod
    def parse(cls, value):
        """Accept a policy, its integer id, or ``basic``/``advanced``/``auto``."""
        if isinstance(value, str):
            names = {"basic": cls.FORCE_BASIC, "advanced": cls.FORCE_ADVANCED, "auto": cls.AUTO}
            try:
                return names[value.lower()]
            except KeyError:
                raise ValueError(f"unknown codec policy {value!r}") from None
        return cls(value)


@dataclass(frozen=True)
class BlockPlan:
    """Block length (0 = whole vector) and codec policy."""

    block_len: int = 0
    policy: CodecPolicy = CodecPolicy.AUTO

    def __post_init__(self):
        if self.block_len < 0:
            raise ValueError(f"block length must be >= 0, got {self.block_len}")
        object.__setattr__(self, "policy", CodecPolicy.parse(self.policy))

    def effective_len(self, n):
        return self.block_len or n


@dataclass
class CompressedBlock:
    codec: Codec
    v_min: int
    b_minus_1: int
    n_values: int
    words: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.uint32))

    @property
    def B(self):
        return self.b_minus_1 + 1

    def __eq__(self, other):
        if not isinstance(other, CompressedBlock):
            return NotImplemented
        return (
            (self.codec, self.v_min, self.b_minus_1, self.n_values)
            == (other.codec, other.v_min, other.b_minus_1, other.n_values)
            and np.array_equal(self.words, other.words)
        )


@dataclass
class PackedBlocks:
    """Column-wise form of a sequence of compressed blocks.

    ``words`` holds the payloads of all blocks back to back; block ``i``
    owns ``word_counts[i]`` of them.
    """

    codecs: np.ndarray
    v_min: np.ndarray
    b_minus_1: np.ndarray
    n_values: np.ndarray
    word_counts: np.ndarray
    words: np.ndarray

    def __len__(self):
        return len(self.codecs)

    @property
    def n_elements(self):
        return int(self.n_values.sum())

    @property
    def word_starts(self):
        starts = np.zeros(len(self), dtype=np.int64)
        np.cumsum(self.word_counts[:-1], out=starts[1:])
        return starts

    def block(self, i):
        start = int(self.word_starts[i])
        return CompressedBlock(
            Codec(int(self.codecs[i])),
            int(self.v_min[i]),
            int(self.b_minus_1[i]),
            int(self.n_values[i]),
            self.words[start : start + int(self.word_counts[i])].copy(),
        )

    def to_blocks(self):
        return [self.block(i) for i in range(len(self))]

    def select(self, start, stop):
        """Blocks ``[start, stop)`` as a new :class:`PackedBlocks`."""
        ws = self.word_starts
        w0 = int(ws[start]) if start < len(self) else len(self.words)
        w1 = int(ws[stop]) if stop < len(self) else len(self.words)
        return PackedBlocks(
            self.codecs[start:stop],
            self.v_min[start:stop],
            self.b_minus_1[start:stop],
            self.n_values[start:stop],
            self.word_counts[start:stop],
            self.words[w0:w1],
        )

    @classmethod
    def from_blocks(cls, blocks):
        blocks = list(blocks)
        words = [np.asarray(b.words, dtype=np.uint32) for b in blocks]
        return cls(
            np.array([int(b.codec) for b in blocks], dtype=np.int64),
            np.array([b.v_min for b in blocks], dtype=np.int64),
            np.array([b.b_minus_1 for b in blocks], dtype=np.int64),
            np.array([b.n_values for b in blocks], dtype=np.int64),
            np.array([len(w) for w in words], dtype=np.int64),
            np.concatenate(words) if words else np.zeros(0, dtype=np.uint32),
        )

    def compressed_bytes(self, header_bytes=BLOCK_HEADER_BYTES):
        return header_bytes * len(self) + 4 * len(self.words)


def block_lengths(n, block_len):
    """Lengths of the blocks covering ``n`` values (last one may be short)."""
    size = block_len or n
    full, tail = divmod(n, size)
    lengths = np.full(full + (tail > 0), size, dtype=np.int64)
    if tail:
        lengths[-1] = tail
    return lengths


def select_codecs(bases, lengths, policy):
    """Codec id per block for the given bases, block lengths and policy."""
    policy = CodecPolicy.parse(policy)
    codecs = np.full(len(bases), Codec.ADVANCED, dtype=np.int64)
    if policy == CodecPolicy.FORCE_BASIC:
        codecs[:] = Codec.BASIC
    packable = (bases > 1) & (bases < WORD_RING)
    if policy == CodecPolicy.AUTO:
        for i in np.flatnonzero(packable):
            B, n = int(bases[i]), int(lengths[i])
            # analytic sizes; ties go to the split-base codec
            if len(_engine.basic_layout(B, n)[0]) < advanced_word_count(B, n):
                codecs[i] = Codec.BASIC
    codecs[bases == 1] = Codec.CONSTANT
    codecs[bases >= WORD_RING] = Codec.RAW
    return codecs


def compress_batch(values, plan=BlockPlan(), width=None):
    """Compress ``values`` into a :class:`PackedBlocks`."""
    values = check_source_vector(values, width)
    n = len(values)
    lengths = block_lengths(n, plan.block_len)
    starts = np.zeros(len(lengths), dtype=np.int64)
    np.cumsum(lengths[:-1], out=starts[1:])
    v_min = np.minimum.reduceat(values, starts).astype(np.int64)
    v_max = np.maximum.reduceat(values, starts).astype(np.int64)
    bases = v_max - v_min + 1
    codecs = select_codecs(bases, lengths, plan.policy)
    offsets = values.astype(np.uint64) - np.repeat(v_min, lengths).astype(np.uint64)
    word_counts, words = _engine.pack(offsets, codecs, bases, lengths)
    return PackedBlocks(codecs, v_min, bases - 1, lengths, word_counts, words)


def decompress_batch(packed, width=32):
    """Inverse of :func:`compress_batch`."""
    codecs = np.asarray(packed.codecs, dtype=np.int64)
    known = np.isin(codecs, [int(c) for c in Codec])
    if not np.all(known):
        raise CorruptStream(f"unknown codec id {codecs[~known][0]}")
    v_min = np.asarray(packed.v_min, dtype=np.int64)
    bases = np.asarray(packed.b_minus_1, dtype=np.int64) + 1
    lengths = np.asarray(packed.n_values, dtype=np.int64)
    if np.any(lengths < 1):
        raise CorruptStream("block with no values")
    _check_block_headers(codecs, v_min, bases)
    offsets = _engine.unpack(
        np.asarray(packed.words, dtype=np.uint32),
        np.asarray(packed.word_counts, dtype=np.int64),
        codecs,
        bases,
        lengths,
    )
    values = offsets + np.repeat(v_min, lengths).astype(np.uint64)
    if len(values) and int(values.max()) >= 2**width:
        raise CorruptStream(f"decoded value does not fit in {width} bits")
    return values.astype(dtype_for_width(width))


def _check_block_headers(codecs, v_min, bases):
    const = codecs == Codec.CONSTANT
    if np.any(bases[const] != 1):
        raise CorruptStream("constant block with a nonzero range")
    if np.any(bases[~const] < 2):
        raise CorruptStream("packed block with a base below 2")
    raw = codecs == Codec.RAW
    if np.any(bases[raw] != WORD_RING) or np.any(bases[~raw] >= WORD_RING):
        raise CorruptStream("raw storage is only valid for the full 32-bit range")
    if np.any(v_min + bases - 1 >= WORD_RING) or np.any(v_min < 0):
        raise CorruptStream("block range exceeds 32 bits")


def compress_blocked(values, plan=BlockPlan(), width=None):
    """Compress ``values`` into a list of :class:`CompressedBlock`."""
    return compress_batch(values, plan, width).to_blocks()


def decompress_blocked(blocks, width=32):
    if isinstance(blocks, PackedBlocks):
        return decompress_batch(blocks, width)
    blocks = list(blocks)
    if not blocks:
        raise EmptyInput("no blocks to decompress")
    return decompress_batch(PackedBlocks.from_blocks(blocks), width)


def core_ratio(blocks, n, width_bits, header_bytes=BLOCK_HEADER_BYTES):
    """Uncompressed bytes over per-block headers plus payload words."""
    if isinstance(blocks, PackedBlocks):
        compressed = blocks.compressed_bytes(header_bytes)
    else:
        compressed = sum(header_bytes + 4 * len(b.words) for b in blocks)
    if width_bits % 8:
        raise ValueOutOfRange(f"width {width_bits} is not a whole number of bytes")
    return Fraction(n * width_bits // 8, compressed)


__all__ = [
    "BLOCK_HEADER_BYTES",
    "BlockPlan",
    "Codec",
    "CodecPolicy",
    "CompressedBlock",
    "PackedBlocks",
    "block_lengths",
    "compress_batch",
    "compress_blocked",
    "core_ratio",
    "decompress_batch",
    "decompress_blocked",
    "select_codecs",
]
