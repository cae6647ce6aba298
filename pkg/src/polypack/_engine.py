"""Vectorised packing of many blocks at once.

Every block is described by its codec, base and length. A block's word
layout (digits per word, split base, offset of the first digit) depends
only on ``(codec, B, n)``, so layouts are computed once per distinct key
and expanded to a flat per-word table. Packing and unpacking are then a
handful of masked numpy passes over all words, with at most 32 passes
for the digits.

All arithmetic is exact in uint64: an accumulator is always below
``2**32`` before being multiplied by a base ``<= 2**32``.
"""

from functools import lru_cache

import numpy as np

from .errors import CorruptStream
from .ring import WORD_RING, capacity
from .split import step_cycle

# codec ids, mirrored by blocks.Codec
RAW, CONSTANT, BASIC, ADVANCED = 0, 1, 2, 3

_CHUNK_VALUES = 1 << 21


def _readonly(*arrays):
    for a in arrays:
        a.setflags(write=False)
    return arrays


@lru_cache(maxsize=65536)
def advanced_layout(B, n):
    """``(digits, R, q)`` per word of a split-base block; final word has R = 1."""
    steps, start = step_cycle(B)
    p = np.array([s.p for s in steps], dtype=np.int64)
    R = np.array([s.R for s in steps], dtype=np.uint64)
    head = int((p[:start] + 1).sum())
    per_cycle = int((p[start:] + 1).sum())
    reps = max(0, -(-(n + 1 - head) // per_cycle)) + 1
    p = np.concatenate([p[:start], np.tile(p[start:], reps)])
    R = np.concatenate([R[:start], np.tile(R[start:], reps)])
    q = np.zeros(len(p), dtype=np.int64)
    np.cumsum(p[:-1] + 1, out=q[1:])
    f = int(np.argmax(n - q <= p))
    digits = p[: f + 1].copy()
    digits[f] = n - q[f]
    R = R[: f + 1].copy()
    R[f] = 1
    return _readonly(digits, R, q[: f + 1].copy())


@lru_cache(maxsize=65536)
def basic_layout(B, n):
    """``(digits, R, q)`` per word of a positional block (RAW uses p = 1)."""
    p = capacity(B) if B < WORD_RING else 1
    count = -(-n // p)
    q = np.arange(count, dtype=np.int64) * p
    digits = np.minimum(p, n - q)
    return _readonly(digits, np.ones(count, dtype=np.uint64), q)


def word_counts(codecs, bases, lengths):
    out = np.zeros(len(codecs), dtype=np.int64)
    for i, (c, B, n) in enumerate(zip(codecs.tolist(), bases.tolist(), lengths.tolist())):
        if c != CONSTANT:
            out[i] = len(_layout(c, B, n)[0])
    return out


def _layout(codec, B, n):
    if codec == ADVANCED:
        return advanced_layout(B, n)
    if codec == RAW:
        return basic_layout(WORD_RING, n)
    return basic_layout(B, n)


class _WordTable:
    """Flat per-word layout for a run of blocks."""

    def __init__(self, codecs, bases, lengths, value_starts):
        keys = np.stack([codecs.astype(np.int64), bases.astype(np.int64), lengths], axis=1)
        uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        parts = [_layout(int(c), int(B), int(n)) if c != CONSTANT else _EMPTY for c, B, n in uniq]
        sizes = np.array([len(d) for d, _, _ in parts], dtype=np.int64)
        offsets = np.zeros(len(parts), dtype=np.int64)
        np.cumsum(sizes[:-1], out=offsets[1:])
        t_digits = np.concatenate([d for d, _, _ in parts])
        t_R = np.concatenate([r for _, r, _ in parts])
        t_q = np.concatenate([q for _, _, q in parts])
        self.counts = sizes[inverse]
        n_words = int(self.counts.sum())
        block = np.repeat(np.arange(len(codecs)), self.counts)
        first = np.zeros(len(codecs), dtype=np.int64)
        np.cumsum(self.counts[:-1], out=first[1:])
        table_idx = offsets[inverse][block] + (np.arange(n_words) - first[block])
        self.block = block
        self.first = first
        self.digits = t_digits[table_idx]
        self.R = t_R[table_idx]
        self.start = value_starts[block] + t_q[table_idx]
        codec_w = codecs[block]
        base_w = bases.astype(np.uint64)[block]
        base_w[codec_w == RAW] = WORD_RING
        self.B = base_w
        self.big_endian = codec_w == ADVANCED
        # every advanced word but the last of its block ends with a split value;
        # R alone cannot tell, since a split base may legitimately be 1
        self.split = self.big_endian.copy()
        last = (first + self.counts - 1)[self.counts > 0]
        self.split[last] = False

    def digit_index(self, j):
        """Value index of the j-th Horner digit (most significant first)."""
        mask = self.digits > j
        d = self.digits[mask]
        k = np.where(self.big_endian[mask], j, d - 1 - j)
        return mask, self.start[mask] + k


_EMPTY = _readonly(np.zeros(0, np.int64), np.zeros(0, np.uint64), np.zeros(0, np.int64))


def _chunks(lengths):
    """Slices of consecutive blocks holding about _CHUNK_VALUES values each."""
    bounds = np.cumsum(lengths)
    lo = 0
    while lo < len(lengths):
        base = bounds[lo - 1] if lo else 0
        hi = int(np.searchsorted(bounds, base + _CHUNK_VALUES, side="right"))
        hi = max(hi, lo + 1)
        yield lo, hi
        lo = hi


def pack(offsets, codecs, bases, lengths):
    """Pack per-block offset values; returns ``(word_counts, words)``."""
    counts, out = [], []
    value_starts = np.zeros(len(lengths), dtype=np.int64)
    np.cumsum(lengths[:-1], out=value_starts[1:])
    for lo, hi in _chunks(lengths):
        v0 = value_starts[lo]
        v = offsets[v0 : v0 + int(lengths[lo:hi].sum())].astype(np.uint64)
        t = _WordTable(codecs[lo:hi], bases[lo:hi], lengths[lo:hi], value_starts[lo:hi] - v0)
        counts.append(t.counts)
        out.append(_pack_table(t, v))
    return np.concatenate(counts), np.concatenate(out).astype(np.uint32)


def _pack_table(t, v):
    n_words = len(t.digits)
    r = np.zeros(n_words, dtype=np.uint64)
    acc = np.zeros(n_words, dtype=np.uint64)
    s = np.flatnonzero(t.split)
    if len(s):
        sv = v[t.start[s] + t.digits[s]]
        R = t.R[s]
        r[s] = sv % R
        acc[s + 1] = sv // R  # the carry opens the next word of the same block
    dmax = int(t.digits.max()) if n_words else 0
    for j in range(dmax):
        mask, idx = t.digit_index(j)
        acc[mask] = acc[mask] * t.B[mask] + v[idx]
    return r + t.R * acc


def unpack(words, word_counts, codecs, bases, lengths):
    """Inverse of :func:`pack`; returns the per-value offsets (uint64)."""
    out = np.zeros(int(lengths.sum()), dtype=np.uint64)
    value_starts = np.zeros(len(lengths), dtype=np.int64)
    np.cumsum(lengths[:-1], out=value_starts[1:])
    word_starts = np.zeros(len(lengths), dtype=np.int64)
    np.cumsum(word_counts[:-1], out=word_starts[1:])
    for lo, hi in _chunks(lengths):
        v0 = value_starts[lo]
        t = _WordTable(codecs[lo:hi], bases[lo:hi], lengths[lo:hi], value_starts[lo:hi] - v0)
        bad = np.flatnonzero(t.counts != word_counts[lo:hi])
        if len(bad):
            b = lo + int(bad[0])
            raise CorruptStream(
                f"block {b}: expected {t.counts[bad[0]]} words for "
                f"{lengths[b]} values, found {word_counts[b]}"
            )
        w0 = word_starts[lo]
        w = words[w0 : w0 + int(t.counts.sum())].astype(np.uint64)
        chunk = out[v0 : v0 + int(lengths[lo:hi].sum())]
        try:
            _unpack_table(t, w, chunk)
        except CorruptStream as exc:
            raise CorruptStream(f"blocks {lo}..{hi}: {exc}") from None
    return out


def _unpack_table(t, w, out):
    n_words = len(w)
    r = np.zeros(n_words, dtype=np.uint64)
    rest = w.copy()
    s = np.flatnonzero(t.split)
    r[s] = w[s] % t.R[s]
    rest[s] = w[s] // t.R[s]
    dmax = int(t.digits.max()) if n_words else 0
    # digits come out least significant first, i.e. in reverse Horner order
    for j in range(dmax):
        mask = t.digits > j
        d = t.digits[mask]
        k = np.where(t.big_endian[mask], d - 1 - j, j)
        base = t.B[mask]
        out[t.start[mask] + k] = rest[mask] % base
        rest[mask] //= base
    # what is left is the carry of an advanced word and must be zero otherwise
    carried = np.zeros(n_words, dtype=bool)
    carried[s + 1] = True
    if np.any(rest[~carried]):
        i = int(np.flatnonzero(rest * ~carried)[0])
        raise CorruptStream(f"nonzero residue {rest[i]} in word {i}")
    if len(s):
        carry = rest[s + 1]
        B = t.B[s]
        limit = -(-B // t.R[s])
        if np.any(carry >= limit):
            i = int(s[np.argmax(carry >= limit)]) + 1
            raise CorruptStream(f"carry {rest[i]} in word {i} exceeds its base")
        sv = carry * t.R[s] + r[s]
        if np.any(sv >= B):
            i = int(s[np.argmax(sv >= B)])
            raise CorruptStream(f"split value in word {i} exceeds the base")
        out[t.start[s] + t.digits[s]] = sv
