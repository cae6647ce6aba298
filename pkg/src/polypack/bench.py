"""Ratio sweeps, byte profiles and wall-clock comparisons.

Ratios use the core accounting of :func:`polypack.blocks.core_ratio`
(per-block headers plus payload, no container header), so they compare
directly across block sizes. Trial ``t`` of a sweep uses seed
``base_seed + t``; ratio columns are therefore reproducible, timing
columns are not.
"""

import csv
import dataclasses
import time
from dataclasses import dataclass

import numpy as np

from .blocks import BlockPlan, CodecPolicy, compress_batch, core_ratio, decompress_batch
from .container import decode_container, encode_container, post_stage
from .errors import RoundTripMismatch
from .synth import generate, read_raw, trial_seed
from .validation import dtype_for_width


@dataclass(frozen=True)
class SweepSpec:
    distribution: object
    block_sizes: tuple
    trials: int = 1
    base_seed: int = 0
    policy: CodecPolicy = CodecPolicy.FORCE_ADVANCED
    width: int = 32

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("a sweep needs at least one trial")
        if any(L < 0 for L in self.block_sizes):
            raise ValueError("block sizes must be >= 0")


@dataclass(frozen=True)
class SweepRow:
    block_len: int
    mean_ratio: float
    stddev_ratio: float
    mean_compress_ns_per_value: float
    mean_decompress_ns_per_value: float


@dataclass(frozen=True)
class SignalRow:
    fraction: float
    signal_count: int
    block_len: int
    mean_ratio: float
    stddev_ratio: float


def _measure(values, plan, width):
    t0 = time.perf_counter_ns()
    packed = compress_batch(values, plan, width)
    t1 = time.perf_counter_ns()
    out = decompress_batch(packed, width)
    t2 = time.perf_counter_ns()
    if not np.array_equal(out, values):
        raise RoundTripMismatch(f"block length {plan.block_len}: decoded vector differs")
    return float(core_ratio(packed, len(values), width)), t1 - t0, t2 - t1


def sweep_block_size(spec):
    """One row per block size, averaged over ``spec.trials`` vectors."""
    L = len(spec.block_sizes)
    ratios = np.zeros((spec.trials, L))
    ns = np.zeros((spec.trials, L, 2))
    for t in range(spec.trials):
        values = generate(spec.distribution, trial_seed(spec.base_seed, t), spec.width)
        for k, size in enumerate(spec.block_sizes):
            r, tc, td = _measure(values, BlockPlan(size, spec.policy), spec.width)
            ratios[t, k] = r
            ns[t, k] = tc, td
    n = spec.distribution.N
    return [
        SweepRow(
            int(size),
            float(ratios[:, k].mean()),
            float(ratios[:, k].std()),
            float(ns[:, k, 0].mean() / n),
            float(ns[:, k, 1].mean() / n),
        )
        for k, size in enumerate(spec.block_sizes)
    ]


def best_row(rows):
    return max(rows, key=lambda row: row.mean_ratio)


def sweep_signal_fraction(
    distribution, fractions, block_len, trials=1, base_seed=0,
    policy=CodecPolicy.FORCE_ADVANCED, width=32,
):
    """Mean ratio as the uniform share ``a / N`` of the vector varies."""
    rows = []
    plan = BlockPlan(block_len, policy)
    for fraction in fractions:
        if not 0 <= fraction <= 1:
            raise ValueError(f"signal fraction {fraction} outside [0, 1]")
        spec = distribution.with_signal(int(round(fraction * distribution.N)))
        ratios = [
            _measure(generate(spec, trial_seed(base_seed, t), width), plan, width)[0]
            for t in range(trials)
        ]
        rows.append(SignalRow(float(fraction), spec.a, block_len, float(np.mean(ratios)), float(np.std(ratios))))
    return rows


def byte_histogram(data):
    """Occurrences of each byte value, as 256 counts."""
    return np.bincount(np.frombuffer(bytes(data), dtype=np.uint8), minlength=256).astype(np.int64)


def chi_square_uniform(counts):
    """Chi-square distance between a byte profile and the flat profile.

    Computed on frequencies, ``sum((f - 1/256)**2 / (1/256))``, so files of
    different lengths compare fairly; 0 means perfectly flat.
    """
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total == 0:
        return 0.0
    f = counts / total
    return float(256.0 * np.sum((f - 1.0 / 256) ** 2))


@dataclass(frozen=True)
class PipelineTiming:
    name: str
    bytes_in: int
    bytes_out: int
    wall_ns_compress: int
    wall_ns_decompress: int

    @property
    def ratio(self):
        return self.bytes_in / self.bytes_out


def time_pipeline(path, plan=BlockPlan(154, CodecPolicy.FORCE_ADVANCED), width=32, post=None, post_inverse=None, name=None):
    """Compress a raw file with the polynomial codec (plus an optional filter).

    The round trip is checked byte for byte before any timing is returned.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    values = read_raw(raw, width)
    t0 = time.perf_counter_ns()
    out = encode_container(values, plan, width)
    if post is not None:
        out = post_stage(out, post)
    t1 = time.perf_counter_ns()
    back = post_stage(out, post_inverse) if post is not None else out
    restored = decode_container(back).values.astype(dtype_for_width(width)).tobytes()
    t2 = time.perf_counter_ns()
    if restored != raw:
        raise RoundTripMismatch(f"{path}: polynomial pipeline did not reproduce the input")
    if name is None:
        name = "poly" if post is None else f"poly+{post}"
    return PipelineTiming(name, len(raw), len(out), t1 - t0, t2 - t1)


def time_external(path, command, inverse_command, name=None):
    """Time an external compressor and its inverse on a raw file."""
    with open(path, "rb") as fh:
        raw = fh.read()
    t0 = time.perf_counter_ns()
    out = post_stage(raw, command)
    t1 = time.perf_counter_ns()
    back = post_stage(out, inverse_command)
    t2 = time.perf_counter_ns()
    if back != raw:
        raise RoundTripMismatch(f"{path}: {command!r} did not round-trip")
    return PipelineTiming(name or str(command), len(raw), len(out), t1 - t0, t2 - t1)


def write_csv(rows, fileobj):
    """Write dataclass rows as CSV with one header row."""
    rows = list(rows)
    if not rows:
        return
    names = [f.name for f in dataclasses.fields(rows[0])]
    writer = csv.DictWriter(fileobj, fieldnames=names, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(dataclasses.asdict(row))


def write_histogram_csv(counts, fileobj):
    writer = csv.writer(fileobj, lineterminator="\n")
    writer.writerow(["byte", "count"])
    for b, c in enumerate(counts):
        writer.writerow([b, int(c)])
