"""Synthetic sensor data: Gaussian white noise mixed with a uniform signal.

Samples come from ``numpy.random.Generator`` on a PCG64 bit generator
seeded with the given 64-bit seed. The draw order is fixed: ``N - a``
normal deviates (ziggurat), then ``a`` uniform integers, then the ``a``
signal positions, so a given (spec, seed) always yields the same vector.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInput, InvalidSpec, ValueOutOfRange
from .validation import check_width, dtype_for_width


@dataclass(frozen=True)
class DistributionSpec:
    """Mixture of ``N - a`` samples of N(mu, sigma) and ``a`` of U[x, y]."""

    mu: float
    sigma: float
    x: int
    y: int
    a: int
    N: int

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidSpec(f"sigma must be positive, got {self.sigma}")
        if not 0 <= self.a <= self.N:
            raise InvalidSpec(f"signal count {self.a} outside [0, {self.N}]")
        if not 0 <= self.x <= self.y:
            raise InvalidSpec(f"uniform range [{self.x}, {self.y}] is invalid")

    def with_signal(self, a):
        return DistributionSpec(self.mu, self.sigma, self.x, self.y, a, self.N)


def _round_half_away(x):
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


def generate(spec, seed=0, width=32, return_mask=False):
    """Draw one vector from ``spec``.

    Normal samples are rounded to the nearest integer (halves away from
    zero) and clamped to the representable range. With ``return_mask``
    a boolean array marking the uniform (signal) samples is returned too.
    """
    width = check_width(width)
    top = 2**width - 1
    if spec.y > top:
        raise ValueOutOfRange(f"signal bound {spec.y} does not fit in {width} bits")
    rng = np.random.Generator(np.random.PCG64(int(seed)))
    noise = rng.normal(spec.mu, spec.sigma, spec.N - spec.a)
    signal = rng.integers(spec.x, spec.y, size=spec.a, endpoint=True)
    positions = rng.choice(spec.N, size=spec.a, replace=False) if spec.a else np.zeros(0, np.int64)
    mask = np.zeros(spec.N, dtype=bool)
    mask[positions] = True
    out = np.empty(spec.N, dtype=dtype_for_width(width))
    out[~mask] = np.clip(_round_half_away(noise), 0, top)
    out[positions] = signal
    if return_mask:
        return out, mask
    return out


def trial_seed(base_seed, trial):
    """Seed of trial ``trial`` in a sweep started from ``base_seed``."""
    return (int(base_seed) + int(trial)) % 2**64


@dataclass(frozen=True)
class SampleStats:
    min: int
    max: int
    mean: float
    stddev: float


def sample_stats(values):
    arr = np.asarray(values)
    if arr.size == 0:
        raise EmptyInput("no samples")
    return SampleStats(int(arr.min()), int(arr.max()), float(arr.mean()), float(arr.std()))


def write_raw(values, fileobj, width=32):
    """Write headerless little-endian integers of ``width`` bits."""
    fileobj.write(np.asarray(values).astype(dtype_for_width(width)).tobytes())


def read_raw(data, width=32):
    """Parse headerless little-endian integers from ``bytes``."""
    itemsize = check_width(width) // 8
    if len(data) % itemsize:
        raise ValueOutOfRange(f"{len(data)} bytes is not a multiple of {itemsize}")
    return np.frombuffer(data, dtype=dtype_for_width(width))
