"""Lossless polynomial compression for noise-dominated integer sensor data."""

from .blocks import (
    BlockPlan,
    Codec,
    CodecPolicy,
    CompressedBlock,
    PackedBlocks,
    compress_blocked,
    core_ratio,
    decompress_blocked,
)
from .container import decode_container, encode_container, post_stage
from .errors import (
    CorruptStream,
    DegenerateBase,
    EmptyInput,
    InvalidSpec,
    NotAContainer,
    PolypackError,
    PostStageFailed,
    RoundTripMismatch,
    UnsupportedVersion,
    ValueOutOfRange,
)
from .estimator import PolynomialReducer
from .ring import BaseParams, capacity, derive_base, pack_basic, unpack_basic
from .split import advanced_word_count, pack_advanced, split_schedule, unpack_advanced
from .synth import DistributionSpec, generate, sample_stats
from .validation import check_source_vector

__version__ = "0.1.0"

__all__ = [
    "BaseParams",
    "BlockPlan",
    "Codec",
    "CodecPolicy",
    "CompressedBlock",
    "CorruptStream",
    "DegenerateBase",
    "DistributionSpec",
    "EmptyInput",
    "InvalidSpec",
    "NotAContainer",
    "PackedBlocks",
    "PolynomialReducer",
    "PolypackError",
    "PostStageFailed",
    "RoundTripMismatch",
    "UnsupportedVersion",
    "ValueOutOfRange",
    "advanced_word_count",
    "capacity",
    "check_source_vector",
    "compress_blocked",
    "core_ratio",
    "decode_container",
    "decompress_blocked",
    "derive_base",
    "encode_container",
    "generate",
    "pack_advanced",
    "pack_basic",
    "post_stage",
    "sample_stats",
    "split_schedule",
    "unpack_advanced",
    "unpack_basic",
]
