"""On-disk container for compressed vectors and matrices.

Layout (all integers little-endian)::

    offset  size  field
    0       4     magic "PLYC"
    4       1     version (1)
    5       1     layout (0 = vector, 1 = matrix)
    6       1     element width in bits (8, 16, 32)
    7       1     codec policy
    8       8     number of elements
    16      4     block length (0 = whole vector)
    20      4     number of blocks
    24      4     rows      (matrix only)
    28      4     columns   (matrix only)

followed by one record per block::

    codec id, v_min, B - 1, word count   (4 bytes each)
    payload                               (word count x 4 bytes)

A block's value count follows from the block length and its position,
so any block can be located by walking the 16-byte record headers
without decoding payloads.
"""

import shlex
import struct
import subprocess
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .blocks import BLOCK_HEADER_BYTES, BlockPlan, CodecPolicy, PackedBlocks, block_lengths
from .blocks import compress_batch, core_ratio, decompress_batch
from .errors import CorruptStream, EmptyInput, NotAContainer, PostStageFailed, UnsupportedVersion
from .validation import WIDTHS, check_source_vector, check_width, infer_width

MAGIC = b"PLYC"
VERSION = 1

_HEADER = struct.Struct("<4sBBBBQII")
_MATRIX_EXTRA = struct.Struct("<II")
_RECORD = struct.Struct("<IIII")


class Layout(IntEnum):
    VECTOR = 0
    MATRIX = 1


@dataclass(frozen=True)
class ContainerHeader:
    layout: Layout
    width_bits: int
    policy: CodecPolicy
    n_elements: int
    block_len: int
    n_blocks: int
    n_rows: int = 0
    n_cols: int = 0
    version: int = VERSION

    @property
    def size(self):
        return _HEADER.size + (_MATRIX_EXTRA.size if self.layout == Layout.MATRIX else 0)

    @property
    def shape(self):
        if self.layout == Layout.MATRIX:
            return (self.n_rows, self.n_cols)
        return (self.n_elements,)

    def encode(self):
        head = _HEADER.pack(
            MAGIC,
            self.version,
            self.layout,
            self.width_bits,
            self.policy,
            self.n_elements,
            self.block_len,
            self.n_blocks,
        )
        if self.layout == Layout.MATRIX:
            head += _MATRIX_EXTRA.pack(self.n_rows, self.n_cols)
        return head

    @classmethod
    def decode(cls, data):
        if len(data) < 4 or bytes(data[:4]) != MAGIC:
            raise NotAContainer("missing PLYC magic")
        if len(data) < _HEADER.size:
            raise CorruptStream("truncated container header")
        _, version, layout, width, policy, n, block_len, n_blocks = _HEADER.unpack_from(data)
        if version != VERSION:
            raise UnsupportedVersion(f"container version {version} is not supported")
        try:
            layout = Layout(layout)
            policy = CodecPolicy(policy)
        except ValueError as exc:
            raise CorruptStream(str(exc)) from None
        if width not in WIDTHS:
            raise CorruptStream(f"invalid element width {width}")
        rows = cols = 0
        if layout == Layout.MATRIX:
            if len(data) < _HEADER.size + _MATRIX_EXTRA.size:
                raise CorruptStream("truncated matrix header")
            rows, cols = _MATRIX_EXTRA.unpack_from(data, _HEADER.size)
            if rows * cols != n:
                raise CorruptStream(f"matrix {rows}x{cols} does not hold {n} elements")
        if n == 0:
            raise CorruptStream("container holds no elements")
        expected = -(-n // (block_len or n))
        if n_blocks != expected:
            raise CorruptStream(f"{n_blocks} blocks cannot cover {n} elements of block length {block_len}")
        return cls(layout, width, policy, n, block_len, n_blocks, rows, cols, version)


@dataclass
class Decoded:
    """Result of decoding a container (or a run of its blocks)."""

    header: ContainerHeader
    values: np.ndarray
    first_block: int = 0
    first_element: int = 0


def encode_container(data, plan=None, width=None):
    """Serialise a vector (1-D) or matrix (2-D, rows = time samples).

    Without a ``plan`` a vector is compressed whole and a matrix one row
    per block, both with the automatic codec choice.
    """
    arr = np.asarray(data) if not isinstance(data, np.ndarray) else data
    if width is None:
        width = infer_width(arr)
    width = check_width(width)
    if arr.ndim == 2:
        rows, cols = arr.shape
        layout = Layout.MATRIX
        if plan is None:
            plan = BlockPlan(cols)
    elif arr.ndim == 1:
        rows = cols = 0
        layout = Layout.VECTOR
        if plan is None:
            plan = BlockPlan()
    else:
        raise ValueError(f"expected a vector or a matrix, got {arr.ndim} dimensions")
    if arr.size == 0:
        raise EmptyInput("nothing to encode")
    values = check_source_vector(arr.reshape(-1), width)
    packed = compress_batch(values, plan, width)
    header = ContainerHeader(
        layout, width, plan.policy, len(values), plan.block_len, len(packed), rows, cols
    )
    return header.encode() + _encode_records(packed)


def _encode_records(packed):
    nb = len(packed)
    counts = packed.word_counts
    buf = np.empty(4 * nb + len(packed.words), dtype="<u4")
    rec = 4 * np.arange(nb) + packed.word_starts
    buf[rec] = packed.codecs
    buf[rec + 1] = packed.v_min
    buf[rec + 2] = packed.b_minus_1
    buf[rec + 3] = counts
    owner = np.repeat(np.arange(nb), counts)
    buf[np.arange(len(packed.words)) + 4 * (owner + 1)] = packed.words
    return buf.tobytes()


def read_header(data):
    return ContainerHeader.decode(memoryview(data))


def _scan(data, header, stop):
    """Record offsets and word counts of blocks ``[0, stop)``."""
    if (len(data) - header.size) % 4:
        raise CorruptStream("container body is not a whole number of words")
    body = np.frombuffer(data, dtype="<u4", offset=header.size)
    pos = np.zeros(stop, dtype=np.int64)
    counts = np.zeros(stop, dtype=np.int64)
    p = 0
    end = len(body)
    for i in range(stop):
        if p + 4 > end:
            raise CorruptStream(f"truncated record header for block {i}")
        pos[i] = p
        counts[i] = body[p + 3]
        p += 4 + int(counts[i])
    if p > end:
        raise CorruptStream(f"truncated payload in block {stop - 1}")
    return body, pos, counts, p


def read_blocks(data, start=0, stop=None):
    """Packed records of blocks ``[start, stop)`` and the container header."""
    data = memoryview(data)
    header = read_header(data)
    if stop is None:
        stop = header.n_blocks
    if not 0 <= start <= stop <= header.n_blocks:
        raise IndexError(f"block range [{start}, {stop}) outside [0, {header.n_blocks})")
    body, pos, counts, end = _scan(data, header, stop)
    if stop == header.n_blocks and end != len(body):
        raise CorruptStream("trailing bytes after the last block")
    pos, counts = pos[start:], counts[start:]
    fields = np.stack([body[pos + k] for k in range(3)]).astype(np.int64)
    owner = np.repeat(np.arange(len(pos)), counts)
    first = np.zeros(len(pos), dtype=np.int64)
    np.cumsum(counts[:-1], out=first[1:])
    word_idx = pos[owner] + 4 + (np.arange(int(counts.sum())) - first[owner])
    lengths = block_lengths(header.n_elements, header.block_len)[start:stop]
    packed = PackedBlocks(fields[0], fields[1], fields[2], lengths, counts, body[word_idx].astype(np.uint32))
    return header, packed


def decode_container(data, blocks=None):
    """Decode a container; ``blocks=(j, k)`` decodes only blocks ``[j, k)``.

    A full decode of a matrix is returned with its original shape; partial
    reads are flat.
    """
    if blocks is None:
        header, packed = read_blocks(data)
        values = decompress_batch(packed, header.width_bits)
        return Decoded(header, values.reshape(header.shape))
    start, stop = blocks
    header, packed = read_blocks(data, start, stop)
    if len(packed) == 0:
        values = np.zeros(0, dtype=f"<u{header.width_bits // 8}")
    else:
        values = decompress_batch(packed, header.width_bits)
    return Decoded(header, values, start, start * (header.block_len or header.n_elements))


def container_info(data):
    """Header fields plus block statistics, without decoding payloads."""
    header, packed = read_blocks(data)
    info = {
        "version": header.version,
        "layout": header.layout.name,
        "width_bits": header.width_bits,
        "codec_policy": header.policy.name,
        "n_elements": header.n_elements,
        "block_len": header.block_len,
        "n_blocks": header.n_blocks,
    }
    if header.layout == Layout.MATRIX:
        info["n_rows"], info["n_cols"] = header.n_rows, header.n_cols
    info["payload_words"] = len(packed.words)
    info["container_bytes"] = len(data)
    info["core_bytes"] = packed.compressed_bytes(BLOCK_HEADER_BYTES)
    info["core_ratio"] = float(core_ratio(packed, header.n_elements, header.width_bits))
    return info


def _argv(command):
    return shlex.split(command) if isinstance(command, str) else list(command)


def post_stage(stream, command):
    """Pipe ``stream`` through an external filter and return its output.

    The filter reads standard input, writes standard output and must exit
    with status 0; it inherits the current environment.
    """
    argv = _argv(command)
    try:
        proc = subprocess.run(argv, input=bytes(stream), capture_output=True, check=False)
    except OSError as exc:
        raise PostStageFailed(command, -1, str(exc).encode()) from None
    if proc.returncode != 0:
        raise PostStageFailed(command, proc.returncode, proc.stderr)
    return proc.stdout
