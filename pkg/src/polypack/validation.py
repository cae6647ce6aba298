"""Input validation helpers.

These play the role of ``sklearn.utils.check_array`` for the integer
vectors handled by the codecs: they normalise lists and arrays to a
contiguous unsigned numpy array of the requested element width.
"""

import numpy as np

from .errors import EmptyInput, ValueOutOfRange

WIDTHS = (8, 16, 32)
WORD_MAX = 2**32 - 1

_DTYPES = {8: np.uint8, 16: np.uint16, 32: np.uint32}


def check_width(width):
    if width not in WIDTHS:
        raise ValueOutOfRange(f"element width must be one of {WIDTHS}, got {width!r}")
    return int(width)


def dtype_for_width(width):
    return np.dtype(_DTYPES[check_width(width)]).newbyteorder("<")


def infer_width(values, default=32):
    """Element width implied by an array's dtype, or ``default``."""
    dtype = getattr(values, "dtype", None)
    if dtype is not None and dtype.kind == "u" and dtype.itemsize * 8 in WIDTHS:
        return dtype.itemsize * 8
    return default


def check_source_vector(values, width=None, *, allow_empty=False):
    """Validate ``values`` as a vector of unsigned ``width``-bit integers.

    Returns a one-dimensional little-endian unsigned array. Raises
    ``ValueOutOfRange`` for negative, fractional or too large values and
    ``EmptyInput`` for empty input unless ``allow_empty`` is set.
    """
    if width is None:
        width = infer_width(values)
    width = check_width(width)
    arr = np.asarray(values)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    if arr.size == 0:
        if not allow_empty:
            raise EmptyInput("source vector is empty")
        return np.zeros(0, dtype=dtype_for_width(width))
    if arr.dtype.kind == "O":
        try:
            arr = np.array([int(v) for v in arr], dtype=object)
            lo, hi = min(arr), max(arr)
        except (TypeError, ValueError) as exc:
            raise ValueOutOfRange(f"non-integer value in source vector: {exc}") from None
    elif arr.dtype.kind in "ui":
        lo, hi = int(arr.min()), int(arr.max())
    elif arr.dtype.kind == "f":
        if not np.all(np.isfinite(arr)) or np.any(arr != np.floor(arr)):
            raise ValueOutOfRange("source vector contains non-integer values")
        lo, hi = int(arr.min()), int(arr.max())
    elif arr.dtype.kind == "b":
        lo, hi = int(arr.min()), int(arr.max())
    else:
        raise ValueOutOfRange(f"unsupported dtype {arr.dtype}")
    if lo < 0:
        raise ValueOutOfRange(f"negative value {lo} in source vector")
    if hi >= 2**width:
        raise ValueOutOfRange(f"value {hi} does not fit in {width} bits")
    return np.ascontiguousarray(arr.astype(dtype_for_width(width)))
