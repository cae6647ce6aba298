"""scikit-learn compatible front end to the block codec."""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .blocks import BlockPlan, CodecPolicy, compress_batch, core_ratio
from .container import decode_container, encode_container
from .validation import check_source_vector, check_width, infer_width


class PolynomialReducer(TransformerMixin, BaseEstimator):
    """Losslessly compress each row of an integer matrix.

    Each sample (row) is encoded as an independent container, so rows can
    be stored and decoded separately; ``inverse_transform`` restores the
    original matrix exactly.

    Parameters
    ----------
    block_size : int, default=154
        Values per block; 0 compresses each row as a single block.
    codec : {"advanced", "basic", "auto"}, default="auto"
        Packing policy for blocks that are neither constant nor full range.
    width : {8, 16, 32} or None, default=None
        Element width in bits. ``None`` takes it from the dtype of ``X``
        at fit time, falling back to 32.

    Attributes
    ----------
    n_features_in_ : int
    width_ : int
    compression_ratio_ : float
        Mean core ratio over the rows seen by ``fit``.
    """

    def __init__(self, block_size=154, codec="auto", width=None):
        self.block_size = block_size
        self.codec = codec
        self.width = width

    def _plan(self):
        return BlockPlan(self.block_size, CodecPolicy.parse(self.codec))

    def _validate(self, X, reset):
        raw = X
        X = check_array(X, dtype=None, ensure_all_finite=True)
        if reset:
            self.width_ = check_width(self.width) if self.width is not None else infer_width(np.asarray(raw))
            self.n_features_in_ = X.shape[1]
        elif X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return check_source_vector(X.reshape(-1), self.width_).reshape(X.shape)

    def fit(self, X, y=None):
        X = self._validate(X, reset=True)
        plan = self._plan()
        ratios = [float(core_ratio(compress_batch(row, plan, self.width_), len(row), self.width_)) for row in X]
        self.compression_ratio_ = float(np.mean(ratios))
        return self

    def transform(self, X):
        """Return an object array holding one container (``bytes``) per row."""
        check_is_fitted(self)
        X = self._validate(X, reset=False)
        plan = self._plan()
        out = np.empty(len(X), dtype=object)
        for i, row in enumerate(X):
            out[i] = encode_container(row, plan, self.width_)
        return out

    def inverse_transform(self, Z):
        check_is_fitted(self)
        rows = [decode_container(z).values for z in Z]
        if not rows:
            return np.zeros((0, self.n_features_in_), dtype=f"<u{self.width_ // 8}")
        return np.vstack(rows)

    def score(self, X, y=None):
        """Mean core compression ratio of the rows of ``X``."""
        check_is_fitted(self)
        X = self._validate(X, reset=False)
        plan = self._plan()
        return float(np.mean([float(core_ratio(compress_batch(row, plan, self.width_), len(row), self.width_)) for row in X]))
