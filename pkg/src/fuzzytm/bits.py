"""Bit packing helpers shared by samples, datasets and the packed inference path.

Layout convention: bit j of a width-F vector lives in word j >> 6 at position
j & 63 (little-endian within each 64-bit word). Rows are padded to a whole
number of words and padding bits are always zero; popcount correctness
downstream depends on that.
"""

from __future__ import annotations

import numpy as np

WORD_BITS = 64


def words_per_row(width: int) -> int:
    return (width + WORD_BITS - 1) // WORD_BITS


def pack_bits(bools: np.ndarray, width: int | None = None) -> np.ndarray:
    """Pack a boolean vector (or row-major matrix) into little-endian uint64 words."""
    arr = np.asarray(bools, dtype=bool)
    if width is None:
        width = arr.shape[-1]
    if arr.shape[-1] != width:
        raise ValueError(f"expected width {width}, got {arr.shape[-1]}")
    nwords = words_per_row(width)
    padded_shape = arr.shape[:-1] + (nwords * WORD_BITS,)
    padded = np.zeros(padded_shape, dtype=bool)
    padded[..., :width] = arr
    packed = np.packbits(padded, axis=-1, bitorder="little")
    return packed.view("<u8").reshape(arr.shape[:-1] + (nwords,))


def unpack_bits(words: np.ndarray, width: int) -> np.ndarray:
    """Inverse of pack_bits; returns a boolean array of the given width."""
    w = np.ascontiguousarray(words, dtype="<u8")
    as_bytes = w.view(np.uint8)
    bools = np.unpackbits(as_bytes, axis=-1, bitorder="little")
    return bools[..., :width].astype(bool)


def popcount(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words)


class BitSample:
    """A packed boolean feature vector of width F; negations are derived, not stored."""

    __slots__ = ("words", "width")

    def __init__(self, words: np.ndarray, width: int):
        words = np.ascontiguousarray(words, dtype=np.uint64)
        if words.shape != (words_per_row(width),):
            raise ValueError(
                f"expected {words_per_row(width)} words for width {width}, got {words.shape}"
            )
        self.words = words
        self.width = width

    @classmethod
    def from_bools(cls, bools) -> "BitSample":
        arr = np.asarray(bools, dtype=bool)
        if arr.ndim != 1:
            raise ValueError("BitSample is one-dimensional")
        return cls(pack_bits(arr), arr.shape[0])

    def to_bools(self) -> np.ndarray:
        return unpack_bits(self.words, self.width)

    def literals(self) -> np.ndarray:
        """Extended literal vector: F positive values followed by F negations."""
        x = self.to_bools()
        return np.concatenate([x, ~x])

    def __eq__(self, other):
        return (
            isinstance(other, BitSample)
            and self.width == other.width
            and np.array_equal(self.words, other.words)
        )

    def __repr__(self):
        return f"BitSample(width={self.width})"
