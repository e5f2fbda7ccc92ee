"""Bitset helpers over element indices, backed by Python integers."""

import sys
import typing as t

import numpy as np


def from_indices(indices: t.Iterable[int], order: int) -> int:
    """Pack element indices into an integer bitset."""
    mask = np.zeros(order, dtype=bool)
    mask[np.fromiter(indices, dtype=np.int64)] = True
    return from_mask(mask)


def from_mask(mask: np.ndarray) -> int:
    """Convert a boolean mask into an integer bitset (bit i <-> mask[i])."""
    return int.from_bytes(np.packbits(mask, bitorder="little").tobytes(), "little")


def to_indices(bits: int, order: int) -> np.ndarray:
    """Return the sorted element indices of a bitset."""
    raw = np.frombuffer(bits.to_bytes((order + 7) // 8, "little"), dtype=np.uint8)
    return np.flatnonzero(np.unpackbits(raw, bitorder="little")[:order])


if sys.version_info >= (3, 10):

    def popcount(bits: int) -> int:
        """Number of set bits."""
        return bits.bit_count()

else:

    def popcount(bits: int) -> int:
        """Number of set bits."""
        return bin(bits).count("1")


def is_subset(inner: int, outer: int) -> bool:
    """Whether every bit of ``inner`` is set in ``outer``."""
    return inner & ~outer == 0
