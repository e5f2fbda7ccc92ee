"""Finite groups as Cayley tables, and the constructors built on them."""

import logging
import os
import typing as t
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

import numpy as np

from .errors import (
    GroupTableError,
    InvalidAction,
    MissingInverse,
    NoIdentity,
    NotAssociative,
    NotClosed,
    OrderCapExceeded,
)


ExactRational = Fraction

DEFAULT_ORDER_CAP: int = 5000

_logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group given by its Cayley table; index 0 is the identity.

    ``table[a][b]`` is the index of ``a·b``. Instances are immutable: the table and the
    inverse array are read-only numpy arrays, so a group may be shared between workers.
    """

    order: int
    table: np.ndarray = field(repr=False)
    inverse: np.ndarray = field(repr=False)
    label: str = ""

    @cached_property
    def rows(self) -> t.List[t.List[int]]:
        """The table as nested lists, for tight pure-Python loops."""
        return self.table.tolist()

    def conjugates(self, elements: np.ndarray) -> np.ndarray:
        """Row g holds ``g⁻¹·x·g`` for every x in ``elements``."""
        return self.table[self.inverse[:, None], self.table[elements].T]

    @cached_property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def same_table(self, other: "FiniteGroup") -> bool:
        """Whether both groups have literally the same multiplication table."""
        return self.order == other.order and bool(np.array_equal(self.table, other.table))


def _check_cap(order: int, order_cap: int) -> None:
    if order > order_cap:
        raise OrderCapExceeded(order, order_cap)


def from_trusted_table(table: np.ndarray, label: str) -> FiniteGroup:
    """Wrap a table known to satisfy the group axioms, with identity at index 0."""
    table = np.ascontiguousarray(table, dtype=np.int32)
    table.setflags(write=False)
    _, inverse = np.nonzero(table == 0)
    inverse = inverse.astype(np.int32)
    inverse.setflags(write=False)
    return FiniteGroup(order=int(table.shape[0]), table=table, inverse=inverse, label=label)


def make_group(table: t.Sequence[t.Sequence[int]], label: str = "", order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Validate a square Cayley table and return the group it defines.

    The identity is moved to index 0 when it sits elsewhere (indices 0 and e are swapped).
    Every violated axiom is reported with the offending element or triple, using the
    indices of the table as given.
    """
    try:
        raw = np.asarray(table, dtype=np.int64)
    except (TypeError, ValueError) as err:
        raise NotClosed(f"Cayley table must be a square array of integers: {err}") from err
    if raw.ndim != 2 or raw.shape[0] != raw.shape[1] or raw.shape[0] == 0:
        raise NotClosed(f"Cayley table must be a non-empty square array, got shape {raw.shape}")
    order = int(raw.shape[0])
    _check_cap(order, order_cap)

    bad = np.argwhere((raw < 0) | (raw >= order))
    if bad.size:
        row, col = (int(v) for v in bad[0])
        raise NotClosed(f"entry {row}*{col} = {int(raw[row, col])} is not an element", element=row)

    identity = np.arange(order)
    candidates = [
        e for e in range(order) if np.array_equal(raw[e], identity) and np.array_equal(raw[:, e], identity)
    ]
    if not candidates:
        raise NoIdentity("no element acts as a two-sided identity")
    e = candidates[0]

    # relabel as an involution swapping 0 and e
    relabel = np.arange(order)
    relabel[[0, e]] = relabel[[e, 0]]
    normalized = relabel[raw[np.ix_(relabel, relabel)]]

    for a in range(order):
        zeros = np.flatnonzero(normalized[a] == 0)
        if zeros.size != 1 or normalized[zeros[0], a] != 0:
            raise MissingInverse(int(relabel[a]))

    for a in range(order):
        left = normalized[normalized[a]]
        right = normalized[a][normalized]
        mismatch = np.argwhere(left != right)
        if mismatch.size:
            b, c = (int(v) for v in mismatch[0])
            raise NotAssociative(int(relabel[a]), int(relabel[b]), int(relabel[c]))

    if e != 0:
        _logger.debug("identity found at index %d, relabelled to 0", e)
    return from_trusted_table(normalized, label or f"table({order})")


def cyclic(n: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """The cyclic group of order n, with ``table[a][b] = (a + b) mod n``."""
    if n < 1:
        raise ValueError(f"cyclic group order must be positive, got {n}")
    _check_cap(n, order_cap)
    elements = np.arange(n)
    return from_trusted_table((elements[:, None] + elements[None, :]) % n, f"Z({n})")


def direct_product(G: FiniteGroup, H: FiniteGroup, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """The direct product G × H; the pair (g, h) has index ``g·|H| + h``."""
    order = G.order * H.order
    _check_cap(order, order_cap)
    g_part = G.table.astype(np.int64)[:, None, :, None] * H.order
    h_part = H.table.astype(np.int64)[None, :, None, :]
    return from_trusted_table((g_part + h_part).reshape(order, order), f"{G.label}x{H.label}")


def semidirect_cyclic(m: int, t_: int, k: int, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """The semidirect product ℤₘ ⋊ ℤₜ in which the generator of ℤₜ acts by x ↦ x^k.

    Elements are pairs (a, b) with index ``a·t + b`` and
    ``(a, b)·(c, d) = (a + c·k^b mod m, b + d mod t)``. ``k`` is reduced modulo m first.
    """
    if m < 1 or t_ < 1:
        raise ValueError(f"cyclic factor orders must be positive, got m={m}, t={t_}")
    k %= m
    if gcd(k, m) != 1:
        raise InvalidAction(f"multiplier {k} is not a unit modulo {m}")
    if pow(k, t_, m) != 1 % m:
        raise InvalidAction(f"{k}^{t_} is not 1 modulo {m}")
    order = m * t_
    _check_cap(order, order_cap)

    a = np.repeat(np.arange(m, dtype=np.int64), t_)
    b = np.tile(np.arange(t_, dtype=np.int64), m)
    k_powers = np.array([pow(k, e, m) for e in range(t_)], dtype=np.int64)
    first = (a[:, None] + a[None, :] * k_powers[b][:, None]) % m
    second = (b[:, None] + b[None, :]) % t_
    return from_trusted_table(first * t_ + second, f"Z({m}):Z({t_})[{k}]")


def element_order(G: FiniteGroup, g: int) -> int:
    """The least d ≥ 1 with g^d equal to the identity."""
    rows = G.rows
    d, x = 1, g
    while x != 0:
        x = rows[x][g]
        d += 1
    return d


def format_cayley_table(G: FiniteGroup) -> str:
    """Render a group in the Cayley-table text format: n, then n rows of indices."""
    lines = [str(G.order)]
    lines.extend(" ".join(str(v) for v in row) for row in G.rows)
    return "\n".join(lines) + "\n"


def parse_cayley_table(text: str, label: str = "", order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Parse the Cayley-table text format and validate the result."""
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines or len(lines[0]) != 1:
        raise GroupTableError("first line of a Cayley table must hold the order alone")
    try:
        order = int(lines[0][0])
        rows = [[int(v) for v in line] for line in lines[1:]]
    except ValueError as err:
        raise GroupTableError(f"malformed Cayley table: {err}")  # pylint: disable=W0707
    if order < 1 or len(rows) != order or any(len(row) != order for row in rows):
        raise GroupTableError(f"Cayley table must have {order} rows of {order} entries")
    _check_cap(order, order_cap)
    return make_group(rows, label=label, order_cap=order_cap)


def read_cayley_table(path: t.Union[str, "os.PathLike[t.Any]"], order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Read a Cayley-table file."""
    with open(path, "r", encoding="utf-8") as fh:
        return parse_cayley_table(fh.read(), label=os.path.basename(str(path)), order_cap=order_cap)
