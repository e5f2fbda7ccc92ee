"""Subgroup lattices: enumeration, conjugacy classes, normality and permutability."""

import logging
import typing as t
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np

from .bitset_utils import from_indices, from_mask, is_subset, popcount, to_indices
from .group import DEFAULT_ORDER_CAP, FiniteGroup
from .errors import OrderCapExceeded


_logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class Subgroup:
    """A subgroup as an integer bitset over element indices."""

    size: int
    members: int

    @classmethod
    def from_bits(cls, members: int) -> "Subgroup":
        return cls(size=popcount(members), members=members)

    def __contains__(self, element: int) -> bool:
        return bool(self.members >> element & 1)

    def issubset(self, other: "Subgroup") -> bool:
        return self.size <= other.size and is_subset(self.members, other.members)


@dataclass(frozen=True, eq=False)
class SubgroupLattice:
    """Every subgroup of ``group``, sorted by (size, bitset), with its conjugacy classes.

    ``class_ids[i]`` numbers classes in order of first appearance, so the trivial subgroup is in
    class 0 and the whole group in the last class.
    """

    group: FiniteGroup
    subgroups: t.Tuple[Subgroup, ...]
    class_ids: t.Tuple[int, ...]
    _index: t.Dict[int, int] = field(repr=False, default_factory=dict)

    def __len__(self) -> int:
        return len(self.subgroups)

    def __iter__(self) -> t.Iterator[Subgroup]:
        return iter(self.subgroups)

    def __getitem__(self, i: int) -> Subgroup:
        return self.subgroups[i]

    def index_of(self, subgroup: t.Union[Subgroup, int]) -> int:
        """Position of a subgroup (or bitset) in the lattice; KeyError if it is not a subgroup."""
        bits = subgroup.members if isinstance(subgroup, Subgroup) else subgroup
        return self._index[bits]

    @cached_property
    def classes(self) -> t.Tuple[t.Tuple[int, ...], ...]:
        grouped: t.List[t.List[int]] = [[] for _ in range(max(self.class_ids) + 1)]
        for i, class_id in enumerate(self.class_ids):
            grouped[class_id].append(i)
        return tuple(tuple(c) for c in grouped)

    @cached_property
    def normal_flags(self) -> t.Tuple[bool, ...]:
        return tuple(len(self.classes[c]) == 1 for c in self.class_ids)

    @property
    def normal_count(self) -> int:
        return sum(self.normal_flags)

    @property
    def representatives(self) -> t.Tuple[int, ...]:
        """The first (smallest) subgroup index of every class."""
        return tuple(c[0] for c in self.classes)

    def members(self, i: int) -> np.ndarray:
        """Sorted element indices of subgroup ``i``."""
        cache = self._members_cache
        if cache[i] is None:
            cache[i] = to_indices(self.subgroups[i].members, self.group.order)
        return t.cast(np.ndarray, cache[i])

    @cached_property
    def _members_cache(self) -> t.List[t.Optional[np.ndarray]]:
        return [None] * len(self.subgroups)

    def subgroups_of(self, i: int) -> t.List[int]:
        """Indices of the subgroups contained in subgroup ``i``, i.e. the lattice of that subgroup."""
        outer = self.subgroups[i]
        return [j for j in range(i + 1) if self.subgroups[j].issubset(outer)]

    def as_records(self) -> t.List[t.Dict[str, t.Any]]:
        normal = self.normal_flags
        return [
            {
                "size": sub.size,
                "members": self.members(i).tolist(),
                "normal": normal[i],
                "class_id": self.class_ids[i],
            }
            for i, sub in enumerate(self.subgroups)
        ]


def _closure(G: FiniteGroup, start: t.Iterable[int], gens: t.Sequence[int], stop_above: int) -> t.Optional[t.Set[int]]:
    """Right-multiply ``start`` by ``gens`` until closed; None once more than ``stop_above`` elements appear."""
    rows = G.rows
    seen = set(start)
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            row = rows[x]
            for g in gens:
                y = row[g]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if len(seen) > stop_above:
            return None
        frontier = nxt
    return seen


def generated_subgroup(G: FiniteGroup, gens: t.Iterable[int]) -> Subgroup:
    """The subgroup generated by the given elements."""
    elements = _closure(G, (0,), list(gens), G.order)
    return Subgroup.from_bits(from_indices(t.cast(t.Set[int], elements), G.order))


def _cyclic_subgroups(G: FiniteGroup) -> t.List[t.Tuple[int, int]]:
    """Distinct cyclic subgroups as (bitset, generator) pairs."""
    rows = G.rows
    covered = bytearray(G.order)
    found = []
    for g in range(G.order):
        if covered[g]:
            continue
        powers = [0]
        x = g
        while x != 0:
            powers.append(x)
            x = rows[x][g]
        d = len(powers)
        for k in range(1, d):
            if gcd(k, d) == 1:
                covered[powers[k]] = 1
        found.append((from_indices(powers, G.order), g))
    return found


def _orbit(G: FiniteGroup, bits: int) -> t.List[int]:
    """All conjugates of a subgroup, as bitsets."""
    images = np.sort(G.conjugates(to_indices(bits, G.order)), axis=1)
    distinct = np.unique(images, axis=0)
    result = []
    for row in distinct:
        mask = np.zeros(G.order, dtype=bool)
        mask[row] = True
        result.append(from_mask(mask))
    return result


def _product_mask(G: FiniteGroup, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    mask = np.zeros(G.order, dtype=bool)
    mask[G.table[np.ix_(left, right)]] = True
    return mask


def all_subgroups(G: FiniteGroup, order_cap: int = DEFAULT_ORDER_CAP) -> SubgroupLattice:
    """Enumerate every subgroup of G together with its conjugacy class.

    Subgroups are reached as joins of a class representative with a cyclic subgroup, starting
    from the trivial subgroup; each newly met subgroup contributes its whole conjugacy class.
    Every subgroup is a join of cyclic subgroups, and conjugating such a chain lands on a
    representative at each step, so the search misses nothing.
    """
    if G.order > order_cap:
        raise OrderCapExceeded(G.order, order_cap)
    n = G.order
    whole = (1 << n) - 1
    cyclics = _cyclic_subgroups(G)
    cyclic_normal = []
    for bits, gen in cyclics:
        mask = np.zeros(n, dtype=bool)
        mask[to_indices(bits, n)] = True
        cyclic_normal.append(bool(mask[G.conjugates(np.array([gen]))[:, 0]].all()))

    class_of: t.Dict[int, int] = {1: 0}
    class_sizes: t.List[int] = [1]
    gens_of: t.Dict[int, t.Tuple[int, ...]] = {1: ()}
    queue: t.List[int] = [1]

    def register(bits: int, gens: t.Tuple[int, ...]) -> None:
        if bits == whole:
            orbit = [whole]
            gens = ()
        else:
            orbit = _orbit(G, bits)
        class_id = len(class_sizes)
        class_sizes.append(len(orbit))
        for member in orbit:
            class_of[member] = class_id
        gens_of[bits] = gens
        queue.append(bits)

    head = 0
    while head < len(queue):
        rep = queue[head]
        head += 1
        rep_size = popcount(rep)
        rep_normal = class_sizes[class_of[rep]] == 1
        rep_elements: t.Optional[np.ndarray] = None
        for (bits, gen), c_normal in zip(cyclics, cyclic_normal):
            if is_subset(bits, rep):
                continue
            inter = popcount(bits & rep)
            c_size = popcount(bits)
            if 2 * rep_size * c_size > n * inter:
                joined = whole
            elif rep_normal or c_normal:
                if rep_elements is None:
                    rep_elements = to_indices(rep, n)
                joined = from_mask(_product_mask(G, rep_elements, to_indices(bits, n)))
            else:
                closed = _closure(G, to_indices(rep, n).tolist(), gens_of[rep] + (gen,), n // 2)
                joined = whole if closed is None else from_indices(closed, n)
            if joined not in class_of:
                register(joined, gens_of[rep] + (gen,))

    ordered = sorted(Subgroup.from_bits(bits) for bits in class_of)
    renumber: t.Dict[int, int] = {}
    class_ids = []
    for sub in ordered:
        provisional = class_of[sub.members]
        class_ids.append(renumber.setdefault(provisional, len(renumber)))
    index = {sub.members: i for i, sub in enumerate(ordered)}
    _logger.debug("%s: %d subgroups in %d classes", G.label, len(ordered), len(renumber))
    return SubgroupLattice(group=G, subgroups=tuple(ordered), class_ids=tuple(class_ids), _index=index)


def product_set(G: FiniteGroup, H: Subgroup, K: Subgroup) -> int:
    """Bitset of {h·k : h ∈ H, k ∈ K}."""
    return from_mask(_product_mask(G, to_indices(H.members, G.order), to_indices(K.members, G.order)))


def _permutes_elements(G: FiniteGroup, H: np.ndarray, K: np.ndarray) -> bool:
    # |HK| = |KH|, so KH ⊆ HK already means equality
    return bool(_product_mask(G, H, K)[G.table[np.ix_(K, H)]].all())


def permutes_definitional(G: FiniteGroup, H: Subgroup, K: Subgroup) -> bool:
    """HK = KH, compared as sets with no shortcut."""
    return product_set(G, H, K) == product_set(G, K, H)


def permutes(G: FiniteGroup, H: Subgroup, K: Subgroup, lattice: t.Optional[SubgroupLattice] = None) -> bool:
    """HK = KH, answered without products when one subgroup contains the other or one is normal.

    Normality is read from ``lattice`` when one is given.
    """
    if H.issubset(K) or K.issubset(H):
        return True
    if lattice is not None:
        flags = lattice.normal_flags
        if flags[lattice.index_of(H)] or flags[lattice.index_of(K)]:
            return True
    return _permutes_elements(G, to_indices(H.members, G.order), to_indices(K.members, G.order))


def _count_for(L: SubgroupLattice, i: int) -> int:
    flags = L.normal_flags
    if flags[i]:
        return len(L)
    H = L[i]
    H_elements = L.members(i)
    count = 0
    for j, K in enumerate(L.subgroups):
        if flags[j] or K.issubset(H) or H.issubset(K):
            count += 1
        elif _permutes_elements(L.group, H_elements, L.members(j)):
            count += 1
    return count


def permuting_count(G: FiniteGroup, L: SubgroupLattice, H: Subgroup) -> int:
    """|C(H)|: the number of subgroups of G that permute with H."""
    return _count_for(L, L.index_of(H))


def permuting_counts(L: SubgroupLattice, full: bool = False) -> t.List[int]:
    """|C(H)| for every subgroup, evaluated once per class unless ``full`` is set."""
    if full:
        return [_count_for(L, i) for i in range(len(L))]
    per_class = [_count_for(L, rep) for rep in L.representatives]
    return [per_class[c] for c in L.class_ids]


def gamma(L: SubgroupLattice) -> int:
    """Number of conjugacy classes of non-normal subgroups."""
    return sum(1 for c in L.classes if len(c) > 1)
