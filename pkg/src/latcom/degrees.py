"""Exact subgroup commutativity degrees and the invariants derived from them."""

import logging
import typing as t
from dataclasses import dataclass, field
from math import gcd

from .bitset_utils import from_indices
from .errors import ClassConstancyViolation, CoprimalityRequired
from .group import DEFAULT_ORDER_CAP, ExactRational, FiniteGroup, direct_product
from .lattice import Subgroup, SubgroupLattice, all_subgroups, gamma, permutes_definitional, permuting_counts


_logger = logging.getLogger(__name__)

HALF = ExactRational(1, 2)


@dataclass(frozen=True)
class Criterion:
    """Both sides of the sd(G) < 1/2 + (|N(G)|+1)/(2|L(G)|) test."""

    lhs: ExactRational
    rhs: ExactRational
    fires: bool


@dataclass(frozen=True)
class DegreeReport:
    label: str
    order: int
    lattice_size: int
    normal_count: int
    gamma: int
    sd: ExactRational
    f_image: t.Tuple[ExactRational, ...]
    class_values: t.Dict[int, ExactRational] = field(compare=False)
    iwasawa: bool
    in_class_C: bool
    criterion31: Criterion

    @property
    def imf_size(self) -> int:
        return len(self.f_image)


def sd(G: FiniteGroup, L: SubgroupLattice, counts: t.Optional[t.Sequence[int]] = None) -> ExactRational:
    """Probability that two random subgroups of G permute, summed class by class."""
    if counts is None:
        counts = permuting_counts(L)
    return ExactRational(sum(counts), len(L) ** 2)


def sd_full(G: FiniteGroup, L: SubgroupLattice) -> ExactRational:
    """The same probability by the plain double loop over ordered pairs."""
    permuting = sum(1 for H in L for K in L if permutes_definitional(G, H, K))
    return ExactRational(permuting, len(L) ** 2)


def _sd_rel_at(L: SubgroupLattice, i: int, counts: t.Sequence[int]) -> ExactRational:
    inner = L.subgroups_of(i)
    return ExactRational(sum(counts[j] for j in inner), len(inner) * len(L))


def sd_rel(
    H: Subgroup, G: FiniteGroup, L: SubgroupLattice, counts: t.Optional[t.Sequence[int]] = None
) -> ExactRational:
    """Probability that a random subgroup of H permutes with a random subgroup of G."""
    if counts is None:
        counts = permuting_counts(L)
    return _sd_rel_at(L, L.index_of(H), counts)


def class_values(
    G: FiniteGroup, L: SubgroupLattice, full: bool = False, counts: t.Optional[t.Sequence[int]] = None
) -> t.Dict[int, ExactRational]:
    """f on every conjugacy class of subgroups.

    With ``full`` set every subgroup is evaluated on its own and must agree with the rest of
    its class.
    """
    if counts is None:
        counts = permuting_counts(L, full=full)
    values = {c: _sd_rel_at(L, members[0], counts) for c, members in enumerate(L.classes)}
    if full:
        for c, members in enumerate(L.classes):
            for i in members[1:]:
                value = _sd_rel_at(L, i, counts)
                if value != values[c]:
                    raise ClassConstancyViolation(
                        f"{G.label}: f = {value} on subgroup {i} but {values[c]} on its conjugate {members[0]}"
                    )
    return values


def f_image(G: FiniteGroup, L: SubgroupLattice, full: bool = False) -> t.Tuple[ExactRational, ...]:
    """Distinct values of f, ascending."""
    return tuple(sorted(set(class_values(G, L, full=full).values())))


def criterion_3_1(G: FiniteGroup, L: SubgroupLattice, counts: t.Optional[t.Sequence[int]] = None) -> Criterion:
    """sd(G) against 1/2 + (|N(G)|+1)/(2|L(G)|); groups with sd = 1 never fire."""
    lhs = sd(G, L, counts)
    rhs = HALF + ExactRational(L.normal_count + 1, 2 * len(L))
    return Criterion(lhs=lhs, rhs=rhs, fires=lhs < 1 and lhs < rhs)


def degree_report(
    G: FiniteGroup, L: t.Optional[SubgroupLattice] = None, full: bool = False, order_cap: int = DEFAULT_ORDER_CAP
) -> DegreeReport:
    """Every degree invariant of G in one pass over its lattice."""
    if L is None:
        L = all_subgroups(G, order_cap=order_cap)
    counts = permuting_counts(L, full=full)
    values = class_values(G, L, full=full, counts=counts)
    image = tuple(sorted(set(values.values())))
    degree = sd(G, L, counts)
    return DegreeReport(
        label=G.label,
        order=G.order,
        lattice_size=len(L),
        normal_count=L.normal_count,
        gamma=gamma(L),
        sd=degree,
        f_image=image,
        class_values=values,
        iwasawa=degree == 1,
        in_class_C=len(image) == 2,
        criterion31=criterion_3_1(G, L, counts),
    )


def _product_bits(H1: Subgroup, H2: Subgroup, order1: int, order2: int) -> int:
    first = [g for g in range(order1) if g in H1]
    second = [h for h in range(order2) if h in H2]
    return from_indices((g * order2 + h for g in first for h in second), order1 * order2)


def multiplicativity_check(G1: FiniteGroup, G2: FiniteGroup, order_cap: int = DEFAULT_ORDER_CAP) -> bool:
    """Whether sd and every sd_rel(H1×H2) factor over the coprime direct product G1 × G2."""
    if gcd(G1.order, G2.order) != 1:
        raise CoprimalityRequired(f"|{G1.label}| = {G1.order} and |{G2.label}| = {G2.order} are not coprime")
    G = direct_product(G1, G2, order_cap)
    L1, L2, L = all_subgroups(G1, order_cap), all_subgroups(G2, order_cap), all_subgroups(G, order_cap)
    counts1, counts2, counts = permuting_counts(L1), permuting_counts(L2), permuting_counts(L)

    ok = sd(G, L, counts) == sd(G1, L1, counts1) * sd(G2, L2, counts2)
    if not ok:
        _logger.warning("sd does not factor over %s x %s", G1.label, G2.label)
    if len(L) != len(L1) * len(L2):
        _logger.warning("%s x %s has %d subgroups, expected %d", G1.label, G2.label, len(L), len(L1) * len(L2))
        return False

    for i, H1 in enumerate(L1):
        left = _sd_rel_at(L1, i, counts1)
        for j, H2 in enumerate(L2):
            k = L.index_of(_product_bits(H1, H2, G1.order, G2.order))
            if _sd_rel_at(L, k, counts) != left * _sd_rel_at(L2, j, counts2):
                _logger.warning("sd_rel does not factor at subgroups %d x %d of %s x %s", i, j, G1.label, G2.label)
                ok = False
    return ok
