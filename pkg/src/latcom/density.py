"""Sequences of relative degrees converging to a prescribed rational in [0, 1]."""

import logging
import typing as t
from dataclasses import dataclass
from functools import reduce

from .analytic import sd_formula_2groups, sd_formula_T21
from .degrees import sd_rel
from .errors import ArgumentDomain, SearchBoundExceeded
from .families import FamilyKind, FamilySpec, build
from .group import DEFAULT_ORDER_CAP, ExactRational, FiniteGroup, direct_product
from .lattice import all_subgroups, generated_subgroup, permuting_counts
from .number_utils import is_prime


_logger = logging.getLogger(__name__)

SEARCH_BOUND: int = 2**63

DEFAULT_STEPS: int = 5


def _row_limit(steps: t.Optional[int], tolerance: t.Optional[ExactRational]) -> t.Optional[int]:
    """Row limit of a table; ``None`` means run until the tolerance is met."""
    if steps is not None and steps < 1:
        raise ArgumentDomain(f"steps must be positive, got {steps}")
    if tolerance is not None and tolerance <= 0:
        raise ArgumentDomain(f"tolerance must be positive, got {tolerance}")
    if steps is None and tolerance is None:
        return DEFAULT_STEPS
    return steps


def next_prime_in_ap(q: int, after: int) -> int:
    """Smallest prime p > after with p ≡ 1 (mod q)."""
    if q < 2:
        raise ArgumentDomain(f"modulus must be at least 2, got {q}")
    p = after + 1
    p += (1 - p) % q
    while not is_prime(p):
        p += q
        if p >= SEARCH_BOUND:
            raise SearchBoundExceeded(f"no prime ≡ 1 mod {q} between {after} and 2^63")
    return p


@dataclass(frozen=True)
class DensityFactor:
    """One ℤₚ ⋊ ℤ_{qⁿ} factor and its relative degree at ℤ_{qⁿ}."""

    q: int
    n: int
    p: int
    value: ExactRational

    @property
    def order(self) -> int:
        return self.p * self.q**self.n

    @property
    def spec(self) -> FamilySpec:
        return FamilySpec.of(FamilyKind.T21, self.p, self.q, self.n)


@dataclass(frozen=True)
class DensityPlan:
    target: ExactRational
    min_p: int
    factors: t.Tuple[DensityFactor, ...]
    achieved: ExactRational
    error: ExactRational

    @property
    def max_p(self) -> int:
        return max((f.p for f in self.factors), default=0)


def _odd_primes() -> t.Iterator[int]:
    n = 3
    while True:
        if is_prime(n):
            yield n
        n += 2


def build_plan(a: int, b: int, min_p: int = 3) -> DensityPlan:
    """Choose b − a factors whose relative degrees multiply to roughly a/b.

    Factor j uses the j-th odd prime q_j, exponent n_j = a + j − 1 and the least unused prime
    p_j ≥ min_p with p_j ≡ 1 (mod q_j); its value tends to n_j/(n_j + 1) as p_j grows, so the
    product telescopes towards a/b.
    """
    if not 0 < a < b:
        raise ArgumentDomain(f"need 0 < a < b, got a={a}, b={b}")
    count = b - a
    primes = _odd_primes()
    qs = [next(primes) for _ in range(count)]
    used = set(qs)
    factors = []
    for j, q in enumerate(qs, start=1):
        p = next_prime_in_ap(q, min_p - 1)
        while p in used:
            p = next_prime_in_ap(q, p)
        used.add(p)
        n = a + j - 1
        factors.append(DensityFactor(q=q, n=n, p=p, value=sd_formula_T21(p, n).sd_rel_top))
    target = ExactRational(a, b)
    achieved = reduce(lambda acc, f: acc * f.value, factors, ExactRational(1))
    return DensityPlan(
        target=target, min_p=min_p, factors=tuple(factors), achieved=achieved, error=abs(achieved - target)
    )


def convergence_table(
    a: int,
    b: int,
    steps: t.Optional[int] = None,
    start_p: int = 3,
    tolerance: t.Optional[ExactRational] = None,
) -> t.List[DensityPlan]:
    """Plans for a growing min_p; every prime of a row exceeds every prime of the row before.

    The min_p schedule at least doubles each step, so the error strictly decreases. Without a
    ``tolerance`` the table has ``steps`` rows (default 5). With one it grows until a row's error is
    below it; ``steps`` then only limits the row count, and the last row may miss the tolerance.
    """
    steps = _row_limit(steps, tolerance)
    rows: t.List[DensityPlan] = []
    min_p = start_p
    while steps is None or len(rows) < steps:
        plan = build_plan(a, b, min_p)
        rows.append(plan)
        _logger.debug("min_p=%d achieved=%s error=%s", min_p, plan.achieved, plan.error)
        if tolerance is not None and plan.error < tolerance:
            break
        min_p = max(2 * min_p, plan.max_p + 1)
    return rows


def zero_target_sequence(
    steps: t.Optional[int] = None, start_n: int = 3, tolerance: t.Optional[ExactRational] = None
) -> t.List[t.Tuple[int, ExactRational]]:
    """(|G|, sd(G)) along the dihedral 2-groups, which tends to 0.

    ``steps`` and ``tolerance`` bound the sequence the way they bound :func:`convergence_table`.
    """
    steps = _row_limit(steps, tolerance)
    rows: t.List[t.Tuple[int, ExactRational]] = []
    n = start_n
    while steps is None or len(rows) < steps:
        value = sd_formula_2groups("D", n)
        rows.append((2**n, value))
        if tolerance is not None and value < tolerance:
            break
        n += 1
    return rows


def one_target_plan() -> DensityPlan:
    """The trivial subgroup has relative degree 1 in every group, so no factor is needed."""
    one = ExactRational(1)
    return DensityPlan(target=one, min_p=0, factors=(), achieved=one, error=ExactRational(0))


@dataclass(frozen=True)
class FactorCheck:
    factor: DensityFactor
    brute_force: t.Optional[ExactRational]

    @property
    def matches(self) -> t.Optional[bool]:
        return None if self.brute_force is None else self.brute_force == self.factor.value


@dataclass(frozen=True)
class InstanceReport:
    status: str
    factor_checks: t.Tuple[FactorCheck, ...]
    product_order: int
    product_value: t.Optional[ExactRational]

    @property
    def ok(self) -> bool:
        return self.status != "mismatch"


def _top_cyclic_value(G: FiniteGroup, generators: t.Sequence[int], order_cap: int) -> ExactRational:
    L = all_subgroups(G, order_cap)
    return sd_rel(generated_subgroup(G, generators), G, L, permuting_counts(L))


def verify_smallest_instance(plan: DensityPlan, order_cap: int = DEFAULT_ORDER_CAP) -> InstanceReport:
    """Brute-force each factor and, when it fits under the cap, the whole product.

    In ``semidirect_cyclic`` index 1 is the generator (0, 1) of the ℤ_{qⁿ} complement; in a direct
    product the copy of that generator in factor j has index ∏_{i>j}|G_i|.
    """
    checks = []
    groups = []
    for factor in plan.factors:
        if factor.order > order_cap:
            _logger.info("%s has order %d above the cap; formula only", factor.spec, factor.order)
            checks.append(FactorCheck(factor, None))
            continue
        G = build(factor.spec, order_cap)
        groups.append(G)
        checks.append(FactorCheck(factor, _top_cyclic_value(G, [1], order_cap)))

    product_order = 1
    for factor in plan.factors:
        product_order *= factor.order
    product_value = None
    if plan.factors and len(groups) == len(plan.factors) and product_order <= order_cap:
        product = reduce(lambda acc, G: direct_product(acc, G, order_cap), groups[1:], groups[0])
        generators = []
        for j in range(len(groups)):
            stride = 1
            for G in groups[j + 1 :]:
                stride *= G.order
            generators.append(stride)
        product_value = _top_cyclic_value(product, generators, order_cap)

    if any(check.matches is False for check in checks) or (
        product_value is not None and product_value != plan.achieved
    ):
        status = "mismatch"
    elif product_value is not None:
        status = "verified"
    elif any(check.brute_force is not None for check in checks):
        status = "factors-verified"
    else:
        status = "formula-only"
    return InstanceReport(
        status=status, factor_checks=tuple(checks), product_order=product_order, product_value=product_value
    )
