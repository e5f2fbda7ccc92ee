"""Closed-form degree formulas and the divisor arithmetic behind them.

Every formula takes integer parameters and returns exact rationals. Nothing here needs primality,
so the formulas can be evaluated far beyond the order cap and cross-checked against brute force
wherever a group can be built.
"""

import logging
import typing as t
from dataclasses import dataclass
from math import gcd, prod

from sympy import factorint

from .bitset_utils import from_indices
from .errors import ArgumentDomain
from .group import ExactRational as Q
from .number_utils import power_of_two_exponent, sigma_tau_sieve


_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DivisorProfile:
    n: int
    tau: int
    sigma: int
    factorization: t.Tuple[t.Tuple[int, int], ...]


def divisor_profile(n: int) -> DivisorProfile:
    """τ(n), σ(n) and the prime factorization of n."""
    if n < 1:
        raise ArgumentDomain(f"n must be positive, got {n}")
    factorization = tuple(sorted((int(p), int(a)) for p, a in factorint(n).items()))
    tau = prod(a + 1 for _, a in factorization)
    sigma = prod((p ** (a + 1) - 1) // (p - 1) for p, a in factorization)
    return DivisorProfile(n=n, tau=tau, sigma=sigma, factorization=factorization)


def divisors(n: int) -> t.List[int]:
    """Divisors of n, ascending."""
    result = [1]
    for p, a in divisor_profile(n).factorization:
        result = [d * p**e for d in result for e in range(a + 1)]
    return sorted(result)


@dataclass(frozen=True)
class DihedralSubgroupId:
    """H^r_i of D₂ₙ: the rotations of order r when i = 0, else the i-th dihedral subgroup D₂ᵣ."""

    r: int
    i: int

    def check(self, n: int) -> None:
        if n % self.r:
            raise ArgumentDomain(f"r = {self.r} does not divide n = {n}")
        if not 0 <= self.i <= n // self.r:
            raise ArgumentDomain(f"i = {self.i} outside 0..{n // self.r}")

    def members(self, n: int) -> t.List[int]:
        """Element indices inside ``semidirect_cyclic(n, 2, n - 1)``, where x^a·y^b has index 2a + b."""
        self.check(n)
        step = n // self.r
        rotations = [2 * ((k * step) % n) for k in range(self.r)]
        if self.i == 0:
            return rotations
        return rotations + [2 * ((k * step + self.i - 1) % n) + 1 for k in range(self.r)]

    def bits(self, n: int) -> int:
        return from_indices(self.members(n), 2 * n)


def x_ri(n: int, r: int, i: int) -> int:
    """Number of pairs (s, j) with s | n, 1 ≤ j ≤ n/s and n/lcm(r, s) dividing 2(i − j)."""
    if n % r:
        raise ArgumentDomain(f"r = {r} does not divide n = {n}")
    if not 1 <= i <= n // r:
        raise ArgumentDomain(f"i = {i} outside 1..{n // r}")
    count = 0
    for s in divisors(n):
        m = n // (r * s // gcd(r, s))
        # 2(i - j) ≡ 0 (mod m) iff j ≡ i (mod m / gcd(m, 2)); that modulus divides n/s
        count += (n // s) // (m // gcd(m, 2))
    return count


def sd_dihedral(n: int) -> Q:
    """sd(D₂ₙ) from the permuting counts τ(n) + x_ri of the dihedral subgroups."""
    profile = divisor_profile(n)
    size = profile.tau + profile.sigma
    total = profile.tau * size
    for r in divisors(n):
        total += (n // r) * (profile.tau + x_ri(n, r, 1))
    return Q(total, size * size)


@dataclass(frozen=True)
class T21Degrees:
    sd_rel_top: Q
    sd_G: Q


def sd_formula_T21(p: int, n: int) -> T21Degrees:
    """sd(ℤ_{qⁿ}, G) and sd(G) for G = ℤₚ ⋊ ℤ_{qⁿ} with a faithful action of order q."""
    if p < 2 or n < 1:
        raise ArgumentDomain(f"need p ≥ 2 and n ≥ 1, got p={p}, n={n}")
    size = 2 * n + p + 1
    return T21Degrees(
        sd_rel_top=Q(n * size + 2 * (n + 1), (n + 1) * size),
        sd_G=Q((2 * n + 1) * size + 2 * p * (n + 1), size * size),
    )


@dataclass(frozen=True)
class T22Type2Degrees:
    cyclic_lower: Q
    cyclic_top: Q
    semidirect_lower: Q
    sd_G: Q

    def values(self) -> t.Tuple[Q, Q, Q, Q]:
        return (self.cyclic_lower, self.cyclic_top, self.semidirect_lower, self.sd_G)


def sd_formula_T22_type2(q: int, n: int) -> T22Type2Degrees:
    """f at ℤ_{p^{n−1}}, ℤ_{pⁿ}, ℤ_q ⋊ ℤ_{p^{n−1}} and G.

    G = ℤ_q ⋊ ℤ_{pⁿ} with an action of order p².
    """
    if q < 2 or n < 2:
        raise ArgumentDomain(f"need q ≥ 2 and n > 1, got q={q}, n={n}")
    s = n + q
    return T22Type2Degrees(
        cyclic_lower=Q((n - 1) * s + n + 1, n * s),
        cyclic_top=Q((n - 1) * s + 2 * (n + 1), (n + 1) * s),
        semidirect_lower=Q((2 * n - 1) * s + q * (n + 1), (2 * n + q - 1) * s),
        sd_G=Q(n * s + q * (n + 1), s * s),
    )


@dataclass(frozen=True)
class T22Type4Degrees:
    cyclic_top: Q
    semidirect: Q
    sd_G: Q

    def values(self) -> t.Tuple[Q, Q, Q]:
        return (self.cyclic_top, self.semidirect, self.sd_G)


def sd_formula_T22_type4(q: int, n: int) -> T22Type4Degrees:
    """f at ℤ_{pⁿ}, ℤ_q ⋊ ℤ_{pⁿ} and G for G = ℤ_{q²} ⋊ ℤ_{pⁿ}, action of order p."""
    if q < 2 or n < 1:
        raise ArgumentDomain(f"need q ≥ 2 and n ≥ 1, got q={q}, n={n}")
    a = 3 * n + q * q + q + 1
    return T22Type4Degrees(
        cyclic_top=Q(n * a + 3 * (n + 1), (n + 1) * a),
        semidirect=Q(2 * n * a + 3 * q * (n + 1) + 3 * n + q + 2, (2 * n + q + 1) * a),
        sd_G=Q((3 * n + 1) * a + 3 * q * q * (n + 1) + q * (3 * n + q + 2), a * a),
    )


@dataclass(frozen=True)
class T22Type3Degrees:
    sd_rel: Q
    sd_G: Q


def sd_formula_T22_type3(r: int, n: int) -> T22Type3Degrees:
    """For G = (ℤᵣ ⋊ ℤ_{pⁿ}) × ℤ_q: f at ℤ_{pⁿ} and ℤ_{pⁿ} × ℤ_q (equal), and sd(G)."""
    if r < 2 or n < 1:
        raise ArgumentDomain(f"need r ≥ 2 and n ≥ 1, got r={r}, n={n}")
    block = sd_formula_T21(r, n)
    return T22Type3Degrees(sd_rel=block.sd_rel_top, sd_G=block.sd_G)


_TWO_GROUP_MIN_N = {"D": 3, "Q": 3, "S": 4}


def _two_group_family(family: str, n: int) -> str:
    key = "S" if family.upper() in ("S", "SD") else family.upper()
    if key not in _TWO_GROUP_MIN_N:
        raise ArgumentDomain(f"unknown 2-group family {family!r}; expected D, Q or S")
    if n < _TWO_GROUP_MIN_N[key]:
        raise ArgumentDomain(f"{key}-family formula needs n ≥ {_TWO_GROUP_MIN_N[key]}, got {n}")
    return key


def lattice_size_2groups(family: str, n: int) -> int:
    key = _two_group_family(family, n)
    if key == "D":
        return n - 1 + 2**n
    if key == "Q":
        return n - 1 + 2 ** (n - 1)
    return n - 1 + 3 * 2 ** (n - 2)


def sd_formula_2groups(family: str, n: int) -> Q:
    """sd of the dihedral (D), generalized quaternion (Q) or quasi-dihedral (S) group of order 2ⁿ."""
    key = _two_group_family(family, n)
    tail = (n - 1) ** 2 + 8
    if key == "D":
        numerator = (n - 2) * 2 ** (n + 2) + n * 2 ** (n + 1) + tail
    elif key == "Q":
        numerator = (n - 3) * 2 ** (n + 1) + n * 2**n + tail
    else:
        numerator = (n - 3) * 2 ** (n + 1) + n * 2**n + (3 * n - 2) * 2 ** (n - 1) + tail
    return Q(numerator, lattice_size_2groups(key, n) ** 2)


def normal_count_2groups(n: int) -> int:
    """|N(G)| for the three 2-group families of order 2ⁿ."""
    return n + 3


def criterion_fires_2groups(family: str, n: int) -> bool:
    """The sd(G) < 1/2 + (|N|+1)/(2|L|) test evaluated from the closed forms alone."""
    degree = sd_formula_2groups(family, n)
    rhs = Q(1, 2) + Q(normal_count_2groups(n) + 1, 2 * lattice_size_2groups(family, n))
    return degree < 1 and degree < rhs


@dataclass(frozen=True)
class PrimeCase:
    """Counts for K = H^p_1 at one odd prime p with p^alpha ‖ n."""

    p: int
    alpha: int
    c_K: int
    sd_K: Q
    condition_holds: bool


@dataclass(frozen=True)
class DihedralCaseFormulas:
    n: int
    case: int
    m: int
    odd_part: int
    c_H11: int
    sd_H11: Q
    primes: t.Tuple[PrimeCase, ...]


def dihedral_case_formulas(n: int) -> DihedralCaseFormulas:
    """f at H¹₁ and at every H^{pᵢ}₁ of D₂ₙ, with the equality condition those values impose.

    Writing n = 2^m·n′ with n′ odd (m = 0 for odd n) covers both parities with one set of counts:
    |C(H¹₁)| = τ(n) + (2m+1)τ(n′) and |C(H^p₁)| = τ(n) + (2m+1)[τ(n′) + (p−1)τ(n′/p^α)].
    """
    if n < 2 or power_of_two_exponent(n) is not None:
        raise ArgumentDomain(f"n = {n} is a power of 2; dihedral 2-groups are handled by sd_formula_2groups")
    m = (n & -n).bit_length() - 1
    odd_part = n >> m
    profile = divisor_profile(n)
    tau, sigma = profile.tau, profile.sigma
    size = tau + sigma
    tau_odd = divisor_profile(odd_part).tau
    weight = 2 * m + 1

    c_H = tau + weight * tau_odd
    sd_H = Q(2 * tau + sigma + weight * tau_odd, 2 * size)

    primes = []
    for p, alpha in divisor_profile(odd_part).factorization:
        tau_rest = divisor_profile(odd_part // p**alpha).tau
        c_K = tau + weight * (tau_odd + (p - 1) * tau_rest)
        numerator = (p + 3) * tau + 2 * sigma + weight * (p + 1) * tau_odd + weight * (p - 1) * tau_rest
        primes.append(
            PrimeCase(
                p=p,
                alpha=alpha,
                c_K=c_K,
                sd_K=Q(numerator, (p + 3) * size),
                condition_holds=sigma - weight * tau_odd == 2 * weight * tau_rest,
            )
        )
    return DihedralCaseFormulas(
        n=n, case=1 if m == 0 else 2, m=m, odd_part=odd_part, c_H11=c_H, sd_H11=sd_H, primes=tuple(primes)
    )


@dataclass(frozen=True)
class MembershipScan:
    bound: int
    odd_survivors: t.Tuple[int, ...]
    even_survivors: t.Tuple[int, ...]
    excluded_by_computation: t.Tuple[int, ...]

    @property
    def members(self) -> t.Tuple[int, ...]:
        """Survivors not ruled out by an exact sd(D₂ₙ) evaluation."""
        excluded = set(self.excluded_by_computation)
        return tuple(sorted(n for n in self.odd_survivors + self.even_survivors if n not in excluded))


def _equal_exponent(factorization: t.Dict[int, int]) -> t.Optional[int]:
    exponents = set(factorization.values())
    return exponents.pop() if len(exponents) == 1 else None


def membership_condition_scan(bound: int) -> MembershipScan:
    """Every 3 ≤ n ≤ bound (powers of 2 excluded) meeting the necessary condition for D₂ₙ to have |Im f| = 2.

    Odd n need equal prime exponents and σ(n) − τ(n) = 2τ(n/p^α) for each p^α ‖ n; even n = 2^m·n′
    need equal exponents α over the k primes of n′ and (2^{m+1} − 1)σ(n′) = (2m+1)(α+1)^{k−1}(α+3).
    Survivors whose exact sd(D₂ₙ) differs from f(H¹₁) are flagged as excluded by computation.
    """
    if bound > 10**6:
        raise ArgumentDomain(f"bound {bound} is above 10^6")
    if bound < 3:
        return MembershipScan(bound=bound, odd_survivors=(), even_survivors=(), excluded_by_computation=())
    tau, sigma = sigma_tau_sieve(bound)
    odd_survivors = []
    even_survivors = []
    for n in range(3, bound + 1):
        if n & (n - 1) == 0:
            continue
        if n % 2:
            if sigma[n] > 2 * tau[n]:
                continue
            factors = factorint(n)
            if _equal_exponent(factors) is None:
                continue
            if all(
                int(sigma[n]) - int(tau[n]) == 2 * divisor_profile(n // p**a).tau for p, a in factors.items()
            ):
                odd_survivors.append(n)
        else:
            if sigma[n] >= 4 * tau[n]:
                continue
            m = (n & -n).bit_length() - 1
            odd_part = n >> m
            factors = factorint(odd_part)
            alpha = _equal_exponent(factors)
            if alpha is None:
                continue
            k = len(factors)
            if (2 ** (m + 1) - 1) * divisor_profile(odd_part).sigma == (2 * m + 1) * (alpha + 1) ** (k - 1) * (
                alpha + 3
            ):
                even_survivors.append(n)

    excluded = tuple(n for n in odd_survivors + even_survivors if sd_dihedral(n) != dihedral_case_formulas(n).sd_H11)
    _logger.debug("membership scan to %d: odd %s, even %s, excluded %s", bound, odd_survivors, even_survivors, excluded)
    return MembershipScan(
        bound=bound,
        odd_survivors=tuple(odd_survivors),
        even_survivors=tuple(even_survivors),
        excluded_by_computation=tuple(sorted(excluded)),
    )


@dataclass(frozen=True)
class FormulaDiscrepancy:
    """A closed form that disagrees with brute force on a built instance; brute force is authoritative."""

    formula: str
    instance: str
    quantity: str
    formula_value: t.Any
    brute_force_value: t.Any


def compare(
    formula: str, instance: str, expected: t.Mapping[str, t.Any], observed: t.Mapping[str, t.Any]
) -> t.List[FormulaDiscrepancy]:
    """One discrepancy per quantity whose closed form differs from the observed value."""
    return [
        FormulaDiscrepancy(formula, instance, key, value, observed[key])
        for key, value in expected.items()
        if observed[key] != value
    ]
