"""Symbolic descriptors of the group families and their concrete realizations."""

import dataclasses
import re
import typing as t
from enum import Enum
from itertools import permutations

import numpy as np

from .errors import InvalidSpec, OrderCapExceeded, SpecParseError
from .group import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    cyclic,
    direct_product,
    from_trusted_table,
    semidirect_cyclic,
)
from .number_utils import is_prime, least_k_of_order, power_of_two_exponent


class FamilyKind(str, Enum):
    """Family names as written in the text grammar."""

    CYCLIC = "Z"
    DIHEDRAL = "D"
    GEN_QUATERNION = "Q"
    QUASI_DIHEDRAL = "SD"
    MODULAR = "M"
    T21 = "T21"
    T22_TYPE2 = "T22.2"
    T22_TYPE3 = "T22.3"
    T22_TYPE4 = "T22.4"
    T22_TYPE6 = "T22.6"
    T22_TYPE8 = "T22.8"
    ALT4 = "A4"
    PRODUCT = "prod"


_ARITY: t.Dict[FamilyKind, int] = {
    FamilyKind.CYCLIC: 1,
    FamilyKind.DIHEDRAL: 1,
    FamilyKind.GEN_QUATERNION: 1,
    FamilyKind.QUASI_DIHEDRAL: 1,
    FamilyKind.MODULAR: 2,
    FamilyKind.T21: 3,
    FamilyKind.T22_TYPE2: 3,
    FamilyKind.T22_TYPE3: 4,
    FamilyKind.T22_TYPE4: 3,
    FamilyKind.T22_TYPE6: 0,
    FamilyKind.T22_TYPE8: 1,
    FamilyKind.ALT4: 0,
    FamilyKind.PRODUCT: 0,
}


@dataclasses.dataclass(frozen=True)
class FamilySpec:
    """A family member with its integer parameters.

    Parameters are stored the way the presentations use them, not the way they are written:
    ``Dihedral`` holds n for D₂ₙ, ``GenQuaternion`` and ``QuasiDihedral`` hold n for order 2ⁿ,
    ``Modular`` holds (p, n), ``T21`` holds (p, q, n), ``T22Type2`` and ``T22Type4`` hold
    (q, p, n), ``T22Type3`` holds (r, p, q, n) and ``T22Type8`` holds n. Products keep their two
    factors in ``factors``.
    """

    kind: FamilyKind
    params: t.Tuple[int, ...] = ()
    factors: t.Tuple["FamilySpec", ...] = ()

    def __post_init__(self) -> None:
        if self.kind is FamilyKind.PRODUCT:
            if len(self.factors) != 2 or self.params:
                raise InvalidSpec("a product takes exactly two factors and no parameters")
        elif len(self.params) != _ARITY[self.kind] or self.factors:
            raise InvalidSpec(f"{self.kind.value} takes {_ARITY[self.kind]} parameter(s), got {self.params}")

    @classmethod
    def of(cls, kind: FamilyKind, *params: int) -> "FamilySpec":
        return cls(kind=kind, params=tuple(int(p) for p in params))

    @classmethod
    def product(cls, left: "FamilySpec", right: "FamilySpec") -> "FamilySpec":
        return cls(kind=FamilyKind.PRODUCT, factors=(left, right))

    def __str__(self) -> str:
        """Canonical text form, accepted back by :func:`parse`."""
        kind = self.kind
        if kind is FamilyKind.PRODUCT:
            return f"prod({self.factors[0]},{self.factors[1]})"
        if kind is FamilyKind.DIHEDRAL:
            return f"D({2 * self.params[0]})"
        if kind in (FamilyKind.GEN_QUATERNION, FamilyKind.QUASI_DIHEDRAL):
            return f"{kind.value}({2 ** self.params[0]})"
        if not self.params:
            return kind.value
        return f"{kind.value}({','.join(str(p) for p in self.params)})"


def _primes_violation(**named: int) -> t.Optional[str]:
    for name, value in named.items():
        if not is_prime(value):
            return f"{name} = {value} must be prime"
    return None


def validate(spec: FamilySpec) -> t.Optional[str]:
    """Return the first violated parameter rule of ``spec``, or None when it is valid."""
    kind, params = spec.kind, spec.params
    if kind is FamilyKind.PRODUCT:
        for factor in spec.factors:
            violation = validate(factor)
            if violation is not None:
                return f"{factor}: {violation}"
        return None
    if kind is FamilyKind.CYCLIC:
        return None if params[0] >= 1 else "n ≥ 1 required"
    if kind is FamilyKind.DIHEDRAL:
        return None if params[0] >= 1 else "n ≥ 1 required"
    if kind is FamilyKind.GEN_QUATERNION:
        return None if params[0] >= 3 else "n ≥ 3 required"
    if kind is FamilyKind.QUASI_DIHEDRAL:
        return None if params[0] >= 4 else "n ≥ 4 required"
    if kind is FamilyKind.MODULAR:
        p, n = params
        violation = _primes_violation(p=p)
        if violation is not None:
            return violation
        if p == 2 and n < 4:
            return "n ≥ 4 required for p = 2"
        if n < 3:
            return "n ≥ 3 required"
        return None
    if kind is FamilyKind.T21:
        p, q, n = params
        violation = _primes_violation(p=p, q=q)
        if violation is not None:
            return violation
        if (p - 1) % q:
            return "q | p-1 required"
        return None if n >= 1 else "n ≥ 1 required"
    if kind is FamilyKind.T22_TYPE2:
        q, p, n = params
        violation = _primes_violation(q=q, p=p)
        if violation is not None:
            return violation
        if (q - 1) % (p * p):
            return "p² | q-1 required"
        return None if n > 1 else "n > 1 required"
    if kind is FamilyKind.T22_TYPE3:
        r, p, q, n = params
        violation = _primes_violation(r=r, p=p, q=q)
        if violation is not None:
            return violation
        if p == q:
            return "p ≠ q required"
        if q == r:
            return "q ≠ r required"
        if (r - 1) % p:
            return "p | r-1 required"
        return None if n >= 1 else "n ≥ 1 required"
    if kind is FamilyKind.T22_TYPE4:
        q, p, n = params
        violation = _primes_violation(q=q, p=p)
        if violation is not None:
            return violation
        if (q - 1) % p:
            return "p | q-1 required"
        return None if n >= 1 else "n ≥ 1 required"
    if kind is FamilyKind.T22_TYPE8:
        return None if params[0] >= 3 else "n ≥ 3 required"
    return None


def order_of(spec: FamilySpec) -> int:
    """Group order implied by the parameters, without building anything."""
    kind, params = spec.kind, spec.params
    if kind is FamilyKind.PRODUCT:
        return order_of(spec.factors[0]) * order_of(spec.factors[1])
    if kind is FamilyKind.CYCLIC:
        return params[0]
    if kind is FamilyKind.DIHEDRAL:
        return 2 * params[0]
    if kind in (FamilyKind.GEN_QUATERNION, FamilyKind.QUASI_DIHEDRAL):
        return 2 ** params[0]
    if kind is FamilyKind.MODULAR:
        return params[0] ** params[1]
    if kind is FamilyKind.T21:
        p, q, n = params
        return p * q**n
    if kind is FamilyKind.T22_TYPE2:
        q, p, n = params
        return q * p**n
    if kind is FamilyKind.T22_TYPE3:
        r, p, q, n = params
        return r * p**n * q
    if kind is FamilyKind.T22_TYPE4:
        q, p, n = params
        return q * q * p**n
    if kind is FamilyKind.T22_TYPE6:
        return 16
    if kind is FamilyKind.T22_TYPE8:
        return 2 ** (params[0] + 2)
    return 12


def _gen_quaternion(n: int) -> np.ndarray:
    """Cayley table of Q₂ⁿ on pairs x^a·y^b, index 2a + b, with y x y⁻¹ = x⁻¹ and y² = x^(N/2)."""
    half = 2 ** (n - 1)
    idx = np.arange(2 * half)
    a, b = idx // 2, idx % 2
    sign = 1 - 2 * b
    first = (a[:, None] + sign[:, None] * a[None, :] + (b[:, None] & b[None, :]) * (half // 2)) % half
    second = (b[:, None] + b[None, :]) % 2
    return first * 2 + second


def _alternating4() -> np.ndarray:
    """Cayley table of the even permutations of four points, sorted lexicographically."""
    perms = np.array(
        [p for p in permutations(range(4)) if sum(p[i] > p[j] for i in range(4) for j in range(i + 1, 4)) % 2 == 0]
    )
    weights = 4 ** np.arange(3, -1, -1)
    lookup = np.full(4**4, -1, dtype=np.int64)
    lookup[perms @ weights] = np.arange(len(perms))
    # (p·q)(i) = p(q(i))
    composed = perms[np.arange(len(perms))[:, None, None], perms[None, :, :]]
    return lookup[composed @ weights]


def _build(spec: FamilySpec, order_cap: int) -> FiniteGroup:
    kind, params = spec.kind, spec.params
    if kind is FamilyKind.PRODUCT:
        return direct_product(_build(spec.factors[0], order_cap), _build(spec.factors[1], order_cap), order_cap)
    if kind is FamilyKind.CYCLIC:
        return cyclic(params[0], order_cap)
    if kind is FamilyKind.DIHEDRAL:
        n = params[0]
        return semidirect_cyclic(n, 2, n - 1, order_cap)
    if kind is FamilyKind.GEN_QUATERNION:
        return from_trusted_table(_gen_quaternion(params[0]), str(spec))
    if kind is FamilyKind.QUASI_DIHEDRAL:
        n = params[0]
        return semidirect_cyclic(2 ** (n - 1), 2, 2 ** (n - 2) - 1, order_cap)
    if kind is FamilyKind.MODULAR:
        p, n = params
        return semidirect_cyclic(p ** (n - 1), p, 1 + p ** (n - 2), order_cap)
    if kind is FamilyKind.T21:
        p, q, n = params
        return semidirect_cyclic(p, q**n, least_k_of_order(p, q), order_cap)
    if kind is FamilyKind.T22_TYPE2:
        q, p, n = params
        return semidirect_cyclic(q, p**n, least_k_of_order(q, p * p), order_cap)
    if kind is FamilyKind.T22_TYPE3:
        r, p, q, n = params
        block = semidirect_cyclic(r, p**n, least_k_of_order(r, p), order_cap)
        return direct_product(block, cyclic(q, order_cap), order_cap)
    if kind is FamilyKind.T22_TYPE4:
        q, p, n = params
        return semidirect_cyclic(q * q, p**n, least_k_of_order(q * q, p), order_cap)
    if kind is FamilyKind.T22_TYPE6:
        return semidirect_cyclic(4, 4, 3, order_cap)
    if kind is FamilyKind.T22_TYPE8:
        n = params[0]
        return semidirect_cyclic(2**n, 4, 1 + 2 ** (n - 1), order_cap)
    return from_trusted_table(_alternating4(), str(spec))


def build(spec: FamilySpec, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Construct the concrete group of ``spec``, labelled with its canonical text form."""
    violation = validate(spec)
    if violation is not None:
        raise InvalidSpec(f"{spec}: {violation}")
    order = order_of(spec)
    if order > order_cap:
        raise OrderCapExceeded(order, order_cap)
    return dataclasses.replace(_build(spec, order_cap), label=str(spec))


_TOKEN = re.compile(r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9]*(?:\.\d+)?)|(?P<int>-?\d+)|(?P<punct>[(),]))")

_NAMES: t.Dict[str, FamilyKind] = {kind.value.lower(): kind for kind in FamilyKind}


class _Parser:
    def __init__(self, text: str):
        self._text = text
        self._tokens: t.List[t.Tuple[str, str]] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            match = _TOKEN.match(stripped, pos)
            if match is None or match.end() == pos:
                raise SpecParseError(f"unexpected character {stripped[pos]!r} at {pos} in {text!r}")
            kind = t.cast(str, match.lastgroup)
            self._tokens.append((kind, match.group(kind)))
            pos = match.end()
        self._pos = 0

    def _peek(self) -> t.Optional[t.Tuple[str, str]]:
        return self._tokens[self._pos] if self._pos < len(self._tokens) else None

    def _take(self, kind: str, value: t.Optional[str] = None) -> str:
        token = self._peek()
        if token is None or token[0] != kind or (value is not None and token[1] != value):
            expected = value or kind
            found = "end of input" if token is None else repr(token[1])
            raise SpecParseError(f"expected {expected}, found {found} in {self._text!r}")
        self._pos += 1
        return token[1]

    def parse(self) -> FamilySpec:
        spec = self._spec()
        if self._peek() is not None:
            raise SpecParseError(f"trailing input after {spec} in {self._text!r}")
        return spec

    def _spec(self) -> FamilySpec:
        name = self._take("name")
        kind = _NAMES.get(name.lower())
        if kind is None:
            raise SpecParseError(f"unknown family {name!r} in {self._text!r}")
        if kind is FamilyKind.PRODUCT:
            self._take("punct", "(")
            factors = [self._spec()]
            while self._peek() == ("punct", ","):
                self._take("punct", ",")
                factors.append(self._spec())
            self._take("punct", ")")
            if len(factors) < 2:
                raise SpecParseError(f"prod needs at least two factors in {self._text!r}")
            spec = factors[0]
            for factor in factors[1:]:
                spec = FamilySpec.product(spec, factor)
            return spec

        args: t.List[int] = []
        if self._peek() == ("punct", "("):
            self._take("punct", "(")
            args.append(int(self._take("int")))
            while self._peek() == ("punct", ","):
                self._take("punct", ",")
                args.append(int(self._take("int")))
            self._take("punct", ")")
        if len(args) != _ARITY[kind]:
            raise SpecParseError(f"{kind.value} takes {_ARITY[kind]} argument(s), got {len(args)} in {self._text!r}")
        return _from_written(kind, args, self._text)


def _from_written(kind: FamilyKind, args: t.List[int], text: str) -> FamilySpec:
    if kind is FamilyKind.DIHEDRAL:
        if args[0] < 2 or args[0] % 2:
            raise SpecParseError(f"D(k) takes the even group order k ≥ 2, got {args[0]} in {text!r}")
        return FamilySpec.of(kind, args[0] // 2)
    if kind in (FamilyKind.GEN_QUATERNION, FamilyKind.QUASI_DIHEDRAL):
        exponent = power_of_two_exponent(args[0])
        if exponent is None:
            raise SpecParseError(f"{kind.value}(k) takes a power of two, got {args[0]} in {text!r}")
        return FamilySpec.of(kind, exponent)
    return FamilySpec.of(kind, *args)


def parse(text: str) -> FamilySpec:
    """Parse the family grammar, e.g. ``D(6)``, ``T22.3(3,2,5,1)`` or ``prod(D(6),Z(5))``."""
    return _Parser(text).parse()


def is_family_name(word: str) -> bool:
    return word.lower() in _NAMES
