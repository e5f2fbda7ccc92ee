"""Number theory helpers."""

import typing as t
from math import gcd

import numpy as np
from sympy import isprime, n_order

from .errors import NoSuchK


def is_prime(n: int) -> bool:
    """Deterministic primality below 2^64."""
    return bool(isprime(n))


def power_of_two_exponent(n: int) -> t.Optional[int]:
    """Return m when n = 2^m, otherwise None."""
    if n > 0 and n & (n - 1) == 0:
        return n.bit_length() - 1
    return None


def multiplicative_order(k: int, m: int) -> int:
    """Order of the unit k modulo m."""
    return int(n_order(k, m))


def least_k_of_order(m: int, d: int) -> int:
    """Smallest k ≥ 2 whose multiplicative order modulo m is exactly d."""
    for k in range(2, m):
        if gcd(k, m) == 1 and multiplicative_order(k, m) == d:
            return k
    raise NoSuchK(f"no unit of multiplicative order {d} modulo {m}")


def sigma_tau_sieve(bound: int) -> t.Tuple[np.ndarray, np.ndarray]:
    """Divisor count and divisor sum of every n ≤ bound (index 0 unused)."""
    tau = np.zeros(bound + 1, dtype=np.int64)
    sigma = np.zeros(bound + 1, dtype=np.int64)
    for d in range(1, bound + 1):
        tau[d::d] += 1
        sigma[d::d] += d
    return tau, sigma
