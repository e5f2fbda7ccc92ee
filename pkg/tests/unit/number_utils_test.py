import typing as t

import pytest
from faker import Faker

from latcom.errors import NoSuchK
from latcom.number_utils import (
    is_prime,
    least_k_of_order,
    multiplicative_order,
    power_of_two_exponent,
    sigma_tau_sieve,
)
from tests.faker_providers import GroupParameterProviders


class TestNumberUtils:
    @pytest.mark.parametrize(
        "n,expected",
        [
            (0, False),
            (1, False),
            (2, True),
            (9, False),
            (199, True),
            (2**61 - 1, True),
            (2**61 + 1, False),
        ],
    )
    def test_is_prime(self, n: int, expected: bool) -> None:
        assert is_prime(n) is expected

    @pytest.mark.parametrize("n,expected", [(1, 0), (8, 3), (64, 6), (12, None), (0, None), (-4, None)])
    def test_power_of_two_exponent(self, n: int, expected: t.Optional[int]) -> None:
        assert power_of_two_exponent(n) == expected

    @pytest.mark.parametrize("k,m,order", [(2, 7, 3), (3, 7, 6), (6, 7, 2), (4, 9, 3)])
    def test_multiplicative_order(self, k: int, m: int, order: int) -> None:
        assert multiplicative_order(k, m) == order

    @pytest.mark.parametrize(
        "m,d,k",
        [
            (7, 3, 2),
            (7, 6, 3),
            (5, 4, 2),
            (9, 3, 4),
            (3, 2, 2),
        ],
    )
    def test_least_k_of_order(self, m: int, d: int, k: int) -> None:
        assert least_k_of_order(m, d) == k

    def test_minus_one_is_the_only_involution(self, faker: Faker) -> None:
        faker.add_provider(GroupParameterProviders)
        p = faker.odd_prime()
        assert is_prime(p)
        assert least_k_of_order(p, 2) == p - 1
        assert multiplicative_order(p - 1, p) == 2

    def test_least_k_missing(self) -> None:
        with pytest.raises(NoSuchK):
            least_k_of_order(7, 4)

    def test_sigma_tau_sieve(self) -> None:
        tau, sigma = sigma_tau_sieve(12)
        assert len(tau) == len(sigma) == 13
        assert tau[1] == sigma[1] == 1
        assert tau[12] == 6
        assert sigma[12] == 28
        assert tau[7] == 2
        assert sigma[7] == 8
