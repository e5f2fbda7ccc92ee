from fractions import Fraction

import pytest

from latcom.analytic import sd_formula_T21
from latcom.density import (
    DEFAULT_STEPS,
    build_plan,
    convergence_table,
    next_prime_in_ap,
    one_target_plan,
    verify_smallest_instance,
    zero_target_sequence,
)
from latcom.errors import ArgumentDomain
from latcom.families import FamilyKind, FamilySpec


class TestPrimeSearch:
    @pytest.mark.parametrize(
        "q,after,expected",
        [
            (3, 7, 13),
            (2, 2, 3),
            (3, 2, 7),
            (3, 198, 199),
            (5, 11, 31),
        ],
    )
    def test_next_prime_in_ap(self, q: int, after: int, expected: int) -> None:
        assert next_prime_in_ap(q, after) == expected

    def test_modulus_domain(self) -> None:
        with pytest.raises(ArgumentDomain):
            next_prime_in_ap(1, 5)


class TestBuildPlan:
    def test_half(self) -> None:
        plan = build_plan(1, 2)
        assert len(plan.factors) == 1
        factor = plan.factors[0]
        assert (factor.q, factor.n, factor.p) == (3, 1, 7)
        assert factor.order == 21
        assert factor.spec == FamilySpec.of(FamilyKind.T21, 7, 3, 1)
        assert plan.achieved == Fraction(7, 10)
        assert plan.error == Fraction(1, 5)

    def test_two_thirds_at_large_primes(self) -> None:
        plan = build_plan(2, 3, min_p=199)
        assert plan.max_p == 199
        assert plan.error == Fraction(1, 102)
        assert plan.error < Fraction(1, 100)

    def test_factors_telescope(self) -> None:
        plan = build_plan(2, 4)
        assert [(f.q, f.n) for f in plan.factors] == [(3, 2), (5, 3)]
        assert len({f.p for f in plan.factors}) == 2
        product = Fraction(1)
        for factor in plan.factors:
            assert (factor.p - 1) % factor.q == 0
            product *= sd_formula_T21(factor.p, factor.n).sd_rel_top
        assert plan.achieved == product
        assert plan.target == Fraction(1, 2)

    @pytest.mark.parametrize("a,b", [(0, 1), (3, 2), (2, 2)])
    def test_domain(self, a: int, b: int) -> None:
        with pytest.raises(ArgumentDomain):
            build_plan(a, b)


class TestConvergence:
    def test_errors_decrease(self) -> None:
        rows = convergence_table(2, 3, steps=8)
        assert len(rows) == 8
        errors = [plan.error for plan in rows]
        assert all(a > b for a, b in zip(errors, errors[1:]))
        for before, after in zip(rows, rows[1:]):
            assert min(f.p for f in after.factors) > before.max_p

    def test_tolerance_stops_early(self) -> None:
        rows = convergence_table(2, 3, steps=30, tolerance=Fraction(1, 100))
        assert len(rows) < 30
        assert rows[-1].error < Fraction(1, 100)
        assert all(plan.error >= Fraction(1, 100) for plan in rows[:-1])

    def test_steps_domain(self) -> None:
        with pytest.raises(ArgumentDomain):
            convergence_table(2, 3, steps=0)

    def test_tolerance_without_steps(self) -> None:
        rows = convergence_table(2, 3, tolerance=Fraction(1, 100))
        assert len(rows) > DEFAULT_STEPS
        assert rows[-1].error < Fraction(1, 100)
        assert rows[DEFAULT_STEPS - 1].error == Fraction(1, 36)

    def test_steps_limit_tolerance(self) -> None:
        rows = convergence_table(2, 3, steps=1, tolerance=Fraction(1, 100))
        assert [plan.error for plan in rows] == [Fraction(1, 6)]

    def test_default_steps(self) -> None:
        assert len(convergence_table(2, 3)) == DEFAULT_STEPS
        assert len(zero_target_sequence()) == DEFAULT_STEPS

    @pytest.mark.parametrize("tolerance", [Fraction(0), Fraction(-1, 2)])
    def test_tolerance_domain(self, tolerance: Fraction) -> None:
        with pytest.raises(ArgumentDomain):
            convergence_table(2, 3, tolerance=tolerance)
        with pytest.raises(ArgumentDomain):
            zero_target_sequence(tolerance=tolerance)

    def test_zero_target_tolerance(self) -> None:
        sequence = zero_target_sequence(tolerance=Fraction(1, 10))
        assert sequence[-1][1] < Fraction(1, 10)
        assert all(value >= Fraction(1, 10) for _, value in sequence[:-1])

    def test_zero_target(self) -> None:
        sequence = zero_target_sequence(5)
        assert sequence[0] == (8, Fraction(23, 25))
        values = [value for _, value in sequence]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_one_target(self) -> None:
        plan = one_target_plan()
        assert plan.factors == ()
        assert plan.achieved == 1
        assert plan.error == 0
        assert plan.max_p == 0


class TestSmallestInstance:
    @pytest.mark.parametrize("a,b,value,order", [(1, 2, Fraction(7, 10), 21), (2, 3, Fraction(5, 6), 63)])
    def test_verified(self, a: int, b: int, value: Fraction, order: int) -> None:
        report = verify_smallest_instance(build_plan(a, b))
        assert report.status == "verified"
        assert report.ok
        assert report.product_order == order
        assert report.product_value == value
        assert all(check.matches for check in report.factor_checks)

    def test_factors_only_under_small_cap(self) -> None:
        report = verify_smallest_instance(build_plan(2, 4), order_cap=100)
        assert report.status == "factors-verified"
        assert report.product_value is None
        assert report.factor_checks[0].matches is True
        assert report.factor_checks[1].matches is None

    def test_formula_only(self) -> None:
        report = verify_smallest_instance(build_plan(1, 2), order_cap=10)
        assert report.status == "formula-only"
        assert report.ok
