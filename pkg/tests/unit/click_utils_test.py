from fractions import Fraction

import click
import pytest
from pytest_mock import MockFixture

from latcom import click_utils
from latcom.click_utils import RANGE, RATIONAL, SPEC
from latcom.families import FamilyKind, FamilySpec
from latcom.scanner import ParameterRange


class TestClickUtils:
    def test_spec(self) -> None:
        assert SPEC.convert("D(6)", None, None) == FamilySpec.of(FamilyKind.DIHEDRAL, 3)
        spec = FamilySpec.of(FamilyKind.CYCLIC, 4)
        assert SPEC.convert(spec, None, None) is spec

    @pytest.mark.parametrize("value", ["D(3)", "Y(2)", "prod(Z(2)"])
    def test_invalid_spec(self, value: str) -> None:
        with pytest.raises(click.BadParameter):
            SPEC.convert(value, None, None)

    def test_range(self) -> None:
        assert RANGE.convert("n=2..4", None, None) == ParameterRange("n", (2, 3, 4))

    @pytest.mark.parametrize("value", ["n", "n=4..2", "n=a,b"])
    def test_invalid_range(self, value: str) -> None:
        with pytest.raises(click.BadParameter):
            RANGE.convert(value, None, None)

    @pytest.mark.parametrize("value,expected", [("5/6", Fraction(5, 6)), ("1", Fraction(1)), (" 0 ", Fraction(0))])
    def test_rational(self, value: str, expected: Fraction) -> None:
        assert RATIONAL.convert(value, None, None) == expected

    @pytest.mark.parametrize("value", ["abc", "1/0", "1/2/3"])
    def test_invalid_rational(self, value: str) -> None:
        with pytest.raises(click.BadParameter):
            RATIONAL.convert(value, None, None)

    def test_rational_uses_parse_rational(self, mocker: MockFixture) -> None:
        spy = mocker.spy(click_utils, "parse_rational")
        assert RATIONAL.convert("2/3", None, None) == Fraction(2, 3)
        spy.assert_called_once_with("2/3")
