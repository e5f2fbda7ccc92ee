"""Click utilities."""

import typing as t

import click

from .errors import SpecParseError
from .families import FamilySpec, parse
from .group import ExactRational
from .json_utils import parse_rational
from .scanner import ParameterRange, parse_range


class SpecParamType(click.ParamType):
    """A family spec such as ``D(6)`` or ``prod(D(6),Z(5))``."""

    name = "spec"

    def convert(self, value: t.Any, param: t.Optional[click.Parameter], ctx: t.Optional[click.Context]) -> FamilySpec:
        """Override."""
        if isinstance(value, FamilySpec):
            return value
        try:
            return parse(str(value))
        except SpecParseError as err:
            self.fail(str(err), param, ctx)


class RangeParamType(click.ParamType):
    """A scan variable range: ``n=2..50``, ``n=2..50:2`` or ``q=5,7,11``."""

    name = "range"

    def convert(
        self, value: t.Any, param: t.Optional[click.Parameter], ctx: t.Optional[click.Context]
    ) -> ParameterRange:
        """Override."""
        if isinstance(value, ParameterRange):
            return value
        try:
            return parse_range(str(value))
        except SpecParseError as err:
            self.fail(str(err), param, ctx)


class RationalParamType(click.ParamType):
    """An exact rational written ``a/b`` or as an integer."""

    name = "rational"

    def convert(
        self, value: t.Any, param: t.Optional[click.Parameter], ctx: t.Optional[click.Context]
    ) -> ExactRational:
        """Override."""
        if isinstance(value, ExactRational):
            return value
        try:
            return parse_rational(str(value))
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a rational number a/b", param, ctx)


SPEC = SpecParamType()
RANGE = RangeParamType()
RATIONAL = RationalParamType()
