"""Module containing bug report helper(s).

Adapted from https://github.com/psf/requests/blob/master/requests/help.py
"""

import platform
import sys
import typing as t

import click
import numpy
import packaging
import simplejson
import sympy
import tabulate
import tqdm

from . import __version__ as package_version
from .group import DEFAULT_ORDER_CAP
from .json_utils import SCHEMA_VERSION


def _implementation() -> str:
    """Name and version of the running Python implementation, e.g. ``CPython 3.12.1``."""
    implementation: str = platform.python_implementation()

    if implementation == "PyPy":
        pypy = sys.pypy_version_info  # type: ignore # noqa: ignore=E1101 pylint: disable=E1101
        implementation_version = f"{pypy.major}.{pypy.minor}.{pypy.micro}"
        if pypy.releaselevel != "final":
            implementation_version += pypy.releaselevel
    elif implementation in ("CPython", "Jython", "IronPython"):
        implementation_version = platform.python_version()
    else:
        implementation_version = "Unknown"

    return f"{implementation} {implementation_version}"


def info() -> t.List[t.List[str]]:
    """Generate information for a bug report."""
    try:
        platform_info = f"{platform.system()} {platform.release()}"
    except IOError:
        platform_info = "Unknown"

    return [
        ["latcom", package_version],
        ["", ""],
        ["Operating System", platform_info],
        ["Python", _implementation()],
        ["Default order cap", str(DEFAULT_ORDER_CAP)],
        ["Report schema", str(SCHEMA_VERSION)],
        ["", ""],
        ["click", click.__version__],
        ["numpy", numpy.__version__],
        ["packaging", packaging.__version__],
        ["simplejson", simplejson.__version__],  # type: ignore
        ["sympy", sympy.__version__],
        ["tabulate", tabulate.__version__],
        ["tqdm", tqdm.__version__],
    ]
