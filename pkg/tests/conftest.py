import typing as t
from contextlib import contextmanager
from pathlib import Path

import pytest
from _pytest.config import Config
from _pytest.config.argparsing import Parser
from _pytest.legacypath import TempdirFactory
from click.testing import CliRunner
from faker import Faker

from latcom.families import build, parse
from latcom.group import DEFAULT_ORDER_CAP, FiniteGroup, format_cayley_table
from latcom.lattice import SubgroupLattice, all_subgroups


def pytest_addoption(parser: "Parser") -> None:
    parser.addoption(
        "--order-cap",
        dest="order_cap",
        type=int,
        default=DEFAULT_ORDER_CAP,
        help=f"Largest group order the tests may build. Defaults to {DEFAULT_ORDER_CAP}.",
    )


class Helpers:
    @staticmethod
    @contextmanager
    def not_raises(exception: t.Type[Exception]) -> t.Generator:
        try:
            yield
        except exception:
            raise pytest.fail(f"DID RAISE {exception}")

    @staticmethod
    def group(spec: str) -> FiniteGroup:
        return build(parse(spec))

    @staticmethod
    def lattice(spec: str) -> SubgroupLattice:
        return all_subgroups(build(parse(spec)))


@pytest.fixture
def helpers() -> t.Type[Helpers]:
    return Helpers


@pytest.fixture(scope="session")
def order_cap(pytestconfig: Config) -> int:
    return int(pytestconfig.getoption("order_cap"))


@pytest.fixture(scope="session")
def s3() -> FiniteGroup:
    return build(parse("D(6)"))


@pytest.fixture(scope="session")
def d8() -> FiniteGroup:
    return build(parse("D(8)"))


@pytest.fixture(scope="session")
def q8() -> FiniteGroup:
    return build(parse("Q(8)"))


@pytest.fixture(scope="session")
def a4() -> FiniteGroup:
    return build(parse("A4"))


@pytest.fixture(scope="session")
def cayley_table_file(_session_faker: Faker, tmpdir_factory: TempdirFactory, s3: FiniteGroup) -> str:
    """The Cayley table of D(6) written to a temporary file."""
    path = Path(str(tmpdir_factory.mktemp("tables"))) / _session_faker.file_name(extension="txt")
    path.write_text(format_cayley_table(s3), encoding="utf-8")
    return str(path)


@pytest.fixture()
def cli_runner() -> t.Iterator[CliRunner]:
    yield CliRunner()
