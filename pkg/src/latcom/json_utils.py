"""JSON and CSV renderings of reports, lattices and rationals."""

import typing as t

import simplejson as json

from .degrees import Criterion, DegreeReport
from .group import ExactRational
from .lattice import SubgroupLattice


SCHEMA_VERSION: int = 1


def rational(value: ExactRational) -> t.Dict[str, t.Any]:
    """Exact num/den as decimal strings; ``approx`` is advisory only."""
    return {"num": str(value.numerator), "den": str(value.denominator), "approx": float(value)}


def rational_text(value: ExactRational) -> str:
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text: str) -> ExactRational:
    """Read ``a/b`` (or a bare integer) into an exact rational."""
    return ExactRational(text.strip())


def criterion_to_dict(criterion: Criterion) -> t.Dict[str, t.Any]:
    return {"lhs": rational(criterion.lhs), "rhs": rational(criterion.rhs), "fires": criterion.fires}


def report_to_dict(report: DegreeReport) -> t.Dict[str, t.Any]:
    return {
        "schema": SCHEMA_VERSION,
        "label": report.label,
        "order": report.order,
        "lattice_size": report.lattice_size,
        "normal_count": report.normal_count,
        "gamma": report.gamma,
        "sd": rational(report.sd),
        "f_image": [rational(v) for v in report.f_image],
        "imf_size": report.imf_size,
        "class_values": [{"class_id": c, "value": rational(v)} for c, v in sorted(report.class_values.items())],
        "iwasawa": report.iwasawa,
        "in_class_C": report.in_class_C,
        "criterion31": criterion_to_dict(report.criterion31),
    }


def lattice_to_dict(lattice: SubgroupLattice) -> t.Dict[str, t.Any]:
    return {
        "schema": SCHEMA_VERSION,
        "label": lattice.group.label,
        "order": lattice.group.order,
        "subgroups": lattice.as_records(),
    }


def dumps(document: t.Any, compact: bool = False) -> str:
    """Serialize with insertion-ordered keys so equal documents give equal bytes."""
    if compact:
        return json.dumps(document, separators=(",", ":"), ensure_ascii=False)
    return json.dumps(document, indent=2, ensure_ascii=False)


def loads(text: str) -> t.Any:
    return json.loads(text)


def csv_cell(value: t.Any) -> str:
    """Flatten a JSON value into one CSV cell; rationals become ``num/den``."""
    if isinstance(value, dict) and "num" in value and "den" in value:
        return f"{value['num']}/{value['den']}"
    if isinstance(value, dict):
        return ";".join(f"{k}={csv_cell(v)}" for k, v in value.items())
    if isinstance(value, list):
        return " ".join(csv_cell(v) for v in value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def to_jsonable(value: t.Any) -> t.Any:
    """Recursively replace rationals by their num/den form."""
    if isinstance(value, ExactRational):
        return rational(value)
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    return value
