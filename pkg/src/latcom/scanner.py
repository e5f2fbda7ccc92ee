"""Parameter scans over family templates, with an append-only JSON-lines result cache."""

import ast
import csv
import io
import operator
import os
import re
import typing as t
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product, repeat
from os.path import isfile, realpath

import typing_extensions as tx
from packaging import version
from tabulate import tabulate

from . import __version__
from .degrees import degree_report
from .errors import JobCapExceeded, SpecParseError
from .families import build, is_family_name, order_of, parse, validate
from .json_utils import SCHEMA_VERSION, csv_cell, dumps, loads, report_to_dict
from .runner import Runner
from .types import ScannerAttributes, ScannerParams


DEFAULT_JOB_CAP: int = 10000

# output name -> key of the report document
OUTPUTS: t.Dict[str, str] = {
    "order": "order",
    "sd": "sd",
    "imf": "f_image",
    "imf_size": "imf_size",
    "gamma": "gamma",
    "criterion31": "criterion31",
    "in_class_C": "in_class_C",
    "iwasawa": "iwasawa",
    "lattice_size": "lattice_size",
    "normal_count": "normal_count",
}

DEFAULT_OUTPUTS: t.Tuple[str, ...] = ("sd", "imf", "gamma", "criterion31")

FORMATS: t.Tuple[str, ...] = ("json", "csv", "table")

_RANGE = re.compile(r"^\s*(?P<name>[A-Za-z_]\w*)\s*=\s*(?P<values>.+?)\s*$")
_SPAN = re.compile(r"^(?P<start>-?\d+)\s*\.\.\s*(?P<stop>-?\d+)(?:\s*:\s*(?P<step>\d+))?$")
_ARGUMENT = re.compile(r"(?<=[(,])([^(),]+)(?=[),])")
_IMPLICIT_PRODUCT = re.compile(r"(\d)\s*(?=[A-Za-z_(])")

_OPERATORS: t.Dict[t.Type[ast.operator], t.Callable[[int, int], int]] = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
    ast.Pow: operator.pow,
}


@dataclass(frozen=True)
class ParameterRange:
    name: str
    values: t.Tuple[int, ...]


def parse_range(text: str) -> ParameterRange:
    """Read ``n=2..50``, ``n=2..50:2`` or ``q=5,7,11``; spans include both ends."""
    match = _RANGE.match(text)
    if match is None:
        raise SpecParseError(f"expected NAME=VALUES, got {text!r}")
    name, values = match.group("name"), match.group("values")
    span = _SPAN.match(values)
    if span is not None:
        start, stop = int(span.group("start")), int(span.group("stop"))
        step = int(span.group("step") or 1)
        if step < 1 or stop < start:
            raise SpecParseError(f"empty range {text!r}")
        return ParameterRange(name, tuple(range(start, stop + 1, step)))
    try:
        return ParameterRange(name, tuple(int(v) for v in values.split(",")))
    except ValueError as err:
        raise SpecParseError(f"cannot read the values of {text!r}") from err


@dataclass(frozen=True)
class ScanJob:
    """A family template, its parameter ranges and the report fields to emit."""

    template: str
    ranges: t.Tuple[ParameterRange, ...]
    outputs: t.Tuple[str, ...] = DEFAULT_OUTPUTS
    fmt: str = "json"
    cache: t.Optional[str] = None

    def __post_init__(self) -> None:
        names = [r.name for r in self.ranges]
        if len(set(names)) != len(names):
            raise SpecParseError(f"a variable is ranged twice in {names}")
        unknown = [o for o in self.outputs if o not in OUTPUTS]
        if unknown:
            raise SpecParseError(f"unknown output(s) {', '.join(unknown)}; expected {', '.join(OUTPUTS)}")
        if self.fmt not in FORMATS:
            raise SpecParseError(f"unknown format {self.fmt!r}")

    @property
    def size(self) -> int:
        size = 1
        for r in self.ranges:
            size *= len(r.values)
        return size

    def combinations(self) -> t.Iterator[t.Dict[str, int]]:
        names = [r.name for r in self.ranges]
        for values in product(*(r.values for r in self.ranges)):
            yield dict(zip(names, values))


def _evaluate(node: ast.AST, env: t.Mapping[str, int]) -> int:
    if isinstance(node, ast.Expression):
        return _evaluate(node.body, env)
    if isinstance(node, ast.Constant) and type(node.value) is int:
        return node.value
    if isinstance(node, ast.Name):
        if node.id not in env:
            raise SpecParseError(f"unknown variable {node.id!r}")
        return env[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        value = _evaluate(node.operand, env)
        return -value if isinstance(node.op, ast.USub) else value
    if isinstance(node, ast.BinOp) and type(node.op) in _OPERATORS:
        left, right = _evaluate(node.left, env), _evaluate(node.right, env)
        if isinstance(node.op, ast.Pow) and not 0 <= right <= 64:
            raise SpecParseError(f"exponent {right} outside 0..64")
        return _OPERATORS[type(node.op)](left, right)
    raise SpecParseError(f"unsupported expression {ast.dump(node)}")


def evaluate(expression: str, env: t.Mapping[str, int]) -> int:
    """Integer value of an arithmetic expression over ``env``; ``2n`` reads as ``2*n``."""
    source = _IMPLICIT_PRODUCT.sub(r"\1*", expression.strip())
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as err:
        raise SpecParseError(f"cannot read expression {expression!r}") from err
    return _evaluate(tree, env)


def render(template: str, env: t.Mapping[str, int]) -> str:
    """Substitute every argument expression of ``template``; family names are kept as written."""

    def substitute(match: t.Match[str]) -> str:
        argument = match.group(1).strip()
        if argument not in env and is_family_name(argument):
            return argument
        return str(evaluate(argument, env))

    return _ARGUMENT.sub(substitute, template)


def compute_document(spec_text: str, order_cap: int, full: bool = False) -> t.Dict[str, t.Any]:
    """Report document of one canonical spec; runs inside pool workers."""
    G = build(parse(spec_text), order_cap)
    return report_to_dict(degree_report(G, full=full, order_cap=order_cap))


@dataclass(frozen=True)
class ScanRow:
    params: t.Tuple[t.Tuple[str, int], ...]
    spec: str
    document: t.Dict[str, t.Any] = field(compare=False)
    cached: bool = field(default=False, compare=False)

    def values(self, outputs: t.Sequence[str]) -> t.Dict[str, t.Any]:
        return {name: self.document[OUTPUTS[name]] for name in outputs}


@dataclass(frozen=True)
class SkippedSpec:
    params: t.Tuple[t.Tuple[str, int], ...]
    text: str
    reason: str


@dataclass(frozen=True)
class ScanResult:
    job: ScanJob
    rows: t.Tuple[ScanRow, ...]
    skipped: t.Tuple[SkippedSpec, ...]

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {
            "schema": SCHEMA_VERSION,
            "template": self.job.template,
            "ranges": {r.name: list(r.values) for r in self.job.ranges},
            "outputs": list(self.job.outputs),
            "rows": [
                {"params": dict(row.params), "spec": row.spec, **row.values(self.job.outputs)} for row in self.rows
            ],
            "skipped": [{"params": dict(s.params), "spec": s.text, "reason": s.reason} for s in self.skipped],
        }

    def table(self) -> t.Tuple[t.List[str], t.List[t.List[str]]]:
        names = [r.name for r in self.job.ranges]
        headers = names + ["spec"] + list(self.job.outputs)
        body = [
            [str(v) for _, v in row.params]
            + [row.spec]
            + [csv_cell(v) for v in row.values(self.job.outputs).values()]
            for row in self.rows
        ]
        return headers, body

    def render(self, fmt: t.Optional[str] = None) -> str:
        fmt = fmt or self.job.fmt
        if fmt == "json":
            return dumps(self.to_dict())
        headers, body = self.table()
        if fmt == "table":
            return tabulate(body, headers=headers, tablefmt="github")
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(headers)
        writer.writerows(body)
        return buffer.getvalue().rstrip("\n")


class ResultCache:
    """JSON-lines records ``{"spec", "version", "report"}``; only records of this code version are read back."""

    def __init__(self, path: t.Union[str, "os.PathLike[t.Any]"], tag: str = __version__):
        self._path = realpath(path)
        self._tag = version.parse(tag)

    @property
    def path(self) -> str:
        return self._path

    def load(self) -> t.Dict[str, t.Dict[str, t.Any]]:
        records: t.Dict[str, t.Dict[str, t.Any]] = {}
        if not isfile(self._path):
            return records
        with open(self._path, "r", encoding="utf-8") as handle:
            for line in handle:
                if not line.strip():
                    continue
                try:
                    record = loads(line)
                    if version.parse(str(record["version"])) == self._tag:
                        records[str(record["spec"])] = record["report"]
                except (ValueError, KeyError, TypeError, version.InvalidVersion):
                    continue
        return records

    def append(self, documents: t.Mapping[str, t.Dict[str, t.Any]]) -> None:
        if not documents:
            return
        with open(self._path, "a", encoding="utf-8") as handle:
            for spec, document in documents.items():
                record = {"spec": spec, "version": str(self._tag), "report": document}
                handle.write(dumps(record, compact=True) + "\n")


class Scanner(Runner, ScannerAttributes):
    """Expand a scan job, compute the reports it needs and collect the rows."""

    def __init__(self, **kwargs: tx.Unpack[ScannerParams]):
        """Constructor."""
        super().__init__(**kwargs)

        self._outputs = tuple(kwargs.get("outputs") or DEFAULT_OUTPUTS)

        self._cache = kwargs.get("cache", None)

        self._jobs = kwargs.get("jobs") or 1
        if self._jobs < 1:
            raise ValueError("The number of jobs must be positive")

        self._job_cap = kwargs.get("job_cap") or DEFAULT_JOB_CAP

    def job(self, template: str, ranges: t.Sequence[ParameterRange], fmt: str = "json") -> ScanJob:
        """A job over ``ranges`` carrying this scanner's outputs and cache."""
        return ScanJob(
            template=template,
            ranges=tuple(ranges),
            outputs=self._outputs,
            fmt=fmt,
            cache=str(self._cache) if self._cache else None,
        )

    def _expand(
        self, job: ScanJob
    ) -> t.Tuple[t.List[t.Tuple[t.Tuple[t.Tuple[str, int], ...], str]], t.List[SkippedSpec]]:
        accepted = []
        skipped = []
        for env in job.combinations():
            params = tuple(env.items())
            try:
                text = render(job.template, env)
            except ZeroDivisionError:
                skipped.append(SkippedSpec(params, job.template, "division by zero"))
                continue
            try:
                spec = parse(text)
            except SpecParseError as err:
                skipped.append(SkippedSpec(params, text, str(err)))
                continue
            reason = validate(spec)
            if reason is None and order_of(spec) > self._order_cap:
                reason = f"order {order_of(spec)} exceeds the order cap {self._order_cap}"
            if reason is not None:
                skipped.append(SkippedSpec(params, text, reason))
                continue
            accepted.append((params, str(spec)))
        return accepted, skipped

    def _compute(self, specs: t.List[str]) -> t.Dict[str, t.Dict[str, t.Any]]:
        if not specs:
            return {}
        if self._jobs > 1 and len(specs) > 1:
            with ProcessPoolExecutor(max_workers=self._jobs) as pool:
                documents = pool.map(compute_document, specs, repeat(self._order_cap), repeat(self._full_f_check))
                return dict(zip(specs, self._progress(documents, desc="scan", total=len(specs))))
        return {
            spec: compute_document(spec, self._order_cap, self._full_f_check)
            for spec in self._progress(specs, desc="scan", total=len(specs))
        }

    def run(self, job: ScanJob) -> ScanResult:
        """Rows sorted by parameter tuple; cached specs are not recomputed."""
        if job.size > self._job_cap:
            raise JobCapExceeded(job.size, self._job_cap)
        accepted, skipped = self._expand(job)
        for item in skipped:
            self._logger.info("Skipping %s: %s", item.text, item.reason)

        cache = ResultCache(job.cache) if job.cache else None
        known = cache.load() if cache is not None else {}
        pending = [spec for spec in dict.fromkeys(spec for _, spec in accepted) if spec not in known]
        self._logger.info(
            "Scan of %s: %d specs, %d cached, %d to compute, %d skipped",
            job.template,
            len(accepted),
            len(accepted) - len(pending),
            len(pending),
            len(skipped),
        )
        fresh = self._compute(pending)
        if cache is not None:
            cache.append(fresh)

        rows = [
            ScanRow(params=params, spec=spec, document=fresh.get(spec) or known[spec], cached=spec not in fresh)
            for params, spec in accepted
        ]
        rows.sort(key=lambda row: tuple(v for _, v in row.params))
        skipped.sort(key=lambda item: tuple(v for _, v in item.params))
        return ScanResult(job=job, rows=tuple(rows), skipped=tuple(skipped))

    def audit(self, cache_path: t.Union[str, "os.PathLike[t.Any]"], sample: int = 10) -> t.List[str]:
        """Recompute an evenly spaced sample of cached specs; return those whose record differs."""
        known = ResultCache(cache_path).load()
        specs = sorted(known)
        if not specs:
            return []
        step = max(1, len(specs) // max(1, sample))
        mismatches = []
        for spec in self._progress(specs[::step][:sample], desc="audit"):
            if compute_document(spec, self._order_cap, self._full_f_check) != known[spec]:
                self._logger.error("Cached record of %s differs from a fresh computation", spec)
                mismatches.append(spec)
        return mismatches
