"""Types for latcom."""

import os
import typing as t
from logging import Logger

import typing_extensions as tx


class RunnerParams(tx.TypedDict):
    """Parameters shared by the verifier and the scanner."""

    order_cap: t.Optional[int]
    full_f_check: t.Optional[bool]
    quiet: t.Optional[bool]
    log_file: t.Optional[t.Union[str, "os.PathLike[t.Any]"]]


class VerifierParams(RunnerParams):
    """Verifier parameters."""

    membership_bound: t.Optional[int]


class ScannerParams(RunnerParams):
    """Scanner parameters."""

    outputs: t.Optional[t.Sequence[str]]
    cache: t.Optional[t.Union[str, "os.PathLike[t.Any]"]]
    jobs: t.Optional[int]
    job_cap: t.Optional[int]


class RunnerAttributes:
    """Attributes shared by the verifier and the scanner."""

    _order_cap: int
    _full_f_check: bool
    _quiet: bool
    _logger: Logger
    _log_file: t.Optional[t.Union[str, "os.PathLike[t.Any]"]]


class VerifierAttributes(RunnerAttributes):
    """Verifier attributes."""

    _membership_bound: int


class ScannerAttributes(RunnerAttributes):
    """Scanner attributes."""

    _outputs: t.Tuple[str, ...]
    _cache: t.Optional[t.Union[str, "os.PathLike[t.Any]"]]
    _jobs: int
    _job_cap: int
