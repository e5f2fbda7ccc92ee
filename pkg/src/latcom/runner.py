"""Logging and progress plumbing shared by the long-running commands."""

import logging
import os
import typing as t
from os.path import realpath
from sys import stderr

import typing_extensions as tx
from tqdm import tqdm

from .group import DEFAULT_ORDER_CAP
from .types import RunnerAttributes, RunnerParams


T = t.TypeVar("T")


class Runner(RunnerAttributes):
    """Base class of the verifier and the scanner."""

    def __init__(self, **kwargs: tx.Unpack[RunnerParams]):
        """Constructor."""
        self._order_cap = kwargs.get("order_cap") or DEFAULT_ORDER_CAP
        if self._order_cap < 1:
            raise ValueError("The order cap must be positive")

        self._full_f_check = bool(kwargs.get("full_f_check", False))

        self._quiet = bool(kwargs.get("quiet", False))

        self._log_file = kwargs.get("log_file", None)

        self._logger = self._setup_logger(log_file=self._log_file, quiet=self._quiet)

    @classmethod
    def _setup_logger(
        cls, log_file: t.Optional[t.Union[str, "os.PathLike[t.Any]"]] = None, quiet: bool = False
    ) -> logging.Logger:
        formatter = logging.Formatter(fmt="%(asctime)s %(levelname)-8s %(message)s", datefmt="%Y-%m-%d %H:%M:%S")
        logger = logging.getLogger(cls.__name__)
        logger.setLevel(logging.DEBUG)
        logger.handlers.clear()

        if not quiet:
            # stdout carries the JSON and CSV payloads
            screen_handler = logging.StreamHandler(stream=stderr)
            screen_handler.setFormatter(formatter)
            logger.addHandler(screen_handler)

        if log_file:
            file_handler = logging.FileHandler(realpath(log_file), mode="w")
            file_handler.setFormatter(formatter)
            logger.addHandler(file_handler)

        return logger

    def _progress(self, items: t.Iterable[T], desc: str, total: t.Optional[int] = None) -> t.Iterable[T]:
        return tqdm(items, desc=desc, total=total, unit="case", file=stderr, disable=self._quiet, leave=False)
