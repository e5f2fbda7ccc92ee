"""Exceptions raised by latcom."""

import typing as t


class LatcomError(Exception):
    """Base class of every error raised by latcom."""


class GroupTableError(LatcomError, ValueError):
    """A Cayley table violates a group axiom."""


class NotClosed(GroupTableError):
    """An entry is out of range or a row/column is not a permutation."""

    def __init__(self, message: str, element: t.Optional[int] = None):
        super().__init__(message)
        self.element = element


class NoIdentity(GroupTableError):
    """No element acts as a two-sided identity."""


class MissingInverse(GroupTableError):
    """An element has no two-sided inverse."""

    def __init__(self, element: int):
        super().__init__(f"element {element} has no inverse")
        self.element = element


class NotAssociative(GroupTableError):
    """(a·b)·c differs from a·(b·c)."""

    def __init__(self, a: int, b: int, c: int):
        super().__init__(f"({a}*{b})*{c} != {a}*({b}*{c})")
        self.triple = (a, b, c)


class OrderCapExceeded(LatcomError):
    """A group would exceed the configured order cap."""

    def __init__(self, order: int, cap: int):
        super().__init__(f"group order {order} exceeds the order cap {cap}")
        self.order = order
        self.cap = cap


class InvalidAction(LatcomError, ValueError):
    """The multiplier of a cyclic semidirect product does not define an action."""


class InvalidSpec(LatcomError, ValueError):
    """A family spec violates its parameter rules."""


class SpecParseError(LatcomError, ValueError):
    """A family spec string cannot be parsed."""


class NoSuchK(LatcomError, ArithmeticError):
    """No unit of the requested multiplicative order exists."""


class ArgumentDomain(LatcomError, ValueError):
    """An argument lies outside the domain of a closed-form formula."""


class ClassConstancyViolation(LatcomError, AssertionError):
    """The relative degree differs between two conjugate subgroups."""


class CoprimalityRequired(LatcomError, ValueError):
    """Two group orders were expected to be coprime."""


class SearchBoundExceeded(LatcomError, ArithmeticError):
    """A prime search ran past the 64-bit bound."""


class UnknownSuite(LatcomError, KeyError):
    """A verification suite name is not registered."""


class JobCapExceeded(LatcomError):
    """A scan expands to more specs than the job cap allows."""

    def __init__(self, size: int, cap: int):
        super().__init__(f"scan expands to {size} specs, above the job cap {cap}")
        self.size = size
        self.cap = cap
