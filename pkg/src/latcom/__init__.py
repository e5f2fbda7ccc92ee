"""Subgroup commutativity degrees of finite groups by exhaustive lattice enumeration."""

__version__ = "0.1.0"

from .degrees import DegreeReport, degree_report
from .families import FamilySpec, build, parse
from .group import ExactRational, FiniteGroup
from .lattice import SubgroupLattice, all_subgroups
