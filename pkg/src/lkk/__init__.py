"""Exact graded Bowen-Franks invariants of weighted directed graphs."""

from .graph import Edge, GraphFormatError, WeightedGraph, validate
from .group import Group, INTEGERS, TRIVIAL
from .intmat import AbelianGroup, IntMatrix, snf, solve_linear
from .laurent import Laurent, LaurentMatrix, parse_laurent
from .modules import FpModule, InvariantBattery, PointedModule, invariant_battery, is_zero_module
from .bowen_franks import bf_dual, bf_graded, bf_ungraded, vdb_check
from .covering import colimit_bf_oracle, covering_graph, truncation_tower
from .classify import IsoCertificate, IsoVerdict, classify_pair, compare_invariants, search_certificate

__version__ = "0.1.0"
