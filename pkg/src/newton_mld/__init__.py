"""Minimal log discrepancies of non-degenerate hypersurfaces from Newton polyhedra."""

__version__ = "0.1.0"

from .discrepancy import (
    MldReport,
    MldValue,
    full_report,
    intersects_strict_transform,
    is_log_canonical,
    lct,
    mld_pair,
    multiplicity,
    ordinary_blowup_discrepancy,
    phi,
)
from .errors import InputError, ParseError, SupportError
from .newton import (
    SupportSet,
    in_proper_cone,
    newton_vertices,
    polyhedron_contains,
    supporting_value,
    trace,
    validate_support,
)
from .oracle import brute_force_min
