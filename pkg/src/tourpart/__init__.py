"""Strong partitions of balanced multipartite tournaments."""

from .mpt import (
    DegreeProfile,
    InvalidInstance,
    IrregularityReport,
    MptInstance,
    MptParseError,
    Tournament,
    ValidationReport,
    degree_profile,
    induce_transversal,
    irregularity,
    parse,
    serialize,
    validate,
)
from .strong import StrongReport, deficiency, strong_report

__version__ = "0.1.0"

__all__ = [
    "DegreeProfile",
    "InvalidInstance",
    "IrregularityReport",
    "MptInstance",
    "MptParseError",
    "StrongReport",
    "Tournament",
    "ValidationReport",
    "deficiency",
    "degree_profile",
    "induce_transversal",
    "irregularity",
    "parse",
    "serialize",
    "strong_report",
    "validate",
]
