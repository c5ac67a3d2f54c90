"""Detect mismatches between the elements of an ML-enabled system."""
__version__ = "0.1.0"

from .documents import parse_descriptor, parse_registry, scaffold, serialize_descriptor  # noqa: E402
from .engine import Finding, GapReport, Report, Status, coverage_matrix, gap_analysis, run_checks  # noqa: E402
from .model import (  # noqa: E402
    AttributePath,
    Descriptor,
    DescriptorKind,
    DescriptorSet,
    attribute_lookup,
    make_descriptor_set,
)
from .predicate import TriBool, evaluate, parse_predicate, pretty_print  # noqa: E402
from .registry import MismatchDefinition, MismatchRegistry, canonical_registry  # noqa: E402
from .report import exit_code, render_report  # noqa: E402

__all__ = [
    "AttributePath",
    "Descriptor",
    "DescriptorKind",
    "DescriptorSet",
    "Finding",
    "GapReport",
    "MismatchDefinition",
    "MismatchRegistry",
    "Report",
    "Status",
    "TriBool",
    "attribute_lookup",
    "canonical_registry",
    "coverage_matrix",
    "evaluate",
    "exit_code",
    "gap_analysis",
    "make_descriptor_set",
    "parse_descriptor",
    "parse_predicate",
    "parse_registry",
    "pretty_print",
    "render_report",
    "run_checks",
    "scaffold",
    "serialize_descriptor",
]
