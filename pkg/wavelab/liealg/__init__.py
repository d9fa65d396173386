from wavelab.liealg.closure import BracketEntry, BracketFitter, StructureTable, close_under_bracket
from wavelab.liealg.graded import GradedElement, density_power, family, parse_element
from wavelab.liealg.structure import (
    coefficient_checks,
    fingerprint_from_constants,
    ideal_check,
    quotient_fingerprint,
    state_independence,
)
from wavelab.liealg.variants import analyze_variant, shift_coefficients, variant_seed
from wavelab.liealg.witt import witt_pattern_scan

__all__ = [
    "BracketEntry",
    "BracketFitter",
    "GradedElement",
    "StructureTable",
    "analyze_variant",
    "close_under_bracket",
    "coefficient_checks",
    "density_power",
    "family",
    "fingerprint_from_constants",
    "ideal_check",
    "parse_element",
    "quotient_fingerprint",
    "shift_coefficients",
    "state_independence",
    "variant_seed",
    "witt_pattern_scan",
]
