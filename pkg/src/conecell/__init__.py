"""Exact cellular and Cech complexes of smooth fans, with group actions."""

from .cellular import (
    cech_nerve,
    cocellular,
    cocellular_of_set,
    compare_2pb,
    cprime_2na,
    double_complex_2pc,
    restriction_map,
    single_stratum_shadow,
)
from .complexes import AbGroupCoeff, ChainComplex, ChainMap, GradedGroup, homology, is_quasi_iso
from .fans import ConeSubset, Fan, support, validate_fan
from .linalg import IntMatrix, snf

__all__ = [
    "AbGroupCoeff", "ChainComplex", "ChainMap", "ConeSubset", "Fan", "GradedGroup", "IntMatrix",
    "cech_nerve", "cocellular", "cocellular_of_set", "compare_2pb", "cprime_2na", "double_complex_2pc",
    "homology", "is_quasi_iso", "restriction_map", "single_stratum_shadow", "snf", "support", "validate_fan",
]
