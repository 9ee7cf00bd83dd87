"""Exact integer linear algebra: Smith form, abelian groups, GL(2, Z)."""

from .abelian import AbelianGroup, abelian_iso, cokernel, format_group, parse_group
from .conjugacy import ConjugacyResult, Verdict, conjugacy_invariants, gl2_conjugate
from .mat2 import Mat2
from .snf import KERNEL, invariant_factors, smith_normal_form

__all__ = [
    "AbelianGroup",
    "ConjugacyResult",
    "KERNEL",
    "Mat2",
    "Verdict",
    "abelian_iso",
    "cokernel",
    "conjugacy_invariants",
    "format_group",
    "gl2_conjugate",
    "invariant_factors",
    "parse_group",
    "smith_normal_form",
]
