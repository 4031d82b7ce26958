"""Combinatorial GGS flows: chain complexes, spectral sequences and cancellations."""
from .cancel import ReductionTrace, apply_cancellation, check_conservation, run_to_core
from .chain import (ChainComplex, HomologyResult, build_complex, check_d2,
                    check_lemma_cone, check_structure, homology,
                    intersection_number, line_contribution)
from .io import parse_pair
from .model import (Concat, Cone, CrossCap, Double, FlowLine, FoldArc,
                    GGSPair, Generator, Kind, Nature, Regular, Singularity,
                    Triple, Wedge, generators, nature_numbers, parse_kind,
                    singular_number, validate_condition_H)
from .spectral import (Filtration, cross_validate, finest_filtration,
                       oracle_pages, sssa)

__version__ = "0.1.0"

__all__ = [
    "ChainComplex", "Concat", "Cone", "CrossCap", "Double", "Filtration", "FlowLine",
    "FoldArc", "GGSPair", "Generator", "HomologyResult", "Kind", "Nature",
    "ReductionTrace", "Regular", "Singularity", "Triple", "Wedge",
    "apply_cancellation", "build_complex", "check_conservation", "check_d2",
    "check_lemma_cone", "check_structure", "cross_validate", "finest_filtration",
    "generators", "homology", "intersection_number", "line_contribution",
    "nature_numbers", "oracle_pages", "parse_kind", "parse_pair", "run_to_core",
    "singular_number", "sssa", "validate_condition_H",
]
