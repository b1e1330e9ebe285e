"""Thickenings of cube complexes, legal systems of moves, and virtual cohomological
dimension of the right-angled Coxeter groups they define."""

from .complexes import Graph, SimplicialComplex, cycle_graph, is_flag, is_k_large, link
from .config import PipelineConfig
from .cubical import CubeComplex, check_5_large, cubical_distance, cycle_complex, minimal_cube
from .davis import RACG, level2_quotient, racg_from_complex, racg_normal_form, verify_quotient_properties
from .errors import BudgetExceeded, DisconnectedError, FibercoxError, HypothesisViolation, PreconditionError
from .homology import complex_homology, cohomological_dimension, vcd_racg
from .lemmas import run_lemma_suite
from .moves import canonical_moves, canonical_state, certify_legal_by_hypotheses, check_legal_orbit
from .pipeline import CertificateChain, distinct_family_report, iterate, run_pipeline
from .thickening import Thickening, build_pair_thickening, build_th1, build_th_alpha

__all__ = [
    "BudgetExceeded", "CertificateChain", "CubeComplex", "DisconnectedError", "FibercoxError",
    "Graph", "HypothesisViolation", "PipelineConfig", "PreconditionError", "RACG",
    "SimplicialComplex", "Thickening", "build_pair_thickening", "build_th1", "build_th_alpha",
    "canonical_moves", "canonical_state", "certify_legal_by_hypotheses", "check_5_large",
    "check_legal_orbit", "cohomological_dimension", "complex_homology", "cubical_distance",
    "cycle_complex", "cycle_graph", "distinct_family_report", "is_flag", "is_k_large", "iterate",
    "level2_quotient", "link", "minimal_cube", "racg_from_complex", "racg_normal_form",
    "run_lemma_suite", "run_pipeline", "vcd_racg", "verify_quotient_properties",
]
