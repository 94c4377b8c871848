"""Finite categories with subobjects, bundles, chains, jets and exact sequences."""

from .bundle import Bundle, BundleMorphism, FinMap, make_bundle, verify_bun_subobject_axioms
from .chains import BundleChain, ChainMorphism, make_chain, verify_chaincat_subobject_axioms
from .errors import BunchainError
from .exact import AbHom, FinAbGroup, GradedSequence, SequenceLadder, is_exact, validate_ladder
from .fincat import FinCategory, SubobjectChoice, verify_subobject_choice
from .jets import Jet, MorphismSpec, PolySection, jet_of, project, prolong
from .poly import Poly
from .report import ProbeReport, VerificationReport

__version__ = "0.1.0"

__all__ = [
    "AbHom", "BunchainError", "Bundle", "BundleChain", "BundleMorphism", "ChainMorphism",
    "FinAbGroup", "FinCategory", "FinMap", "GradedSequence", "Jet", "MorphismSpec", "Poly",
    "PolySection", "ProbeReport", "SequenceLadder", "SubobjectChoice", "VerificationReport",
    "is_exact", "jet_of", "make_bundle", "make_chain", "project", "prolong", "validate_ladder",
    "verify_bun_subobject_axioms", "verify_chaincat_subobject_axioms", "verify_subobject_choice",
]
