"""Substitutions, automatic sequences, occurrence sets and common factors in independent bases."""

from .cobham import (CLUB, SPADE, AnalysisReport, CoverCertified, CoverConjectured, PreconditionError,
                     UnionOfTriples, WitnessPair, analyze_common_factors, common_factors_upto,
                     construct_witnesses, exp_dioph_solutions, intersect_occurrence_sets,
                     multiplicatively_independent, verify_witness)
from .occurrence import (ALL, GeometricSet, Structured, evaluate, occurrence_brute, occurrence_set,
                         parse_occurrence_set)
from .sequences import (AutomaticSpec, SpecError, SubstitutiveSpec, complexity, factor_set, kernel,
                        make_spec, periodicity_bounded, verify_kernel)
from .subfile import SubParseError, load_document, parse_document, parse_triples
from .substitution import (Substitution, classify_letters, compose, idempotent_exponent,
                           idempotent_power, is_idempotent, power)
from .subsystems import (generator_prefix, is_transitive, minimal_subsystems, primitive_cyclic_factors,
                         subshift_language, transitive_generators)
from .words import BiWordTriple, FactorSet, biword_factors, word

__version__ = "0.1.0"
