"""Blackwell dominance of statistical experiments and the inf-norm informativeness score."""

from .blackwell import (
    DominanceVerdict,
    GarblingSearch,
    HypothesisViolation,
    Relation,
    TranslationResult,
    check_diagram,
    column_spread,
    compare_blackwell,
    dominates,
    find_garbling,
    iterate_garblings,
    translate_garbling,
)
from .experiments import (
    Dichotomy,
    Experiment,
    Garbling,
    StochasticityError,
    compound,
    dichotomy,
    dichotomy_to_experiment,
    garble,
    is_straightforward,
    posterior,
    random_experiment,
    random_garbling,
    random_straightforward,
    random_straightforward_dichotomy,
    uninformative,
)
from .inmi import (
    InmiComparison,
    InmiRelation,
    contraction_gap,
    d_inmi,
    delta_garbling_check,
    frobenius_contraction_gap,
    inmi_compare,
    kron_commutativity_gap,
    rank_one_structure,
)
from .matkernel import NormKind, SingularMatrixError, norm

__version__ = "0.1.0"

__all__ = [
    "check_diagram",
    "column_spread",
    "compare_blackwell",
    "compound",
    "contraction_gap",
    "d_inmi",
    "delta_garbling_check",
    "Dichotomy",
    "dichotomy",
    "dichotomy_to_experiment",
    "DominanceVerdict",
    "dominates",
    "Experiment",
    "find_garbling",
    "frobenius_contraction_gap",
    "garble",
    "Garbling",
    "GarblingSearch",
    "HypothesisViolation",
    "inmi_compare",
    "InmiComparison",
    "InmiRelation",
    "is_straightforward",
    "iterate_garblings",
    "kron_commutativity_gap",
    "norm",
    "NormKind",
    "posterior",
    "random_experiment",
    "random_garbling",
    "random_straightforward",
    "random_straightforward_dichotomy",
    "rank_one_structure",
    "Relation",
    "SingularMatrixError",
    "StochasticityError",
    "translate_garbling",
    "TranslationResult",
    "uninformative",
]
