"""Ranking queries over tightly coupled probabilistic EL++ knowledge bases."""

from __future__ import annotations

from .binding import induce_ontology, match_annotation
from .classes import ClassEnumerator, EquivalenceClass, class_of, is_empty, members, next_best_class
from .el import BOTTOM_ATOM, atomic_cons, is_consistent, normalize, saturate
from .kb import (
    AnnotatedAxiom,
    Annotation,
    Atom,
    MlnFormula,
    MlnProgram,
    TcpKnowledgeBase,
    validate_annotation,
    validate_cmln,
    validate_kb,
)
from .mln import GroundMln, compare_worlds, ground, ground_kb, satisfied_formulas, world_log_score
from .oracle import exact_probabilities, exact_rank, log_partition, marginal_probability, world_probability
from .rank import (
    AnytimeRanker,
    RankingResult,
    StopCondition,
    anytime_rank,
    provable_partial_order,
    unassigned_bound,
)
from .report import emit_report
from .syntax import KbDocument, KbError, parse_kb, serialize_kb

__version__ = "0.1.0"
