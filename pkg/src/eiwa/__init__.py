"""eiwa: a desk-scale, rule-based English-to-Japanese translation engine.

All linguistic knowledge lives in plain-text resource files: a grammar with
reorder/insert annotations, a sense lexicon with argument frames, an is-a
taxonomy, tree-rewrite rules, and expert weights. The pipeline chart-parses
each sentence into a packed forest of every licensed analysis, scores
interpretations with a weighted expert ensemble under per-node beam pruning,
and synthesizes Japanese by sister reordering plus tree rewrites.
"""

from .chart import (
    Forest,
    count_parses,
    count_structures,
    enumerate_trees,
    parse_to_forest,
    serialize_forest,
    signature,
)
from .errors import (
    EngineError,
    LoadError,
    NoParseError,
    OracleCapError,
    UnknownTokenError,
    UnsatisfiableError,
)
from .interpret import (
    Constraints,
    Interpretation,
    ScoreBreakdown,
    kbest_interpretations,
    oracle_select,
    score_tree,
    select_best,
)
from .preparse import Token, split_sentences, tokenize
from .regression import RunDiff, RunReport, diff_runs, load_corpus, run_suite
from .resources import (
    ExpertConfig,
    GrammarRule,
    LexSense,
    ResourceBundle,
    Taxonomy,
    Xform,
    compile_bundle,
    load_bundle,
    taxonomy_is_a,
    taxonomy_sim,
)
from .transfer import SentenceResult, apply_xforms, generate_output, reorder_tree, translate

__version__ = "0.1.0"

__all__ = [
    "Constraints",
    "EngineError",
    "ExpertConfig",
    "Forest",
    "GrammarRule",
    "Interpretation",
    "LexSense",
    "LoadError",
    "NoParseError",
    "OracleCapError",
    "ResourceBundle",
    "RunDiff",
    "RunReport",
    "ScoreBreakdown",
    "SentenceResult",
    "Taxonomy",
    "Token",
    "UnknownTokenError",
    "UnsatisfiableError",
    "Xform",
    "apply_xforms",
    "compile_bundle",
    "count_parses",
    "count_structures",
    "diff_runs",
    "enumerate_trees",
    "generate_output",
    "kbest_interpretations",
    "load_bundle",
    "load_corpus",
    "oracle_select",
    "parse_to_forest",
    "reorder_tree",
    "run_suite",
    "score_tree",
    "select_best",
    "serialize_forest",
    "signature",
    "split_sentences",
    "taxonomy_is_a",
    "taxonomy_sim",
    "tokenize",
    "translate",
]
