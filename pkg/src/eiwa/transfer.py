"""Japanese synthesis: sister reordering, tree rewrites, linearization.

Reordering permutes each node's children as its grammar rule dictates and
drops particle morphemes in after their sisters. The xform file then applies
structural rewrites to the reordered tree (file order, first pre-order match,
capped per rule), and generation concatenates the leaf morphemes.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import chart
from .chart import DLeaf
from .errors import UnknownTokenError, UnsatisfiableError
from .interpret import (
    Constraints,
    Interpretation,
    interpretation_to_json,
    kbest_interpretations,
)
from .preparse import split_sentences, tokenize
from .resources import PLit, PVar, ResourceBundle


@dataclass(frozen=True)
class TNode:
    """Target-language tree: internal nodes keep source categories, leaves are morphemes."""

    label: str
    children: tuple  # TNode or str


def reorder_tree(tree) -> TNode:
    """Permute sisters into Japanese order and splice in particle morphemes.

    Accepts an Interpretation or a derivation tree; reorder and insert
    annotations ride on the grammar rules inside it. Lexical leaves become
    their sense gloss; empty glosses vanish.
    """
    if isinstance(tree, Interpretation):
        tree = tree.tree
    return _reorder(tree)


def _reorder(tree):
    if isinstance(tree, DLeaf):
        if tree.sense.ja == "":
            return None
        return TNode(tree.category, (tree.sense.ja,))
    rule = tree.rule
    inserts = {}
    for pos, morpheme in rule.inserts:
        inserts.setdefault(pos, []).append(morpheme)
    children = []
    for target_pos, source_index in enumerate(rule.reorder):
        child = _reorder(tree.children[source_index])
        if child is not None:
            children.append(child)
        children.extend(inserts.get(target_pos, ()))
    return TNode(rule.lhs, tuple(children))


# --- pattern matching ---------------------------------------------------------


def _match(pattern, subject, bindings):
    if isinstance(pattern, PVar):
        if pattern.name in bindings:
            return bindings[pattern.name] == subject
        bindings[pattern.name] = subject
        return True
    if isinstance(pattern, PLit):
        return isinstance(subject, str) and subject == pattern.text
    if not isinstance(subject, TNode) or subject.label != pattern.label:
        return False
    if len(subject.children) != len(pattern.children):
        return False
    return all(_match(p, s, bindings) for p, s in zip(pattern.children, subject.children))


def _instantiate(template, bindings):
    if isinstance(template, PVar):
        return bindings[template.name]
    if isinstance(template, PLit):
        return template.text
    return TNode(template.label, tuple(_instantiate(c, bindings) for c in template.children))


def _rewrite_first(tree, xform):
    """Rewrite the first pre-order match; returns None when nothing matches."""
    bindings: dict = {}
    if isinstance(tree, TNode) and _match(xform.pattern, tree, bindings):
        return _instantiate(xform.rewrite, bindings)
    if isinstance(tree, TNode):
        for idx, child in enumerate(tree.children):
            replaced = _rewrite_first(child, xform)
            if replaced is not None:
                children = tree.children[:idx] + (replaced,) + tree.children[idx + 1 :]
                return TNode(tree.label, children)
    return None


def apply_xforms(tree: TNode, xforms) -> TNode:
    """Apply each xform in file order, at most max_apply times each."""
    for xform in xforms:
        for _ in range(xform.max_apply):
            replaced = _rewrite_first(tree, xform)
            if replaced is None:
                break
            tree = replaced
    return tree


def tree_leaves(tree: TNode):
    for child in tree.children:
        if isinstance(child, str):
            yield child
        else:
            yield from tree_leaves(child)


def generate_output(tree: TNode) -> str:
    """Concatenate leaf morphemes; a sentence gets the final 。"""
    morphemes = list(tree_leaves(tree))
    if not morphemes:
        return ""
    return "".join(morphemes) + "。"


# --- the pipeline ----------------------------------------------------------------


@dataclass
class SentenceResult:
    tokens: list
    status: str  # ok | no-parse | unknown-token | constraints-unsatisfiable
    japanese: str = ""
    best: Interpretation | None = None
    alternatives: tuple = ()  # (Interpretation, japanese) pairs, best first
    parse_count: int = 0  # syntactic parses
    interpretation_count: int = 0  # parses x sense choices
    sense_options: tuple = ()  # per token, the candidate sense ids
    error: str | None = None
    longest_span: tuple | None = None  # diagnostic, no-parse only

    def to_json(self):
        count = self.parse_count
        options = self.sense_options or tuple(() for _ in self.tokens)
        out = {
            "tokens": [
                {"surface": t.surface, "norm": t.norm, "index": t.index, "senses": list(senses)}
                for t, senses in zip(self.tokens, options)
            ],
            "status": self.status,
            "japanese": self.japanese,
            "parse_count": str(count),
            "log10_count": chart.log10_count(count),
            "best": None if self.best is None else interpretation_to_json(self.best),
            "alternatives": [
                {
                    "signature": list(interp.signature),
                    "total": interp.breakdown.total,
                    "japanese": japanese,
                    "breakdown": interp.breakdown.to_json(),
                }
                for interp, japanese in self.alternatives
            ],
        }
        if self.error is not None:
            out["error"] = self.error
        if self.longest_span is not None:
            out["longest_span"] = [self.longest_span[0], self.longest_span[1]]
        return out


def realize(interp: Interpretation, bundle: ResourceBundle) -> str:
    """Reorder, rewrite, and linearize one interpretation."""
    return generate_output(apply_xforms(reorder_tree(interp), bundle.xforms))


def translate_sentence(sentence: str, bundle: ResourceBundle, constraints=None, beam="config", kbest=None) -> SentenceResult:
    tokens = tokenize(sentence)
    constraints = constraints or Constraints()
    beam = bundle.config.beam if isinstance(beam, str) else beam
    k = kbest if kbest is not None else bundle.config.kbest
    sense_options = tuple(
        tuple(sorted(s.sense_id for group in chart.token_senses(t, bundle).values() for s in group))
        for t in tokens
    )

    if not tokens:
        return SentenceResult(tokens=tokens, status="no-parse")
    try:
        forest = chart.parse_to_forest(tokens, bundle)
    except UnknownTokenError as err:
        return SentenceResult(
            tokens=tokens, status="unknown-token", sense_options=sense_options, error=str(err)
        )

    parse_count = chart.count_structures(forest)
    interp_count = chart.count_parses(forest)
    if forest.root is None:
        return SentenceResult(
            tokens=tokens,
            status="no-parse",
            sense_options=sense_options,
            parse_count=0,
            interpretation_count=0,
            longest_span=forest.longest_span,
        )
    try:
        interps = kbest_interpretations(forest, bundle, constraints, beam=beam, k=k)
    except UnsatisfiableError as err:
        return SentenceResult(
            tokens=tokens,
            status="constraints-unsatisfiable",
            sense_options=sense_options,
            parse_count=parse_count,
            interpretation_count=interp_count,
            error=str(err),
        )
    alternatives = tuple((interp, realize(interp, bundle)) for interp in interps)
    return SentenceResult(
        tokens=tokens,
        status="ok",
        japanese=alternatives[0][1],
        best=interps[0],
        alternatives=alternatives,
        parse_count=parse_count,
        interpretation_count=interp_count,
        sense_options=sense_options,
    )


def translate(text: str, bundle: ResourceBundle, constraints=None, beam="config", kbest=None) -> list[SentenceResult]:
    """Run the whole pipeline per sentence; failures stay inside their sentence.

    beam="config" takes the configured beam; pass an int or None to override.
    """
    resolved_beam = bundle.config.beam if beam == "config" else beam
    return [
        translate_sentence(sentence, bundle, constraints, beam=resolved_beam, kbest=kbest)
        for sentence in split_sentences(text)
    ]
