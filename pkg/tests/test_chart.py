import pytest

from eiwa import (
    UnknownTokenError,
    count_parses,
    count_structures,
    enumerate_trees,
    parse_to_forest,
    serialize_forest,
    signature,
    tokenize,
)
from eiwa.chart import log10_count

from oracles import naive_signatures

# hand-checked: one parse, saw's two senses packed in one lexical alternative
GOLDEN_C1_FOREST = (
    "[s 0 5 (r1 [np 0 2 (r3 [det 0 1 (lex def)] [n 1 2 (lex man)])] "
    "[vp 2 5 (r2 [v 2 3 (lex cut see)] [np 3 5 (r3 [det 3 4 (lex def)] [n 4 5 (lex dog)])])])]"
)


def pp_family(n):
    return "the man watched the dog" + " with the telescope" * n


def test_unambiguous_sentence(bundle):
    toks = tokenize("the man watched the dog")
    forest = parse_to_forest(toks, bundle)
    assert forest.root is not None
    assert count_parses(forest) == 1
    assert count_structures(forest) == 1


def test_pp_attachment_two_parses(bundle):
    forest = parse_to_forest(tokenize(pp_family(1)), bundle)
    assert count_structures(forest) == 2
    assert count_parses(forest) == 2


def test_sense_ambiguity_multiplies(bundle):
    # saw has two senses: 2 structures x 2 senses
    forest = parse_to_forest(tokenize("the man saw the dog with the telescope"), bundle)
    assert count_structures(forest) == 2
    assert count_parses(forest) == 4


def test_no_parse_records_longest_span(bundle):
    forest = parse_to_forest(tokenize("man saw"), bundle)
    assert forest.root is None
    assert count_parses(forest) == 0
    assert forest.longest_span == (0, 1)
    assert serialize_forest(forest) == "[no-parse longest=0:1]"


@pytest.mark.parametrize("n,expected", [(0, 1), (1, 2), (2, 5), (3, 14), (4, 42)])
def test_catalan_counts_match_oracle(bundle, n, expected):
    toks = tokenize(pp_family(n))
    forest = parse_to_forest(toks, bundle)
    assert count_parses(forest) == expected
    oracle = naive_signatures(toks, bundle)
    assert len(oracle) == expected
    assert sorted(signature(t) for t in enumerate_trees(forest)) == oracle


@pytest.mark.parametrize("n,expected", [(5, 132), (6, 429)])
def test_catalan_counts_large(bundle, n, expected):
    forest = parse_to_forest(tokenize(pp_family(n)), bundle)
    assert count_parses(forest) == expected
    assert count_parses(forest) == len(enumerate_trees(forest))


def test_enumeration_matches_oracle_on_saw_sentences(bundle):
    for text in ["the man saw the dog", "the man saw the dog with the telescope"]:
        toks = tokenize(text)
        forest = parse_to_forest(toks, bundle)
        engine = sorted(signature(t) for t in enumerate_trees(forest))
        assert engine == naive_signatures(toks, bundle)
        assert len(engine) == len(set(engine))  # signatures unique


def test_enumeration_matches_oracle_on_corpus(bundle, corpus):
    # includes the coordination sentence, so the 3-symbol rule gets checked
    for case in corpus:
        toks = tokenize(case.english)
        forest = parse_to_forest(toks, bundle)
        engine = sorted(signature(t) for t in enumerate_trees(forest))
        assert engine == naive_signatures(toks, bundle), case.id
        assert count_parses(forest) == len(engine)


def test_enumerate_order_and_limit(bundle):
    forest = parse_to_forest(tokenize(pp_family(1)), bundle)
    trees = enumerate_trees(forest, limit=10)
    assert len(trees) == 2
    # NP attachment (r2 before r5 at the divergence point) sorts first
    assert trees[0].children[1].rule.id == "r2"
    sigs = [signature(t) for t in trees]
    assert sigs == sorted(sigs)
    assert enumerate_trees(forest, limit=1) == trees[:1]


def test_enumerate_truncation_keeps_smallest(bundle):
    forest = parse_to_forest(tokenize(pp_family(3)), bundle)
    full = [signature(t) for t in enumerate_trees(forest)]
    assert full == sorted(full)
    for limit in (1, 5, 13):
        assert [signature(t) for t in enumerate_trees(forest, limit=limit)] == full[:limit]


def test_rootless_enumeration_empty(bundle):
    forest = parse_to_forest(tokenize("man saw"), bundle)
    assert enumerate_trees(forest) == []


def test_unknown_token_reject(bundle_warg0, bundle):
    from dataclasses import replace

    from eiwa.resources import ResourceBundle

    reject_cfg = replace(bundle.config, unknown_word_policy="reject")
    reject = ResourceBundle(bundle.grammar, bundle.lexicon, bundle.taxonomy, bundle.xforms, reject_cfg)
    with pytest.raises(UnknownTokenError) as err:
        parse_to_forest(tokenize("Colorless green ideas"), reject)
    assert "unknown token Colorless at 0" in str(err.value)


def test_unknown_token_noun_fallback(bundle):
    toks = tokenize("Rex ran")
    forest = parse_to_forest(toks, bundle)
    assert forest.root is not None
    assert count_parses(forest) == 1
    (tree,) = enumerate_trees(forest)
    leaf = tree.children[0].children[0]
    assert leaf.sense.sense_id == "unk"
    assert leaf.sense.ja == "Rex"
    assert leaf.sense.weight == pytest.approx(0.1)
    assert leaf.sense.sem == bundle.taxonomy.root


def test_packing_polynomial_nodes(bundle):
    # measured: (n+3)^2 reachable nodes for n trailing PPs, i.e. quadratic;
    # the committed bound is c*len^3 with c=1
    for n in range(7):
        toks = tokenize(pp_family(n))
        forest = parse_to_forest(toks, bundle)
        assert len(forest.nodes) == (n + 3) ** 2
        assert len(forest.nodes) <= len(toks) ** 3


def test_forest_nodes_all_reachable(bundle):
    forest = parse_to_forest(tokenize(pp_family(2)), bundle)
    seen = set()
    stack = [forest.root]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        for alt in node.alternatives:
            if hasattr(alt, "children"):
                stack.extend(alt.children)
    assert {id(n) for n in forest.nodes} == seen


def test_serialization_golden_and_deterministic(bundle):
    toks = tokenize("the man saw the dog")
    assert serialize_forest(parse_to_forest(toks, bundle)) == GOLDEN_C1_FOREST
    assert serialize_forest(parse_to_forest(toks, bundle)) == GOLDEN_C1_FOREST


def test_log10_count():
    assert log10_count(0) is None
    assert log10_count(1) == 0.0
    assert log10_count(1000) == pytest.approx(3.0)
    assert log10_count(10**400) == pytest.approx(400.0)  # beyond float range
