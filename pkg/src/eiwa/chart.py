"""Chart parsing into a shared packed parse forest.

Forest nodes are keyed by (category, span); alternative derivations of the
same node merge, so common sub-analyses are stored once while the number of
distinct trees can grow combinatorially. Lexical alternatives carry every
candidate sense for the token, so tree counts multiply over word senses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import UnknownTokenError
from .preparse import Token
from .resources import GrammarRule, LexSense, ResourceBundle

START_SYMBOL = "s"
UNKNOWN_SENSE_ID = "unk"


@dataclass(frozen=True)
class Lexical:
    """Alternative covering one token with its candidate senses."""

    senses: tuple[LexSense, ...]


@dataclass(frozen=True)
class RuleApp:
    rule: GrammarRule
    children: tuple  # ForestNode references, in rhs order


class ForestNode:
    __slots__ = ("category", "i", "j", "alternatives")

    def __init__(self, category, i, j, alternatives):
        self.category = category
        self.i = i
        self.j = j
        self.alternatives = alternatives

    @property
    def span(self):
        return (self.i, self.j)

    def __repr__(self):
        return f"<{self.category} {self.i}:{self.j} x{len(self.alternatives)}>"


class Forest:
    def __init__(self, tokens, root, nodes, longest_span):
        self.tokens = tokens
        self.root = root
        self.nodes = nodes  # reachable nodes, sorted by (i, j, category)
        self.longest_span = longest_span


# --- derivation trees -------------------------------------------------------


@dataclass(frozen=True)
class DLeaf:
    token: Token
    category: str
    sense: LexSense

    @property
    def span(self):
        return (self.token.index, self.token.index + 1)


@dataclass(frozen=True)
class DNode:
    rule: GrammarRule
    children: tuple
    span: tuple

    @property
    def category(self):
        return self.rule.lhs


def signature(tree) -> tuple[str, ...]:
    """Pre-order sequence of rule ids and sense ids; the determinism key."""
    if isinstance(tree, DLeaf):
        return (tree.sense.sense_id,)
    out = (tree.rule.id,)
    for child in tree.children:
        out += signature(child)
    return out


# --- parsing -----------------------------------------------------------------


def token_senses(token: Token, bundle: ResourceBundle) -> dict:
    """Candidate senses for a token, grouped by part of speech.

    Unknown surfaces synthesize a low-weight noun whose gloss is the surface
    itself when the policy allows; under `reject` the caller raises before
    parsing starts.
    """
    senses = bundle.lexicon.get(token.norm)
    if senses is None:
        synthesized = LexSense(
            surface=token.norm,
            pos="n",
            sense_id=UNKNOWN_SENSE_ID,
            sem=bundle.taxonomy.root,
            ja=token.surface,
            weight=0.1,
        )
        return {"n": (synthesized,)}
    table: dict[str, list[LexSense]] = {}
    for sense in senses:
        table.setdefault(sense.pos, []).append(sense)
    return {pos: tuple(group) for pos, group in table.items()}


def parse_to_forest(tokens: list[Token], bundle: ResourceBundle) -> Forest:
    """Build the packed forest of every parse the grammar licenses.

    Raises UnknownTokenError under the `reject` policy. A sentence with no
    complete parse yields a rootless forest whose longest_span records the
    widest constituent found.
    """
    if bundle.config.unknown_word_policy == "reject":
        for token in tokens:
            if token.norm not in bundle.lexicon:
                raise UnknownTokenError(token.surface, token.index)
    lexical = [token_senses(token, bundle) for token in tokens]

    n = len(tokens)
    memo: dict = {}
    in_progress: set = set()

    def derive(cat, i, j):
        key = (cat, i, j)
        if key in memo:
            return memo[key]
        if key in in_progress:
            # unary cycle in the grammar; cut it (such trees are infinite)
            return None
        in_progress.add(key)
        alternatives = []
        if j - i == 1 and cat in lexical[i]:
            alternatives.append(Lexical(lexical[i][cat]))
        for rule in bundle.rules_by_lhs.get(cat, ()):
            for children in _splits(rule.rhs, i, j, derive):
                alternatives.append(RuleApp(rule, children))
        in_progress.discard(key)
        node = ForestNode(cat, i, j, tuple(alternatives)) if alternatives else None
        memo[key] = node
        return node

    root = derive(START_SYMBOL, 0, n) if n else None

    longest = None
    for node in memo.values():
        if node is None:
            continue
        width = node.j - node.i
        key = (-width, node.i, node.j, node.category)
        if longest is None or key < longest[0]:
            longest = (key, node.span)
    longest_span = longest[1] if longest else None

    reachable = []
    if root is not None:
        seen = set()
        stack = [root]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen.add(id(node))
            reachable.append(node)
            for alt in node.alternatives:
                if isinstance(alt, RuleApp):
                    stack.extend(alt.children)
        reachable.sort(key=lambda nd: (nd.i, nd.j, nd.category))
    return Forest(tokens, root, reachable, longest_span)


def _splits(rhs, i, j, derive):
    """All ways to partition [i, j) over the rhs symbols, left to right."""
    if len(rhs) == 1:
        node = derive(rhs[0], i, j)
        return [(node,)] if node is not None else []
    out = []
    for m in range(i + 1, j - len(rhs) + 2):
        head = derive(rhs[0], i, m)
        if head is None:
            continue
        for rest in _splits(rhs[1:], m, j, derive):
            out.append((head,) + rest)
    return out


# --- counting and enumeration ------------------------------------------------


def _count(forest: Forest, lexical_width) -> int:
    if forest.root is None:
        return 0
    memo: dict = {}

    def count(node):
        key = id(node)
        if key not in memo:
            total = 0
            for alt in node.alternatives:
                if isinstance(alt, Lexical):
                    total += lexical_width(alt)
                else:
                    product = 1
                    for child in alt.children:
                        product *= count(child)
                    total += product
            memo[key] = total
        return memo[key]

    return count(forest.root)


def count_parses(forest: Forest) -> int:
    """Exact number of derivation trees, senses included. Arbitrary precision."""
    return _count(forest, lambda alt: len(alt.senses))


def count_structures(forest: Forest) -> int:
    """Number of syntactic parses, ignoring lexical sense multiplicity."""
    return _count(forest, lambda alt: 1)


def log10_count(count: int):
    if count <= 0:
        return None
    if count.bit_length() < 900:
        return math.log10(count)
    # huge counts: compute from the bit length to dodge float overflow
    shift = count.bit_length() - 900
    return math.log10(count >> shift) + shift * math.log10(2)


def enumerate_trees(forest: Forest, limit=None) -> list:
    """Derivation trees in ascending signature order, truncated at limit.

    Per-node lists are sorted and capped at limit; the lexicographically
    first `limit` trees of a parent only ever combine children that are
    themselves within the first `limit` of their node, so truncation is safe.
    """
    if forest.root is None:
        return []
    memo: dict = {}

    def trees(node):
        key = id(node)
        if key in memo:
            return memo[key]
        out = []
        for alt in node.alternatives:
            if isinstance(alt, Lexical):
                token = forest.tokens[node.i]
                out.extend(DLeaf(token, node.category, sense) for sense in alt.senses)
            else:
                combos = [()]
                for child in alt.children:
                    child_trees = trees(child)
                    combos = [prefix + (tree,) for prefix in combos for tree in child_trees]
                out.extend(DNode(alt.rule, combo, node.span) for combo in combos)
        out.sort(key=signature)
        if limit is not None:
            out = out[:limit]
        memo[key] = out
        return out

    return trees(forest.root)


# --- debug serialization ------------------------------------------------------


def serialize_forest(forest: Forest) -> str:
    """Nested text form `[cat i j (alt ...)(alt ...)]` with stable ordering."""
    if forest.root is None:
        span = forest.longest_span
        return f"[no-parse longest={span[0]}:{span[1]}]" if span else "[no-parse]"

    def render(node):
        alts = []
        for alt in node.alternatives:
            if isinstance(alt, Lexical):
                alts.append("(lex " + " ".join(s.sense_id for s in alt.senses) + ")")
            else:
                inner = " ".join(render(child) for child in alt.children)
                alts.append(f"({alt.rule.id} {inner})")
        alts.sort()
        return f"[{node.category} {node.i} {node.j} " + " ".join(alts) + "]"

    return render(forest.root)
