"""Scoring and selection of interpretations.

Four experts contribute weighted terms: lexical sense preference, grammar
rule preference, verb-argument restrictions, and coordination similarity.
Search runs bottom-up over the packed forest with a per-node beam; argument
and coordination terms attach at the lowest node where all participants are
in scope, and unfilled-slot penalties are assessed once at the root, so
partial scores stay additive all the way up.

`oracle_select` is the exhaustive cross-check: it enumerates every tree,
filters by constraints, and scores each one independently of the search.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chart import DLeaf, DNode, Forest, Lexical, count_parses, enumerate_trees, signature, token_senses
from .errors import NoParseError, OracleCapError, UnsatisfiableError
from .resources import ResourceBundle

ORACLE_CAP = 100000


@dataclass(frozen=True)
class ScoreBreakdown:
    s_lex: float
    s_rule: float
    s_arg: float
    s_conj: float
    total: float

    @classmethod
    def from_components(cls, s_lex, s_rule, s_arg, s_conj, config):
        total = (
            config.w_lex * s_lex
            + config.w_rule * s_rule
            + config.w_arg * s_arg
            + config.w_conj * s_conj
        )
        return cls(s_lex, s_rule, s_arg, s_conj, total)

    def to_json(self):
        return {
            "s_lex": self.s_lex,
            "s_rule": self.s_rule,
            "s_arg": self.s_arg,
            "s_conj": self.s_conj,
            "total": self.total,
        }


@dataclass(frozen=True)
class Interpretation:
    tree: DNode | DLeaf
    breakdown: ScoreBreakdown
    signature: tuple[str, ...]


@dataclass(frozen=True)
class Constraints:
    required_spans: tuple = ()  # (i, j, category-or-None); (i, j) accepted
    forbidden_spans: tuple = ()  # (i, j)
    pinned_senses: tuple = ()  # (token index, sense id)

    def __post_init__(self):
        normalized = tuple(
            (span[0], span[1], span[2] if len(span) == 3 else None)
            for span in self.required_spans
        )
        object.__setattr__(self, "required_spans", normalized)

    def is_empty(self):
        return not (self.required_spans or self.forbidden_spans or self.pinned_senses)

    @classmethod
    def from_json(cls, obj) -> "Constraints":
        """Validate the wire shape; raises ValueError on malformed input."""
        if obj is None:
            return cls()
        if not isinstance(obj, dict):
            raise ValueError("constraints must be an object")
        unknown = set(obj) - {"required_spans", "forbidden_spans", "pinned_senses"}
        if unknown:
            raise ValueError(f"unknown constraints field {sorted(unknown)[0]!r}")

        required = []
        for item in obj.get("required_spans", []):
            if not isinstance(item, list) or len(item) not in (2, 3):
                raise ValueError("required_spans entries must be [i, j] or [i, j, category]")
            i, j = item[0], item[1]
            cat = item[2] if len(item) == 3 else None
            if not isinstance(i, int) or not isinstance(j, int) or (cat is not None and not isinstance(cat, str)):
                raise ValueError("required_spans entries must be [int, int] or [int, int, str]")
            required.append((i, j, cat))
        forbidden = []
        for item in obj.get("forbidden_spans", []):
            if not isinstance(item, list) or len(item) != 2 or not all(isinstance(x, int) for x in item):
                raise ValueError("forbidden_spans entries must be [i, j]")
            forbidden.append((item[0], item[1]))
        pinned = []
        for item in obj.get("pinned_senses", []):
            if (
                not isinstance(item, dict)
                or set(item) != {"token_index", "sense_id"}
                or not isinstance(item["token_index"], int)
                or not isinstance(item["sense_id"], str)
            ):
                raise ValueError("pinned_senses entries must be {token_index, sense_id}")
            pinned.append((item["token_index"], item["sense_id"]))
        return cls(tuple(required), tuple(forbidden), tuple(pinned))

    def to_json(self):
        """Canonical JSON form: sorted entries, spans as arrays."""
        return {
            "required_spans": [
                [i, j] if cat is None else [i, j, cat]
                for i, j, cat in sorted(self.required_spans, key=lambda s: (s[0], s[1], s[2] or ""))
            ],
            "forbidden_spans": [[i, j] for i, j in sorted(self.forbidden_spans)],
            "pinned_senses": [
                {"token_index": idx, "sense_id": sid} for idx, sid in sorted(self.pinned_senses)
            ],
        }

    def validate_for(self, tokens, bundle):
        """Check indices and sense ids against one sentence's tokens."""
        n = len(tokens)
        for i, j, cat in self.required_spans:
            if not 0 <= i < j <= n:
                raise ValueError(f"required span ({i}, {j}) out of range for {n} tokens")
            if cat is not None and cat not in bundle.categories:
                raise ValueError(f"unknown category {cat!r}")
        for i, j in self.forbidden_spans:
            if not 0 <= i < j <= n:
                raise ValueError(f"forbidden span ({i}, {j}) out of range for {n} tokens")
        for idx, sense_id in self.pinned_senses:
            if not 0 <= idx < n:
                raise ValueError(f"pinned token index {idx} out of range for {n} tokens")
            available = {
                sense.sense_id
                for group in token_senses(tokens[idx], bundle).values()
                for sense in group
            }
            if sense_id not in available:
                raise ValueError(f"unknown sense for token: {tokens[idx].surface!r} has no sense {sense_id!r}")


# --- expert terms -------------------------------------------------------------


@dataclass(frozen=True)
class _VerbState:
    frame: tuple
    filled: frozenset


@dataclass(frozen=True)
class _Info:
    cat: str
    head: str | None  # sem node of the phrase head
    verbs: tuple  # open _VerbState values, primary first
    pp: tuple | None  # (preposition surface, inner np head sem)
    leaf: bool
    norm: str | None  # token norm, leaves only


def _leaf_info(leaf: DLeaf) -> _Info:
    verbs = (_VerbState(leaf.sense.frame, frozenset()),) if leaf.sense.frame else ()
    return _Info(cat=leaf.category, head=leaf.sense.sem, verbs=verbs, pp=None, leaf=True, norm=leaf.token.norm)


def _fill(verb: _VerbState, slot_name, filler_sem, bundle):
    """Fill one frame slot; re-fills of an already-filled slot are inert."""
    for slot in verb.frame:
        if slot.name == slot_name:
            if slot_name in verb.filled:
                return verb, 0.0
            if bundle.taxonomy.is_a(filler_sem, slot.expected):
                delta = bundle.config.arg_bonus
            else:
                delta = bundle.config.arg_penalty
            return _VerbState(verb.frame, verb.filled | {slot_name}), delta
    return verb, 0.0


def _node_terms(rule, child_infos, bundle):
    """Expert terms that become evaluable at this rule node.

    Returns (arg_delta, conj_delta, parent _Info). An np sister fills the
    verb's obj slot when the verb child is the bare verb itself, and the subj
    slot when the verb sits inside a phrase; pp sisters fill the slot named
    by their preposition.
    """
    arg = 0.0
    conj = 0.0
    verbs_per_child = [list(ci.verbs) for ci in child_infos]

    vc = next((k for k, ci in enumerate(child_infos) if ci.verbs), None)
    if vc is not None:
        verb = verbs_per_child[vc][0]
        np_k = next(
            (k for k, ci in enumerate(child_infos) if k != vc and ci.cat == "np" and ci.head is not None),
            None,
        )
        if np_k is not None:
            slot = "obj" if child_infos[vc].leaf else "subj"
            verb, delta = _fill(verb, slot, child_infos[np_k].head, bundle)
            arg += delta
        for k, ci in enumerate(child_infos):
            if k != vc and ci.cat == "pp" and ci.pp is not None and ci.pp[1] is not None:
                verb, delta = _fill(verb, ci.pp[0], ci.pp[1], bundle)
                arg += delta
        verbs_per_child[vc][0] = verb

    if rule.conj:
        np_heads = [ci.head for ci in child_infos if ci.cat == "np" and ci.head is not None]
        if len(np_heads) >= 2:
            conj = bundle.config.conj_bonus * bundle.taxonomy.sim(np_heads[0], np_heads[-1])

    head = None
    if rule.lhs == "np":
        for ci in child_infos:
            if ci.cat in ("np", "n"):
                head = ci.head
                break
    pp = None
    if rule.lhs == "pp":
        prep = next((ci for ci in child_infos if ci.leaf), None)
        inner = next((ci for ci in child_infos if ci.cat == "np"), None)
        if prep is not None and inner is not None:
            pp = (prep.norm, inner.head)

    verbs = tuple(v for group in verbs_per_child for v in group)
    info = _Info(cat=rule.lhs, head=head, verbs=verbs, pp=pp, leaf=False, norm=None)
    return arg, conj, info


def _closure(verbs, bundle):
    """Penalties for required slots that stayed unfilled; preferences cost nothing."""
    arg = 0.0
    for verb in verbs:
        for slot in verb.frame:
            if slot.strength == "req" and slot.name not in verb.filled:
                arg += bundle.config.arg_penalty
    return arg


def _walk(tree, bundle):
    if isinstance(tree, DLeaf):
        return tree.sense.weight, 0.0, 0.0, 0.0, _leaf_info(tree)
    s_lex = s_rule = s_arg = s_conj = 0.0
    child_infos = []
    for child in tree.children:
        lex, rule_w, arg, conj, info = _walk(child, bundle)
        s_lex += lex
        s_rule += rule_w
        s_arg += arg
        s_conj += conj
        child_infos.append(info)
    s_rule += tree.rule.weight
    arg_delta, conj_delta, info = _node_terms(tree.rule, child_infos, bundle)
    return s_lex, s_rule, s_arg + arg_delta, s_conj + conj_delta, info


def score_tree(tree, bundle: ResourceBundle) -> ScoreBreakdown:
    """Score one complete interpretation tree."""
    s_lex, s_rule, s_arg, s_conj, info = _walk(tree, bundle)
    s_arg += _closure(info.verbs, bundle)
    return ScoreBreakdown.from_components(s_lex, s_rule, s_arg, s_conj, bundle.config)


# --- constraint checks ---------------------------------------------------------


def tree_nodes(tree):
    """Yield (span, category) for every constituent, leaves included."""
    yield tree.span, tree.category
    if isinstance(tree, DNode):
        for child in tree.children:
            yield from tree_nodes(child)


def tree_leaves(tree):
    if isinstance(tree, DLeaf):
        yield tree
    else:
        for child in tree.children:
            yield from tree_leaves(child)


def interpretation_satisfies(tree, constraints: Constraints) -> bool:
    if constraints is None or constraints.is_empty():
        return True
    spans: dict = {}
    for span, cat in tree_nodes(tree):
        spans.setdefault(span, set()).add(cat)
    for i, j, cat in constraints.required_spans:
        cats = spans.get((i, j))
        if cats is None or (cat is not None and cat not in cats):
            return False
    for span in constraints.forbidden_spans:
        if span in spans:
            return False
    pins = dict(constraints.pinned_senses)
    for leaf in tree_leaves(tree):
        pinned = pins.get(leaf.token.index)
        if pinned is not None and leaf.sense.sense_id != pinned:
            return False
    return True


# --- beam search ----------------------------------------------------------------


class _Partial:
    __slots__ = ("tree", "sig", "s_lex", "s_rule", "s_arg", "s_conj", "score", "info", "sat")

    def __init__(self, tree, sig, s_lex, s_rule, s_arg, s_conj, score, info, sat):
        self.tree = tree
        self.sig = sig
        self.s_lex = s_lex
        self.s_rule = s_rule
        self.s_arg = s_arg
        self.s_conj = s_conj
        self.score = score
        self.info = info
        self.sat = sat


def kbest_interpretations(forest: Forest, bundle: ResourceBundle, constraints=None, beam=None, k=1):
    """Top-k interpretations, best first; ties break on smallest signature.

    beam=None searches exactly; a finite beam caps the partials kept per
    forest node. Constraint filtering runs before every truncation, so a
    finite beam never manufactures spurious unsatisfiability.
    """
    if forest.root is None:
        raise NoParseError()
    constraints = constraints or Constraints()
    config = bundle.config
    forbidden = set(constraints.forbidden_spans)
    required = constraints.required_spans
    pins = dict(constraints.pinned_senses)
    memo: dict = {}

    def weighted(s_lex, s_rule, s_arg, s_conj):
        return config.w_lex * s_lex + config.w_rule * s_rule + config.w_arg * s_arg + config.w_conj * s_conj

    def self_matches(node):
        return frozenset(
            idx
            for idx, (ri, rj, rcat) in enumerate(required)
            if (ri, rj) == node.span and (rcat is None or rcat == node.category)
        )

    def doomed(node, sat):
        # a required span strictly inside this node can only be added by a
        # descendant, and those are all in place already
        for idx, (ri, rj, _) in enumerate(required):
            if idx in sat:
                continue
            if node.i <= ri and rj <= node.j and (ri, rj) != node.span:
                return True
        return False

    def partials(node):
        key = id(node)
        if key in memo:
            return memo[key]
        out = build(node)
        out.sort(key=lambda p: (-p.score, p.sig))
        if beam is not None:
            out = out[:beam]
        memo[key] = out
        return out

    def build(node):
        if node.span in forbidden:
            return []
        out = []
        for alt in node.alternatives:
            if isinstance(alt, Lexical):
                pinned = pins.get(node.i)
                token = forest.tokens[node.i]
                for sense in alt.senses:
                    if pinned is not None and sense.sense_id != pinned:
                        continue
                    leaf = DLeaf(token, node.category, sense)
                    out.append(
                        _Partial(
                            tree=leaf,
                            sig=(sense.sense_id,),
                            s_lex=sense.weight,
                            s_rule=0.0,
                            s_arg=0.0,
                            s_conj=0.0,
                            score=weighted(sense.weight, 0.0, 0.0, 0.0),
                            info=_leaf_info(leaf),
                            sat=self_matches(node),
                        )
                    )
            else:
                child_lists = [partials(child) for child in alt.children]
                if any(not lst for lst in child_lists):
                    continue
                combos = [()]
                for lst in child_lists:
                    combos = [prefix + (p,) for prefix in combos for p in lst]
                own = self_matches(node)
                for combo in combos:
                    s_lex = sum(p.s_lex for p in combo)
                    s_rule = sum(p.s_rule for p in combo) + alt.rule.weight
                    s_arg = sum(p.s_arg for p in combo)
                    s_conj = sum(p.s_conj for p in combo)
                    arg_delta, conj_delta, info = _node_terms(alt.rule, [p.info for p in combo], bundle)
                    s_arg += arg_delta
                    s_conj += conj_delta
                    sig = (alt.rule.id,)
                    sat = own
                    for p in combo:
                        sig += p.sig
                        sat |= p.sat
                    tree = DNode(alt.rule, tuple(p.tree for p in combo), node.span)
                    out.append(
                        _Partial(
                            tree=tree,
                            sig=sig,
                            s_lex=s_lex,
                            s_rule=s_rule,
                            s_arg=s_arg,
                            s_conj=s_conj,
                            score=weighted(s_lex, s_rule, s_arg, s_conj),
                            info=info,
                            sat=sat,
                        )
                    )
        return [p for p in out if not doomed(node, p.sat)]

    # root: close open frames, demand every required span, then rank
    finished = []
    all_required = frozenset(range(len(required)))
    for p in build(forest.root):
        if p.sat != all_required:
            continue
        closure = _closure(p.info.verbs, bundle)
        s_arg = p.s_arg + closure
        finished.append(
            _Partial(
                tree=p.tree,
                sig=p.sig,
                s_lex=p.s_lex,
                s_rule=p.s_rule,
                s_arg=s_arg,
                s_conj=p.s_conj,
                score=weighted(p.s_lex, p.s_rule, s_arg, p.s_conj),
                info=p.info,
                sat=p.sat,
            )
        )
    finished.sort(key=lambda p: (-p.score, p.sig))
    if beam is not None:
        finished = finished[:beam]
    if not finished:
        raise UnsatisfiableError()
    return [
        Interpretation(
            tree=p.tree,
            breakdown=ScoreBreakdown(p.s_lex, p.s_rule, p.s_arg, p.s_conj, p.score),
            signature=p.sig,
        )
        for p in finished[:k]
    ]


def select_best(forest: Forest, bundle: ResourceBundle, constraints=None) -> Interpretation:
    """Best interpretation under the configured beam."""
    return kbest_interpretations(forest, bundle, constraints, beam=bundle.config.beam, k=1)[0]


def oracle_select(forest: Forest, bundle: ResourceBundle, constraints=None, cap=ORACLE_CAP) -> Interpretation:
    """Exhaustive argmax: enumerate, filter, score every tree independently."""
    if forest.root is None:
        raise NoParseError()
    if count_parses(forest) > cap:
        raise OracleCapError()
    constraints = constraints or Constraints()
    best = None
    for tree in enumerate_trees(forest):
        if not interpretation_satisfies(tree, constraints):
            continue
        breakdown = score_tree(tree, bundle)
        key = (-breakdown.total, signature(tree))
        if best is None or key < best[0]:
            best = (key, tree, breakdown)
    if best is None:
        raise UnsatisfiableError()
    return Interpretation(tree=best[1], breakdown=best[2], signature=signature(best[1]))


# --- JSON views -------------------------------------------------------------------


def tree_to_json(tree):
    if isinstance(tree, DLeaf):
        return {
            "cat": tree.category,
            "span": [tree.token.index, tree.token.index + 1],
            "token_index": tree.token.index,
            "surface": tree.token.surface,
            "sense": tree.sense.sense_id,
            "ja": tree.sense.ja,
        }
    return {
        "cat": tree.rule.lhs,
        "rule": tree.rule.id,
        "span": [tree.span[0], tree.span[1]],
        "children": [tree_to_json(child) for child in tree.children],
    }


def interpretation_to_json(interp: Interpretation, include_tree=True):
    out = {
        "signature": list(interp.signature),
        "breakdown": interp.breakdown.to_json(),
    }
    if include_tree:
        out["tree"] = tree_to_json(interp.tree)
    return out
