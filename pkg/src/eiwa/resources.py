"""Linguistic resource files and their compiled, immutable form.

Four plain-text files (grammar, lexicon, taxonomy, xforms) plus a key=value
config file compile into a ResourceBundle. All cross-references are resolved
at load time; a bundle that loads is safe to share between threads.

File syntax is line-oriented: `#` starts a comment, blank lines are ignored,
and fields within a directive line are separated by `;`.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import cached_property

from .errors import LoadError

CONFIG_KEYS = (
    "w_lex",
    "w_rule",
    "w_arg",
    "w_conj",
    "arg_bonus",
    "arg_penalty",
    "conj_bonus",
    "beam",
    "kbest",
    "unknown_word_policy",
)

UNKNOWN_WORD_POLICIES = ("noun_fallback", "reject")


@dataclass(frozen=True)
class GrammarRule:
    id: str
    lhs: str
    rhs: tuple[str, ...]
    weight: float = 1.0
    reorder: tuple[int, ...] = ()  # target position -> source child index
    inserts: tuple[tuple[int, str], ...] = ()  # (target position, morpheme)
    conj: bool = False


@dataclass(frozen=True)
class FrameSlot:
    name: str  # subj, obj, or a preposition surface
    expected: str  # taxonomy node
    strength: str  # req | pref


@dataclass(frozen=True)
class LexSense:
    surface: str
    pos: str
    sense_id: str
    sem: str
    ja: str
    weight: float = 1.0
    frame: tuple[FrameSlot, ...] = ()


@dataclass(frozen=True)
class Taxonomy:
    """Single-rooted is-a tree over semantic node names."""

    parent: dict  # name -> parent name (root maps to None)

    @cached_property
    def root(self) -> str:
        for name, par in self.parent.items():
            if par is None:
                return name
        raise ValueError("taxonomy has no root")

    @cached_property
    def depth(self) -> dict:
        depths = {}

        def d(name):
            if name not in depths:
                par = self.parent[name]
                depths[name] = 0 if par is None else d(par) + 1
            return depths[name]

        for name in self.parent:
            d(name)
        return depths

    def _check(self, name):
        if name not in self.parent:
            raise KeyError(f"unknown taxonomy node {name!r}")

    def ancestors(self, name):
        """name itself, then each ancestor up to the root."""
        self._check(name)
        chain = [name]
        while self.parent[chain[-1]] is not None:
            chain.append(self.parent[chain[-1]])
        return chain

    def is_a(self, a, b) -> bool:
        """True iff a == b or b is an ancestor of a."""
        self._check(b)
        return b in self.ancestors(a)

    def sim(self, a, b) -> float:
        """depth(LCA)/max(depth); 1.0 for identical nodes, 0.0 at the root."""
        if a == b:
            self._check(a)
            return 1.0
        ancestors_a = self.ancestors(a)
        ancestors_b = set(self.ancestors(b))
        lca = next(n for n in ancestors_a if n in ancestors_b)
        return self.depth[lca] / max(self.depth[a], self.depth[b])


def taxonomy_is_a(taxonomy: Taxonomy, a: str, b: str) -> bool:
    return taxonomy.is_a(a, b)


def taxonomy_sim(taxonomy: Taxonomy, a: str, b: str) -> float:
    return taxonomy.sim(a, b)


# --- xform patterns -------------------------------------------------------
#
# Parenthesized tree patterns: (label child ...) where a child is a nested
# pattern, a variable $x, or a quoted morpheme literal.


@dataclass(frozen=True)
class PVar:
    name: str


@dataclass(frozen=True)
class PLit:
    text: str


@dataclass(frozen=True)
class PNode:
    label: str
    children: tuple = ()


@dataclass(frozen=True)
class Xform:
    id: str
    pattern: PNode
    rewrite: PNode
    max_apply: int


def _pattern_vars(p):
    if isinstance(p, PVar):
        return {p.name}
    if isinstance(p, PNode):
        out = set()
        for c in p.children:
            out |= _pattern_vars(c)
        return out
    return set()


def _tokenize_pattern(text, line):
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            toks.append(ch)
            i += 1
        elif ch == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise LoadError("unterminated string literal in pattern", line)
            toks.append(("lit", text[i + 1 : end]))
            i = end + 1
        elif ch == "$":
            j = i + 1
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            if j == i + 1:
                raise LoadError("empty variable name in pattern", line)
            toks.append(("var", text[i + 1 : j]))
            i = j
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in '()"$':
                j += 1
            toks.append(("sym", text[i:j]))
            i = j
    return toks


def parse_pattern(text, line=None) -> PNode:
    toks = _tokenize_pattern(text, line)
    pos = 0

    def parse_node():
        nonlocal pos
        if pos >= len(toks) or toks[pos] != "(":
            raise LoadError("pattern must start with '('", line)
        pos += 1
        if pos >= len(toks) or not (isinstance(toks[pos], tuple) and toks[pos][0] == "sym"):
            raise LoadError("pattern node needs a label", line)
        label = toks[pos][1]
        pos += 1
        children = []
        while pos < len(toks) and toks[pos] != ")":
            t = toks[pos]
            if t == "(":
                children.append(parse_node())
            elif isinstance(t, tuple) and t[0] == "var":
                children.append(PVar(t[1]))
                pos += 1
            elif isinstance(t, tuple) and t[0] == "lit":
                children.append(PLit(t[1]))
                pos += 1
            else:
                raise LoadError(f"unexpected token {t[1]!r} in pattern", line)
        if pos >= len(toks):
            raise LoadError("unbalanced parentheses in pattern", line)
        pos += 1  # consume ')'
        return PNode(label, tuple(children))

    node = parse_node()
    if pos != len(toks):
        raise LoadError("unbalanced parentheses in pattern", line)
    return node


def pattern_to_text(p) -> str:
    if isinstance(p, PVar):
        return f"${p.name}"
    if isinstance(p, PLit):
        return f'"{p.text}"'
    inner = " ".join(pattern_to_text(c) for c in p.children)
    return f"({p.label} {inner})" if inner else f"({p.label})"


# --- loaders ---------------------------------------------------------------


def _content_lines(text):
    """Yield (line_number, stripped line) skipping blanks and comments."""
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield ln, line


def _split_fields(line):
    return [part.strip() for part in line.split(";")]


def _parse_kv(part, line):
    if "=" not in part:
        raise LoadError(f"expected key=value, got {part!r}", line)
    key, value = part.split("=", 1)
    return key.strip(), value.strip()


def _parse_weight(value, line):
    try:
        w = float(value)
    except ValueError:
        raise LoadError(f"bad weight {value!r}", line) from None
    if not math.isfinite(w):
        raise LoadError(f"weight must be finite, got {value!r}", line)
    return w


def load_grammar(text) -> list[GrammarRule]:
    rules = []
    seen = set()
    for ln, line in _content_lines(text):
        fields = _split_fields(line)
        head = fields[0].split()
        if head[0] != "rule":
            raise LoadError(f"unknown directive {head[0]!r}", ln)
        if len(head) < 5 or head[3] != "->":
            raise LoadError("expected `rule <id> <lhs> -> <rhs...>`", ln)
        rid, lhs, rhs = head[1], head[2], tuple(head[4:])
        if not 1 <= len(rhs) <= 8:
            raise LoadError(f"rhs must have 1..8 symbols, got {len(rhs)}", ln)
        if rid in seen:
            raise LoadError(f"duplicate rule id {rid!r}", ln)
        seen.add(rid)

        weight = 1.0
        reorder = tuple(range(len(rhs)))
        inserts = []
        conj = False
        for part in fields[1:]:
            key, value = _parse_kv(part, ln)
            if key == "weight":
                weight = _parse_weight(value, ln)
            elif key == "reorder":
                try:
                    reorder = tuple(int(x) for x in value.split(","))
                except ValueError:
                    raise LoadError(f"bad reorder {value!r}", ln) from None
                if sorted(reorder) != list(range(len(rhs))):
                    raise LoadError(f"reorder {value!r} is not a permutation", ln)
            elif key == "insert":
                if ":" not in value:
                    raise LoadError(f"bad insert {value!r}", ln)
                pos_text, morpheme = value.split(":", 1)
                try:
                    pos = int(pos_text)
                except ValueError:
                    raise LoadError(f"bad insert position {pos_text!r}", ln) from None
                if not (morpheme.startswith('"') and morpheme.endswith('"') and len(morpheme) >= 2):
                    raise LoadError(f"insert morpheme must be quoted: {morpheme!r}", ln)
                if not 0 <= pos < len(rhs):
                    raise LoadError(f"insert position {pos} out of range", ln)
                inserts.append((pos, morpheme[1:-1]))
            elif key == "conj":
                if value not in ("true", "false"):
                    raise LoadError(f"conj must be true or false, got {value!r}", ln)
                conj = value == "true"
            else:
                raise LoadError(f"unknown rule field {key!r}", ln)
        rules.append(GrammarRule(rid, lhs, rhs, weight, reorder, tuple(inserts), conj))
    return sorted(rules, key=lambda r: r.id)


def load_lexicon(text) -> dict[str, tuple[LexSense, ...]]:
    table: dict[str, list[LexSense]] = {}
    for ln, line in _content_lines(text):
        fields = _split_fields(line)
        head = fields[0].split()
        if head[0] != "lex":
            raise LoadError(f"unknown directive {head[0]!r}", ln)
        if len(head) != 2:
            raise LoadError("expected `lex <surface>`", ln)
        surface = head[1].lower()

        kv = {}
        frame = []
        for part in fields[1:]:
            key, value = _parse_kv(part, ln)
            if key == "frame":
                for slot_text in value.split(","):
                    slot_text = slot_text.strip()
                    if "=" not in slot_text or ":" not in slot_text:
                        raise LoadError(f"bad frame slot {slot_text!r}", ln)
                    name, rest = slot_text.split("=", 1)
                    expected, strength = rest.rsplit(":", 1)
                    if strength not in ("req", "pref"):
                        raise LoadError(f"unknown strength tag {strength!r}", ln)
                    if any(s.name == name for s in frame):
                        raise LoadError(f"duplicate frame slot {name!r}", ln)
                    frame.append(FrameSlot(name, expected, strength))
            elif key in ("pos", "sense", "sem", "ja", "weight"):
                if key in kv:
                    raise LoadError(f"duplicate field {key!r}", ln)
                kv[key] = value
            else:
                raise LoadError(f"unknown lexicon field {key!r}", ln)
        for required in ("pos", "sense", "sem"):
            if required not in kv:
                raise LoadError(f"missing field {required!r}", ln)

        sense = LexSense(
            surface=surface,
            pos=kv["pos"],
            sense_id=kv["sense"],
            sem=kv["sem"],
            ja=kv.get("ja", ""),
            weight=_parse_weight(kv.get("weight", "1.0"), ln),
            frame=tuple(frame),
        )
        if any(s.sense_id == sense.sense_id for s in table.get(surface, [])):
            raise LoadError(f"duplicate sense {surface!r}/{sense.sense_id!r}", ln)
        table.setdefault(surface, []).append(sense)
    return {s: tuple(sorted(senses, key=lambda x: x.sense_id)) for s, senses in table.items()}


def load_taxonomy(text) -> Taxonomy:
    parent = {}
    declared = []  # (name, parent, line) in file order, validated at end
    for ln, line in _content_lines(text):
        head = line.split()
        if head[0] != "sem":
            raise LoadError(f"unknown directive {head[0]!r}", ln)
        if len(head) == 2:
            declared.append((head[1], None, ln))
        elif len(head) == 4 and head[2] == "isa":
            declared.append((head[1], head[3], ln))
        else:
            raise LoadError("expected `sem <name>` or `sem <child> isa <parent>`", ln)

    for name, par, ln in declared:
        if name in parent:
            raise LoadError(f"duplicate node {name!r}", ln)
        parent[name] = par

    for name, par, ln in declared:
        if par is not None and par not in parent:
            raise LoadError(f"orphan parent {par!r}", ln)
    for name, _, ln in declared:
        seen = {name}
        cur = parent[name]
        while cur is not None:
            if cur in seen:
                raise LoadError(f"cycle through {name!r}", ln)
            seen.add(cur)
            cur = parent[cur]
    roots = [(n, ln) for (n, p, ln) in declared if p is None]
    if not roots:
        raise LoadError("taxonomy has no root")
    if len(roots) > 1:
        raise LoadError(f"two roots: {roots[0][0]!r} and {roots[1][0]!r}", roots[1][1])
    return Taxonomy(parent)


def load_xforms(text) -> list[Xform]:
    xforms = []
    seen = set()
    for ln, line in _content_lines(text):
        fields = _split_fields(line)
        head = fields[0].split()
        if head[0] != "xform":
            raise LoadError(f"unknown directive {head[0]!r}", ln)
        if len(head) != 2:
            raise LoadError("expected `xform <id>`", ln)
        xid = head[1]
        if xid in seen:
            raise LoadError(f"duplicate xform id {xid!r}", ln)
        seen.add(xid)

        kv = {}
        for part in fields[1:]:
            key, value = _parse_kv(part, ln)
            if key in kv:
                raise LoadError(f"duplicate field {key!r}", ln)
            kv[key] = value
        for required in ("match", "rewrite", "max"):
            if required not in kv:
                raise LoadError(f"missing field {required!r}", ln)
        pattern = parse_pattern(kv["match"], ln)
        rewrite = parse_pattern(kv["rewrite"], ln)
        unbound = _pattern_vars(rewrite) - _pattern_vars(pattern)
        if unbound:
            raise LoadError(f"unbound variable ${sorted(unbound)[0]}", ln)
        try:
            max_apply = int(kv["max"])
        except ValueError:
            raise LoadError(f"bad max {kv['max']!r}", ln) from None
        if max_apply < 1:
            raise LoadError(f"max must be >= 1, got {max_apply}", ln)
        xforms.append(Xform(xid, pattern, rewrite, max_apply))
    return xforms


@dataclass(frozen=True)
class ExpertConfig:
    w_lex: float
    w_rule: float
    w_arg: float
    w_conj: float
    arg_bonus: float
    arg_penalty: float
    conj_bonus: float
    beam: int | None  # None spells an unbounded beam
    kbest: int
    unknown_word_policy: str


def load_config(text) -> ExpertConfig:
    kv = {}
    for ln, line in _content_lines(text):
        key, value = _parse_kv(line, ln)
        if key not in CONFIG_KEYS:
            raise LoadError(f"unknown config key {key!r}", ln)
        if key in kv:
            raise LoadError(f"duplicate config key {key!r}", ln)
        kv[key] = (value, ln)
    for key in CONFIG_KEYS:
        if key not in kv:
            raise LoadError(f"missing config key {key!r}")

    def dec(key):
        return _parse_weight(kv[key][0], kv[key][1])

    def pos_int(key):
        value, ln = kv[key]
        try:
            n = int(value)
        except ValueError:
            raise LoadError(f"bad {key} {value!r}", ln) from None
        if n < 1:
            raise LoadError(f"{key} must be >= 1, got {n}", ln)
        return n

    beam_text, beam_ln = kv["beam"]
    beam = None if beam_text == "inf" else pos_int("beam")
    policy, policy_ln = kv["unknown_word_policy"]
    if policy not in UNKNOWN_WORD_POLICIES:
        raise LoadError(f"unknown policy {policy!r}", policy_ln)
    return ExpertConfig(
        w_lex=dec("w_lex"),
        w_rule=dec("w_rule"),
        w_arg=dec("w_arg"),
        w_conj=dec("w_conj"),
        arg_bonus=dec("arg_bonus"),
        arg_penalty=dec("arg_penalty"),
        conj_bonus=dec("conj_bonus"),
        beam=beam,
        kbest=pos_int("kbest"),
        unknown_word_policy=policy,
    )


# --- the bundle ------------------------------------------------------------


@dataclass(frozen=True)
class ResourceBundle:
    grammar: tuple[GrammarRule, ...]
    lexicon: dict  # surface -> tuple[LexSense, ...]
    taxonomy: Taxonomy
    xforms: tuple[Xform, ...]
    config: ExpertConfig

    @cached_property
    def rules_by_lhs(self) -> dict:
        table: dict[str, list[GrammarRule]] = {}
        for rule in self.grammar:
            table.setdefault(rule.lhs, []).append(rule)
        return table

    @cached_property
    def rules_by_id(self) -> dict:
        return {rule.id: rule for rule in self.grammar}

    @cached_property
    def categories(self) -> set:
        cats = set()
        for rule in self.grammar:
            cats.add(rule.lhs)
            cats.update(rule.rhs)
        for senses in self.lexicon.values():
            cats.update(s.pos for s in senses)
        return cats

    @cached_property
    def fingerprint(self) -> str:
        digest = hashlib.sha256()
        for tag, text in (
            ("grammar", grammar_to_text(self.grammar)),
            ("lexicon", lexicon_to_text(self.lexicon)),
            ("taxonomy", taxonomy_to_text(self.taxonomy)),
            ("xforms", xforms_to_text(self.xforms)),
            ("config", config_to_text(self.config)),
        ):
            digest.update(tag.encode())
            digest.update(b"\x00")
            digest.update(text.encode())
            digest.update(b"\x00")
        return digest.hexdigest()

    def sense_count(self) -> int:
        return sum(len(senses) for senses in self.lexicon.values())


def compile_bundle(grammar_text, lexicon_text, taxonomy_text, xforms_text, config_text) -> ResourceBundle:
    """Load all five resource texts and validate cross-references."""
    grammar = tuple(load_grammar(grammar_text))
    lexicon = load_lexicon(lexicon_text)
    taxonomy = load_taxonomy(taxonomy_text)
    xforms = tuple(load_xforms(xforms_text))
    config = load_config(config_text)

    for senses in lexicon.values():
        for sense in senses:
            if sense.sem not in taxonomy.parent:
                raise LoadError(f"sense {sense.surface!r}/{sense.sense_id!r} names unknown sem node {sense.sem!r}")
            for slot in sense.frame:
                if slot.expected not in taxonomy.parent:
                    raise LoadError(
                        f"frame slot {slot.name!r} of {sense.surface!r}/{sense.sense_id!r} "
                        f"names unknown sem node {slot.expected!r}"
                    )
    return ResourceBundle(grammar, lexicon, taxonomy, xforms, config)


def load_bundle(grammar_path, lexicon_path, taxonomy_path, xforms_path, config_path) -> ResourceBundle:
    texts = []
    for path in (grammar_path, lexicon_path, taxonomy_path, xforms_path, config_path):
        with open(path, encoding="utf-8") as handle:
            texts.append(handle.read())
    return compile_bundle(*texts)


# --- canonical serialization ------------------------------------------------


def _fmt(value: float) -> str:
    return repr(value)


def grammar_to_text(rules) -> str:
    lines = []
    for rule in sorted(rules, key=lambda r: r.id):
        parts = [
            f"rule {rule.id} {rule.lhs} -> {' '.join(rule.rhs)}",
            f"weight={_fmt(rule.weight)}",
            f"reorder={','.join(str(i) for i in rule.reorder)}",
        ]
        parts.extend(f'insert={pos}:"{m}"' for pos, m in rule.inserts)
        if rule.conj:
            parts.append("conj=true")
        lines.append(" ; ".join(parts))
    return "\n".join(lines) + "\n"


def lexicon_to_text(lexicon) -> str:
    lines = []
    for surface in sorted(lexicon):
        for sense in sorted(lexicon[surface], key=lambda s: s.sense_id):
            parts = [
                f"lex {surface}",
                f"pos={sense.pos}",
                f"sense={sense.sense_id}",
                f"sem={sense.sem}",
                f"ja={sense.ja}",
                f"weight={_fmt(sense.weight)}",
            ]
            if sense.frame:
                slots = ",".join(f"{s.name}={s.expected}:{s.strength}" for s in sense.frame)
                parts.append(f"frame={slots}")
            lines.append(" ; ".join(parts))
    return "\n".join(lines) + "\n"


def taxonomy_to_text(taxonomy: Taxonomy) -> str:
    children: dict[str, list[str]] = {}
    for name, par in taxonomy.parent.items():
        if par is not None:
            children.setdefault(par, []).append(name)
    lines = [f"sem {taxonomy.root}"]
    queue = [taxonomy.root]
    while queue:
        node = queue.pop(0)
        for child in sorted(children.get(node, [])):
            lines.append(f"sem {child} isa {node}")
            queue.append(child)
    return "\n".join(lines) + "\n"


def xforms_to_text(xforms) -> str:
    lines = [
        f"xform {x.id} ; match={pattern_to_text(x.pattern)} ; rewrite={pattern_to_text(x.rewrite)} ; max={x.max_apply}"
        for x in xforms
    ]
    return "\n".join(lines) + "\n" if lines else ""


def config_to_text(config: ExpertConfig) -> str:
    lines = [
        f"w_lex={_fmt(config.w_lex)}",
        f"w_rule={_fmt(config.w_rule)}",
        f"w_arg={_fmt(config.w_arg)}",
        f"w_conj={_fmt(config.w_conj)}",
        f"arg_bonus={_fmt(config.arg_bonus)}",
        f"arg_penalty={_fmt(config.arg_penalty)}",
        f"conj_bonus={_fmt(config.conj_bonus)}",
        f"beam={'inf' if config.beam is None else config.beam}",
        f"kbest={config.kbest}",
        f"unknown_word_policy={config.unknown_word_policy}",
    ]
    return "\n".join(lines) + "\n"


def bundle_to_texts(bundle: ResourceBundle) -> dict:
    return {
        "grammar": grammar_to_text(bundle.grammar),
        "lexicon": lexicon_to_text(bundle.lexicon),
        "taxonomy": taxonomy_to_text(bundle.taxonomy),
        "xforms": xforms_to_text(bundle.xforms),
        "config": config_to_text(bundle.config),
    }
