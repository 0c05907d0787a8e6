"""Gold labels for sentence pairs via finite-model semantics.

A sentence denotes the set of admissible worlds in which it is true.  A
world assigns every open-class and modifier symbol in scope an extension
over a small finite domain, subject to two constraints: noun and verb
extensions are non-empty, and when the two sentences of a pair use
chain-related nouns (or verbs) the lower one denotes a strict subset of
the higher one.  Modifier extensions are unconstrained subsets and
combine intersectively with the noun.

Two labelers are provided:

* ``label_pair_naive`` materializes every admissible world and evaluates
  both sentences in each; it is the textbook reference and is guarded by
  a work cap since the world count grows as a product over symbols.
* ``label_pair_oracle`` computes the same four counts (|premise worlds|,
  |hypothesis worlds|, |both|, |all worlds|) without materializing
  worlds, by convolving per-symbol mask-count matrices over the subset
  lattice.  It is exact and fast enough to sweep every reachable pair
  skeleton, which is how ``build_table`` produces the memoized
  ``RelationTable`` used to label datasets in O(1) per pair.

``project_relation`` is an independent fast path: it projects lexical
relations through quantifier monotonicity and answers only when the
projection is decisive.
"""

from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    ComplexityGuardError,
    ConfigError,
    InfeasibleConstraintsError,
    MissingExtensionError,
    MissingSkeletonError,
    TableInstabilityError,
)
from .language import (
    DEFAULT_INVENTORY,
    QUANTIFIER_MEANINGS,
    ROLE_TRAINING,
    TAXONOMY_SIZE,
    Block,
    ClosedClassInventory,
    Sentence,
    SentencePair,
)
from .relations import Relation, classify, classify_counts

# Size 4 is the smallest domain on which every reachable pair skeleton is
# satisfiable on both sides: two strict chain steps can force two disjoint
# 2-element extensions.  Relations are identical for every size >= 4, so
# tables build at (4, 5) and the stability check guards the choice.
DEFAULT_DOMAIN_SIZES = (4, 5)
DEFAULT_WORLD_CAP = 10**8

REL_SAME = "same"
REL_BELOW = "below"      # premise symbol denotes a strict subset of the hypothesis symbol
REL_ABOVE = "above"
REL_UNRELATED = "unrelated"

MATCH_BOTH_ABSENT = "both-absent"
MATCH_SAME = "same"
MATCH_DIFFERENT = "different"
MATCH_PREMISE_ONLY = "premise-only"
MATCH_HYPOTHESIS_ONLY = "hypothesis-only"

#: (restrictor, scope) monotonicity per quantifier meaning.
QUANTIFIER_MONOTONICITY = {
    "all": ("down", "up"),
    "some": ("up", "up"),
    "no": ("down", "down"),
    "notall": ("up", "down"),
}


@dataclass(frozen=True, eq=False)
class World:
    domain: frozenset
    extensions: Mapping[str, frozenset]


def evaluate(sentence: Sentence, world: World,
             inventory: ClosedClassInventory = DEFAULT_INVENTORY) -> bool:
    """Truth of a sentence in a world.

    The restrictor is the noun extension intersected with any modifier
    extensions; the scope is the verb extension, complemented when the
    sentence is negated.
    """
    ext = world.extensions
    try:
        restrictor = ext[sentence.noun]
        if sentence.premodifier is not None:
            restrictor = restrictor & ext[sentence.premodifier]
        if sentence.postmodifier is not None:
            restrictor = restrictor & ext[sentence.postmodifier]
        scope = ext[sentence.verb]
    except KeyError as missing:
        raise MissingExtensionError(f"no extension for symbol {missing}") from None
    if sentence.negation:
        scope = world.domain - scope
    meaning = inventory.quantifier_semantics[sentence.quantifier]
    if meaning == "all":
        return restrictor <= scope
    if meaning == "some":
        return bool(restrictor & scope)
    if meaning == "no":
        return not restrictor & scope
    if meaning == "notall":
        return not restrictor <= scope
    raise ConfigError(f"unknown quantifier meaning {meaning!r}")


# ---------------------------------------------------------------------------
# Pair structure
# ---------------------------------------------------------------------------

def _chain_rel(sym_p: str, sym_h: str, chain: Sequence[str]) -> str:
    if sym_p == sym_h:
        return REL_SAME
    try:
        i, j = chain.index(sym_p), chain.index(sym_h)
    except ValueError as err:
        raise ConfigError(f"symbol not in block chain: {err}") from None
    return REL_BELOW if i < j else REL_ABOVE


def _modifier_match(sym_p: str | None, sym_h: str | None) -> str:
    if sym_p is None and sym_h is None:
        return MATCH_BOTH_ABSENT
    if sym_p == sym_h:
        return MATCH_SAME
    if sym_p is not None and sym_h is not None:
        return MATCH_DIFFERENT
    return MATCH_PREMISE_ONLY if sym_p is not None else MATCH_HYPOTHESIS_ONLY


@dataclass(frozen=True)
class SemanticSkeleton:
    """Everything the gold relation of a pair depends on.

    Chain relations are direction-only: quantification over strict
    subset chains is invariant to taxonomic distance, so the table stays
    small.  ``unrelated`` is representable but unreachable while pairs
    draw noun and verb from a single block.
    """

    quantifier_premise: str
    quantifier_hypothesis: str
    negation_premise: bool
    negation_hypothesis: bool
    noun_rel: str
    verb_rel: str
    premod_match: str
    postmod_match: str

    @property
    def premise_frame(self) -> tuple:
        return (
            self.quantifier_premise,
            self.premod_match in (MATCH_SAME, MATCH_DIFFERENT, MATCH_PREMISE_ONLY),
            self.postmod_match in (MATCH_SAME, MATCH_DIFFERENT, MATCH_PREMISE_ONLY),
            self.negation_premise,
        )

    @property
    def hypothesis_frame(self) -> tuple:
        return (
            self.quantifier_hypothesis,
            self.premod_match in (MATCH_SAME, MATCH_DIFFERENT, MATCH_HYPOTHESIS_ONLY),
            self.postmod_match in (MATCH_SAME, MATCH_DIFFERENT, MATCH_HYPOTHESIS_ONLY),
            self.negation_hypothesis,
        )

    def key(self) -> str:
        return "|".join(
            (
                self.quantifier_premise,
                self.quantifier_hypothesis,
                "1" if self.negation_premise else "0",
                "1" if self.negation_hypothesis else "0",
                self.noun_rel,
                self.verb_rel,
                self.premod_match,
                self.postmod_match,
            )
        )

    @classmethod
    def from_key(cls, key: str) -> "SemanticSkeleton":
        parts = key.split("|")
        if len(parts) != 8:
            raise ValueError(f"malformed skeleton key: {key!r}")
        return cls(
            quantifier_premise=parts[0],
            quantifier_hypothesis=parts[1],
            negation_premise=parts[2] == "1",
            negation_hypothesis=parts[3] == "1",
            noun_rel=parts[4],
            verb_rel=parts[5],
            premod_match=parts[6],
            postmod_match=parts[7],
        )


def extract_skeleton(pair: SentencePair, block: Block) -> SemanticSkeleton:
    p, h = pair.premise, pair.hypothesis
    return SemanticSkeleton(
        quantifier_premise=p.quantifier,
        quantifier_hypothesis=h.quantifier,
        negation_premise=p.negation,
        negation_hypothesis=h.negation,
        noun_rel=_chain_rel(p.noun, h.noun, block.nouns),
        verb_rel=_chain_rel(p.verb, h.verb, block.verbs),
        premod_match=_modifier_match(p.premodifier, h.premodifier),
        postmod_match=_modifier_match(p.postmodifier, h.postmodifier),
    )


# ---------------------------------------------------------------------------
# Naive oracle: materialize every world
# ---------------------------------------------------------------------------

def _mask_to_set(mask: int, n: int) -> frozenset:
    return frozenset(i for i in range(n) if mask >> i & 1)


def _pair_factors(pair: SentencePair, block: Block):
    """Independent factor descriptions of the pair's world space.

    Returns a list of (symbols, values) where values is a list of mask
    tuples aligned with symbols.  The full world space is the cartesian
    product of the factors.
    """
    p, h = pair.premise, pair.hypothesis
    factors = []
    for sym_p, sym_h, chain in ((p.noun, h.noun, block.nouns), (p.verb, h.verb, block.verbs)):
        factors.append((sym_p, sym_h, _chain_rel(sym_p, sym_h, chain), "atom"))
    for sym_p, sym_h in ((p.premodifier, h.premodifier), (p.postmodifier, h.postmodifier)):
        factors.append((sym_p, sym_h, _modifier_match(sym_p, sym_h), "modifier"))
    return factors


def _atom_values(rel: str, n: int) -> list[tuple[int, ...]]:
    nonempty = [m for m in range(1, 1 << n)]
    if rel == REL_SAME:
        return [(m,) for m in nonempty]
    pairs = []
    for big in nonempty:
        sub = (big - 1) & big
        while sub:
            pairs.append((sub, big))
            sub = (sub - 1) & big
    if rel == REL_BELOW:
        return pairs
    if rel == REL_ABOVE:
        return [(big, sub) for sub, big in pairs]
    raise ConfigError(f"cannot enumerate worlds for relation {rel!r}")


def _modifier_values(match: str, n: int) -> list[tuple[int, ...]]:
    every = list(range(1 << n))
    if match == MATCH_BOTH_ABSENT:
        return [()]
    if match in (MATCH_SAME, MATCH_PREMISE_ONLY, MATCH_HYPOTHESIS_ONLY):
        return [(m,) for m in every]
    return list(itertools.product(every, every))


def _factor_value_lists(pair: SentencePair, block: Block, n: int):
    described = []
    for sym_p, sym_h, rel, kind in _pair_factors(pair, block):
        if kind == "atom":
            symbols = (sym_p,) if rel == REL_SAME else (sym_p, sym_h)
            described.append((symbols, _atom_values(rel, n)))
        else:
            if rel == MATCH_BOTH_ABSENT:
                symbols = ()
            elif rel == MATCH_DIFFERENT:
                symbols = (sym_p, sym_h)
            else:
                symbols = (sym_p if sym_p is not None else sym_h,)
            described.append((symbols, _modifier_values(rel, n)))
    return described


def abstract_world_count(pair: SentencePair, block: Block, domain_size: int) -> int:
    """Size of the admissible world space, without enumerating it."""
    total = 1
    for _, values in _factor_value_lists(pair, block, domain_size):
        total *= len(values)
    return total


def enumerate_worlds(
    pair: SentencePair,
    block: Block,
    domain_size: int,
    world_cap: int = DEFAULT_WORLD_CAP,
) -> list[World]:
    """Materialize every admissible world for the pair's symbols."""
    if domain_size < 3:
        raise ConfigError("domain_size must be at least 3")
    factors = _factor_value_lists(pair, block, domain_size)
    total = 1
    for _, values in factors:
        total *= len(values)
    if total > world_cap:
        raise ComplexityGuardError(
            f"enumeration of {total} worlds exceeds cap {world_cap}"
        )
    if total == 0:
        raise InfeasibleConstraintsError("no world satisfies the extension constraints")
    domain = frozenset(range(domain_size))
    worlds = []
    for combo in itertools.product(*(values for _, values in factors)):
        extensions: dict[str, frozenset] = {}
        for (symbols, _), masks in zip(factors, combo):
            for sym, mask in zip(symbols, masks):
                extensions[sym] = _mask_to_set(mask, domain_size)
        worlds.append(World(domain=domain, extensions=extensions))
    return worlds


def label_pair_naive(
    pair: SentencePair,
    block: Block,
    domain_size: int,
    inventory: ClosedClassInventory = DEFAULT_INVENTORY,
    world_cap: int = DEFAULT_WORLD_CAP,
) -> Relation:
    """Reference labeler: evaluate both sentences in every world."""
    worlds = enumerate_worlds(pair, block, domain_size, world_cap=world_cap)
    x = {i for i, w in enumerate(worlds) if evaluate(pair.premise, w, inventory)}
    y = {i for i, w in enumerate(worlds) if evaluate(pair.hypothesis, w, inventory)}
    return classify(x, y, range(len(worlds)))


# ---------------------------------------------------------------------------
# Counting oracle: exact world counts without materialization
# ---------------------------------------------------------------------------

def _sup_zeta(a: np.ndarray) -> None:
    for ax in range(a.ndim):
        lo = tuple(0 if i == ax else slice(None) for i in range(a.ndim))
        hi = tuple(1 if i == ax else slice(None) for i in range(a.ndim))
        a[lo] += a[hi]


def _sup_mobius(a: np.ndarray) -> None:
    for ax in range(a.ndim):
        lo = tuple(0 if i == ax else slice(None) for i in range(a.ndim))
        hi = tuple(1 if i == ax else slice(None) for i in range(a.ndim))
        a[lo] -= a[hi]


def _and_convolve(f: np.ndarray, g: np.ndarray, n: int) -> np.ndarray:
    """(f*g)[u, v] = sum over a&c=u, b&d=v of f[a,b] g[c,d].

    Computed with superset zeta transforms over the 2n-bit pair lattice.
    """
    shape = (2,) * (2 * n)
    zf = f.reshape(shape).copy()
    zg = g.reshape(shape).copy()
    _sup_zeta(zf)
    _sup_zeta(zg)
    out = zf * zg
    _sup_mobius(out)
    return out.reshape(f.shape)


def _atom_counts(rel: str, n: int) -> np.ndarray:
    size = 1 << n
    out = np.zeros((size, size), dtype=np.int64)
    for masks in _atom_values(rel, n):
        if len(masks) == 1:
            out[masks[0], masks[0]] += 1
        else:
            out[masks[0], masks[1]] += 1
    return out


def _modifier_counts(match: str, n: int) -> np.ndarray:
    size = 1 << n
    full = size - 1
    out = np.zeros((size, size), dtype=np.int64)
    if match == MATCH_BOTH_ABSENT:
        out[full, full] = 1
    elif match == MATCH_SAME:
        np.fill_diagonal(out, 1)
    elif match == MATCH_DIFFERENT:
        out[:, :] = 1
    elif match == MATCH_PREMISE_ONLY:
        out[:, full] = 1
    elif match == MATCH_HYPOTHESIS_ONLY:
        out[full, :] = 1
    else:
        raise ConfigError(f"unknown modifier match {match!r}")
    return out


def _scope_counts(verb_rel: str, neg_p: bool, neg_h: bool, n: int) -> np.ndarray:
    out = _atom_counts(verb_rel, n)
    perm = np.arange(1 << n) ^ ((1 << n) - 1)
    if neg_p:
        out = out[perm, :]
    if neg_h:
        out = out[:, perm]
    return out


def _truth_tables(n: int) -> dict[str, np.ndarray]:
    size = 1 << n
    full = size - 1
    r = np.arange(size)[:, None]
    s = np.arange(size)[None, :]
    inter = r & s
    uncovered = r & (full ^ s)
    return {
        "all": (uncovered == 0).astype(np.int64),
        "some": (inter != 0).astype(np.int64),
        "no": (inter == 0).astype(np.int64),
        "notall": (uncovered != 0).astype(np.int64),
    }


def _restrictor_counts(noun_rel: str, premod_match: str, postmod_match: str, n: int) -> np.ndarray:
    cr = _atom_counts(noun_rel, n)
    for match in (premod_match, postmod_match):
        if match != MATCH_BOTH_ABSENT:
            cr = _and_convolve(cr, _modifier_counts(match, n), n)
    return cr


def _counting_work(domain_size: int) -> int:
    return (1 << domain_size) ** 3


def label_pair_oracle(
    pair: SentencePair,
    block: Block,
    domain_size: int,
    inventory: ClosedClassInventory = DEFAULT_INVENTORY,
    world_cap: int = DEFAULT_WORLD_CAP,
) -> Relation:
    """Exact relation over the full admissible world space.

    Counts worlds in factored form rather than materializing them, so
    the guard measures the work the counting actually performs (cubic in
    the number of extension masks), not the abstract world count.
    Agrees with ``label_pair_naive`` everywhere the latter is feasible.
    """
    if domain_size < 3:
        raise ConfigError("domain_size must be at least 3")
    if _counting_work(domain_size) > world_cap:
        raise ComplexityGuardError(
            f"domain size {domain_size} exceeds work cap {world_cap}"
        )
    sk = extract_skeleton(pair, block)
    cr = _restrictor_counts(sk.noun_rel, sk.premod_match, sk.postmod_match, domain_size)
    cs = _scope_counts(sk.verb_rel, sk.negation_premise, sk.negation_hypothesis, domain_size)
    tables = _truth_tables(domain_size)
    t_p = tables[inventory.quantifier_semantics[sk.quantifier_premise]]
    t_h = tables[inventory.quantifier_semantics[sk.quantifier_hypothesis]]
    n_universe = int(cr.sum()) * int(cs.sum())
    if n_universe == 0:
        raise InfeasibleConstraintsError("no world satisfies the extension constraints")
    n_x = int(np.einsum("ab,cd,ac->", cr, cs, t_p, optimize=True))
    n_y = int(np.einsum("ab,cd,bd->", cr, cs, t_h, optimize=True))
    n_xy = int(np.einsum("ab,cd,ac,bd->", cr, cs, t_p, t_h, optimize=True))
    return classify_counts(n_x, n_y, n_xy, n_universe)


# ---------------------------------------------------------------------------
# Relation table
# ---------------------------------------------------------------------------

TABLE_FORMAT_VERSION = 1

CANONICAL_BLOCK = Block(
    id=-1,
    role=ROLE_TRAINING,
    nouns=tuple(f"_cn{i}" for i in range(TAXONOMY_SIZE)),
    verbs=tuple(f"_cv{i}" for i in range(TAXONOMY_SIZE)),
)


def inventory_fingerprint(inventory: ClosedClassInventory) -> str:
    payload = json.dumps(inventory.to_json(), sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def reachable_skeletons(inventory: ClosedClassInventory = DEFAULT_INVENTORY) -> list[SemanticSkeleton]:
    """Every skeleton the sampler can produce under this inventory."""
    matches = [MATCH_BOTH_ABSENT]
    if inventory.premodifiers:
        matches += [MATCH_SAME, MATCH_PREMISE_ONLY, MATCH_HYPOTHESIS_ONLY]
    premod_matches = list(matches)
    if len(inventory.premodifiers) >= 2:
        premod_matches.append(MATCH_DIFFERENT)
    postmod_matches = [MATCH_BOTH_ABSENT]
    if inventory.postmodifiers:
        postmod_matches += [MATCH_SAME, MATCH_PREMISE_ONLY, MATCH_HYPOTHESIS_ONLY]
    if len(inventory.postmodifiers) >= 2:
        postmod_matches.append(MATCH_DIFFERENT)
    negations = [False, True] if inventory.negation is not None else [False]
    chain_rels = [REL_SAME, REL_BELOW, REL_ABOVE]
    skeletons = [
        SemanticSkeleton(qp, qh, np_, nh, nr, vr, pm, qm)
        for qp in inventory.quantifiers
        for qh in inventory.quantifiers
        for np_ in negations
        for nh in negations
        for nr in chain_rels
        for vr in chain_rels
        for pm in premod_matches
        for qm in postmod_matches
    ]
    skeletons.sort(key=lambda s: s.key())
    return skeletons


def canonical_pair(
    skeleton: SemanticSkeleton, inventory: ClosedClassInventory = DEFAULT_INVENTORY
) -> tuple[SentencePair, Block]:
    """A representative pair over the reserved canonical block."""
    block = CANONICAL_BLOCK
    positions = {REL_SAME: (0, 0), REL_BELOW: (0, 1), REL_ABOVE: (1, 0)}
    try:
        ni, nj = positions[skeleton.noun_rel]
        vi, vj = positions[skeleton.verb_rel]
    except KeyError:
        raise ConfigError(f"no canonical pair for relation {skeleton.noun_rel!r}") from None

    def pick(match: str, words: tuple[str, ...]) -> tuple[str | None, str | None]:
        if match == MATCH_BOTH_ABSENT:
            return None, None
        if match == MATCH_SAME:
            return words[0], words[0]
        if match == MATCH_DIFFERENT:
            return words[0], words[1]
        if match == MATCH_PREMISE_ONLY:
            return words[0], None
        return None, words[0]

    pre_p, pre_h = pick(skeleton.premod_match, inventory.premodifiers)
    post_p, post_h = pick(skeleton.postmod_match, inventory.postmodifiers)
    premise = Sentence(
        quantifier=skeleton.quantifier_premise,
        premodifier=pre_p,
        noun=block.nouns[ni],
        postmodifier=post_p,
        negation=skeleton.negation_premise,
        verb=block.verbs[vi],
    )
    hypothesis = Sentence(
        quantifier=skeleton.quantifier_hypothesis,
        premodifier=pre_h,
        noun=block.nouns[nj],
        postmodifier=post_h,
        negation=skeleton.negation_hypothesis,
        verb=block.verbs[vj],
    )
    return SentencePair(premise, hypothesis), block


@dataclass
class RelationTable:
    """Memoized skeleton -> relation map with build provenance."""

    entries: dict[SemanticSkeleton, Relation]
    domain_sizes: tuple[int, ...]
    inventory_fingerprint: str
    version: int = TABLE_FORMAT_VERSION

    def lookup(self, skeleton: SemanticSkeleton) -> Relation:
        try:
            return self.entries[skeleton]
        except KeyError:
            raise MissingSkeletonError(skeleton.key()) from None

    def to_json(self) -> dict:
        return {
            "format_version": self.version,
            "domain_sizes": list(self.domain_sizes),
            "inventory_fingerprint": self.inventory_fingerprint,
            "entries": {
                sk.key(): rel.canonical_name
                for sk, rel in sorted(self.entries.items(), key=lambda kv: kv[0].key())
            },
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "RelationTable":
        entries = {
            SemanticSkeleton.from_key(key): Relation.from_name(name)
            for key, name in data["entries"].items()
        }
        return cls(
            entries=entries,
            domain_sizes=tuple(data["domain_sizes"]),
            inventory_fingerprint=data["inventory_fingerprint"],
            version=int(data.get("format_version", TABLE_FORMAT_VERSION)),
        )


_TABLE_CACHE: dict[tuple, RelationTable] = {}


def build_table(
    inventory: ClosedClassInventory = DEFAULT_INVENTORY,
    domain_sizes: Sequence[int] = DEFAULT_DOMAIN_SIZES,
    world_cap: int = DEFAULT_WORLD_CAP,
    use_cache: bool = True,
) -> RelationTable:
    """Run the counting oracle over every reachable skeleton.

    Skeletons sharing restrictor and scope structure reuse one set of
    count matrices, with all quantifier pairs classified in a single
    batched contraction.  Raises ``TableInstabilityError`` if any
    skeleton's relation differs across the requested domain sizes.
    """
    sizes = tuple(sorted(set(int(s) for s in domain_sizes)))
    if len(sizes) < 2:
        raise ConfigError("need at least two domain sizes for the stability check")
    if min(sizes) < 3:
        raise ConfigError("domain sizes must be at least 3")
    for n in sizes:
        if _counting_work(n) > world_cap:
            raise ComplexityGuardError(f"domain size {n} exceeds work cap {world_cap}")
    fingerprint = inventory_fingerprint(inventory)
    cache_key = (fingerprint, sizes)
    if use_cache and cache_key in _TABLE_CACHE:
        return _TABLE_CACHE[cache_key]

    skeletons = reachable_skeletons(inventory)
    meanings = list(QUANTIFIER_MEANINGS)
    sem_index = {
        q: meanings.index(inventory.quantifier_semantics[q]) for q in inventory.quantifiers
    }
    groups: dict[tuple, list[SemanticSkeleton]] = {}
    for sk in skeletons:
        structure = (
            sk.noun_rel, sk.premod_match, sk.postmod_match,
            sk.verb_rel, sk.negation_premise, sk.negation_hypothesis,
        )
        groups.setdefault(structure, []).append(sk)

    per_size: list[dict[SemanticSkeleton, Relation]] = []
    for n in sizes:
        tables = _truth_tables(n)
        t_stack = np.stack([tables[m] for m in meanings])
        labels: dict[SemanticSkeleton, Relation] = {}
        for (noun_rel, pm, qm, verb_rel, neg_p, neg_h), members in groups.items():
            cr = _restrictor_counts(noun_rel, pm, qm, n)
            cs = _scope_counts(verb_rel, neg_p, neg_h, n)
            n_universe = int(cr.sum()) * int(cs.sum())
            if n_universe == 0:
                raise InfeasibleConstraintsError(
                    f"no admissible world at domain size {n}"
                )
            n_x = np.einsum("ab,cd,qac->q", cr, cs, t_stack, optimize=True)
            n_y = np.einsum("ab,cd,qbd->q", cr, cs, t_stack, optimize=True)
            n_xy = np.einsum("ab,cd,qac,rbd->qr", cr, cs, t_stack, t_stack, optimize=True)
            for sk in members:
                i = sem_index[sk.quantifier_premise]
                j = sem_index[sk.quantifier_hypothesis]
                labels[sk] = classify_counts(
                    int(n_x[i]), int(n_y[j]), int(n_xy[i, j]), n_universe
                )
        per_size.append(labels)

    first = per_size[0]
    unstable = [
        sk.key()
        for sk in skeletons
        if any(labels[sk] != first[sk] for labels in per_size[1:])
    ]
    if unstable:
        raise TableInstabilityError(unstable)
    table = RelationTable(
        entries=first, domain_sizes=sizes, inventory_fingerprint=fingerprint
    )
    if use_cache:
        _TABLE_CACHE[cache_key] = table
    return table


def label_pair(pair: SentencePair, block: Block, table: RelationTable) -> Relation:
    """O(1) gold label via the memoized table."""
    return table.lookup(extract_skeleton(pair, block))


def validate_table(
    table: RelationTable,
    inventory: ClosedClassInventory = DEFAULT_INVENTORY,
) -> list[str]:
    """Recompute every entry with the oracle; return mismatching keys."""
    fresh = build_table(inventory, table.domain_sizes)
    problems = []
    for sk, rel in sorted(fresh.entries.items(), key=lambda kv: kv[0].key()):
        got = table.entries.get(sk)
        if got != rel:
            problems.append(sk.key())
    for sk in table.entries:
        if sk not in fresh.entries:
            problems.append(sk.key())
    return problems


# ---------------------------------------------------------------------------
# Monotonicity projection
# ---------------------------------------------------------------------------

_EQ, _LEQ, _GEQ, _IND = "eq", "leq", "geq", "ind"
_FROM_CHAIN = {REL_SAME: _EQ, REL_BELOW: _LEQ, REL_ABOVE: _GEQ}


def _compose(a: str, b: str) -> str:
    if a == _EQ:
        return b
    if b == _EQ:
        return a
    return a if a == b else _IND


def _flip(a: str) -> str:
    return {_LEQ: _GEQ, _GEQ: _LEQ}.get(a, a)


def project_relation(
    pair: SentencePair,
    block: Block,
    inventory: ClosedClassInventory = DEFAULT_INVENTORY,
) -> Relation | None:
    """Fast-path label through quantifier monotonicity, or None.

    Applies only when both sentences share quantifier and negation
    status.  Lexical containments at the restrictor and scope positions
    are projected through the quantifier's monotonicity signature
    (negation flips the scope direction) and composed; indeterminate
    compositions return None.  Whenever a relation is returned it agrees
    with the world-counting label.
    """
    p, h = pair.premise, pair.hypothesis
    if p.quantifier != h.quantifier or p.negation != h.negation:
        return None
    sk = extract_skeleton(pair, block)

    restrictor = _FROM_CHAIN[sk.noun_rel]
    for match in (sk.premod_match, sk.postmod_match):
        if match in (MATCH_BOTH_ABSENT, MATCH_SAME):
            continue
        if match == MATCH_DIFFERENT:
            restrictor = _IND
        elif match == MATCH_PREMISE_ONLY:
            restrictor = _LEQ if restrictor in (_EQ, _LEQ) else _IND
        elif match == MATCH_HYPOTHESIS_ONLY:
            restrictor = _GEQ if restrictor in (_EQ, _GEQ) else _IND

    scope = _FROM_CHAIN[sk.verb_rel]
    meaning = inventory.quantifier_semantics[p.quantifier]
    restr_mono, scope_mono = QUANTIFIER_MONOTONICITY[meaning]
    if p.negation:
        scope_mono = "down" if scope_mono == "up" else "up"

    projected_restr = restrictor if restr_mono == "up" else _flip(restrictor)
    projected_scope = scope if scope_mono == "up" else _flip(scope)
    joined = _compose(projected_restr, projected_scope)
    if joined == _IND:
        return None
    if joined == _EQ:
        return Relation.EQUIVALENCE
    # The world space realizes strictness whenever the two sides differ
    # structurally, so a decisive containment is a strict entailment.
    return Relation.FORWARD if joined == _LEQ else Relation.REVERSE
