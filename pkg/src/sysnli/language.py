"""The artificial language: closed-class inventory, blocks, sentences.

Sentences follow a six-position template:

    1 quantifier   (closed, obligatory)
    2 premodifier  (closed, optional)
    3 noun         (open, obligatory)
    4 postmodifier (closed, optional)
    5 negation     (closed, optional)
    6 verb         (open, obligatory)

Open-class words live in blocks of six nouns and six verbs, each block
forming two strict linear taxonomies.  Closed-class words are shared by
every block.  Symbols may contain hyphens; rendering splits them into
one token per hyphen-separated part (``not-all`` -> ``not all``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterator, Mapping, Sequence

from .errors import ConfigError, ParseError, UnknownSymbolError

TAXONOMY_SIZE = 6

ROLE_TRAINING = "training"
ROLE_JABBERWOCKY = "jabberwocky"

#: Supported quantifier meanings, keyed by the names used in
#: ``ClosedClassInventory.quantifier_semantics``.
QUANTIFIER_MEANINGS = ("all", "some", "no", "notall")

DEFAULT_QUANTIFIERS = ("all", "some", "no", "not-all")
DEFAULT_QUANTIFIER_SEMANTICS = {
    "all": "all",
    "some": "some",
    "no": "no",
    "not-all": "notall",
}
DEFAULT_PREMODIFIERS = ("red", "brown", "green")
DEFAULT_POSTMODIFIERS = ("that-bark", "that-sing", "that-swim")
DEFAULT_NEGATION = "don't"


@dataclass(frozen=True)
class ClosedClassInventory:
    """Closed-class word lists, fixed across all blocks and conditions.

    ``epsilon`` is the designated filler naming the empty string in
    perturbation descriptors; it is never a lexical symbol.  ``negation``
    may be None to disable the negation slot entirely.
    """

    quantifiers: tuple[str, ...] = DEFAULT_QUANTIFIERS
    premodifiers: tuple[str, ...] = DEFAULT_PREMODIFIERS
    postmodifiers: tuple[str, ...] = DEFAULT_POSTMODIFIERS
    negation: str | None = DEFAULT_NEGATION
    epsilon: str = "eps"
    quantifier_semantics: Mapping[str, str] = field(
        default_factory=lambda: dict(DEFAULT_QUANTIFIER_SEMANTICS)
    )

    def __post_init__(self):
        if not self.quantifiers:
            raise ConfigError("quantifier inventory must be non-empty")
        symbols = self.closed_symbols()
        if len(symbols) != len(set(symbols)):
            raise ConfigError("closed-class symbols must be distinct")
        if self.epsilon in symbols:
            raise ConfigError("epsilon must differ from every lexical symbol")
        for q in self.quantifiers:
            meaning = self.quantifier_semantics.get(q)
            if meaning not in QUANTIFIER_MEANINGS:
                raise ConfigError(
                    f"quantifier {q!r} needs a meaning in {QUANTIFIER_MEANINGS}"
                )

    def closed_symbols(self) -> tuple[str, ...]:
        out = self.quantifiers + self.premodifiers + self.postmodifiers
        if self.negation is not None:
            out = out + (self.negation,)
        return out

    def to_json(self) -> dict:
        return {
            "quantifiers": list(self.quantifiers),
            "premodifiers": list(self.premodifiers),
            "postmodifiers": list(self.postmodifiers),
            "negation": self.negation,
            "epsilon": self.epsilon,
            "quantifier_semantics": dict(self.quantifier_semantics),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "ClosedClassInventory":
        return cls(
            quantifiers=tuple(data["quantifiers"]),
            premodifiers=tuple(data["premodifiers"]),
            postmodifiers=tuple(data["postmodifiers"]),
            negation=data.get("negation"),
            epsilon=data.get("epsilon", "eps"),
            quantifier_semantics=dict(data["quantifier_semantics"]),
        )


DEFAULT_INVENTORY = ClosedClassInventory()


@dataclass(frozen=True)
class Block:
    """A lexicon unit: six nouns and six verbs in strict linear chains.

    ``nouns[i]`` denotes a strict subset of ``nouns[i+1]`` (likewise for
    verbs).  Symbols never recur across blocks.
    """

    id: int
    role: str
    nouns: tuple[str, ...]
    verbs: tuple[str, ...]

    def __post_init__(self):
        if self.role not in (ROLE_TRAINING, ROLE_JABBERWOCKY):
            raise ConfigError(f"unknown block role: {self.role!r}")
        if len(self.nouns) != TAXONOMY_SIZE or len(self.verbs) != TAXONOMY_SIZE:
            raise ConfigError("blocks need exactly six nouns and six verbs")
        symbols = self.nouns + self.verbs
        if len(set(symbols)) != len(symbols):
            raise ConfigError("block symbols must be distinct")

    def open_symbols(self) -> tuple[str, ...]:
        return self.nouns + self.verbs

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "role": self.role,
            "nouns": list(self.nouns),
            "verbs": list(self.verbs),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Block":
        return cls(
            id=int(data["id"]),
            role=data["role"],
            nouns=tuple(data["nouns"]),
            verbs=tuple(data["verbs"]),
        )


def default_symbol(category: str, block_id: int, position: int) -> str:
    return f"{category}{block_id}_{position}"


def build_block(block_id: int, role: str, namer=default_symbol) -> Block:
    """Construct a block of fresh symbols; chain order is generation order."""
    nouns = tuple(namer("n", block_id, i) for i in range(TAXONOMY_SIZE))
    verbs = tuple(namer("v", block_id, i) for i in range(TAXONOMY_SIZE))
    return Block(id=block_id, role=role, nouns=nouns, verbs=verbs)


@dataclass(frozen=True)
class Sentence:
    """One template instance.  Optional slots hold None when empty."""

    quantifier: str
    premodifier: str | None
    noun: str
    postmodifier: str | None
    negation: bool
    verb: str


@dataclass(frozen=True)
class SentencePair:
    premise: Sentence
    hypothesis: Sentence

    def reversed(self) -> "SentencePair":
        return SentencePair(premise=self.hypothesis, hypothesis=self.premise)


def symbol_tokens(symbol: str) -> list[str]:
    return symbol.split("-")


def render(sentence: Sentence, inventory: ClosedClassInventory = DEFAULT_INVENTORY) -> list[str]:
    """Emit the token sequence: filled slots in template order."""
    tokens = symbol_tokens(sentence.quantifier)
    if sentence.premodifier is not None:
        tokens += symbol_tokens(sentence.premodifier)
    tokens += symbol_tokens(sentence.noun)
    if sentence.postmodifier is not None:
        tokens += symbol_tokens(sentence.postmodifier)
    if sentence.negation:
        if inventory.negation is None:
            raise ConfigError("sentence uses negation but inventory disables it")
        tokens += symbol_tokens(inventory.negation)
    tokens += symbol_tokens(sentence.verb)
    return tokens


class Lexicon:
    """Symbol membership index over an inventory plus a set of blocks."""

    def __init__(self, inventory: ClosedClassInventory, blocks: Sequence[Block]):
        self.inventory = inventory
        self.blocks = list(blocks)
        self.blocks_by_id = {b.id: b for b in self.blocks}
        if len(self.blocks_by_id) != len(self.blocks):
            raise ConfigError("duplicate block ids")
        self._home: dict[str, tuple[str, int]] = {}
        closed = set(inventory.closed_symbols())
        for block in self.blocks:
            for chain, category in ((block.nouns, "noun"), (block.verbs, "verb")):
                for sym in chain:
                    if sym in closed or sym in self._home:
                        raise ConfigError(f"symbol {sym!r} occurs in two categories")
                    self._home[sym] = (category, block.id)

    def block_of(self, symbol: str) -> Block:
        try:
            return self.blocks_by_id[self._home[symbol][1]]
        except KeyError:
            raise UnknownSymbolError(symbol) from None

    def category(self, symbol: str) -> str:
        inv = self.inventory
        if symbol in inv.quantifiers:
            return "quantifier"
        if symbol in inv.premodifiers:
            return "premodifier"
        if symbol in inv.postmodifiers:
            return "postmodifier"
        if symbol == inv.negation:
            return "negation"
        home = self._home.get(symbol)
        if home is None:
            raise UnknownSymbolError(symbol)
        return home[0]

    def nouns(self) -> set[str]:
        return {s for s, (cat, _) in self._home.items() if cat == "noun"}

    def verbs(self) -> set[str]:
        return {s for s, (cat, _) in self._home.items() if cat == "verb"}


def _match_symbol(tokens: Sequence[str], pos: int, candidates: Sequence[str]) -> str | None:
    # Longest token sequence first, so multi-word symbols win over prefixes.
    for sym in sorted(candidates, key=lambda s: -len(symbol_tokens(s))):
        parts = symbol_tokens(sym)
        if list(tokens[pos : pos + len(parts)]) == parts:
            return sym
    return None


def parse(
    tokens: Sequence[str],
    inventory: ClosedClassInventory,
    blocks: Sequence[Block] | Lexicon,
) -> Sentence:
    """Recover the unique Sentence from a rendered token sequence."""
    lexicon = blocks if isinstance(blocks, Lexicon) else Lexicon(inventory, blocks)
    tokens = list(tokens)
    pos = 0

    quantifier = _match_symbol(tokens, pos, inventory.quantifiers)
    if quantifier is None:
        raise ParseError(f"expected a quantifier at position 0: {tokens!r}")
    pos += len(symbol_tokens(quantifier))

    premodifier = _match_symbol(tokens, pos, inventory.premodifiers)
    if premodifier is not None:
        pos += len(symbol_tokens(premodifier))

    if pos >= len(tokens):
        raise ParseError(f"sentence ends before the noun: {tokens!r}")
    noun = tokens[pos]
    if noun not in lexicon.nouns():
        raise UnknownSymbolError(noun, f"expected a noun, got {noun!r}")
    pos += 1

    postmodifier = _match_symbol(tokens, pos, inventory.postmodifiers)
    if postmodifier is not None:
        pos += len(symbol_tokens(postmodifier))

    negation = False
    if inventory.negation is not None and _match_symbol(tokens, pos, [inventory.negation]):
        negation = True
        pos += len(symbol_tokens(inventory.negation))

    if pos >= len(tokens):
        raise ParseError(f"sentence ends before the verb: {tokens!r}")
    verb = tokens[pos]
    if verb not in lexicon.verbs():
        raise UnknownSymbolError(verb, f"expected a verb, got {verb!r}")
    pos += 1

    if pos != len(tokens):
        raise ParseError(f"trailing tokens {tokens[pos:]!r}")
    if lexicon.block_of(noun).id != lexicon.block_of(verb).id:
        raise ParseError(f"noun {noun!r} and verb {verb!r} come from different blocks")
    return Sentence(quantifier, premodifier, noun, postmodifier, negation, verb)


def single_closed_class_edits(
    pair: SentencePair, inventory: ClosedClassInventory
) -> Iterator[tuple[SentencePair, str, str, str, str]]:
    """Yield every single-slot closed-class edit of one side of the pair.

    Substitutions, insertions, and deletions over the quantifier,
    premodifier, postmodifier, and negation slots.  Yields tuples
    ``(new_pair, side, slot, word_before, word_after)`` where the empty
    string is named by ``inventory.epsilon``.  Enumeration order is
    deterministic: premise before hypothesis, slots in template order,
    replacement words in inventory order with epsilon last.
    """
    eps = inventory.epsilon
    for side in ("premise", "hypothesis"):
        sentence = getattr(pair, side)

        def emit(edited: Sentence, slot: str, before: str, after: str):
            if side == "premise":
                new_pair = SentencePair(edited, pair.hypothesis)
            else:
                new_pair = SentencePair(pair.premise, edited)
            return new_pair, side, slot, before, after

        for q in inventory.quantifiers:
            if q != sentence.quantifier:
                yield emit(replace(sentence, quantifier=q), "quantifier", sentence.quantifier, q)
        for slot, words in (("premodifier", inventory.premodifiers),
                            ("postmodifier", inventory.postmodifiers)):
            current = getattr(sentence, slot)
            for w in words:
                if w != current:
                    yield emit(replace(sentence, **{slot: w}), slot, current or eps, w)
            if current is not None:
                yield emit(replace(sentence, **{slot: None}), slot, current, eps)
        if inventory.negation is not None:
            if sentence.negation:
                yield emit(replace(sentence, negation=False), "negation", inventory.negation, eps)
            else:
                yield emit(replace(sentence, negation=True), "negation", eps, inventory.negation)


# Curated English-like chains for demos; each runs specific -> general.
_ALIAS_NOUN_CHAINS = (
    ("dachshunds", "dogs", "canines", "mammals", "animals", "organisms"),
    ("geckos", "lizards", "reptiles", "vertebrates", "creatures", "beings"),
    ("sparrows", "songbirds", "birds", "fliers", "movers", "things"),
)
_ALIAS_VERB_CHAINS = (
    ("waltz", "dance", "move", "act", "behave", "exist"),
    ("whisper", "talk", "vocalize", "communicate", "interact", "do"),
    ("jog", "run", "locomote", "travel", "proceed", "happen"),
)


def readable_aliases(blocks: Sequence[Block]) -> dict[str, str]:
    """Map gensym open-class symbols to English-like words for display.

    Blocks beyond the curated chains get numeric suffixes so aliases stay
    unique.
    """
    aliases: dict[str, str] = {}
    for i, block in enumerate(blocks):
        noun_chain = _ALIAS_NOUN_CHAINS[i % len(_ALIAS_NOUN_CHAINS)]
        verb_chain = _ALIAS_VERB_CHAINS[i % len(_ALIAS_VERB_CHAINS)]
        suffix = "" if i < len(_ALIAS_NOUN_CHAINS) else str(i // len(_ALIAS_NOUN_CHAINS) + 1)
        for sym, word in itertools.chain(
            zip(block.nouns, noun_chain), zip(block.verbs, verb_chain)
        ):
            aliases[sym] = word + suffix
    return aliases
