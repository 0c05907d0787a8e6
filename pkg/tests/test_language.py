import pytest
from hypothesis import given
from hypothesis import strategies as st

from sysnli.errors import ConfigError, ParseError, UnknownSymbolError
from sysnli.language import (
    DEFAULT_INVENTORY,
    Block,
    ClosedClassInventory,
    Lexicon,
    Sentence,
    SentencePair,
    build_block,
    parse,
    readable_aliases,
    render,
    single_closed_class_edits,
)

BLOCK = build_block(0, "training")
LEXICON = Lexicon(DEFAULT_INVENTORY, [BLOCK])


def make_sentence(**kwargs):
    defaults = dict(
        quantifier="all",
        premodifier=None,
        noun=BLOCK.nouns[0],
        postmodifier=None,
        negation=False,
        verb=BLOCK.verbs[0],
    )
    defaults.update(kwargs)
    return Sentence(**defaults)


def test_build_block_names_and_order():
    assert BLOCK.nouns == ("n0_0", "n0_1", "n0_2", "n0_3", "n0_4", "n0_5")
    assert BLOCK.verbs[0] == "v0_0"


def test_blocks_have_disjoint_symbols():
    other = build_block(1, "jabberwocky")
    assert not set(BLOCK.open_symbols()) & set(other.open_symbols())


def test_readable_aliases_cover_block_symbols():
    aliases = readable_aliases([BLOCK, build_block(1, "training")])
    assert aliases[BLOCK.nouns[0]] == "dachshunds"
    assert aliases[BLOCK.nouns[1]] == "dogs"
    assert len(set(aliases.values())) == len(aliases)


def test_render_minimal_sentence():
    s = make_sentence()
    assert render(s) == ["all", "n0_0", "v0_0"]


def test_render_full_sentence_splits_multiword_symbols():
    s = make_sentence(premodifier="brown", postmodifier="that-bark", negation=True)
    assert render(s) == ["all", "brown", "n0_0", "that", "bark", "don't", "v0_0"]


def test_render_hyphenated_quantifier():
    s = make_sentence(quantifier="not-all")
    assert render(s) == ["not", "all", "n0_0", "v0_0"]


def test_parse_negated_sentence():
    s = parse(["some", "n0_0", "don't", "v0_0"], DEFAULT_INVENTORY, LEXICON)
    assert s == make_sentence(quantifier="some", negation=True)


def test_parse_minimal_sentence():
    s = parse(["all", "n0_0", "v0_0"], DEFAULT_INVENTORY, LEXICON)
    assert s == make_sentence()


def test_parse_rejects_wrong_order():
    with pytest.raises(ParseError):
        parse(["v0_0", "all"], DEFAULT_INVENTORY, LEXICON)


def test_parse_rejects_unknown_noun():
    with pytest.raises(UnknownSymbolError) as err:
        parse(["all", "zork", "v0_0"], DEFAULT_INVENTORY, LEXICON)
    assert err.value.token == "zork"


def test_parse_rejects_cross_block_pairing():
    other = build_block(1, "training")
    lexicon = Lexicon(DEFAULT_INVENTORY, [BLOCK, other])
    with pytest.raises(ParseError):
        parse(["all", "n0_0", "v1_0"], DEFAULT_INVENTORY, lexicon)


def test_parse_rejects_trailing_tokens():
    with pytest.raises(ParseError):
        parse(["all", "n0_0", "v0_0", "v0_1"], DEFAULT_INVENTORY, LEXICON)


def test_inventory_validation():
    with pytest.raises(ConfigError):
        ClosedClassInventory(quantifiers=())
    with pytest.raises(ConfigError):
        ClosedClassInventory(epsilon="all")
    with pytest.raises(ConfigError):
        ClosedClassInventory(quantifiers=("all", "most"),
                             quantifier_semantics={"all": "all"})


def test_lexicon_rejects_category_overlap():
    # "red" is a premodifier; reusing it as a noun must fail at Lexicon build.
    block = Block(
        id=2, role="training",
        nouns=("red", "x1", "x2", "x3", "x4", "x5"),
        verbs=("y0", "y1", "y2", "y3", "y4", "y5"),
    )
    with pytest.raises(ConfigError):
        Lexicon(DEFAULT_INVENTORY, [block])


sentences = st.builds(
    make_sentence,
    quantifier=st.sampled_from(DEFAULT_INVENTORY.quantifiers),
    premodifier=st.sampled_from((None,) + DEFAULT_INVENTORY.premodifiers),
    noun=st.sampled_from(BLOCK.nouns),
    postmodifier=st.sampled_from((None,) + DEFAULT_INVENTORY.postmodifiers),
    negation=st.booleans(),
    verb=st.sampled_from(BLOCK.verbs),
)


@given(sentence=sentences)
def test_render_parse_round_trip(sentence):
    tokens = render(sentence, DEFAULT_INVENTORY)
    assert parse(tokens, DEFAULT_INVENTORY, LEXICON) == sentence


@given(sentence=sentences)
def test_rendered_length_bounds(sentence):
    tokens = render(sentence, DEFAULT_INVENTORY)
    assert 3 <= len(tokens) <= 8


@given(sentence=sentences, other=sentences)
def test_single_edits_change_exactly_one_slot(sentence, other):
    pair = SentencePair(sentence, other)
    seen = set()
    for new_pair, side, slot, before, after in single_closed_class_edits(pair, DEFAULT_INVENTORY):
        assert before != after
        changed = getattr(new_pair, side)
        untouched = new_pair.hypothesis if side == "premise" else new_pair.premise
        original = getattr(pair, side)
        other_original = pair.hypothesis if side == "premise" else pair.premise
        assert untouched == other_original
        diffs = [
            f for f in ("quantifier", "premodifier", "noun", "postmodifier", "negation", "verb")
            if getattr(changed, f) != getattr(original, f)
        ]
        assert len(diffs) == 1
        assert (new_pair.premise, new_pair.hypothesis) not in seen
        seen.add((new_pair.premise, new_pair.hypothesis))
