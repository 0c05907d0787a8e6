#!/usr/bin/env python3
"""Tour of the artificial language: blocks, the template, render/parse."""

from sysnli import DEFAULT_INVENTORY, Lexicon, Sentence, build_block, parse, readable_aliases, render

inv = DEFAULT_INVENTORY
print("closed-class inventory (shared by every block):")
print("  quantifiers:  ", ", ".join(inv.quantifiers))
print("  premodifiers: ", ", ".join(inv.premodifiers))
print("  postmodifiers:", ", ".join(inv.postmodifiers))
print("  negation:     ", inv.negation)

block = build_block(0, "training")
print("\nblock 0 taxonomies (each chain runs specific -> general):")
print("  nouns:", " < ".join(block.nouns))
print("  verbs:", " < ".join(block.verbs))

aliases = readable_aliases([block])
print("\nthe same block with readable aliases:")
print("  nouns:", " < ".join(aliases[n] for n in block.nouns))
print("  verbs:", " < ".join(aliases[v] for v in block.verbs))

print("\nthe six-position template, rendered:")
sentences = [
    Sentence("all", None, block.nouns[0], None, False, block.verbs[0]),
    Sentence("some", None, block.nouns[2], None, True, block.verbs[1]),
    Sentence("all", "brown", block.nouns[1], "that-bark", True, block.verbs[0]),
    Sentence("not-all", "red", block.nouns[3], None, False, block.verbs[4]),
]
lexicon = Lexicon(inv, [block])
for s in sentences:
    tokens = render(s, inv)
    shown = " ".join(aliases.get(t, t) for t in tokens)
    assert parse(tokens, inv, lexicon) == s  # rendering then parsing is the identity
    print(f"  {' '.join(tokens):46}  ~  {shown}")
