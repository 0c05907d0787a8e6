"""The seven-relation algebra over set extensions.

Relations are classified from a pair of sets (x, y) inside a finite
universe U.  The same classification is available from the four counts
|x|, |y|, |x ∩ y|, |U|, which is what the vectorized world-counting
oracle uses.
"""

from __future__ import annotations

import enum
from typing import Iterable

from .errors import UniverseViolationError


class Relation(enum.IntEnum):
    """Relation labels with stable wire codes 0..6."""

    EQUIVALENCE = 0
    FORWARD = 1
    REVERSE = 2
    NEGATION = 3
    ALTERNATION = 4
    COVER = 5
    INDEPENDENCE = 6

    @property
    def canonical_name(self) -> str:
        return _NAMES[self]

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self]

    @classmethod
    def from_name(cls, value) -> "Relation":
        """Accept canonical names, wire codes, or digit strings."""
        if isinstance(value, Relation):
            return value
        if isinstance(value, int):
            return cls(value)
        name = str(value).strip().lower()
        if name.isdigit():
            return cls(int(name))
        try:
            return _BY_NAME[name]
        except KeyError:
            raise ValueError(f"not a relation name or code: {value!r}") from None


_NAMES = {
    Relation.EQUIVALENCE: "equivalence",
    Relation.FORWARD: "forward",
    Relation.REVERSE: "reverse",
    Relation.NEGATION: "negation",
    Relation.ALTERNATION: "alternation",
    Relation.COVER: "cover",
    Relation.INDEPENDENCE: "independence",
}
_BY_NAME = {name: rel for rel, name in _NAMES.items()}

_SYMBOLS = {
    Relation.EQUIVALENCE: "≡",
    Relation.FORWARD: "⊏",
    Relation.REVERSE: "⊐",
    Relation.NEGATION: "^",
    Relation.ALTERNATION: "|",
    Relation.COVER: "⌣",
    Relation.INDEPENDENCE: "#",
}

_CONVERSE = {
    Relation.FORWARD: Relation.REVERSE,
    Relation.REVERSE: Relation.FORWARD,
}


def classify(x: Iterable, y: Iterable, universe: Iterable) -> Relation:
    """Classify the relation between extensions x and y inside universe.

    Checks run in a fixed order (equality, strict containments, then the
    disjointness and exhaustiveness tests) so that INDEPENDENCE is the
    unambiguous residue.
    """
    xs, ys, us = frozenset(x), frozenset(y), frozenset(universe)
    if not xs <= us or not ys <= us:
        stray = (xs | ys) - us
        raise UniverseViolationError(f"elements outside universe: {sorted(stray)}")
    return classify_counts(len(xs), len(ys), len(xs & ys), len(us))


def classify_counts(n_x: int, n_y: int, n_overlap: int, n_universe: int) -> Relation:
    """Classify from |x|, |y|, |x ∩ y|, |U|.  Equivalent to ``classify``."""
    if n_overlap == n_x == n_y:
        return Relation.EQUIVALENCE
    if n_overlap == n_x and n_x < n_y:
        return Relation.FORWARD
    if n_overlap == n_y and n_y < n_x:
        return Relation.REVERSE
    exhaustive = (n_x + n_y - n_overlap) == n_universe
    if n_overlap == 0:
        return Relation.NEGATION if exhaustive else Relation.ALTERNATION
    if exhaustive:
        return Relation.COVER
    return Relation.INDEPENDENCE


def converse(r: Relation) -> Relation:
    """Relation of the pair presented in the opposite order.

    Swaps FORWARD and REVERSE; the five symmetric relations map to
    themselves.
    """
    return _CONVERSE.get(r, r)


SYMMETRIC_RELATIONS = frozenset(r for r in Relation if converse(r) == r)
