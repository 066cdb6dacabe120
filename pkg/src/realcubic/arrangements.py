"""Mutual arrangements of a nonsingular plane cubic and a conic.

The cubic contributes a pseudoline J (always present) and at most one oval O;
the conic contributes at most one oval B.  All crossings are transversal and
lie on B, since the cubic's own components are disjoint.  An arrangement is
recorded by the cyclic crossing words around each curve plus nesting tags for
crossing-free ovals; two arrangements are the same when the words match up to
rotation, reflection, and relabelling.

Two reduction moves generate the non-extremal arrangements from the extremal
ones: erasing a crossing-free oval, and cancelling a pair of crossings that
are consecutive on both curves.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources

from .errors import InvalidArrangement

PSEUDOLINE = "J"
CUBIC_OVAL = "O"

# cubic oval free while the conic still crosses the pseudoline
OVAL_TAGS = ("inside_conic", "outside_conic")
# both ovals present and crossing-free
PAIR_TAGS = ("separate", "cubic_in_conic", "conic_in_cubic")


@dataclass(frozen=True)
class Arrangement:
    """One topological type of the pair (cubic, conic) in the real plane."""

    has_conic: bool
    has_cubic_oval: bool
    conic_word: tuple = ()        # ((species, id), ...) around the conic
    pseudoline_word: tuple = ()   # crossing ids around J
    cubic_oval_word: tuple = ()   # crossing ids around O
    cubic_oval_tag: str = ""      # one of OVAL_TAGS when O is free but B is not
    pair_tag: str = ""            # one of PAIR_TAGS when both ovals are free

    def crossings(self) -> int:
        return len(self.conic_word)

    def crossings_with(self, species: str) -> int:
        return sum(1 for s, _ in self.conic_word if s == species)

    def as_dict(self) -> dict:
        nesting = {}
        if self.cubic_oval_tag:
            nesting["cubic_oval"] = self.cubic_oval_tag
        if self.pair_tag:
            nesting["pair"] = self.pair_tag
        return {
            "components": {
                "pseudoline": True,
                "cubic_oval": self.has_cubic_oval,
                "conic_oval": self.has_conic,
            },
            "cyclic_words": {
                "conic": [f"{s}{i}" for s, i in self.conic_word],
                "pseudoline": list(self.pseudoline_word),
                "cubic_oval": list(self.cubic_oval_word),
            },
            "nesting": nesting,
        }


def arrangement_from_dict(data: dict) -> Arrangement:
    try:
        comp = data["components"]
        words = data["cyclic_words"]
        nesting = data.get("nesting", {})
        conic_word = []
        for token in words["conic"]:
            species, ident = token[0], int(token[1:])
            if species not in (PSEUDOLINE, CUBIC_OVAL):
                raise InvalidArrangement(f"unknown species {species!r}")
            conic_word.append((species, ident))
        arr = Arrangement(
            has_conic=bool(comp["conic_oval"]),
            has_cubic_oval=bool(comp["cubic_oval"]),
            conic_word=tuple(conic_word),
            pseudoline_word=tuple(int(i) for i in words["pseudoline"]),
            cubic_oval_word=tuple(int(i) for i in words["cubic_oval"]),
            cubic_oval_tag=nesting.get("cubic_oval", ""),
            pair_tag=nesting.get("pair", ""),
        )
    except (KeyError, ValueError, TypeError) as exc:
        raise InvalidArrangement(f"malformed arrangement record: {exc}")
    validate_arrangement(arr)
    return arr


def validate_arrangement(arr: Arrangement) -> None:
    """Raise InvalidArrangement unless the record is well formed."""
    if not arr.has_conic and arr.conic_word:
        raise InvalidArrangement("crossings recorded without a conic oval")
    ids = [i for _, i in arr.conic_word]
    if len(ids) != len(set(ids)):
        raise InvalidArrangement("crossing ids repeat on the conic")
    if len(ids) % 2 or len(ids) > 6:
        raise InvalidArrangement("total crossings must be even and at most 6")
    j_ids = {i for s, i in arr.conic_word if s == PSEUDOLINE}
    o_ids = {i for s, i in arr.conic_word if s == CUBIC_OVAL}
    if len(j_ids) % 2 or len(o_ids) % 2:
        raise InvalidArrangement("per-component crossings must be even")
    if set(arr.pseudoline_word) != j_ids or \
            len(arr.pseudoline_word) != len(j_ids):
        raise InvalidArrangement("pseudoline word must match its crossings")
    if set(arr.cubic_oval_word) != o_ids or \
            len(arr.cubic_oval_word) != len(o_ids):
        raise InvalidArrangement("cubic oval word must match its crossings")
    if o_ids and not arr.has_cubic_oval:
        raise InvalidArrangement("oval crossings recorded without the oval")
    oval_free = arr.has_cubic_oval and not o_ids
    conic_engaged = arr.has_conic and bool(j_ids)
    if arr.cubic_oval_tag:
        if arr.cubic_oval_tag not in OVAL_TAGS:
            raise InvalidArrangement(f"unknown tag {arr.cubic_oval_tag!r}")
        if not (oval_free and conic_engaged):
            raise InvalidArrangement(
                "oval tag only applies to a free oval beside a crossed conic")
    elif oval_free and conic_engaged:
        raise InvalidArrangement("free cubic oval needs a position tag")
    both_free = (arr.has_cubic_oval and arr.has_conic
                 and not arr.conic_word)
    if arr.pair_tag:
        if arr.pair_tag not in PAIR_TAGS:
            raise InvalidArrangement(f"unknown tag {arr.pair_tag!r}")
        if not both_free:
            raise InvalidArrangement(
                "pair tag only applies when both ovals are crossing-free")
    elif both_free:
        raise InvalidArrangement("two free ovals need a pair tag")


def _cyclic_variants(word: tuple):
    n = len(word)
    if n == 0:
        yield ()
        return
    for start in range(n):
        for step in (1, -1):
            yield tuple(word[(start + step * k) % n] for k in range(n))


def canonical_form(arr: Arrangement) -> tuple:
    """Hashable normal form, invariant under rotation/reflection/relabelling."""
    best = None
    if not arr.conic_word:
        key = ((), (), ())
        return key + (arr.has_conic, arr.has_cubic_oval,
                      arr.cubic_oval_tag, arr.pair_tag)
    for variant in _cyclic_variants(arr.conic_word):
        relabel = {}
        for _, ident in variant:
            relabel.setdefault(ident, len(relabel) + 1)
        species = tuple(s for s, _ in variant)
        j_word = tuple(relabel[i] for i in arr.pseudoline_word)
        o_word = tuple(relabel[i] for i in arr.cubic_oval_word)
        j_best = min(_cyclic_variants(j_word))
        o_best = min(_cyclic_variants(o_word))
        key = (species, j_best, o_best)
        if best is None or key < best:
            best = key
    return best + (arr.has_conic, arr.has_cubic_oval,
                   arr.cubic_oval_tag, arr.pair_tag)


def _delete_pair(word: tuple, drop: set) -> tuple:
    return tuple(t for t in word if (t[1] if isinstance(t, tuple) else t)
                 not in drop)


def move_b_results(arr: Arrangement) -> list:
    """All arrangements reachable by cancelling one adjacent crossing pair.

    The pair must be consecutive along the conic and along the cubic
    component it lies on; cancelling an oval's last crossings re-places the
    freed oval, so a single cancellation can yield several arrangements.
    """
    out = []
    word = arr.conic_word
    n = len(word)
    seen_pairs = set()
    for k in range(n):
        (s1, i1), (s2, i2) = word[k], word[(k + 1) % n]
        if s1 != s2 or frozenset((i1, i2)) in seen_pairs:
            continue
        partner = (arr.pseudoline_word if s1 == PSEUDOLINE
                   else arr.cubic_oval_word)
        m = len(partner)
        adjacent = any(
            {partner[t], partner[(t + 1) % m]} == {i1, i2}
            for t in range(m))
        if not adjacent:
            continue
        seen_pairs.add(frozenset((i1, i2)))
        drop = {i1, i2}
        new = replace(
            arr,
            conic_word=_delete_pair(word, drop),
            pseudoline_word=_delete_pair(arr.pseudoline_word, drop),
            cubic_oval_word=_delete_pair(arr.cubic_oval_word, drop),
        )
        out.extend(_retag_after_removal(arr, new, s1))
    return out


def _retag_after_removal(old: Arrangement, new: Arrangement,
                         species: str) -> list:
    j_left = new.crossings_with(PSEUDOLINE)
    o_left = new.crossings_with(CUBIC_OVAL)
    if species == CUBIC_OVAL and o_left == 0 and new.has_cubic_oval:
        if j_left > 0:
            # freed oval lands inside or outside the conic disc
            return [replace(new, cubic_oval_tag=tag) for tag in OVAL_TAGS]
        # last crossings of the whole picture: the lens resolves three ways
        return [replace(new, cubic_oval_tag="", pair_tag=tag)
                for tag in PAIR_TAGS]
    if species == PSEUDOLINE and j_left == 0:
        if not new.has_cubic_oval:
            return [new]
        if o_left > 0:
            return [new]
        # conic comes off the pseudoline; the free oval's side is decided
        # by where it already sat, and a conic crossing the pseudoline can
        # never have enclosed the cubic oval's disc
        pair = ("cubic_in_conic" if old.cubic_oval_tag == "inside_conic"
                else "separate")
        return [replace(new, cubic_oval_tag="", pair_tag=pair)]
    return [new]


def move_a_results(arr: Arrangement) -> list:
    """All arrangements reachable by erasing one crossing-free oval."""
    out = []
    if arr.has_conic and not arr.conic_word:
        out.append(replace(arr, has_conic=False, pair_tag=""))
    if arr.has_cubic_oval and not arr.cubic_oval_word:
        out.append(replace(arr, has_cubic_oval=False,
                           cubic_oval_tag="", pair_tag=""))
    return out


def polotovsky_closure(extremal) -> dict:
    """Close the extremal arrangements under both moves.

    Returns canonical form -> representative Arrangement.
    """
    closure = {}
    queue = []
    for arr in extremal:
        validate_arrangement(arr)
        key = canonical_form(arr)
        if key not in closure:
            closure[key] = arr
            queue.append(arr)
    while queue:
        arr = queue.pop()
        for child in move_b_results(arr) + move_a_results(arr):
            key = canonical_form(child)
            if key not in closure:
                closure[key] = child
                queue.append(child)
    return closure


def load_extremal() -> list:
    text = resources.files("realcubic.data").joinpath(
        "extremal_arrangements.json").read_text()
    records = json.loads(text)["arrangements"]
    return [arrangement_from_dict(r) for r in records]
