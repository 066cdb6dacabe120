"""Conic-cubic arrangement engine: moves, canonical forms, closure."""

import json

import pytest

from realcubic.arrangements import (
    Arrangement,
    arrangement_from_dict,
    canonical_form,
    load_extremal,
    move_a_results,
    move_b_results,
    polotovsky_closure,
    validate_arrangement,
)
from realcubic.errors import InvalidArrangement


@pytest.fixture(scope="module")
def extremal():
    return load_extremal()


@pytest.fixture(scope="module")
def closure(extremal):
    return polotovsky_closure(extremal)


class TestData:
    def test_seven_extremal(self, extremal):
        assert len(extremal) == 7

    def test_all_extremal_carry_six_crossings(self, extremal):
        assert all(a.crossings() == 6 for a in extremal)

    def test_extremal_are_distinct(self, extremal):
        keys = {canonical_form(a) for a in extremal}
        assert len(keys) == 7

    def test_extremal_not_reachable_from_each_other(self, extremal):
        reachable = set()
        for a in extremal:
            for child in move_b_results(a) + move_a_results(a):
                reachable.add(canonical_form(child))
        assert reachable.isdisjoint({canonical_form(a) for a in extremal})


class TestClosure:
    def test_closure_has_25_classes(self, closure):
        assert len(closure) == 25

    def test_even_and_bounded_crossings(self, closure):
        for arr in closure.values():
            assert arr.crossings() <= 6
            assert arr.crossings_with("J") % 2 == 0
            assert arr.crossings_with("O") % 2 == 0

    def test_level_censuses(self, closure):
        by_level = {}
        for arr in closure.values():
            by_level.setdefault(arr.crossings(), []).append(arr)
        assert {k: len(v) for k, v in by_level.items()} == {
            6: 10, 4: 5, 2: 4, 0: 6}

    def test_crossing_free_level(self, closure):
        flat = [a for a in closure.values() if a.crossings() == 0]
        pair_tags = sorted(a.pair_tag for a in flat if a.pair_tag)
        assert pair_tags == ["conic_in_cubic", "cubic_in_conic", "separate"]
        shapes = sorted((a.has_cubic_oval, a.has_conic)
                        for a in flat if not a.pair_tag)
        assert shapes == [(False, False), (False, True), (True, False)]

    def test_wall_label_shape_counts(self, closure):
        """Counts per crossing split agree with the wall-count table rows."""
        shapes = {}
        for arr in closure.values():
            if not arr.has_conic:
                continue
            key = (arr.crossings_with("J"), arr.crossings_with("O"),
                   arr.has_cubic_oval)
            shapes[key] = shapes.get(key, 0) + 1
        assert shapes[(6, 0, False)] == 3
        assert shapes[(6, 0, True)] == 3
        assert shapes[(4, 2, True)] == 1
        assert shapes[(2, 4, True)] == 2
        assert shapes[(0, 6, True)] == 1
        assert shapes[(4, 0, True)] == 2
        assert shapes[(2, 0, True)] == 2
        assert shapes[(0, 0, True)] == 3

    def test_closure_idempotent(self, closure):
        again = polotovsky_closure(list(closure.values()))
        assert set(again) == set(closure)


class TestMoves:
    def test_pair_removal_drops_two_crossings(self, extremal):
        for arr in extremal:
            for child in move_b_results(arr):
                assert child.crossings() == arr.crossings() - 2

    def test_two_crossing_lens_resolves_to_crossing_free(self):
        lens = Arrangement(
            has_conic=True, has_cubic_oval=True,
            conic_word=(("O", 1), ("O", 2)),
            cubic_oval_word=(1, 2))
        results = move_b_results(lens)
        assert results and all(r.crossings() == 0 for r in results)
        assert {r.pair_tag for r in results} == {
            "separate", "cubic_in_conic", "conic_in_cubic"}

    def test_erase_requires_crossing_free_oval(self):
        lens = Arrangement(
            has_conic=True, has_cubic_oval=True,
            conic_word=(("O", 1), ("O", 2)),
            cubic_oval_word=(1, 2))
        assert move_a_results(lens) == []

    def test_erase_is_single_shot_per_oval(self):
        both_free = Arrangement(
            has_conic=True, has_cubic_oval=True, pair_tag="separate")
        results = move_a_results(both_free)
        assert len(results) == 2
        assert {((r.has_conic, r.has_cubic_oval)) for r in results} == {
            (False, True), (True, False)}

    def test_interior_pair_not_consecutive_on_conic(self):
        # the two pseudoline crossings sit apart on the conic, so the
        # pair cannot cancel even though they are adjacent along J
        arr = Arrangement(
            has_conic=True, has_cubic_oval=True,
            conic_word=(("O", 1), ("O", 2), ("J", 3),
                        ("O", 4), ("O", 5), ("J", 6)),
            pseudoline_word=(3, 6),
            cubic_oval_word=(1, 2, 4, 5))
        removed = {frozenset(
            {i for _, i in arr.conic_word} - {i for _, i in c.conic_word})
            for c in move_b_results(arr)}
        assert frozenset({3, 6}) not in removed
        assert removed == {frozenset({1, 2}), frozenset({4, 5})}


class TestCanonicalForm:
    def test_rotation_invariance(self):
        base = Arrangement(
            has_conic=True, has_cubic_oval=False,
            conic_word=(("J", 1), ("J", 2), ("J", 3), ("J", 4)),
            pseudoline_word=(1, 2, 3, 4))
        rotated = Arrangement(
            has_conic=True, has_cubic_oval=False,
            conic_word=(("J", 3), ("J", 4), ("J", 1), ("J", 2)),
            pseudoline_word=(2, 3, 4, 1))
        assert canonical_form(base) == canonical_form(rotated)

    def test_relabelling_invariance(self):
        a = Arrangement(
            has_conic=True, has_cubic_oval=False,
            conic_word=(("J", 7), ("J", 9)), pseudoline_word=(9, 7))
        b = Arrangement(
            has_conic=True, has_cubic_oval=False,
            conic_word=(("J", 1), ("J", 2)), pseudoline_word=(1, 2))
        assert canonical_form(a) == canonical_form(b)

    def test_six_crossing_diagrams_distinct(self):
        words = [(1, 2, 3, 4, 5, 6), (1, 2, 3, 6, 5, 4), (1, 2, 5, 6, 3, 4)]
        keys = set()
        for w in words:
            arr = Arrangement(
                has_conic=True, has_cubic_oval=False,
                conic_word=tuple(("J", i) for i in range(1, 7)),
                pseudoline_word=w)
            keys.add(canonical_form(arr))
        assert len(keys) == 3


class TestValidation:
    def test_odd_crossings_rejected(self):
        arr = Arrangement(
            has_conic=True, has_cubic_oval=True,
            conic_word=(("O", 1),), cubic_oval_word=(1,))
        with pytest.raises(InvalidArrangement):
            validate_arrangement(arr)

    def test_mismatched_words_rejected(self):
        arr = Arrangement(
            has_conic=True, has_cubic_oval=False,
            conic_word=(("J", 1), ("J", 2)), pseudoline_word=(1, 3))
        with pytest.raises(InvalidArrangement):
            validate_arrangement(arr)

    def test_crossings_without_conic_rejected(self):
        arr = Arrangement(
            has_conic=False, has_cubic_oval=False,
            conic_word=(("J", 1), ("J", 2)), pseudoline_word=(1, 2))
        with pytest.raises(InvalidArrangement):
            validate_arrangement(arr)

    def test_missing_tag_rejected(self):
        arr = Arrangement(
            has_conic=True, has_cubic_oval=True,
            conic_word=(("J", 1), ("J", 2)), pseudoline_word=(1, 2))
        with pytest.raises(InvalidArrangement):
            validate_arrangement(arr)

    def test_more_than_six_crossings_rejected(self):
        arr = Arrangement(
            has_conic=True, has_cubic_oval=False,
            conic_word=tuple(("J", i) for i in range(1, 9)),
            pseudoline_word=tuple(range(1, 9)))
        with pytest.raises(InvalidArrangement):
            validate_arrangement(arr)

    def test_malformed_record_rejected(self):
        with pytest.raises(InvalidArrangement):
            arrangement_from_dict({"components": {}})

    def test_round_trip_through_dict(self, extremal):
        for arr in extremal:
            again = arrangement_from_dict(
                json.loads(json.dumps(arr.as_dict())))
            assert canonical_form(again) == canonical_form(arr)
