from fractions import Fraction
from itertools import product

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from conftest import load_spec, sub
from substrata.occurrence import (ALL, GeometricSet, LanguageIndex, Structured, affine,
                                  certified_prefix_length, evaluate, normalize, occurrence_brute,
                                  occurrence_set, parse_occurrence_set, union)
from substrata.sequences import SpecError, make_spec


def test_run_bounded_by_neighbours(ex3x):
    s = occurrence_set(ex3x, "2", "1", "2")
    # "22" is a factor, so n = 0 belongs to the set
    assert s == Structured(frozenset({0}), (GeometricSet(3, 0, 3),))
    assert s.text() == "{0} U {3*3^(1*n)+0 : n>=0}"


def test_run_against_certified_prefix(ex3x):
    s = occurrence_set(ex3x, "2", "1", "2")
    n_max = 3 ** 7
    need = certified_prefix_length(ex3x, n_max + 2)
    assert evaluate(s, n_max) == occurrence_brute(ex3x, "2", "1", "2", n_max, prefix_len=need)
    with pytest.raises(ValueError):
        occurrence_brute(ex3x, "2", "1", "2", n_max, prefix_len=need - 1)


def test_thue_morse_examples(tm):
    assert occurrence_set(tm, "0", "1", "0") == Structured(frozenset({0, 1, 2}))
    assert occurrence_set(tm, "", "0", "") == Structured(frozenset({0, 1, 2}))
    assert evaluate(occurrence_set(tm, "", "01", ""), 10) == {0, 1, 2}


def test_constant_sequence_is_all():
    assert occurrence_set(load_spec("zero2.sub"), "0", "0", "0") is ALL


def test_ex3y_progression(ex3y):
    s = occurrence_set(ex3y, "2", "1", "2")
    assert evaluate(s, 4 ** 5) == occurrence_brute(ex3y, "2", "1", "2", 4 ** 5)
    assert not s.is_finite


def test_rejects_bad_input(tm):
    with pytest.raises(ValueError):
        occurrence_set(tm, "0", "", "0")
    with pytest.raises(SpecError):
        occurrence_set(make_spec(sub({"0": "012", "1": "12", "2": "22"}), "0"), "", "1", "")


def exhaustive(spec, n_max=100):
    letters = sorted({a for a in spec.prefix(200)})
    short = [tuple(p) for n in range(3) for p in product(letters, repeat=n)]
    index = LanguageIndex(spec, 2 * 2 + n_max * 2 + 2)
    checked = 0
    for u in short:
        if not u:
            continue
        for v in short:
            for w in short:
                s = occurrence_set(spec, v, u, w)
                brute = {n for n in range(n_max + 1) if v + u * n + w in index}
                assert evaluate(s, n_max) == brute, (v, u, w, s.text())
                checked += 1
    return checked


@pytest.mark.parametrize("name", ["ex3x.sub", "ex3y.sub", "tm.sub"])
def test_exhaustive_short_words(name):
    assert exhaustive(load_spec(name)) > 200


def brute_from_prefix(spec, v, u, w, n_max, length):
    text = "".join(spec.prefix(length))
    return {n for n in range(n_max + 1) if "".join(v + u * n + w) in text}


images_st = st.lists(st.lists(st.sampled_from("012"), min_size=3, max_size=3), min_size=3, max_size=3)
word_st = st.lists(st.sampled_from("012"), max_size=3).map(tuple)


@settings(max_examples=80, deadline=None)
@given(images_st, word_st, word_st.filter(bool), word_st)
def test_random_against_independent_prefix(images, v, u, w):
    rules = {a: "".join(img) for a, img in zip("012", images)}
    rules["0"] = "0" + rules["0"][1:]
    try:
        spec = make_spec(sub(rules), "0")
    except ValueError:
        assume(False)
    s = occurrence_set(spec, v, u, w)
    length = certified_prefix_length(spec, len(v) + 30 * len(u) + len(w))
    assume(length <= 300_000)
    assert evaluate(s, 30) == brute_from_prefix(spec, v, u, w, 30, length)
    if s is not ALL:
        for g in s.progressions:
            assert (g.a + g.b).denominator == 1
            assert ((g.ratio - 1) * g.a).denominator == 1


def test_geometric_set_validation():
    with pytest.raises(ValueError):
        GeometricSet(Fraction(1, 2), 0, 3)
    with pytest.raises(ValueError):
        GeometricSet(1, 0, 1)
    with pytest.raises(ValueError):
        GeometricSet(-1, 5, 2)
    with pytest.raises(ValueError):
        GeometricSet(1, -3, 2)
    g = GeometricSet(Fraction(1, 2), Fraction(-1, 2), 3)
    assert g.elements(40) == [0, 1, 4, 13, 40]


@given(st.integers(1, 6), st.integers(-3, 6), st.sampled_from([2, 3, 4]), st.integers(1, 2),
       st.integers(0, 5000))
def test_contains_agrees_with_elements(a, b, base, m, value):
    assume(a + b >= 0)
    g = GeometricSet(a, b, base, m)
    assert g.contains(value) == (value in g.elements(5000))


def test_normalize_pulls_in_previous_term():
    s = normalize({1}, [GeometricSet(3, 0, 3)])
    assert s == Structured(frozenset(), (GeometricSet(1, 0, 3),))
    assert normalize({2}, [GeometricSet(0, 7, 3)]).finite_part == {2, 7}


def test_union_and_affine():
    s = normalize({5}, [GeometricSet(2, 0, 2)])
    assert union(s, ALL) is ALL
    assert evaluate(affine(s, 3, 1), 100) == {3 * n + 1 for n in evaluate(s, 33)}
    assert affine(ALL, 1, 0) is ALL
    with pytest.raises(ValueError):
        affine(ALL, 2, 0)


@given(st.sets(st.integers(0, 50), max_size=4),
       st.lists(st.tuples(st.integers(1, 5), st.integers(0, 5), st.sampled_from([2, 3])), max_size=2))
def test_text_round_trip(finite, progs):
    s = normalize(finite, [GeometricSet(a, b, k) for a, b, k in progs])
    assert parse_occurrence_set(s.text()) == s
    assert parse_occurrence_set("ALL") is ALL


def test_text_round_trip_fraction():
    s = normalize((), [GeometricSet(Fraction(1, 2), Fraction(-1, 2), 3)])
    assert s.text() == "{1/2*3^(1*n)-1/2 : n>=0}"
    assert parse_occurrence_set(s.text()) == s
