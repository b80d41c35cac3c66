import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_spec, sub
from substrata.cobham import (CLUB, SPADE, CoverCertified, CoverConjectured, Dfao, PreconditionError,
                              UnionOfTriples, analyze_common_factors, canonical_triple, common_factors_upto,
                              construct_witnesses, exp_dioph_solutions, intersect_occurrence_sets,
                              multiplicatively_independent, special_points, triple_contained, verify_witness)
from substrata.occurrence import ALL, GeometricSet, evaluate, normalize
from substrata.sequences import factor_set, make_spec
from substrata.words import EMPTY, BiWordTriple, biword_factors, word


def T(v, u, w):
    return BiWordTriple(word(v), word(u), word(w))


@pytest.mark.parametrize("k, l, expected", [(2, 3, True), (4, 8, False), (2, 4, False), (6, 12, True),
                                            (9, 27, False), (12, 18, True), (10, 100, False)])
def test_multiplicative_independence(k, l, expected):
    assert multiplicatively_independent(k, l) is expected
    assert multiplicatively_independent(l, k) is expected


def test_independence_rejects_small_bases():
    with pytest.raises(ValueError):
        multiplicatively_independent(1, 3)


def test_catalan_pair():
    sols = exp_dioph_solutions(1, -1, 1, 3, 2, 60)
    assert set(sols) == {(1, 1), (2, 3)}
    assert not sols.complete
    for n, m in sols:
        assert 3 ** n - 2 ** m == 1


def test_homogeneous_case_is_complete():
    sols = exp_dioph_solutions(4, -9, 0, 3, 2, 10)
    assert list(sols) == [(2, 2)] and sols.complete
    assert list(exp_dioph_solutions(1, 1, 0, 3, 2, 10)) == []


def test_same_sign_completeness():
    sols = exp_dioph_solutions(1, 1, 5, 2, 3, 10)
    assert set(sols) == {(1, 1), (2, 0)} and sols.complete


def test_dioph_errors():
    with pytest.raises(ValueError):
        exp_dioph_solutions(0, 1, 3, 2, 3)
    with pytest.raises(PreconditionError):
        exp_dioph_solutions(1, -1, 1, 4, 8)
    assert len(exp_dioph_solutions(0, 0, 3, 2, 3)) == 0


coef = st.fractions(min_value=-20, max_value=20, max_denominator=3).filter(lambda x: x != 0)


@settings(max_examples=200)
@given(coef, coef, st.integers(-40, 40), st.sampled_from([(2, 3), (3, 2), (2, 5), (6, 4)]))
def test_dioph_matches_box_search(a, b, c, bases):
    k, l = bases
    bound = 9
    sols = exp_dioph_solutions(a, b, c, k, l, bound)
    box = {(n, m) for n in range(bound + 1) for m in range(bound + 1) if a * k ** n + b * l ** m == c}
    assert set(sols) == box


def test_intersection_of_progressions():
    g3 = normalize((), [GeometricSet(3, 0, 3)])
    g4 = normalize((), [GeometricSet(4, 0, 4)])
    both = intersect_occurrence_sets(g3, 3, g4, 4, 60)
    assert evaluate(both.value, 10 ** 40) == set()
    # 3^n - 1 and 2^m: 2 = 3 - 1 and 8 = 9 - 1
    left = normalize((), [GeometricSet(1, -1, 3)])
    right = normalize((), [GeometricSet(1, 0, 2)])
    assert evaluate(intersect_occurrence_sets(left, 3, right, 2, 40).value, 10 ** 9) == {2, 8}


def test_intersection_with_all_and_finite():
    g = normalize({5}, [GeometricSet(1, 0, 3)])
    assert intersect_occurrence_sets(ALL, 2, g, 3).value == g
    fin = normalize({1, 5, 7, 9}, ())
    assert evaluate(intersect_occurrence_sets(fin, 2, g, 3).value, 100) == {1, 5, 9}
    with pytest.raises(PreconditionError):
        intersect_occurrence_sets(g, 2, g, 4)


@given(st.lists(st.tuples(st.integers(1, 4), st.integers(0, 3)), min_size=1, max_size=2),
       st.lists(st.tuples(st.integers(1, 4), st.integers(0, 3)), min_size=1, max_size=2),
       st.sets(st.integers(0, 60), max_size=3))
def test_intersection_matches_values(xs, ys, extra):
    sx = normalize(extra, [GeometricSet(a, b, 2) for a, b in xs])
    sy = normalize((), [GeometricSet(a, b, 3) for a, b in ys])
    got = intersect_occurrence_sets(sx, 2, sy, 3, 40).value
    limit = 10 ** 6
    assert evaluate(got, limit) == evaluate(sx, limit) & evaluate(sy, limit)


def test_canonical_triple():
    assert canonical_triple(T("1", "12", "2")) == T("1", "", "2")
    assert canonical_triple(T("11", "", "")) == T("", "", "1")
    assert canonical_triple(T("ab", "ab", "ab")) == T("", "", "ab")
    assert canonical_triple(T("", "012", "")) == T("", "012", "")


small = st.lists(st.sampled_from("ab"), max_size=2).map(tuple)


@settings(max_examples=200)
@given(small, small, small)
def test_canonical_triple_keeps_language(v, u, w):
    t = BiWordTriple(v, u, w)
    if not (v or u or w):
        return
    c = canonical_triple(t)
    assert biword_factors(c, 10).words == biword_factors(t, 10).words


@settings(max_examples=200)
@given(small, small, small, small, small, small)
def test_triple_containment_matches_languages(v1, u1, w1, v2, u2, w2):
    a, b = BiWordTriple(v1, u1, w1), BiWordTriple(v2, u2, w2)
    expected = biword_factors(a, 14).words <= biword_factors(b, 14).words
    assert triple_contained(a, b) == expected


def test_ex3_analysis(ex3x, ex3y):
    report = analyze_common_factors(ex3x, ex3y, 20)
    assert set(report.result.triples) == {T("1", "", "2"), T("2", "", "1"), T("", "012111", "")}
    assert report.result.certification == CoverCertified(20)
    assert report.result.language(20) == common_factors_upto(ex3x, ex3y, 20).words
    assert set(report.cyclic_common) == {("1",), ("2",)}
    assert all(s.certificate for s in report.special_sets)


def test_unrelated_pair_is_not_certified(tm, ex3x):
    report = analyze_common_factors(tm, ex3x, 10)
    assert isinstance(report.result.certification, CoverConjectured)
    assert report.result.language(10) == common_factors_upto(tm, ex3x, 10).words


def test_analysis_rejects_dependent_bases():
    with pytest.raises(PreconditionError):
        analyze_common_factors(load_spec("zero2.sub"), load_spec("tm.sub"), 5)


def test_special_points_of_ex3(ex3x):
    tails = {(t.v, t.w) for t in special_points(ex3x)}
    assert (("1",), ("2",)) in tails and (("2",), ("1",)) in tails


def test_dfao_minimization_preserves_output():
    dfao = Dfao(2, "s", {("s", 0): "s", ("s", 1): "t", ("t", 0): "u", ("t", 1): "s",
                         ("u", 0): "u", ("u", 1): "s"},
                {"s": "x", "t": "y", "u": "y"})
    small_one = dfao.minimized()
    # t and u agree on output and on every successor
    assert len(small_one.states()) == 2 < len(dfao.states())
    assert all(dfao.run(n) == small_one.run(n) for n in range(512))
    spec = small_one.to_spec()
    assert "".join(spec.prefix(64)) == "".join(dfao.run(n) for n in range(64))


def test_construct_rejects_dependent_bases():
    with pytest.raises(PreconditionError):
        construct_witnesses([T("", "01", "")], 4, 8)


def test_fillers_stay_out_of_common_factors():
    pair = construct_witnesses([T("1", "0", "1")], 3, 4)
    x_words = factor_set(pair.x_spec, 3).words
    y_words = factor_set(pair.y_spec, 3).words
    assert any(CLUB in w for w in x_words) and not any(CLUB in w for w in y_words)
    assert any(SPADE in w for w in y_words) and not any(SPADE in w for w in x_words)


def random_triples(rng):
    letters = ["a", "b", "c"][:rng.randint(1, 3)]

    def piece(lo, hi):
        return tuple(rng.choice(letters) for _ in range(rng.randint(lo, hi)))

    triples = [BiWordTriple(piece(0, 2), piece(0, 3), piece(0, 2)) for _ in range(rng.randint(1, 3))]
    return [t for t in triples if t.v or t.u or t.w] or [BiWordTriple((), ("a",), ())]


@pytest.mark.parametrize("seed", range(12))
def test_witness_round_trip_random(seed):
    rng = random.Random(seed)
    triples = random_triples(rng)
    k, l = rng.choice([(2, 3), (3, 4), (3, 2), (5, 2)])
    pair = construct_witnesses(triples, k, l)
    assert all(s.match for s in verify_witness(pair.x_spec, pair.y_spec, triples, 10))
    report = analyze_common_factors(pair.x_spec, pair.y_spec, 10)
    expected = UnionOfTriples(tuple(triples), None).language(20)
    assert report.result.language(20) == expected


def test_verify_witness_reports_mismatch(ex3x, ex3y):
    strata = verify_witness(ex3x, ex3y, [T("", "01", "")], 4)
    assert any(not s.match for s in strata)
    bad = next(s for s in strata if not s.match)
    assert bad.status() == "MISMATCH" and (bad.missing or bad.extra)


def test_intersection_progression_with_finite_set():
    g = normalize((), [GeometricSet(3, 0, 3)])
    assert intersect_occurrence_sets(g, 3, normalize({1, 3, 9}, ()), 4).value == normalize({3, 9}, ())
    assert intersect_occurrence_sets(ALL, 4, g, 3).value == g
