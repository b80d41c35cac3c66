import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import fixture_path
from substrata.subfile import (SubDocument, SubParseError, format_document, format_triples,
                               load_document, parse_document, parse_triples)
from substrata.substitution import Substitution
from substrata.words import BiWordTriple


def test_load_fixture():
    doc = load_document(fixture_path("ex3y.sub"))
    assert doc.base == 4 and doc.seed == "0" and doc.coding is None
    assert doc.substitution.rules["0"] == tuple("0121")


def test_multi_character_tokens_and_coding():
    doc = parse_document("alphabet: s t\nrule s -> s t t\nrule t -> t s s\ncoding s -> a\nseed: s\nbase: 3\n")
    assert doc.substitution.rules["s"] == ("s", "t", "t")
    assert doc.coding == {"s": "a", "t": "t"}


@pytest.mark.parametrize("text, line, fragment", [
    ("rule 0 -> 0 1\n", 1, "alphabet must be declared first"),
    ("alphabet: 0 1\nrule 0 -> 0 1\n", 2, "no rule for letter '1'"),
    ("alphabet: 0 1\nrule 0 -> 0 2\nrule 1 -> 1\n", 2, "undeclared letter '2'"),
    ("alphabet: 0\nrule 0 -> 0 0\nrule 0 -> 0 0\n", 3, "duplicate rule"),
    ("alphabet: 0\nrule 0 ->\n", 2, "empty rule image"),
    ("alphabet: 0 0\n", 1, "repeated letter"),
    ("alphabet: 0 1\nrule 0 -> 0 1\nrule 1 -> 1\nbase: 2\n", 4, "not all of length 2"),
    ("alphabet: 0\nrule 0 -> 0 0\nbase: 1\n", 3, "at least 2"),
    ("alphabet: 0\nrule 0 -> 0 0\nbase: two\n", 3, "integer"),
    ("alphabet: 0\nrule 0 -> 0 0\nseed: 1\n", 3, "undeclared letter"),
    ("alphabet: 0\nrule 0 -> 0 0\ncoding 0 -> a b\n", 3, "exactly one token"),
    ("alphabet: 0\n0 -> 0 0\n", 2, "malformed line"),
    ("# only a comment\n", 0, "missing alphabet"),
])
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(SubParseError) as info:
        parse_document(text)
    assert info.value.line == line
    assert fragment in str(info.value)


images = st.lists(st.sampled_from(["a", "b", "c1"]), min_size=1, max_size=4).map(tuple)


@given(images, images, images, st.booleans())
def test_format_parse_round_trip(x, y, z, with_coding):
    phi = Substitution(("a", "b", "c1"), {"a": ("a",) + x, "b": y, "c1": z})
    coding = {"a": "0", "b": "1", "c1": "1"} if with_coding else None
    k = phi.constant_length()
    doc = SubDocument(phi, coding, "a", k if k and k >= 2 else None)
    assert parse_document(format_document(doc)) == doc


def test_triples_round_trip():
    text = "1 |  | 2\n# comment\n | q1 q2 | \n"
    triples = parse_triples(text)
    assert triples == [BiWordTriple(("1",), (), ("2",)), BiWordTriple((), ("q1", "q2"), ())]
    assert parse_triples(format_triples(triples)) == triples


@pytest.mark.parametrize("text", ["", "# none\n", "1 | 2\n", " |  | \n"])
def test_bad_triples(text):
    with pytest.raises(SubParseError):
        parse_triples(text)
