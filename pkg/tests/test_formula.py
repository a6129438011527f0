import pytest
from hypothesis import given, strategies as st

from diagkit.errors import SentenceSyntaxError
from diagkit.formula import (FALSE, TRUE, And, Atom, Iff, Implies, Not, Or,
                             collect_atoms, parse_sentence, to_text)


def test_parse_precedence():
    s = parse_sentence("A -> B & !C | D <-> E")
    # <-> binds loosest, then ->, then |, then &, then !
    assert s == Iff(Implies(Atom("A"), Or(And(Atom("B"), Not(Atom("C"))), Atom("D"))),
                    Atom("E"))


def test_implies_right_associative():
    assert parse_sentence("A -> B -> C") == Implies(Atom("A"),
                                                    Implies(Atom("B"), Atom("C")))


def test_and_left_associative():
    assert parse_sentence("A & B & C") == And(And(Atom("A"), Atom("B")), Atom("C"))


def test_constants_and_parens():
    assert parse_sentence("true") is TRUE
    assert parse_sentence("!false") == Not(FALSE)
    assert parse_sentence("(A | B) & C") == And(Or(Atom("A"), Atom("B")), Atom("C"))


def test_structural_equality_and_hash():
    a = parse_sentence("A & (B -> C)")
    b = parse_sentence("A & (B -> C)")
    assert a == b and hash(a) == hash(b)
    assert a != parse_sentence("A & (B -> D)")
    assert len({a, b}) == 1


@pytest.mark.parametrize("text,col", [
    ("A &", 4),
    ("& A", 1),
    ("A @ B", 3),
    ("(A | B", 7),
    ("A B", 3),
])
def test_syntax_errors_carry_location(text, col):
    with pytest.raises(SentenceSyntaxError) as err:
        parse_sentence(text)
    assert err.value.col == col
    assert err.value.line == 1


def test_collect_atoms():
    assert collect_atoms([parse_sentence("A -> B"), parse_sentence("!C & A")]) \
        == frozenset({"A", "B", "C"})


_atoms = st.sampled_from(["A", "B", "C", "D", "E", "x1", "out_2"])


def _sentences():
    return st.recursive(
        _atoms.map(Atom) | st.sampled_from([TRUE, FALSE]),
        lambda children: st.one_of(
            children.map(Not),
            st.tuples(children, children).map(lambda p: And(*p)),
            st.tuples(children, children).map(lambda p: Or(*p)),
            st.tuples(children, children).map(lambda p: Implies(*p)),
            st.tuples(children, children).map(lambda p: Iff(*p)),
        ),
        max_leaves=25)


@given(_sentences())
def test_print_parse_round_trip(sentence):
    assert parse_sentence(to_text(sentence)) == sentence
