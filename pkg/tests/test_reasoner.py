import random

import pytest

from diagkit.errors import ReasonerBudgetError, ScaleBoundError
from diagkit.formula import FALSE, TRUE, And, Atom, Iff, Implies, Not, Or
from diagkit.model import ComponentSet, EMPTY_SET
from diagkit.reasoner import (SatOracle, TruthTableOracle, check_consistent,
                              check_entailed, encode_dpi)

A, B, C = Atom("A"), Atom("B"), Atom("C")


def test_modus_ponens_contradiction(any_oracle):
    assert any_oracle.check([A, Implies(A, B), Not(B)]) is False


def test_disjunction_consistent(any_oracle):
    assert any_oracle.check([Or(A, B), Not(A)]) is True


def test_dpi1_all_ok_inconsistent(dpi1, any_oracle):
    sentences = encode_dpi(dpi1, ok=dpi1.all_components(), nok=EMPTY_SET)
    assert any_oracle.check(sentences) is False


def test_entailment_examples(any_oracle):
    assert check_entailed([A, Implies(A, B)], B, any_oracle) is True
    assert check_entailed([Or(A, B)], A, any_oracle) is False


def test_entailment_under_fault_assumption(dpi1, any_oracle):
    # With c1 abnormal the observation still pins C to false.
    sentences = encode_dpi(dpi1, ok=EMPTY_SET, nok=ComponentSet.from_indices([0]))
    assert check_entailed(sentences, Not(C), any_oracle) is True


def test_encode_dpi_structure(dpi1):
    full = encode_dpi(dpi1, ok=dpi1.all_components(), nok=EMPTY_SET)
    # 3 implications + 1 observation + 3 ok literals
    assert len(full) == 7
    assert sum(1 for s in full if isinstance(s, Implies)) == 3
    assert Atom("ok_c1") in full and Atom("ok_c3") in full

    bare = encode_dpi(dpi1, ok=EMPTY_SET, nok=EMPTY_SET)
    assert len(bare) == 4

    mixed = encode_dpi(dpi1, ok=ComponentSet.from_indices([0]),
                       nok=ComponentSet.from_indices([1]))
    assert Atom("ok_c1") in mixed
    assert Not(Atom("ok_c2")) in mixed
    assert all(s not in (Atom("ok_c3"), Not(Atom("ok_c3"))) for s in mixed)


def test_encode_rejects_overlapping_assumptions(dpi1):
    with pytest.raises(ValueError):
        encode_dpi(dpi1, ok=ComponentSet.from_indices([0]),
                   nok=ComponentSet.from_indices([0, 1]))


def test_constants(any_oracle):
    assert any_oracle.check([TRUE]) is True
    assert any_oracle.check([FALSE]) is False
    assert any_oracle.check([Iff(A, TRUE), Not(A)]) is False


def _random_sentence(rng, atoms, depth):
    if depth == 0 or rng.random() < 0.3:
        pick = rng.random()
        if pick < 0.05:
            return TRUE
        if pick < 0.1:
            return FALSE
        return Atom(rng.choice(atoms))
    ctor = rng.choice([And, Or, Implies, Iff])
    if rng.random() < 0.3:
        return Not(_random_sentence(rng, atoms, depth - 1))
    return ctor(_random_sentence(rng, atoms, depth - 1),
                _random_sentence(rng, atoms, depth - 1))


def test_sat_checker_agrees_with_truth_table_10k():
    """Randomized agreement suite over formulas of up to 16 atoms."""
    rng = random.Random(90125)
    sat = SatOracle()
    tt = TruthTableOracle()
    atoms = [f"v{i}" for i in range(16)]
    disagreements = 0
    for _ in range(10_000):
        sentences = [_random_sentence(rng, atoms, rng.randint(1, 4))
                     for _ in range(rng.randint(1, 6))]
        if sat.check(sentences) != tt.check(sentences):
            disagreements += 1
    assert disagreements == 0


def test_check_is_monotone():
    rng = random.Random(5150)
    sat = SatOracle()
    atoms = ["p", "q", "r", "s"]
    for _ in range(300):
        base = [_random_sentence(rng, atoms, 2) for _ in range(rng.randint(1, 4))]
        extra = [_random_sentence(rng, atoms, 2) for _ in range(rng.randint(1, 3))]
        if not sat.check(base):
            assert sat.check(base + extra) is False


def test_verdicts_are_cached():
    sat = SatOracle()
    sentences = [A, Implies(A, B)]
    assert sat.check(sentences) is True
    calls, hits = sat.stats.calls, sat.stats.cache_hits
    assert sat.check(list(sentences)) is True
    assert sat.stats.calls == calls + 1
    assert sat.stats.cache_hits == hits + 1


def test_stats_monotone_counters():
    sat = SatOracle()
    before = (sat.stats.calls, sat.stats.cumulative_clause_count)
    sat.check([A])
    sat.check([A, B])
    after = (sat.stats.calls, sat.stats.cumulative_clause_count)
    assert after[0] == before[0] + 2
    assert after[1] > before[1]


def test_clone_is_fresh():
    sat = SatOracle(step_budget=123)
    sat.check([A])
    twin = sat.clone()
    assert twin.step_budget == 123
    assert twin.stats.calls == 0
    tt = TruthTableOracle(max_atoms=7)
    assert tt.clone().max_atoms == 7


def test_budget_error():
    # A two-literal clause without units needs one decision; budget 0 forbids it.
    tight = SatOracle(step_budget=0)
    with pytest.raises(ReasonerBudgetError):
        tight.check([Or(A, B)])


def test_truth_table_scale_bound():
    tt = TruthTableOracle(max_atoms=4)
    with pytest.raises(ScaleBoundError):
        tt.check([Or(Atom("a1"), Or(Atom("a2"), Or(Atom("a3"),
                  Or(Atom("a4"), Atom("a5")))))])


def test_check_consistent_wrapper(sat_oracle):
    assert check_consistent([A, B], sat_oracle) is True
