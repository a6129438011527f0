import pytest

from diagkit.corpus import CorpusSpec, generate_corpus, independent_conflict_family
from diagkit.engines import (ENGINE_IDS, run_brute_force, run_engine,
                             run_greedy_heuristic, run_hs_tree, run_inv_hs_tree,
                             run_ucs_hs_tree)
from diagkit.errors import QueryError, ScaleBoundError, UnknownEngineError
from diagkit.model import (ComponentSet, DiagnosisQuery, FailureRates,
                           diagnosis_probability, is_minimal_diagnosis)
from diagkit.reasoner import SatOracle, TruthTableOracle


def cs(*indices):
    return ComponentSet.from_indices(indices)


ALL = DiagnosisQuery(k="all")
ALL_ANY = DiagnosisQuery(k="all", order="none")
ALL_PROB = DiagnosisQuery(k="all", order="probability")


# ---------------------------------------------------------------------------
# Worked examples

def test_brute_force_examples(dpi1, dpi2, consistent_dpi, sat_oracle):
    assert run_brute_force(dpi1, sat_oracle).diagnoses == (cs(0), cs(1), cs(2))
    assert run_brute_force(dpi2, sat_oracle).diagnoses == (cs(0), cs(1, 2))
    assert run_brute_force(consistent_dpi, sat_oracle).diagnoses == (ComponentSet(),)


def test_hs_tree_examples(dpi1, dpi2, consistent_dpi, sat_oracle):
    assert run_hs_tree(dpi2, ALL, sat_oracle).diagnoses == (cs(0), cs(1, 2))
    first = run_hs_tree(dpi1, DiagnosisQuery(k=1), sat_oracle).diagnoses
    assert first == (cs(0),)  # ascending-index tie-break picks {c1}
    assert run_hs_tree(consistent_dpi, ALL, sat_oracle).diagnoses == (ComponentSet(),)


def test_ucs_examples(dpi2, consistent_dpi, sat_oracle):
    rates = FailureRates((0.1, 0.3, 0.3))
    result = run_ucs_hs_tree(dpi2, ALL_PROB, rates, sat_oracle)
    assert result.diagnoses == (cs(1, 2), cs(0))
    assert result.probabilities == pytest.approx((0.081, 0.049))

    uniform = FailureRates.uniform(3, 0.1)
    assert run_ucs_hs_tree(dpi2, ALL_PROB, uniform, sat_oracle).diagnoses \
        == (cs(0), cs(1, 2))

    assert run_ucs_hs_tree(consistent_dpi, ALL_PROB, FailureRates.uniform(2),
                           sat_oracle).diagnoses == (ComponentSet(),)


def test_inv_hs_tree_examples(dpi1, dpi2, consistent_dpi, sat_oracle):
    assert frozenset(run_inv_hs_tree(dpi2, ALL_ANY, sat_oracle).diagnoses) \
        == {cs(0), cs(1, 2)}
    two = run_inv_hs_tree(dpi1, DiagnosisQuery(k=2, order="none"), sat_oracle).diagnoses
    assert len(two) == 2 and len(set(two)) == 2
    assert all(d in (cs(0), cs(1), cs(2)) for d in two)
    assert run_inv_hs_tree(consistent_dpi, DiagnosisQuery(k=1, order="none"),
                           sat_oracle).diagnoses == (ComponentSet(),)


def test_greedy_examples(dpi2, consistent_dpi, sat_oracle):
    rates = FailureRates.uniform(3, 0.1)
    full = run_greedy_heuristic(dpi2, ALL_ANY, rates, sat_oracle, seed=3, restarts=16)
    assert frozenset(full.diagnoses) == {cs(0), cs(1, 2)}
    assert run_greedy_heuristic(consistent_dpi, ALL_ANY, FailureRates.uniform(2),
                                sat_oracle, seed=0).diagnoses == (ComponentSet(),)


def test_greedy_single_restart_is_incomplete_somewhere(dpi2, sat_oracle):
    rates = FailureRates.uniform(3, 0.1)
    outcomes = set()
    for seed in range(12):
        result = run_greedy_heuristic(dpi2, ALL_ANY, rates, sat_oracle,
                                      seed=seed, restarts=1)
        assert len(result.diagnoses) == 1
        outcomes.add(result.diagnoses[0])
    # Both minimal diagnoses are reachable, so some seed must miss one.
    assert outcomes == {cs(0), cs(1, 2)}


# ---------------------------------------------------------------------------
# Oracle equivalence and output soundness on a random corpus

def test_complete_engines_match_brute_force():
    oracle = SatOracle()
    corpus = generate_corpus(CorpusSpec(count=25, n_components=7,
                                        clause_budget=11, seed=97), oracle)
    for dpi in corpus:
        expected = frozenset(run_brute_force(dpi, oracle).diagnoses)
        assert frozenset(run_hs_tree(dpi, ALL, oracle).diagnoses) == expected
        assert frozenset(run_ucs_hs_tree(dpi, ALL_PROB, dpi.rates,
                                         oracle).diagnoses) == expected
        assert frozenset(run_inv_hs_tree(dpi, ALL_ANY, oracle).diagnoses) == expected


def test_every_output_is_a_minimal_diagnosis():
    oracle = SatOracle()
    corpus = generate_corpus(CorpusSpec(count=10, n_components=6,
                                        clause_budget=10, seed=13), oracle)
    for dpi in corpus:
        for engine in ENGINE_IDS:
            result = run_engine(engine, dpi, DiagnosisQuery(k="all", order="none"),
                                oracle, seed=1)
            assert len(set(result.diagnoses)) == len(result.diagnoses)
            for diag in result.diagnoses:
                assert is_minimal_diagnosis(dpi, diag, oracle)


def test_emission_orders():
    oracle = SatOracle()
    corpus = generate_corpus(CorpusSpec(count=15, n_components=7,
                                        clause_budget=11, seed=3), oracle)
    for dpi in corpus:
        sizes = [len(d) for d in run_hs_tree(dpi, ALL, oracle).diagnoses]
        assert sizes == sorted(sizes)
        result = run_ucs_hs_tree(dpi, ALL_PROB, dpi.rates, oracle)
        probs = [diagnosis_probability(d, dpi.rates) for d in result.diagnoses]
        assert all(a >= b for a, b in zip(probs, probs[1:]))


def test_k_truncation(dpi1, sat_oracle):
    result = run_hs_tree(dpi1, DiagnosisQuery(k=2), sat_oracle)
    assert result.diagnoses == (cs(0), cs(1))
    assert all(run_engine(e, dpi1, DiagnosisQuery(k=2, order="none"), sat_oracle,
                          rates=FailureRates.uniform(3), seed=0,
                          restarts=16).diagnoses.__len__() == 2
               for e in ENGINE_IDS if e != "brute_force")


def test_min_cardinality_property_query(dpi2, sat_oracle):
    # dpi2 has one cardinality-1 diagnosis; the level is exhausted, then stop.
    result = run_hs_tree(dpi2, DiagnosisQuery(k="all", property_="min_cardinality"),
                         sat_oracle)
    assert result.diagnoses == (cs(0),)


def test_min_cardinality_finds_full_level(sat_oracle):
    fam = independent_conflict_family(3)
    result = run_hs_tree(fam, DiagnosisQuery(k="all", property_="min_cardinality"),
                         sat_oracle)
    assert len(result.diagnoses) == 8
    assert {len(d) for d in result.diagnoses} == {3}


# ---------------------------------------------------------------------------
# Space proxy on the independent-conflict family

def test_space_separation_family():
    for m in (4, 6, 8):
        fam = independent_conflict_family(m)
        exhaustive = run_hs_tree(fam, ALL, SatOracle())
        assert len(exhaustive.diagnoses) == 2 ** m
        assert exhaustive.stats.peak_live_nodes >= 2 ** m
        bounded = run_inv_hs_tree(fam, DiagnosisQuery(k=1, order="none"), SatOracle())
        assert bounded.stats.peak_live_nodes <= 4 * fam.n


# ---------------------------------------------------------------------------
# Black-box substitutability

def test_oracle_substitution_changes_nothing():
    corpus = generate_corpus(CorpusSpec(count=8, n_components=5,
                                        clause_budget=9, seed=77))
    for dpi in corpus:
        for engine in ENGINE_IDS:
            a = run_engine(engine, dpi, DiagnosisQuery(k="all", order="none"),
                           SatOracle(), seed=5)
            b = run_engine(engine, dpi, DiagnosisQuery(k="all", order="none"),
                           TruthTableOracle(), seed=5)
            assert a.diagnoses == b.diagnoses, engine


# ---------------------------------------------------------------------------
# Stats, validation, dispatch

def test_stats_are_populated(dpi2, sat_oracle):
    result = run_hs_tree(dpi2, ALL, sat_oracle)
    assert result.stats.peak_live_nodes >= 1
    assert result.stats.oracle_calls > 0
    assert result.stats.nodes_expanded >= 1
    assert result.stats.wall_steps >= 1


def test_query_validation(dpi2, sat_oracle):
    rates = FailureRates.uniform(3)
    with pytest.raises(QueryError):
        run_hs_tree(dpi2, DiagnosisQuery(order="probability"), sat_oracle)
    with pytest.raises(QueryError):
        run_ucs_hs_tree(dpi2, DiagnosisQuery(property_="min_cardinality",
                                             order="cardinality"), rates, sat_oracle)
    with pytest.raises(QueryError):
        run_inv_hs_tree(dpi2, DiagnosisQuery(property_="min_cardinality",
                                             order="none"), sat_oracle)
    with pytest.raises(QueryError):
        run_ucs_hs_tree(dpi2, ALL_PROB, None, sat_oracle)


def test_brute_force_bound(sat_oracle):
    fam = independent_conflict_family(11)  # 22 components
    with pytest.raises(ScaleBoundError):
        run_brute_force(fam, sat_oracle)


def test_unknown_engine(dpi2, sat_oracle):
    with pytest.raises(UnknownEngineError):
        run_engine("quantum", dpi2, ALL, sat_oracle)


def test_mutants_are_defective(dpi2, sat_oracle):
    healthy = run_hs_tree(dpi2, ALL, sat_oracle).diagnoses
    padded = run_engine("mutant_unsound", dpi2, ALL, sat_oracle).diagnoses
    assert any(d not in healthy for d in padded)
    assert run_engine("mutant_reversed", dpi2, ALL, sat_oracle).diagnoses \
        == tuple(reversed(healthy))
    assert run_engine("mutant_truncated", dpi2, ALL, sat_oracle).diagnoses \
        == healthy[:-1]
