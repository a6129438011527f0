"""Deterministic instance generators for tests, benchmarks and the harness.

``generate_corpus`` draws random weak-fault-model instances that are
guaranteed solvable (at least one diagnosis) and non-trivial (at least one
nonempty minimal conflict). ``independent_conflict_family`` builds the
m-pair family whose minimal-diagnosis count is exactly 2^m, used by the
space-usage checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .formula import And, Atom, Iff, Implies, Not, Or, Sentence
from .model import (DPI, ComponentId, FailureRates, is_conflict, is_diagnosis,
                    validate_dpi)
from .reasoner import ConsistencyOracle, SatOracle

__all__ = ["CorpusSpec", "generate_corpus", "independent_conflict_family"]

ORACLE_CHECKABLE_COMPONENTS = 12


@dataclass(frozen=True)
class CorpusSpec:
    """Generation parameters; identical specs yield byte-identical corpora."""

    count: int
    n_components: int
    clause_budget: int
    seed: int

    def __post_init__(self):
        if self.n_components > ORACLE_CHECKABLE_COMPONENTS:
            raise ValueError(
                f"corpora above {ORACLE_CHECKABLE_COMPONENTS} components are not "
                "oracle-checkable; generate such instances directly instead")
        if self.clause_budget < self.n_components:
            raise ValueError("clause budget below one behavior sentence per component")


def _random_literal(rng: random.Random, atoms: list[str]) -> Sentence:
    atom = Atom(rng.choice(atoms))
    return Not(atom) if rng.random() < 0.4 else atom


def _random_sentence(rng: random.Random, atoms: list[str], depth: int) -> Sentence:
    if depth <= 0 or rng.random() < 0.35:
        return _random_literal(rng, atoms)
    ctor = rng.choice((And, Or, Implies, Implies, Iff))
    return ctor(_random_sentence(rng, atoms, depth - 1),
                _random_sentence(rng, atoms, depth - 1))


def generate_corpus(spec: CorpusSpec,
                    oracle: ConsistencyOracle | None = None) -> list[DPI]:
    """Random solvable instances, each with at least one nonempty conflict.

    Rejection sampling keeps only instances where the observations are
    consistent on their own (so the all-abnormal assignment is a diagnosis)
    but contradict the all-healthy assumption (so diagnosis is non-trivial).
    """
    oracle = oracle or SatOracle()
    rng = random.Random(spec.seed)
    n = spec.n_components
    pool = [chr(ord("A") + i) for i in range(max(3, min(8, n)))]
    out: list[DPI] = []
    serial = 0
    while len(out) < spec.count:
        serial += 1
        comps = tuple(ComponentId(i, f"c{i + 1}") for i in range(n))
        behaviors = tuple(_random_sentence(rng, pool, 2) for _ in range(n))
        budget = spec.clause_budget - n
        n_background = rng.randint(0, min(1, max(0, budget - 1)))
        background = tuple(Or(_random_literal(rng, pool), _random_literal(rng, pool))
                           for _ in range(n_background))
        n_obs = max(1, min(budget - n_background, rng.randint(1, 2)))
        obs = tuple(_random_literal(rng, pool) for _ in range(n_obs))
        rates = FailureRates(tuple(round(rng.uniform(0.05, 0.45), 3) for _ in range(n)))
        dpi = DPI(name=f"gen-{spec.seed}-{serial}", comps=comps, behaviors=behaviors,
                  background=background, obs=obs, rates=rates)
        if not is_diagnosis(dpi, dpi.all_components(), oracle):
            continue  # observations clash with background alone: unsolvable
        if not is_conflict(dpi, dpi.all_components(), oracle):
            continue  # all-healthy consistent: nothing to diagnose
        out.append(validate_dpi(dpi, oracle))
    return out


def independent_conflict_family(m: int, rate: float = 0.1) -> DPI:
    """2m components in m independent two-component conflicts.

    Pair i asserts X_i and not-X_i respectively, so {a_i, b_i} is a minimal
    conflict, the pairs share no atoms, and the minimal diagnoses are
    exactly the 2^m one-per-pair selections.
    """
    comps = []
    behaviors = []
    for i in range(m):
        atom = Atom(f"X{i + 1}")
        comps.append(ComponentId(2 * i, f"a{i + 1}"))
        behaviors.append(atom)
        comps.append(ComponentId(2 * i + 1, f"b{i + 1}"))
        behaviors.append(Not(atom))
    return DPI(name=f"pairs-{m}", comps=tuple(comps), behaviors=tuple(behaviors),
               rates=FailureRates.uniform(2 * m, rate))
