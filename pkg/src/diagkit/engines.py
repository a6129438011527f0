"""Diagnosis computation engines.

Five engines cover distinct points of the behavioral feature space:

* ``hs_tree``          - breadth-first hitting-set tree over on-the-fly
                         minimal conflicts (Reiter 1987, with the node-closing
                         rules revisited by Greiner et al. 1989).
* ``ucs_hs_tree``      - uniform-cost variant: the frontier is ordered by
                         the candidate's diagnosis probability, so output
                         comes in non-increasing probability order.
* ``inv_hs_tree``      - direct engine on the conflict/diagnosis duality:
                         shrinks the full component set to one subset-minimal
                         diagnosis at a time and branches hitting-set-style
                         on the elements of found diagnoses (depth-first,
                         polynomial frontier for fixed k).
* ``greedy_heuristic`` - randomized greedy descent with restarts; sound by
                         construction, deliberately incomplete.
* ``brute_force``      - exact power-set sweep with monotonicity pruning;
                         the independent oracle everything is tested against.

All engines consume the consistency oracle opaquely and tie-break by
ascending component index, shorter set first, so runs are deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from heapq import heappop, heappush
from itertools import combinations
from typing import Iterable

from .conflicts import ConflictRequest, find_minimal_conflict, preferred_minimal_subset
from .errors import QueryError, ScaleBoundError, UnknownEngineError
from .model import (DPI, ComponentSet, DiagnosisQuery, FailureRates,
                    diagnosis_probability, is_diagnosis)
from .reasoner import ConsistencyOracle

__all__ = [
    "ENGINE_IDS",
    "MUTANT_IDS",
    "RunStats",
    "DiagnosisResult",
    "run_hs_tree",
    "run_ucs_hs_tree",
    "run_inv_hs_tree",
    "run_greedy_heuristic",
    "run_brute_force",
    "run_engine",
    "BRUTE_FORCE_BOUND",
]

ENGINE_IDS = ("hs_tree", "ucs_hs_tree", "inv_hs_tree", "greedy_heuristic", "brute_force")

# Deliberately defective variants used by the conformance harness to prove
# each behavioral checker can actually fail.
MUTANT_IDS = ("mutant_unsound", "mutant_reversed", "mutant_truncated")

BRUTE_FORCE_BOUND = 20


@dataclass
class RunStats:
    """Per-run counters; ``peak_live_nodes`` is the memory proxy (search
    nodes resident at once), portable and deterministic unlike process RSS."""

    oracle_calls: int = 0
    nodes_expanded: int = 0
    peak_live_nodes: int = 0
    wall_steps: int = 0


@dataclass(frozen=True)
class DiagnosisResult:
    """Ordered diagnoses with optional parallel probabilities and run stats."""

    engine: str
    diagnoses: tuple[ComponentSet, ...]
    probabilities: tuple[float, ...] | None
    stats: RunStats


def _sort_key(cs: ComponentSet) -> tuple:
    return (len(cs), cs.indices())


class _Tracker:
    """Wraps an oracle's call counter so each run reports its own usage."""

    def __init__(self, oracle: ConsistencyOracle):
        self.oracle = oracle
        self.start_calls = oracle.stats.calls

    def consumed(self) -> int:
        return self.oracle.stats.calls - self.start_calls


def _hitting_set_search(dpi: DPI, query: DiagnosisQuery, oracle: ConsistencyOracle,
                        rates: FailureRates | None,
                        conflict_sink: list | None,
                        seed_conflicts: Iterable[ComponentSet] | None) -> DiagnosisResult:
    """Shared hitting-set tree; ``rates`` switches breadth-first to uniform-cost.

    Node paths are edge-label sets from the root. Labels are minimal
    conflicts disjoint from the path, reused from earlier labels when
    possible (Reiter 1987). Closing rules: a node whose path duplicates an
    enqueued path is never enqueued, and a node whose path contains an
    already-emitted diagnosis is closed on pop. Label minimality makes the
    third of Reiter's rules (conflict-set replacement, the HS-DAG repair of
    Greiner et al. 1989) unnecessary.
    """
    engine = "hs_tree" if rates is None else "ucs_hs_tree"
    tracker = _Tracker(oracle)
    stats = RunStats()
    full = dpi.all_components()
    known_conflicts: list[ComponentSet] = list(seed_conflicts or ())

    def priority(path: ComponentSet) -> tuple:
        if rates is None:
            return (len(path), path.indices())
        return (-diagnosis_probability(path, rates), len(path), path.indices())

    frontier: list[tuple] = []
    heappush(frontier, (priority(ComponentSet()), ComponentSet()))
    seen: set[ComponentSet] = {ComponentSet()}
    diagnoses: list[ComponentSet] = []
    stats.peak_live_nodes = 1
    mc_level: int | None = None  # first cardinality with a hit, for property queries

    while frontier:
        stats.wall_steps += 1
        prio, path = heappop(frontier)
        if query.property_ == "min_cardinality" and mc_level is not None \
                and len(path) > mc_level:
            break
        if any(diag <= path for diag in diagnoses):
            continue  # close: supersets of found diagnoses cannot be minimal
        label = None
        for conflict in known_conflicts:
            if not (conflict & path):
                label = conflict
                break
        if label is None:
            label = find_minimal_conflict(
                ConflictRequest(dpi, candidate_scope=full - path), oracle)
            if label is not None:
                known_conflicts.append(label)
                if conflict_sink is not None:
                    conflict_sink.append(label)
        if label is None:
            diagnoses.append(path)
            if query.property_ == "min_cardinality" and mc_level is None:
                mc_level = len(path)
            if len(diagnoses) >= query.limit:
                break
            continue
        stats.nodes_expanded += 1
        for index in label:
            child = path.with_index(index)
            if child in seen:
                continue  # close: path set already present in the tree
            seen.add(child)
            heappush(frontier, (priority(child), child))
        stats.peak_live_nodes = max(stats.peak_live_nodes, len(frontier))

    stats.oracle_calls = tracker.consumed()
    probs = None
    if rates is not None:
        probs = tuple(diagnosis_probability(d, rates) for d in diagnoses)
    return DiagnosisResult(engine, tuple(diagnoses), probs, stats)


def run_hs_tree(dpi: DPI, query: DiagnosisQuery, oracle: ConsistencyOracle, *,
                conflict_sink: list | None = None,
                seed_conflicts: Iterable[ComponentSet] | None = None) -> DiagnosisResult:
    """Breadth-first hitting-set tree; emits in non-decreasing cardinality."""
    if query.order == "probability":
        raise QueryError("hs_tree orders by cardinality; use ucs_hs_tree for probability")
    return _hitting_set_search(dpi, query, oracle, None, conflict_sink, seed_conflicts)


def run_ucs_hs_tree(dpi: DPI, query: DiagnosisQuery, rates: FailureRates,
                    oracle: ConsistencyOracle, *,
                    conflict_sink: list | None = None,
                    seed_conflicts: Iterable[ComponentSet] | None = None) -> DiagnosisResult:
    """Uniform-cost hitting-set tree; emits in non-increasing probability.

    The frontier order is the candidate's own diagnosis probability, which
    decreases along tree edges for fault rates below one half; the emission
    guarantee is stated for that standard regime.
    """
    if rates is None:
        raise QueryError("ucs_hs_tree requires failure rates")
    if query.property_ == "min_cardinality":
        raise QueryError("min-cardinality queries are served by hs_tree")
    return _hitting_set_search(dpi, query, oracle, rates, conflict_sink, seed_conflicts)


def run_inv_hs_tree(dpi: DPI, query: DiagnosisQuery,
                    oracle: ConsistencyOracle) -> DiagnosisResult:
    """Direct engine: one minimal diagnosis at a time via the duality property.

    A node is a set of components barred from the diagnosis. Its label is a
    subset-minimal diagnosis avoiding those components (shrunk with the same
    divide-and-conquer as conflict extraction, with the predicate flipped to
    the diagnosis side); children bar one label element each, so the tree is
    a hitting-set tree over *diagnoses*, explored depth-first. Previously
    found diagnoses double as branch labels when they avoid the exclusions,
    and at most k of them are retained.
    """
    if query.property_ == "min_cardinality":
        raise QueryError("min-cardinality queries are served by hs_tree")
    tracker = _Tracker(oracle)
    stats = RunStats()
    full = dpi.all_components()

    def diagnosis_holds(indices) -> bool:
        return is_diagnosis(dpi, ComponentSet.from_indices(indices), oracle)

    results: list[ComponentSet] = []
    stack: list[ComponentSet] = [ComponentSet()]  # exclusion sets, depth-first
    visited: set[ComponentSet] = {ComponentSet()}
    stats.peak_live_nodes = 2

    while stack:
        stats.wall_steps += 1
        excluded = stack.pop()
        candidates = full - excluded
        label = None
        for diag in results:
            if not (diag & excluded):
                label = diag
                break
        if label is None:
            if not is_diagnosis(dpi, candidates, oracle):
                continue  # no diagnosis avoids the exclusions: close this branch
            core = preferred_minimal_subset(
                diagnosis_holds, sorted(candidates), empty_may_hold=True)
            label = ComponentSet.from_indices(core)
            results.append(label)
            if len(results) >= query.limit:
                break
        stats.nodes_expanded += 1
        for index in label:
            child = excluded.with_index(index)
            if child in visited:
                continue
            visited.add(child)
            stack.append(child)
        stats.peak_live_nodes = max(
            stats.peak_live_nodes, len(stack) + len(visited) + len(results))

    stats.oracle_calls = tracker.consumed()
    return DiagnosisResult("inv_hs_tree", tuple(results), None, stats)


def run_greedy_heuristic(dpi: DPI, query: DiagnosisQuery, rates: FailureRates,
                         oracle: ConsistencyOracle, seed: int,
                         restarts: int = 8) -> DiagnosisResult:
    """Randomized greedy descent from the all-abnormal set.

    Each restart repeatedly drops the component with the highest health
    probability whose removal keeps the set a diagnosis, under a seeded
    perturbation of that order. A descent fixpoint is minimal outright
    (single-element removals are exactly the minimality test in a weak
    fault model), so every returned set is a minimal diagnosis; whether
    *all* of them are found depends on the restart budget.
    """
    tracker = _Tracker(oracle)
    stats = RunStats()
    rng = random.Random(seed)
    found: list[ComponentSet] = []
    full = dpi.all_components()

    for _ in range(max(1, restarts)):
        stats.wall_steps += 1
        order = sorted(full, key=lambda i: (-(1.0 - rates[i]) + rng.uniform(0.0, 0.35), i))
        current = full
        changed = True
        while changed:
            changed = False
            for index in order:
                if index not in current:
                    continue
                candidate = current.without_index(index)
                if is_diagnosis(dpi, candidate, oracle):
                    current = candidate
                    changed = True
        if current not in found:
            found.append(current)
        stats.peak_live_nodes = max(stats.peak_live_nodes, 1 + len(found))
        if len(found) >= query.limit:
            break

    found = found[:int(query.limit) if query.limit != float("inf") else len(found)]
    stats.oracle_calls = tracker.consumed()
    probs = tuple(diagnosis_probability(d, rates) for d in found)
    return DiagnosisResult("greedy_heuristic", tuple(found), probs, stats)


def run_brute_force(dpi: DPI, oracle: ConsistencyOracle) -> DiagnosisResult:
    """Exact minimal-diagnosis set by ascending-cardinality power-set sweep.

    Supersets of found diagnoses are diagnoses by monotonicity and never
    minimal, so they are skipped without an oracle call. Output order is
    ascending cardinality, then lexicographic on component indices.
    """
    if dpi.n > BRUTE_FORCE_BOUND:
        raise ScaleBoundError(
            f"instance has {dpi.n} components, over the brute-force bound of {BRUTE_FORCE_BOUND}")
    tracker = _Tracker(oracle)
    stats = RunStats()
    found: list[ComponentSet] = []
    found_masks: list[int] = []
    stats.peak_live_nodes = 1
    for size in range(dpi.n + 1):
        for combo in combinations(range(dpi.n), size):
            stats.wall_steps += 1
            mask = 0
            for i in combo:
                mask |= 1 << i
            if any(known & mask == known for known in found_masks):
                continue
            cs = ComponentSet(mask)
            if is_diagnosis(dpi, cs, oracle):
                found.append(cs)
                found_masks.append(mask)
        stats.peak_live_nodes = max(stats.peak_live_nodes, len(found) + 1)
    stats.oracle_calls = tracker.consumed()
    return DiagnosisResult("brute_force", tuple(found), None, stats)


# ---------------------------------------------------------------------------
# Mutants: deliberately broken engine variants for the mutation-sensitivity
# tests. Each violates exactly the contract its checker is meant to observe.

def _run_mutant(mutant: str, dpi: DPI, query: DiagnosisQuery,
                oracle: ConsistencyOracle) -> DiagnosisResult:
    base = run_hs_tree(dpi, query, oracle)
    diagnoses = list(base.diagnoses)
    if mutant == "mutant_unsound":
        padded = []
        for diag in diagnoses:
            extra = next((i for i in range(dpi.n) if i not in diag), None)
            padded.append(diag if extra is None else diag.with_index(extra))
        diagnoses = padded
    elif mutant == "mutant_reversed":
        diagnoses = list(reversed(diagnoses))
    elif mutant == "mutant_truncated":
        diagnoses = diagnoses[:-1]
    else:
        raise UnknownEngineError(f"unknown mutant {mutant!r}")
    return DiagnosisResult(mutant, tuple(diagnoses), None, base.stats)


def run_engine(engine: str, dpi: DPI, query: DiagnosisQuery,
               oracle: ConsistencyOracle, rates: FailureRates | None = None,
               seed: int = 0, restarts: int = 8, **kwargs) -> DiagnosisResult:
    """Uniform dispatch used by the CLI, the service and the harness."""
    if engine in MUTANT_IDS:
        return _run_mutant(engine, dpi, query, oracle)
    if engine not in ENGINE_IDS:
        raise UnknownEngineError(f"unknown engine {engine!r}; known: {', '.join(ENGINE_IDS)}")
    if engine in ("ucs_hs_tree", "greedy_heuristic") and rates is None:
        rates = dpi.rates or FailureRates.uniform(dpi.n)
    if engine == "hs_tree":
        return run_hs_tree(dpi, query, oracle, **kwargs)
    if engine == "ucs_hs_tree":
        return run_ucs_hs_tree(dpi, query, rates, oracle, **kwargs)
    if engine == "inv_hs_tree":
        return run_inv_hs_tree(dpi, query, oracle)
    if engine == "greedy_heuristic":
        return run_greedy_heuristic(dpi, query, rates, oracle, seed, restarts=restarts)
    return run_brute_force(dpi, oracle)
