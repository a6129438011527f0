"""Benchmark helpers behind ``diagkit bench``.

Two modes: per-engine run statistics over a generated corpus (CSV), and a
kernel backend comparison timing the jitted DPLL loop against the
interpreted fallback on the same consistency-check workload.
"""

from __future__ import annotations

import time

from . import _kernels
from .corpus import CorpusSpec, generate_corpus
from .engines import ENGINE_IDS, run_engine
from .model import DiagnosisQuery
from .reasoner import SatOracle

__all__ = ["engine_stats_rows", "backend_comparison_rows"]


def engine_stats_rows(seed: int = 42, count: int = 20, n_components: int = 6,
                      engines=ENGINE_IDS) -> list[dict]:
    """Aggregate per-engine counters over a deterministic corpus."""
    corpus = generate_corpus(CorpusSpec(count=count, n_components=n_components,
                                        clause_budget=n_components + 4, seed=seed))
    rows = []
    for engine in engines:
        oracle = SatOracle()
        totals = {"diagnoses": 0, "oracle_calls": 0, "nodes_expanded": 0,
                  "peak_live_nodes": 0, "wall_steps": 0}
        started = time.perf_counter()
        for dpi in corpus:
            result = run_engine(engine, dpi, DiagnosisQuery(k="all"), oracle)
            totals["diagnoses"] += len(result.diagnoses)
            totals["oracle_calls"] += result.stats.oracle_calls
            totals["nodes_expanded"] += result.stats.nodes_expanded
            totals["peak_live_nodes"] = max(totals["peak_live_nodes"],
                                            result.stats.peak_live_nodes)
            totals["wall_steps"] += result.stats.wall_steps
        elapsed = time.perf_counter() - started
        rows.append({"engine": engine, "instances": len(corpus), **totals,
                     "seconds": round(elapsed, 4)})
    return rows


def backend_comparison_rows(seed: int = 42, count: int = 10,
                            n_components: int = 8, repeats: int = 3) -> list[dict]:
    """Time the DPLL kernel backends on an identical brute-force workload.

    The workload replays every consistency check a brute-force sweep makes
    over the corpus. Verdict caching is what the backends would hide behind,
    so each repetition uses a fresh oracle.
    """
    corpus = generate_corpus(CorpusSpec(count=count, n_components=n_components,
                                        clause_budget=n_components + 4, seed=seed))
    rows = []
    for backend in _kernels.available_backends():
        # Warm up compilation outside the timed region.
        SatOracle(backend=backend).check([])
        best = float("inf")
        checks = 0
        for _ in range(repeats):
            oracle = SatOracle(backend=backend)
            started = time.perf_counter()
            for dpi in corpus:
                run_engine("brute_force", dpi, DiagnosisQuery(k="all"), oracle)
            elapsed = time.perf_counter() - started
            best = min(best, elapsed)
            checks = oracle.stats.calls
        rows.append({"backend": backend, "checks": checks,
                     "seconds": round(best, 4),
                     "checks_per_second": round(checks / best, 1)})
    return rows
