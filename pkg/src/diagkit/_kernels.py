"""Array-level satisfiability kernel with selectable backends.

Clause sets are stored CSR-style: ``lits`` is a flat int32 array of
DIMACS-coded literals (+v / -v, variables numbered from 1) and ``starts``
holds clause boundaries (length = number of clauses + 1).

The solver is a complete backtracking search with unit propagation,
written against plain arrays so the identical function body runs either
interpreted or compiled by numba. Backend selection:

* ``DIAGKIT_BACKEND=numba``  - require the jitted kernel (error if numba missing)
* ``DIAGKIT_BACKEND=python`` - force the interpreted fallback
* unset / ``auto``           - numba when importable, fallback otherwise

``diagkit bench --compare-backends`` times the two paths against each other.
"""

from __future__ import annotations

import os

import numpy as np

__all__ = [
    "SAT",
    "UNSAT",
    "BUDGET_EXCEEDED",
    "DEFAULT_STEP_BUDGET",
    "cnf_satisfiable",
    "satisfiable_fn",
    "active_backend",
    "available_backends",
]

SAT = 1
UNSAT = 0
BUDGET_EXCEEDED = -1

DEFAULT_STEP_BUDGET = 1_000_000  # branch decisions; desk-scale guardrail


def _dpll(lits, starts, n_vars, budget):
    """Backtracking search with unit propagation; returns SAT/UNSAT/BUDGET.

    Tiny desk-scale instances: propagation is a repeated full clause scan,
    branching picks the lowest-numbered free variable, positive phase first,
    and backtracking is chronological. Only variables that occur in the
    clause set are ever decided (the variable pool is shared across calls,
    so most numbered variables are absent from any one clause set).
    ``budget`` bounds branch decisions (including forced flips after a
    conflict).
    """
    n_clauses = starts.shape[0] - 1
    assign = np.zeros(n_vars + 1, dtype=np.int8)  # 0 free, 1 true, -1 false
    trail = np.zeros(n_vars + 1, dtype=np.int32)  # assigned literals, in order
    implied = np.zeros(n_vars + 1, dtype=np.uint8)  # 1 = implied or already flipped
    occurs = np.zeros(n_vars + 1, dtype=np.uint8)
    for k in range(lits.shape[0]):
        lit = lits[k]
        occurs[lit if lit > 0 else -lit] = 1
    t = 0
    steps = 0
    while True:
        conflict = False
        progress = True
        while progress and not conflict:
            progress = False
            for ci in range(n_clauses):
                satisfied = False
                n_free = 0
                last_free = np.int32(0)
                for k in range(starts[ci], starts[ci + 1]):
                    lit = lits[k]
                    v = lit if lit > 0 else -lit
                    a = assign[v]
                    if a == 0:
                        n_free += 1
                        last_free = lit
                    elif (a == 1) == (lit > 0):
                        satisfied = True
                        break
                if satisfied:
                    continue
                if n_free == 0:
                    conflict = True
                    break
                if n_free == 1:
                    v = last_free if last_free > 0 else -last_free
                    assign[v] = 1 if last_free > 0 else -1
                    trail[t] = last_free
                    implied[t] = 1
                    t += 1
                    progress = True
        if conflict:
            while t > 0 and implied[t - 1] == 1:
                lit = trail[t - 1]
                v = lit if lit > 0 else -lit
                assign[v] = 0
                t -= 1
            if t == 0:
                return UNSAT
            steps += 1
            if steps > budget:
                return BUDGET_EXCEEDED
            lit = trail[t - 1]
            v = lit if lit > 0 else -lit
            assign[v] = -1 if lit > 0 else 1
            trail[t - 1] = -lit
            implied[t - 1] = 1
        else:
            v = 0
            for u in range(1, n_vars + 1):
                if assign[u] == 0 and occurs[u] == 1:
                    v = u
                    break
            if v == 0:
                return SAT
            steps += 1
            if steps > budget:
                return BUDGET_EXCEEDED
            assign[v] = 1
            trail[t] = np.int32(v)
            implied[t] = 0
            t += 1


_requested = os.environ.get("DIAGKIT_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "python"):
    raise ValueError(f"DIAGKIT_BACKEND must be 'numba', 'python' or 'auto', got {_requested!r}")

_dpll_jit = None
if _requested in ("auto", "numba"):
    try:
        from numba import njit

        _dpll_jit = njit(cache=True, nogil=True)(_dpll)
    except ImportError:
        if _requested == "numba":
            raise
        _dpll_jit = None

_ACTIVE = "numba" if _dpll_jit is not None else "python"


def active_backend() -> str:
    return _ACTIVE


def available_backends() -> tuple[str, ...]:
    return ("numba", "python") if _dpll_jit is not None else ("python",)


def satisfiable_fn(backend: str | None = None):
    """Return the raw kernel callable for ``backend`` (default: active one)."""
    name = backend or _ACTIVE
    if name == "python":
        return _dpll
    if name == "numba":
        if _dpll_jit is None:
            raise ValueError("numba backend unavailable (numba not importable or disabled)")
        return _dpll_jit
    raise ValueError(f"unknown backend {name!r}")


def cnf_satisfiable(lits: np.ndarray, starts: np.ndarray, n_vars: int,
                    budget: int = DEFAULT_STEP_BUDGET,
                    backend: str | None = None) -> int:
    """Solve one CSR clause set; returns SAT, UNSAT or BUDGET_EXCEEDED."""
    fn = satisfiable_fn(backend)
    return int(fn(lits, starts, np.int64(n_vars), np.int64(budget)))
