"""Black-box consistency oracles over propositional sentence sets.

Two independent implementations back every dual-route check in the test
suite: ``SatOracle`` (clause learning-free DPLL over a Tseitin encoding,
see ``_kernels``) and ``TruthTableOracle`` (bit-parallel exhaustive
evaluation, exponential but trivially correct). Engines treat either one
opaquely: the whole sentence set is handed over per call and only the
consistent/inconsistent verdict comes back.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import ReasonerBudgetError, ScaleBoundError
from .formula import And, Atom, Iff, Implies, Not, Or, Sentence, _Const

if TYPE_CHECKING:
    from .model import DPI, ComponentSet

__all__ = [
    "OracleStats",
    "ConsistencyOracle",
    "SatOracle",
    "TruthTableOracle",
    "encode_dpi",
    "check_consistent",
    "check_entailed",
]


@dataclass
class OracleStats:
    """Monotone counters accumulated over an oracle's lifetime."""

    calls: int = 0
    cache_hits: int = 0
    cumulative_clause_count: int = 0


class ConsistencyOracle:
    """Interface contract: ``check`` maps a sentence set to a verdict.

    Implementations must be sound and complete for the propositional
    fragment and deterministic for identical input sets. Each instance
    carries its own caches; ``clone`` hands a fresh instance to a worker.
    """

    stats: OracleStats

    def check(self, sentences: Iterable[Sentence]) -> bool:
        """True iff the sentence set is consistent (satisfiable)."""
        raise NotImplementedError

    def check_entailed(self, sentences: Iterable[Sentence], goal: Sentence) -> bool:
        """True iff the sentences entail ``goal``."""
        return not self.check([*sentences, Not(goal)])

    def clone(self) -> "ConsistencyOracle":
        raise NotImplementedError


class SatOracle(ConsistencyOracle):
    """Complete backtracking search with unit propagation over CNF.

    Sentences are translated once into defining clauses (one auxiliary
    variable per distinct subformula, biconditional encoding) and the
    translations are reused across calls; checking a set then amounts to
    concatenating cached clause blocks plus one unit clause per top-level
    sentence. Verdicts are memoized by sentence set.
    """

    def __init__(self, step_budget: int = _kernels.DEFAULT_STEP_BUDGET,
                 backend: str | None = None):
        self.step_budget = step_budget
        self.backend = backend
        self.stats = OracleStats()
        self._var_ids: dict = {}            # atom name / formula node -> variable id
        self._node_clauses: dict = {}       # formula node -> (literal, own clauses)
        self._root_defs: dict = {}          # sentence -> (lits, clause lengths, root literal)
        self._verdicts: dict = {}           # frozenset of sentences -> bool

    def clone(self) -> "SatOracle":
        return SatOracle(step_budget=self.step_budget, backend=self.backend)

    # -- Tseitin translation -------------------------------------------------

    def _var(self, key) -> int:
        vid = self._var_ids.get(key)
        if vid is None:
            vid = len(self._var_ids) + 1
            self._var_ids[key] = vid
        return vid

    def _literal(self, node: Sentence) -> int:
        """Literal equisatisfiably representing ``node``; emits defining clauses."""
        cached = self._node_clauses.get(node)
        if cached is not None:
            return cached[0]
        if isinstance(node, Atom):
            lit = self._var(node.name)
            self._node_clauses[node] = (lit, ())
            return lit
        if isinstance(node, _Const):
            base = self._var("\x00const_true")  # one pinned variable serves both constants
            lit = base if node.value else -base
            self._node_clauses[node] = (lit, ((base,),))
            return lit
        if isinstance(node, Not):
            lit = -self._literal(node.arg)
            self._node_clauses[node] = (lit, ())
            return lit
        a = self._literal(node.lhs)
        b = self._literal(node.rhs)
        t = self._var(node)
        if isinstance(node, And):
            clauses = ((-t, a), (-t, b), (t, -a, -b))
        elif isinstance(node, Or):
            clauses = ((-t, a, b), (t, -a), (t, -b))
        elif isinstance(node, Implies):
            clauses = ((-t, -a, b), (t, a), (t, -b))
        elif isinstance(node, Iff):
            clauses = ((-t, -a, b), (-t, a, -b), (t, a, b), (t, -a, -b))
        else:
            raise TypeError(f"unknown sentence node {type(node).__name__}")
        self._node_clauses[node] = (t, clauses)
        return t

    def _root_fragment(self, root: Sentence) -> tuple:
        """Defining clauses reachable from ``root``, flattened into arrays."""
        frag = self._root_defs.get(root)
        if frag is not None:
            return frag
        root_lit = self._literal(root)
        clauses: list = []
        seen: set = set()
        stack: list = [root]
        while stack:
            node = stack.pop()
            nid = id(node)
            if nid in seen:
                continue
            seen.add(nid)
            clauses.extend(self._node_clauses[node][1])
            stack.extend(node.children())
        lits = np.fromiter((lit for cl in clauses for lit in cl), dtype=np.int32,
                           count=sum(len(cl) for cl in clauses))
        lengths = np.fromiter((len(cl) for cl in clauses), dtype=np.int32,
                              count=len(clauses))
        frag = (lits, lengths, root_lit)
        self._root_defs[root] = frag
        return frag

    # -- checking -------------------------------------------------------------

    def check(self, sentences: Iterable[Sentence]) -> bool:
        roots = list(sentences)
        key = frozenset(roots)
        self.stats.calls += 1
        verdict = self._verdicts.get(key)
        if verdict is not None:
            self.stats.cache_hits += 1
            return verdict

        lit_blocks: list = []
        len_blocks: list = []
        units: list = []
        for root in key:
            lits, lengths, root_lit = self._root_fragment(root)
            if len(lengths):
                lit_blocks.append(lits)
                len_blocks.append(lengths)
            units.append(root_lit)
        lit_blocks.append(np.fromiter(units, dtype=np.int32, count=len(units)))
        len_blocks.append(np.ones(len(units), dtype=np.int32))
        all_lits = np.concatenate(lit_blocks)
        all_lengths = np.concatenate(len_blocks)
        starts = np.zeros(len(all_lengths) + 1, dtype=np.int32)
        np.cumsum(all_lengths, out=starts[1:])
        n_vars = len(self._var_ids)

        result = _kernels.cnf_satisfiable(all_lits, starts, n_vars,
                                          budget=self.step_budget,
                                          backend=self.backend)
        self.stats.cumulative_clause_count += len(all_lengths)
        if result == _kernels.BUDGET_EXCEEDED:
            raise ReasonerBudgetError(
                f"step budget {self.step_budget} exceeded on {len(all_lengths)} clauses")
        verdict = result == _kernels.SAT
        self._verdicts[key] = verdict
        return verdict


# Bit-column patterns for the first six variables: bit j of a word encodes
# assignment j, and variable i is true in assignment j iff bit i of j is set.
_WORD_PATTERNS = (
    np.uint64(0xAAAAAAAAAAAAAAAA),
    np.uint64(0xCCCCCCCCCCCCCCCC),
    np.uint64(0xF0F0F0F0F0F0F0F0),
    np.uint64(0xFF00FF00FF00FF00),
    np.uint64(0xFFFF0000FFFF0000),
    np.uint64(0xFFFFFFFF00000000),
)
_ALL_ONES = np.uint64(0xFFFFFFFFFFFFFFFF)


class TruthTableOracle(ConsistencyOracle):
    """Exhaustive oracle: evaluates sentences over every assignment at once.

    Assignments are packed 64 per machine word, so a check over n atoms
    touches 2^n / 64 words per formula node. Exponential by construction;
    refuses instances beyond ``max_atoms``.
    """

    def __init__(self, max_atoms: int = 20):
        self.max_atoms = max_atoms
        self.stats = OracleStats()
        self._verdicts: dict = {}

    def clone(self) -> "TruthTableOracle":
        return TruthTableOracle(max_atoms=self.max_atoms)

    def check(self, sentences: Iterable[Sentence]) -> bool:
        roots = list(sentences)
        key = frozenset(roots)
        self.stats.calls += 1
        verdict = self._verdicts.get(key)
        if verdict is not None:
            self.stats.cache_hits += 1
            return verdict

        names = sorted(set().union(*[s.atoms() for s in roots])) if roots else []
        if len(names) > self.max_atoms:
            raise ScaleBoundError(
                f"{len(names)} atoms exceed the truth-table bound of {self.max_atoms}")
        index = {name: i for i, name in enumerate(names)}
        n = len(names)
        n_words = max(1, (1 << n) >> 6)

        def column(i: int) -> np.ndarray:
            if i < 6:
                return np.full(n_words, _WORD_PATTERNS[i], dtype=np.uint64)
            col = np.zeros(n_words, dtype=np.uint64)
            block = 1 << (i - 6)
            col.reshape(-1, 2 * block)[:, block:] = _ALL_ONES
            return col

        cache: dict = {}

        def eval_node(node: Sentence) -> np.ndarray:
            hit = cache.get(node)
            if hit is not None:
                return hit
            if isinstance(node, Atom):
                mask = column(index[node.name])
            elif isinstance(node, _Const):
                mask = (np.full(n_words, _ALL_ONES, dtype=np.uint64) if node.value
                        else np.zeros(n_words, dtype=np.uint64))
            elif isinstance(node, Not):
                mask = ~eval_node(node.arg)
            elif isinstance(node, And):
                mask = eval_node(node.lhs) & eval_node(node.rhs)
            elif isinstance(node, Or):
                mask = eval_node(node.lhs) | eval_node(node.rhs)
            elif isinstance(node, Implies):
                mask = ~eval_node(node.lhs) | eval_node(node.rhs)
            elif isinstance(node, Iff):
                mask = ~(eval_node(node.lhs) ^ eval_node(node.rhs))
            else:
                raise TypeError(f"unknown sentence node {type(node).__name__}")
            cache[node] = mask
            return mask

        acc = np.full(n_words, _ALL_ONES, dtype=np.uint64)
        for root in roots:
            acc &= eval_node(root)
        if n < 6:
            acc[0] &= np.uint64((1 << (1 << n)) - 1)
        verdict = bool(acc.any())
        self.stats.cumulative_clause_count += len(roots)
        self._verdicts[key] = verdict
        return verdict


@lru_cache(maxsize=1024)
def _encoding_parts(dpi: "DPI") -> tuple:
    """Shared sentence objects per instance: skeleton, ok units, nok units.

    Reusing the same objects across calls keeps the oracle's translation
    and verdict caches on their identity fast path.
    """
    ok_atoms = tuple(dpi.ok_atom(i) for i in range(dpi.n))
    skeleton = tuple(Implies(ok_atoms[c.index], beh)
                     for c, beh in zip(dpi.comps, dpi.behaviors)) \
        + dpi.background + dpi.obs + dpi.meas
    nok_units = tuple(Not(a) for a in ok_atoms)
    return skeleton, ok_atoms, nok_units


def encode_dpi(dpi: "DPI", ok: "ComponentSet", nok: "ComponentSet") -> list[Sentence]:
    """System description plus observations, measurements and health literals.

    Returns SD (one normal-behavior implication per component plus the
    background sentences) together with OBS, MEAS and one ok / negated-ok
    unit per assumed-healthy / assumed-faulty component.
    """
    if ok & nok:
        raise ValueError("ok and nok assumption sets must be disjoint")
    skeleton, ok_atoms, nok_units = _encoding_parts(dpi)
    out = list(skeleton)
    for i in ok:
        out.append(ok_atoms[i])
    for i in nok:
        out.append(nok_units[i])
    return out


def check_consistent(sentences: Sequence[Sentence], oracle: ConsistencyOracle) -> bool:
    """Module-level convenience wrapper over ``oracle.check``."""
    return oracle.check(sentences)


def check_entailed(sentences: Sequence[Sentence], goal: Sentence,
                   oracle: ConsistencyOracle) -> bool:
    """True iff ``sentences`` entail ``goal`` (refutation check)."""
    return oracle.check_entailed(sentences, goal)
