"""Minimal conflict computation.

``find_minimal_conflict`` extracts a single minimal conflict on demand via
divide-and-conquer over a preference order (ascending component index,
midpoint splits), in the style of Junker's QuickXplain. The recursion is
shared with the dual use on the diagnosis side (shrinking a component set
to a subset-minimal diagnosis) through ``preferred_minimal_subset``.

``enumerate_minimal_conflicts`` is the exhaustive companion used by the
conformance harness and the test oracles.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

from .errors import ScaleBoundError
from .model import DPI, ComponentSet, is_conflict
from .reasoner import ConsistencyOracle

__all__ = [
    "ConflictRequest",
    "find_minimal_conflict",
    "enumerate_minimal_conflicts",
    "preferred_minimal_subset",
    "EXHAUSTIVE_BOUND",
]

EXHAUSTIVE_BOUND = 16


@dataclass(frozen=True)
class ConflictRequest:
    """Search for a minimal conflict inside ``candidate_scope``.

    Scoping supports hitting-set-tree node labeling, where components
    already on the tree path are excluded from the search.
    """

    dpi: DPI
    candidate_scope: ComponentSet | None = None

    def scope(self) -> ComponentSet:
        if self.candidate_scope is None:
            return self.dpi.all_components()
        return self.candidate_scope


def preferred_minimal_subset(holds: Callable[[Sequence[int]], bool],
                             items: Sequence[int],
                             empty_may_hold: bool = False) -> list[int]:
    """Minimal subsequence of ``items`` on which the monotone predicate holds.

    Assumes ``holds(items)`` is true and ``holds`` is monotone (adding items
    never turns true into false). Earlier items are preferred for removal
    pressure exactly as in Junker's preferred-conflict recursion; midpoint
    splits keep the predicate-call count within
    O(k + k log(n / k)) for a result of size k.
    """
    if empty_may_hold and holds(()):
        return []

    def recurse(base: list[int], candidates: Sequence[int], base_grew: bool) -> list[int]:
        if base_grew and holds(base):
            return []
        if len(candidates) == 1:
            return [candidates[0]]
        half = len(candidates) // 2
        left, right = candidates[:half], candidates[half:]
        keep_right = recurse(base + list(left), right, bool(left))
        keep_left = recurse(base + keep_right, left, bool(keep_right))
        return keep_left + keep_right

    return recurse([], list(items), False)


def find_minimal_conflict(req: ConflictRequest,
                          oracle: ConsistencyOracle) -> ComponentSet | None:
    """One minimal conflict within the request's scope, or None if there is none.

    Deterministic for a fixed component ordering: the ascending-index
    preference makes golden expectations possible.
    """
    dpi = req.dpi
    scope = sorted(req.scope())

    def conflicting(indices: Sequence[int]) -> bool:
        return is_conflict(dpi, ComponentSet.from_indices(indices), oracle)

    if not scope or not conflicting(scope):
        return None
    core = preferred_minimal_subset(conflicting, scope)
    return ComponentSet.from_indices(core)


def enumerate_minimal_conflicts(dpi: DPI, oracle: ConsistencyOracle,
                                bound: int = EXHAUSTIVE_BOUND) -> set[ComponentSet]:
    """All minimal conflicts, by ascending-cardinality sweep with pruning.

    Supersets of an already-found conflict are conflicts by monotonicity and
    never minimal, so they are skipped without an oracle call.
    """
    if dpi.n > bound:
        raise ScaleBoundError(
            f"instance has {dpi.n} components, over the exhaustive bound of {bound}")
    found: set[ComponentSet] = set()
    found_masks: list[int] = []
    indices = range(dpi.n)
    for size in range(1, dpi.n + 1):
        for combo in combinations(indices, size):
            mask = 0
            for i in combo:
                mask |= 1 << i
            if any(known & mask == known for known in found_masks):
                continue
            cs = ComponentSet(mask)
            if is_conflict(dpi, cs, oracle):
                found.add(cs)
                found_masks.append(mask)
    return found
