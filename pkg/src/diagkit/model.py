"""Core diagnosis model: instances, component sets, and semantic predicates.

A diagnosis problem instance bundles component-tagged normal-behavior
sentences with general background knowledge, observations and measurements.
Only normal behavior is modeled (a weak fault model): assuming a component
abnormal simply disables its behavior sentence, which makes the diagnosis
property monotone under supersets and lets minimal diagnoses represent all
diagnoses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Iterator, Literal

from .errors import NoDiagnosisError
from .formula import Atom, Sentence, collect_atoms
from .reasoner import ConsistencyOracle, encode_dpi

__all__ = [
    "OK_PREFIX",
    "ComponentId",
    "ComponentSet",
    "EMPTY_SET",
    "DPI",
    "FailureRates",
    "DiagnosisQuery",
    "diagnosis_probability",
    "is_diagnosis",
    "is_minimal_diagnosis",
    "is_conflict",
    "verify_duality",
    "validate_dpi",
]

OK_PREFIX = "ok_"  # reserved atom namespace for component health literals


@dataclass(frozen=True)
class ComponentId:
    """A component: dense index within its instance plus a unique label."""

    index: int
    name: str


class ComponentSet:
    """Immutable subset of a DPI's components, stored as a bit mask.

    Iteration and ``indices()`` are in ascending index order, which is the
    canonical ordering used for tie-breaking everywhere.
    """

    __slots__ = ("mask",)

    def __init__(self, mask: int = 0):
        object.__setattr__(self, "mask", mask)

    def __setattr__(self, *a):
        raise AttributeError("ComponentSet is immutable")

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> "ComponentSet":
        mask = 0
        for i in indices:
            mask |= 1 << i
        return cls(mask)

    @classmethod
    def full(cls, n: int) -> "ComponentSet":
        return cls((1 << n) - 1)

    def indices(self) -> tuple[int, ...]:
        return tuple(self)

    def __iter__(self) -> Iterator[int]:
        mask = self.mask
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, index: int) -> bool:
        return bool(self.mask >> index & 1)

    def __or__(self, other: "ComponentSet") -> "ComponentSet":
        return ComponentSet(self.mask | other.mask)

    def __and__(self, other: "ComponentSet") -> "ComponentSet":
        return ComponentSet(self.mask & other.mask)

    def __sub__(self, other: "ComponentSet") -> "ComponentSet":
        return ComponentSet(self.mask & ~other.mask)

    def __le__(self, other: "ComponentSet") -> bool:
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "ComponentSet") -> bool:
        return self.mask != other.mask and self.mask & ~other.mask == 0

    def issubset(self, other: "ComponentSet") -> bool:
        return self <= other

    def with_index(self, index: int) -> "ComponentSet":
        return ComponentSet(self.mask | 1 << index)

    def without_index(self, index: int) -> "ComponentSet":
        return ComponentSet(self.mask & ~(1 << index))

    def __eq__(self, other) -> bool:
        return isinstance(other, ComponentSet) and other.mask == self.mask

    def __hash__(self) -> int:
        return hash(("cset", self.mask))

    def __repr__(self) -> str:
        return f"ComponentSet({', '.join(map(str, self))})"


EMPTY_SET = ComponentSet(0)


@dataclass(frozen=True)
class DPI:
    """Diagnosis problem instance: components, behaviors, knowledge, findings.

    ``behaviors[i]`` is the consequent of the health implication generated
    for ``comps[i]``; ``background`` holds general system knowledge that is
    always asserted. ``rates`` optionally annotates the instance with
    per-component fault probabilities (carried along for the file format
    and the probability-ordered engines; the semantic predicates ignore it).
    """

    name: str
    comps: tuple[ComponentId, ...]
    behaviors: tuple[Sentence, ...]
    background: tuple[Sentence, ...] = ()
    obs: tuple[Sentence, ...] = ()
    meas: tuple[Sentence, ...] = ()
    rates: "FailureRates | None" = None

    @property
    def n(self) -> int:
        return len(self.comps)

    def all_components(self) -> ComponentSet:
        return ComponentSet.full(self.n)

    def ok_atom(self, index: int) -> Atom:
        return Atom(OK_PREFIX + self.comps[index].name)

    def atom_names(self) -> tuple[str, ...]:
        """User-level vocabulary: every atom in behaviors, background, OBS, MEAS."""
        names = collect_atoms(self.behaviors) | collect_atoms(self.background) \
            | collect_atoms(self.obs) | collect_atoms(self.meas)
        return tuple(sorted(names))

    def with_meas(self, sentence: Sentence) -> "DPI":
        return replace(self, meas=self.meas + (sentence,))

    def comp_by_name(self, name: str) -> ComponentId:
        for comp in self.comps:
            if comp.name == name:
                return comp
        raise KeyError(name)

    def set_by_names(self, names: Iterable[str]) -> ComponentSet:
        return ComponentSet.from_indices(self.comp_by_name(n).index for n in names)

    def label(self, cs: ComponentSet) -> str:
        return "{" + ", ".join(self.comps[i].name for i in cs) + "}"


@dataclass(frozen=True)
class FailureRates:
    """Per-component fault probability, each strictly inside (0, 1)."""

    values: tuple[float, ...]

    def __post_init__(self):
        for p in self.values:
            if not 0.0 < p < 1.0:
                raise ValueError(f"failure rate {p} outside the open interval (0, 1)")

    @classmethod
    def uniform(cls, n: int, p: float = 0.1) -> "FailureRates":
        return cls((p,) * n)

    def __getitem__(self, index: int) -> float:
        return self.values[index]

    def __len__(self) -> int:
        return len(self.values)


KIND_ALL = "all"


@dataclass(frozen=True)
class DiagnosisQuery:
    """How many diagnoses to compute, with what property, in what order."""

    k: int | Literal["all"] = "all"
    property_: Literal["none", "min_cardinality"] = "none"
    order: Literal["cardinality", "probability", "none"] = "cardinality"

    def __post_init__(self):
        if self.k != KIND_ALL and (not isinstance(self.k, int) or self.k < 1):
            raise ValueError("k must be a positive integer or 'all'")
        if self.property_ not in ("none", "min_cardinality"):
            raise ValueError(f"unknown property {self.property_!r}")
        if self.order not in ("cardinality", "probability", "none"):
            raise ValueError(f"unknown order {self.order!r}")
        if self.property_ == "min_cardinality" and self.order == "probability":
            raise ValueError("min-cardinality queries order by cardinality or not at all")

    @property
    def limit(self) -> float:
        return math.inf if self.k == KIND_ALL else self.k


def diagnosis_probability(d: ComponentSet, rates: FailureRates) -> float:
    """Independent-failure product: faulty components fail, the rest do not."""
    p = 1.0
    for i, rate in enumerate(rates.values):
        p *= rate if i in d else 1.0 - rate
    return p


def is_diagnosis(dpi: DPI, d: ComponentSet, oracle: ConsistencyOracle) -> bool:
    """True iff assuming exactly the components in ``d`` abnormal is consistent."""
    return oracle.check(encode_dpi(dpi, ok=dpi.all_components() - d, nok=d))


def is_minimal_diagnosis(dpi: DPI, d: ComponentSet, oracle: ConsistencyOracle) -> bool:
    """Diagnosis with no single-element removal remaining a diagnosis.

    Single-element removals suffice: the diagnosis property is monotone
    under supersets in a weak fault model, so any diagnosis strictly inside
    ``d`` extends to one obtained by removing a single element.
    """
    if not is_diagnosis(dpi, d, oracle):
        return False
    return all(not is_diagnosis(dpi, d.without_index(i), oracle) for i in d)


def is_conflict(dpi: DPI, c: ComponentSet, oracle: ConsistencyOracle) -> bool:
    """True iff assuming every component in ``c`` healthy is inconsistent."""
    return not oracle.check(encode_dpi(dpi, ok=c, nok=EMPTY_SET))


def verify_duality(dpi: DPI, x: ComponentSet, oracle: ConsistencyOracle) -> bool:
    """Cross-check: ``x`` is a diagnosis exactly when its complement is no conflict."""
    return is_diagnosis(dpi, x, oracle) == (not is_conflict(dpi, dpi.all_components() - x, oracle))


def validate_dpi(dpi: DPI, oracle: ConsistencyOracle) -> DPI:
    """Check structural invariants and solvability; returns ``dpi`` unchanged.

    Rejects instances that are inconsistent even with every component
    abnormal: every engine here assumes at least one diagnosis exists.
    """
    if len(dpi.behaviors) != len(dpi.comps):
        raise ValueError("exactly one behavior sentence per component required")
    names = [c.name for c in dpi.comps]
    if len(set(names)) != len(names):
        raise ValueError("component names must be unique")
    for i, comp in enumerate(dpi.comps):
        if comp.index != i:
            raise ValueError("component indices must be dense and ascending")
    for s in (*dpi.behaviors, *dpi.background, *dpi.obs, *dpi.meas):
        for atom in s.atoms():
            if atom.startswith(OK_PREFIX):
                raise ValueError(
                    f"atom {atom!r} uses the reserved health-literal prefix {OK_PREFIX!r}")
    if dpi.rates is not None and len(dpi.rates) != dpi.n:
        raise ValueError("failure rates must cover every component")
    if not is_diagnosis(dpi, dpi.all_components(), oracle):
        raise NoDiagnosisError(
            f"instance {dpi.name!r} has no diagnosis: observations contradict "
            "the background knowledge even with all components abnormal")
    return dpi
