"""Sequential diagnosis: compute leading diagnoses, query, answer, update.

A session loops through four phases: (1) compute the current leading
minimal diagnoses, (2) propose the measurement whose answer splits their
probability mass most evenly, (3) obtain the answer from a human or a
simulated oracle, (4) extend the instance's measurements and recompute.
The loop stops once a single minimal diagnosis remains or one candidate
holds enough of the probability mass.

Sessions are immutable; every operation returns an updated session whose
``transcript`` accumulates one canonical JSON line per phase event, so the
CLI walkthrough and the HTTP service produce byte-identical transcripts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import Iterable

from .conflicts import ConflictRequest, find_minimal_conflict
from .engines import run_engine
from .errors import (NoDiscriminatingMeasurementError, SessionStateError,
                     StaleQueryError)
from .formula import Atom, Not, Sentence, to_text
from .model import (DPI, ComponentSet, DiagnosisQuery, FailureRates,
                    diagnosis_probability)
from .reasoner import ConsistencyOracle, encode_dpi

__all__ = [
    "MeasurementQuery",
    "Session",
    "SimulatedOracle",
    "create_session",
    "propose_measurement",
    "next_query",
    "ingest_answer",
    "skip_query",
    "run_simulated_session",
    "DEFAULT_LEADING_K",
    "DEFAULT_PROBABILITY_THRESHOLD",
]

DEFAULT_LEADING_K = 6
DEFAULT_PROBABILITY_THRESHOLD = 0.95

_CONFLICT_REUSING_ENGINES = ("hs_tree", "ucs_hs_tree")


@dataclass(frozen=True)
class MeasurementQuery:
    """A proposed measurement plus its partition of the leading diagnoses.

    ``d_yes`` holds the diagnoses under which the proposition is entailed,
    ``d_no`` those under which its negation is entailed; the rest are
    undecided. Whatever the answer, every diagnosis on the contradicted
    side is eliminated.
    """

    query_id: int
    proposition: Sentence
    d_yes: tuple[ComponentSet, ...]
    d_no: tuple[ComponentSet, ...]
    d_undecided: tuple[ComponentSet, ...]


@dataclass(frozen=True)
class Session:
    """Sequential-diagnosis state: instance, leading candidates, history."""

    dpi: DPI
    engine: str
    rates: FailureRates
    leading_k: int
    mode: str  # "stateless" | "stateful"
    threshold: float
    leading: tuple[ComponentSet, ...]
    probabilities: tuple[float, ...]  # normalized over the leading diagnoses
    status: str  # "active" | "done"
    final: ComponentSet | None
    history: tuple[tuple[str, bool], ...]
    pending: MeasurementQuery | None
    skipped: frozenset[str]
    next_query_id: int
    cached_conflicts: tuple[ComponentSet, ...]
    transcript: tuple[str, ...]

    @property
    def measurement_count(self) -> int:
        return len(self.history)


def _transcript_line(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _diag_names(dpi: DPI, sets: Iterable[ComponentSet]) -> list[list[str]]:
    return [[dpi.comps[i].name for i in d] for d in sets]


def _compute_leading(dpi: DPI, engine: str, rates: FailureRates, leading_k: int,
                     oracle: ConsistencyOracle, mode: str,
                     cached: tuple[ComponentSet, ...]):
    """Leading diagnoses plus the refreshed conflict cache.

    Runs the engine exhaustively and truncates level-complete: the cut
    never lands inside a run of equal-rank diagnoses, so the leading set is
    independent of tree shape and therefore identical across the stateless
    and stateful modes.

    Stateful mode reuses conflicts found in earlier iterations. A conflict
    stays a conflict when measurements are added (consistency checks are
    monotone) but may lose minimality, so each cached conflict is re-shrunk
    against the extended instance before being handed to the engine.
    """
    sink: list | None = None
    seeds: list[ComponentSet] | None = None
    if mode == "stateful" and engine in _CONFLICT_REUSING_ENGINES:
        sink = []
        seeds = []
        for stale in cached:
            fresh = find_minimal_conflict(
                ConflictRequest(dpi, candidate_scope=stale), oracle)
            if fresh is not None and fresh not in seeds:
                seeds.append(fresh)

    order = "probability" if engine == "ucs_hs_tree" else (
        "cardinality" if engine in ("hs_tree", "brute_force") else "none")
    query = DiagnosisQuery(k="all", order=order)
    kwargs = {}
    if engine in _CONFLICT_REUSING_ENGINES:
        kwargs = {"seed_conflicts": seeds, "conflict_sink": sink}
    result = run_engine(engine, dpi, query, oracle, rates=rates, **kwargs)

    diags = list(result.diagnoses)
    if len(diags) > leading_k:
        if engine == "ucs_hs_tree":
            rank = lambda d: diagnosis_probability(d, rates)
        else:
            rank = len
        cut = leading_k
        while cut < len(diags) and rank(diags[cut]) == rank(diags[cut - 1]):
            cut += 1
        diags = diags[:cut]

    raw = [diagnosis_probability(d, rates) for d in diags]
    total = sum(raw)
    probs = tuple(p / total for p in raw)
    new_cache = tuple((seeds or []) + (sink or [])) if sink is not None else cached
    return tuple(diags), probs, new_cache


def _status(leading, probs, threshold):
    if len(leading) == 1:
        return "done", leading[0]
    best = max(range(len(probs)), key=lambda i: probs[i])
    if probs[best] >= threshold:
        return "done", leading[best]
    return "active", None


def create_session(dpi: DPI, engine: str = "hs_tree",
                   rates: FailureRates | None = None,
                   leading_k: int = DEFAULT_LEADING_K,
                   mode: str = "stateless",
                   threshold: float = DEFAULT_PROBABILITY_THRESHOLD,
                   oracle: ConsistencyOracle | None = None) -> Session:
    if mode not in ("stateless", "stateful"):
        raise ValueError(f"unknown session mode {mode!r}")
    if oracle is None:
        from .reasoner import SatOracle
        oracle = SatOracle()
    rates = rates or dpi.rates or FailureRates.uniform(dpi.n)
    leading, probs, cache = _compute_leading(dpi, engine, rates, leading_k,
                                             oracle, mode, ())
    status, final = _status(leading, probs, threshold)
    line = _transcript_line({
        "event": "init", "instance": dpi.name, "engine": engine, "mode": mode,
        "leading": _diag_names(dpi, leading),
        "probabilities": [round(p, 6) for p in probs], "status": status,
    })
    transcript = [line]
    if status == "done":
        transcript.append(_transcript_line({
            "event": "done", "final": _diag_names(dpi, [final])[0],
            "measurements": 0}))
    return Session(dpi=dpi, engine=engine, rates=rates, leading_k=leading_k,
                   mode=mode, threshold=threshold, leading=leading,
                   probabilities=probs, status=status, final=final, history=(),
                   pending=None, skipped=frozenset(), next_query_id=1,
                   cached_conflicts=cache, transcript=tuple(transcript))


def propose_measurement(session: Session, rates: FailureRates,
                        oracle: ConsistencyOracle) -> MeasurementQuery:
    """The query whose answer best halves the leading probability mass.

    Candidates are the observable atoms of the instance vocabulary (health
    literals never occur there; solver-internal variables never reach the
    sentence level). Among discriminating atoms, picks the one minimizing
    the yes/no probability-mass imbalance, ties broken by atom name.
    """
    if session.status != "active":
        raise SessionStateError("session is done; no further measurements")
    if len(session.leading) < 2:
        raise SessionStateError("measurement proposal requires at least two "
                                "leading diagnoses")
    dpi = session.dpi
    full = dpi.all_components()
    theories = [encode_dpi(dpi, ok=full - d, nok=d) for d in session.leading]
    mass = {d: p for d, p in zip(session.leading, session.probabilities)}

    best: tuple[float, str] | None = None
    best_query: MeasurementQuery | None = None
    for name in dpi.atom_names():
        if name in session.skipped:
            continue
        atom = Atom(name)
        yes, no, undecided = [], [], []
        for diag, theory in zip(session.leading, theories):
            if oracle.check_entailed(theory, atom):
                yes.append(diag)
            elif oracle.check_entailed(theory, Not(atom)):
                no.append(diag)
            else:
                undecided.append(diag)
        if not yes or not no:
            continue  # one-sided: some answer would eliminate nothing
        score = abs(sum(mass[d] for d in yes) - sum(mass[d] for d in no))
        if best is None or (score, name) < best:
            best = (score, name)
            best_query = MeasurementQuery(
                query_id=session.next_query_id, proposition=atom,
                d_yes=tuple(yes), d_no=tuple(no), d_undecided=tuple(undecided))
    if best_query is None:
        raise NoDiscriminatingMeasurementError(
            "every candidate atom leaves the leading diagnoses one-sided; "
            "raise leading_k to widen the candidate set")
    return best_query


def next_query(session: Session, oracle: ConsistencyOracle) -> tuple[Session, MeasurementQuery]:
    """Current pending query, proposing (and recording) one if necessary."""
    if session.pending is not None:
        return session, session.pending
    query = propose_measurement(session, session.rates, oracle)
    line = _transcript_line({
        "event": "query", "atom": to_text(query.proposition),
        "yes": len(query.d_yes), "no": len(query.d_no),
        "undecided": len(query.d_undecided)})
    session = replace(session, pending=query,
                      transcript=session.transcript + (line,))
    return session, query


def ingest_answer(session: Session, query: MeasurementQuery, answer: bool,
                  oracle: ConsistencyOracle) -> Session:
    """Extend MEAS with the answered proposition and recompute the leading set."""
    if session.status != "active":
        raise SessionStateError("session is done; answers are no longer accepted")
    if session.pending is None or session.pending.query_id != query.query_id:
        raise StaleQueryError(
            f"query {query.query_id} is not the pending proposal")
    sentence = query.proposition if answer else Not(query.proposition)
    dpi = session.dpi.with_meas(sentence)
    leading, probs, cache = _compute_leading(
        dpi, session.engine, session.rates, session.leading_k, oracle,
        session.mode, session.cached_conflicts)
    status, final = _status(leading, probs, session.threshold)
    atom_text = to_text(query.proposition)
    lines = [
        _transcript_line({"event": "answer", "atom": atom_text, "answer": answer}),
        _transcript_line({"event": "leading", "leading": _diag_names(dpi, leading),
                          "probabilities": [round(p, 6) for p in probs]}),
    ]
    history = session.history + ((atom_text, answer),)
    if status == "done":
        lines.append(_transcript_line({
            "event": "done", "final": _diag_names(dpi, [final])[0],
            "measurements": len(history)}))
    return replace(session, dpi=dpi, leading=leading, probabilities=probs,
                   status=status, final=final, history=history, pending=None,
                   next_query_id=session.next_query_id + 1,
                   cached_conflicts=cache,
                   transcript=session.transcript + tuple(lines))


def skip_query(session: Session, query: MeasurementQuery) -> Session:
    """Mark the queried atom unmeasurable and clear the pending proposal.

    The next ``next_query`` call re-proposes over the remaining atoms.
    """
    if session.pending is None or session.pending.query_id != query.query_id:
        raise StaleQueryError(f"query {query.query_id} is not the pending proposal")
    atom_text = to_text(query.proposition)
    line = _transcript_line({"event": "skip", "atom": atom_text})
    return replace(session, pending=None,
                   skipped=session.skipped | {atom_text},
                   next_query_id=session.next_query_id + 1,
                   transcript=session.transcript + (line,))


def widen_leading(session: Session, oracle: ConsistencyOracle) -> Session:
    """Recompute with an unbounded leading set (no-discrimination recovery)."""
    widened = replace(session, leading_k=max(session.leading_k, 1 << 30),
                      pending=None)
    leading, probs, cache = _compute_leading(
        widened.dpi, widened.engine, widened.rates, widened.leading_k, oracle,
        widened.mode, widened.cached_conflicts)
    status, final = _status(leading, probs, widened.threshold)
    return replace(widened, leading=leading, probabilities=probs,
                   status=status, final=final, cached_conflicts=cache)


class SimulatedOracle:
    """Answers measurement queries from a hidden fault state.

    The answer theory is the system knowledge under the ground-truth
    diagnosis. Entailed propositions are answered truthfully; propositions
    the weak fault model leaves open are answered negatively, and the
    chosen answer is added to the theory so later answers stay mutually
    consistent.
    """

    def __init__(self, dpi: DPI, ground_truth: ComponentSet,
                 oracle: ConsistencyOracle):
        self._theory = list(encode_dpi(dpi, ok=dpi.all_components() - ground_truth,
                                       nok=ground_truth))
        self._oracle = oracle
        self.ground_truth = ground_truth

    def answer(self, proposition: Sentence) -> bool:
        if self._oracle.check_entailed(self._theory, proposition):
            result = True
        elif self._oracle.check_entailed(self._theory, Not(proposition)):
            result = False
        else:
            result = False
        self._theory.append(proposition if result else Not(proposition))
        return result


def run_simulated_session(dpi: DPI, ground_truth: ComponentSet,
                          engine: str = "hs_tree",
                          rates: FailureRates | None = None,
                          oracle: ConsistencyOracle | None = None,
                          leading_k: int = DEFAULT_LEADING_K,
                          mode: str = "stateless",
                          threshold: float = 1.0) -> Session:
    """Loop the four phases against a simulated oracle until done.

    The default threshold of 1.0 disables the early probability stop, so
    termination means full discrimination whenever the vocabulary allows
    it. Returns the final session; its transcript is the replayable record.
    """
    if oracle is None:
        from .reasoner import SatOracle
        oracle = SatOracle()
    session = create_session(dpi, engine=engine, rates=rates, leading_k=leading_k,
                             mode=mode, threshold=threshold, oracle=oracle)
    sim = SimulatedOracle(dpi, ground_truth, oracle)
    widened = False
    while session.status == "active":
        try:
            session, query = next_query(session, oracle)
        except NoDiscriminatingMeasurementError:
            if not widened:
                widened = True
                session = widen_leading(session, oracle)
                continue
            # No atom separates the remaining candidates: close out on the
            # most probable one.
            best = max(range(len(session.probabilities)),
                       key=lambda i: session.probabilities[i])
            final = session.leading[best]
            line = _transcript_line({
                "event": "done", "final": _diag_names(session.dpi, [final])[0],
                "measurements": len(session.history)})
            session = replace(session, status="done", final=final,
                              transcript=session.transcript + (line,))
            break
        answer = sim.answer(query.proposition)
        session = ingest_answer(session, query, answer, oracle)
    return session
