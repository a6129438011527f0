"""diagkit: a model-based diagnosis workbench over a weak fault model.

Compute minimal diagnoses with conflict-directed and direct engines, refine
them through sequential measurements, and verify each engine's claimed
feature classification empirically against a brute-force oracle.
"""

from .errors import DiagkitError
from .formula import Atom, And, Or, Not, Implies, Iff, TRUE, FALSE, parse_sentence, to_text
from .model import (DPI, ComponentId, ComponentSet, DiagnosisQuery, FailureRates,
                    diagnosis_probability, is_conflict, is_diagnosis,
                    is_minimal_diagnosis, validate_dpi, verify_duality)
from .reasoner import (ConsistencyOracle, SatOracle, TruthTableOracle,
                       check_consistent, check_entailed, encode_dpi)
from .conflicts import ConflictRequest, enumerate_minimal_conflicts, find_minimal_conflict
from .engines import (ENGINE_IDS, DiagnosisResult, RunStats, run_brute_force,
                      run_engine, run_greedy_heuristic, run_hs_tree,
                      run_inv_hs_tree, run_ucs_hs_tree)
from .taxonomy import (ConformanceReport, FeatureVector, claimed_vector,
                       emit_table, run_conformance)
from .sequential import (MeasurementQuery, Session, SimulatedOracle,
                         create_session, ingest_answer, next_query,
                         propose_measurement, run_simulated_session)
from .dpi_format import parse_dpi, print_dpi
from .corpus import CorpusSpec, generate_corpus, independent_conflict_family

__version__ = "0.1.0"
