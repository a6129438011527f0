"""Command-line interface.

Subcommands: ``diagnose`` (one-shot engine run), ``conformance`` (feature
classification report), ``session`` (sequential diagnosis, simulated or
interactive), ``bench`` (engine statistics / kernel backend comparison)
and ``serve`` (the HTTP session service).

Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bench as bench_mod
from . import taxonomy
from .dpi_format import parse_dpi
from .engines import ENGINE_IDS, run_engine
from .errors import DiagkitError
from .model import DiagnosisQuery, is_minimal_diagnosis
from .reasoner import SatOracle
from .sequential import (DEFAULT_LEADING_K, DEFAULT_PROBABILITY_THRESHOLD,
                         create_session, ingest_answer, next_query,
                         run_simulated_session, skip_query)
from .service import serve_sessions

__all__ = ["main", "build_parser"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diagkit",
        description="Model-based diagnosis workbench (weak fault model)")
    sub = parser.add_subparsers(dest="command", required=True)

    diag = sub.add_parser("diagnose", help="compute minimal diagnoses for a .dpi file")
    diag.add_argument("file", help="path to the .dpi document")
    diag.add_argument("--engine", default="hs_tree", choices=ENGINE_IDS)
    diag.add_argument("--k", default="all",
                      help="number of diagnoses, or 'all' (default)")
    diag.add_argument("--order", default=None,
                      choices=("cardinality", "probability", "none"),
                      help="emission order (defaults to the engine's natural order)")
    diag.add_argument("--property", dest="property_", default="none",
                      choices=("none", "min_cardinality"))
    diag.add_argument("--format", default="table", choices=("table", "json"))
    diag.add_argument("--seed", type=int, default=0, help="greedy engine seed")
    diag.add_argument("--restarts", type=int, default=8, help="greedy restart budget")

    conf = sub.add_parser("conformance",
                          help="verify engine feature claims against the oracle")
    conf.add_argument("--corpus-seed", type=int, default=42)
    conf.add_argument("--corpus-size", type=int, default=30)
    conf.add_argument("--n-components", type=int, default=6)
    conf.add_argument("--out", default="markdown", choices=("markdown", "csv", "json"))

    sess = sub.add_parser("session", help="sequential diagnosis session")
    sess.add_argument("file", help="path to the .dpi document")
    mode = sess.add_mutually_exclusive_group(required=True)
    mode.add_argument("--simulate", metavar="COMPONENTS",
                      help="comma-separated ground-truth components, e.g. c2,c3")
    mode.add_argument("--interactive", action="store_true",
                      help="answer measurement queries on standard input")
    sess.add_argument("--engine", default="hs_tree", choices=ENGINE_IDS)
    sess.add_argument("--leading-k", type=int, default=DEFAULT_LEADING_K)
    sess.add_argument("--mode", default="stateless", choices=("stateless", "stateful"))
    sess.add_argument("--threshold", type=float, default=None,
                      help="stop once one diagnosis holds this probability mass "
                           "(default: 1.0 when simulating, %(default)s otherwise)")
    sess.add_argument("--out", default=None, help="write the transcript to a file")

    bench = sub.add_parser("bench", help="benchmark engines or kernel backends")
    bench.add_argument("--corpus-seed", type=int, default=42)
    bench.add_argument("--corpus-size", type=int, default=20)
    bench.add_argument("--n-components", type=int, default=6)
    bench.add_argument("--compare-backends", action="store_true",
                       help="time the jitted DPLL kernel against the pure-Python "
                            "fallback instead of per-engine statistics")

    serve = sub.add_parser("serve", help="run the HTTP session service")
    serve.add_argument("--port", type=int, default=8731)
    serve.add_argument("--host", default="127.0.0.1")

    return parser


def _read_file(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise DiagkitError(f"cannot read {path}: {exc.strerror}") from None


def _cmd_diagnose(args) -> int:
    oracle = SatOracle()
    dpi = parse_dpi(_read_file(args.file), oracle)
    k = args.k if args.k == "all" else int(args.k)
    order = args.order
    if order is None:
        order = "probability" if args.engine == "ucs_hs_tree" else (
            "cardinality" if args.engine in ("hs_tree", "brute_force") else "none")
    query = DiagnosisQuery(k=k, property_=args.property_, order=order)
    result = run_engine(args.engine, dpi, query, oracle, seed=args.seed,
                        restarts=args.restarts)
    if args.format == "json":
        payload = {
            "format_version": 1,
            "engine": result.engine,
            "instance": dpi.name,
            "diagnoses": [[dpi.comps[i].name for i in d] for d in result.diagnoses],
            "probabilities": [round(p, 9) for p in result.probabilities]
            if result.probabilities is not None else None,
            "stats": result.stats.__dict__,
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
        return 0
    print(f"instance {dpi.name}: engine={result.engine} k={args.k} order={order}")
    for rank, diag in enumerate(result.diagnoses, start=1):
        prob = ""
        if result.probabilities is not None:
            prob = f"  p={result.probabilities[rank - 1]:.6g}"
        print(f"{rank:3d}. {dpi.label(diag)}{prob}")
    stats = result.stats
    print(f"stats: oracle_calls={stats.oracle_calls} "
          f"nodes_expanded={stats.nodes_expanded} "
          f"peak_live_nodes={stats.peak_live_nodes} wall_steps={stats.wall_steps}")
    return 0


def _cmd_conformance(args) -> int:
    report = taxonomy.run_conformance(seed=args.corpus_seed, count=args.corpus_size,
                                      n_components=args.n_components)
    sys.stdout.write(taxonomy.emit_table(report, args.out))
    return 0 if all(row.conforms for row in report.rows) else 1


def _cmd_session(args) -> int:
    oracle = SatOracle()
    dpi = parse_dpi(_read_file(args.file), oracle)

    if args.simulate is not None:
        names = [n.strip() for n in args.simulate.split(",") if n.strip()]
        ground_truth = dpi.set_by_names(names)
        if not is_minimal_diagnosis(dpi, ground_truth, oracle):
            raise DiagkitError(
                f"{dpi.label(ground_truth)} is not a minimal diagnosis of {dpi.name}")
        threshold = 1.0 if args.threshold is None else args.threshold
        session = run_simulated_session(dpi, ground_truth, engine=args.engine,
                                        oracle=oracle, leading_k=args.leading_k,
                                        mode=args.mode, threshold=threshold)
        transcript = "\n".join(session.transcript) + "\n"
        if args.out:
            with open(args.out, "w", encoding="utf-8") as handle:
                handle.write(transcript)
        else:
            sys.stdout.write(transcript)
        return 0

    threshold = DEFAULT_PROBABILITY_THRESHOLD if args.threshold is None else args.threshold
    session = create_session(dpi, engine=args.engine, leading_k=args.leading_k,
                             mode=args.mode, threshold=threshold, oracle=oracle)
    print(f"session on {dpi.name}: {len(session.leading)} leading diagnoses")
    while session.status == "active":
        session, query = next_query(session, oracle)
        prop = query.proposition
        answer = input(f"measure {prop.name}? "
                       f"[y]es / [n]o / [s]kip / [q]uit: ").strip().lower()
        if answer in ("y", "yes"):
            session = ingest_answer(session, query, True, oracle)
        elif answer in ("n", "no"):
            session = ingest_answer(session, query, False, oracle)
        elif answer in ("s", "skip"):
            session = skip_query(session, query)
        elif answer in ("q", "quit"):
            print("session aborted")
            return 0
        else:
            print("please answer y, n, s or q")
            continue
        for diag, prob in zip(session.leading, session.probabilities):
            print(f"  {dpi.label(diag)}  p={prob:.3f}")
    final = session.final
    print(f"done: {dpi.label(final)} after {session.measurement_count} measurements")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write("\n".join(session.transcript) + "\n")
    return 0


def _cmd_bench(args) -> int:
    if args.compare_backends:
        rows = bench_mod.backend_comparison_rows(seed=args.corpus_seed)
    else:
        rows = bench_mod.engine_stats_rows(seed=args.corpus_seed,
                                           count=args.corpus_size,
                                           n_components=args.n_components)
    if not rows:
        return 0
    header = list(rows[0].keys())
    print(",".join(header))
    for row in rows:
        print(",".join(str(row[column]) for column in header))
    return 0


def _cmd_serve(args) -> int:
    server = serve_sessions(args.port, host=args.host)
    host, port = server.server_address[:2]
    print(f"session service listening on http://{host}:{port}/api/", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


_COMMANDS = {
    "diagnose": _cmd_diagnose,
    "conformance": _cmd_conformance,
    "session": _cmd_session,
    "bench": _cmd_bench,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except DiagkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyError as exc:
        print(f"error: unknown name {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
