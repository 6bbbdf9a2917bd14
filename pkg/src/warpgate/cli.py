"""Command line interface.

Subcommands: index, search, eval, gen-testbed, serve. Configuration
precedence is flags > config file (--config or WARPGATE_CONFIG) > built-in
defaults, and every run echoes the effective configuration as comment
lines so logs are self-describing. With --json those comments move to
stderr and stdout carries exactly one machine-readable JSON document;
search output matches the HTTP search response shape field for field.

Exit codes: 0 success, 1 user error (bad flags, missing files, unknown
tables), 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import traceback
from pathlib import Path

from .catalog import Catalog
from .embedder import EmbedderConfig, HashingEmbedder
from .engine import DiscoveryEngine, IndexManifest, SearchParams
from .errors import InvalidSpec, WarpgateError
from .evaluation import load_ground_truth, sampling_ablation
from .lsh import LshConfig
from .sampling import SampleSpec
from .testbed import NoiseProfile, TestbedSpec, generate_testbed

CONFIG_ENV = "WARPGATE_CONFIG"


class _Parser(argparse.ArgumentParser):
    # Usage errors (unknown flags, missing arguments) are user errors: exit 1.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="warpgate", description="semantic join discovery")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_config_flags(p):
        p.add_argument("--config", help="JSON config file (or WARPGATE_CONFIG)")
        p.add_argument("--sample-strategy", choices=["full", "head", "reservoir"])
        p.add_argument("--sample-size", type=int)
        p.add_argument("--sample-seed", type=int)
        p.add_argument("--dim", type=int, help="embedding dimension")
        p.add_argument("--lsh-tables", type=int)
        p.add_argument("--lsh-bits", type=int)
        p.add_argument("--threshold", type=float, help="similarity threshold")

    p_index = sub.add_parser("index", help="ingest a corpus and build an index")
    p_index.add_argument("--corpus", required=True)
    p_index.add_argument("--out", required=True, help="index file to write")
    p_index.add_argument(
        "--database-naming", choices=["flat", "per_subdirectory"], default="flat"
    )
    add_config_flags(p_index)
    p_index.add_argument("--json", action="store_true")

    p_search = sub.add_parser("search", help="find joinable columns")
    p_search.add_argument("--index", required=True)
    p_search.add_argument("--table", required=True)
    p_search.add_argument("--database")
    p_search.add_argument("--column", required=True)
    p_search.add_argument("-k", type=int, default=10)
    p_search.add_argument("--min-score", type=float)
    p_search.add_argument(
        "--include-query-table",
        action="store_true",
        help="allow candidates from the query table",
    )
    p_search.add_argument("--json", action="store_true")

    p_eval = sub.add_parser("eval", help="score an index against ground truth")
    p_eval.add_argument("--corpus", required=True)
    p_eval.add_argument("--truth", required=True)
    p_eval.add_argument("--ks", default="1,5,10", help="comma-separated cutoffs")
    p_eval.add_argument(
        "--sizes", default="10,100,1000", help="comma-separated sample sizes"
    )
    p_eval.add_argument("--report", default="warpgate_eval.json")
    add_config_flags(p_eval)
    p_eval.add_argument("--json", action="store_true")

    p_gen = sub.add_parser("gen-testbed", help="generate a synthetic corpus")
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--tables", type=int, default=10)
    p_gen.add_argument("--columns", type=int, default=5)
    p_gen.add_argument("--rows", type=int, default=1000)
    p_gen.add_argument("--pairs", type=int, default=20)
    p_gen.add_argument("--seed", type=int, default=7)
    p_gen.add_argument("--case-flip", type=float, default=0.15)
    p_gen.add_argument("--punctuation", type=float, default=0.10)
    p_gen.add_argument("--affix", type=float, default=0.10)
    p_gen.add_argument("--json", action="store_true")

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--index", required=True)
    p_serve.add_argument("--addr", help="host:port (or WARPGATE_ADDR)")
    p_serve.add_argument("--ui-dir", help="static frontend directory to mount at /ui")

    return parser


def _load_config_file(args) -> dict:
    path = getattr(args, "config", None) or os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise InvalidSpec(f"config file {path} must hold a JSON object")
    return data


def _resolve_configs(args) -> tuple[SampleSpec, EmbedderConfig, LshConfig]:
    file_cfg = _load_config_file(args)

    sample_d = dict(file_cfg.get("sample", {}))
    if args.sample_strategy is not None:
        sample_d["strategy"] = args.sample_strategy
    if args.sample_size is not None:
        sample_d["size"] = args.sample_size
    if args.sample_seed is not None:
        sample_d["seed"] = args.sample_seed
    sample = SampleSpec.from_dict(sample_d)

    embedder_d = dict(file_cfg.get("embedder", {}))
    if args.dim is not None:
        embedder_d["dimension"] = args.dim
    embedder = EmbedderConfig.from_dict(embedder_d)

    lsh_d = dict(file_cfg.get("lsh", {}))
    if args.lsh_tables is not None:
        lsh_d["num_tables"] = args.lsh_tables
    if args.lsh_bits is not None:
        lsh_d["bits_per_table"] = args.lsh_bits
    if args.threshold is not None:
        lsh_d["similarity_threshold"] = args.threshold
    lsh_d.setdefault("dimension", embedder.dimension)
    lsh = LshConfig.from_dict(lsh_d)
    return sample, embedder, lsh


def _echo(args, lines) -> None:
    stream = sys.stderr if getattr(args, "json", False) else sys.stdout
    for line in lines:
        print(line, file=stream)


def _echo_configs(args, sample, embedder, lsh) -> None:
    _echo(
        args,
        [
            f"# sample {json.dumps(sample.to_dict(), sort_keys=True)}",
            f"# embedder {json.dumps(embedder.to_dict(), sort_keys=True)}",
            f"# lsh {json.dumps(lsh.to_dict(), sort_keys=True)}",
        ],
    )


def cmd_index(args) -> int:
    sample, embedder_cfg, lsh_cfg = _resolve_configs(args)
    _echo_configs(args, sample, embedder_cfg, lsh_cfg)

    catalog = Catalog()
    report = catalog.register_corpus(args.corpus, database_naming=args.database_naming)
    for path, reason in report.rejected:
        print(f"warning: skipped {path}: {reason}", file=sys.stderr)

    engine = DiscoveryEngine.build(
        catalog,
        sample_spec=sample,
        embedder=HashingEmbedder(embedder_cfg),
        lsh_config=lsh_cfg,
        corpus_root=str(args.corpus),
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    engine.save(out)
    manifest_path = Path(str(out) + ".manifest.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(engine.manifest.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")

    if args.json:
        json.dump(
            {
                "index_path": str(out),
                "manifest_path": str(manifest_path),
                "manifest": engine.manifest.to_dict(),
                "ingest": report.to_dict(),
            },
            sys.stdout,
            indent=2,
            sort_keys=True,
        )
        print()
    else:
        m = engine.manifest
        print(
            f"indexed {m.columns_indexed} columns from {m.tables_indexed} tables "
            f"({len(m.columns_skipped)} skipped) in {m.build_seconds:.2f}s"
        )
        print(f"index written to {out}")
        print(f"manifest written to {manifest_path}")
    return 0


def cmd_search(args) -> int:
    engine = DiscoveryEngine.load(args.index)
    meta = engine.catalog.table_by_name(args.table, args.database)
    ref = engine.catalog.column_ref(meta.table_id, args.column)
    params = SearchParams(
        k=args.k,
        min_score=args.min_score,
        exclude_query_table=not args.include_query_table,
    )
    results = engine.search_topk(ref, params)
    if args.json:
        json.dump([c.to_dict() for c in results], sys.stdout)
        print()
    else:
        if not results:
            print("no candidates above threshold")
        for c in results:
            print(
                f"{c.score:.4f}  {c.database}.{c.table_name}.{c.column.column_name}"
            )
    return 0


def cmd_eval(args) -> int:
    sample, embedder_cfg, lsh_cfg = _resolve_configs(args)
    _echo_configs(args, sample, embedder_cfg, lsh_cfg)
    ks = tuple(int(x) for x in args.ks.split(",") if x)
    sizes = tuple(int(x) for x in args.sizes.split(",") if x)

    catalog = Catalog()
    report = catalog.register_corpus(args.corpus)
    for path, reason in report.rejected:
        print(f"warning: skipped {path}: {reason}", file=sys.stderr)
    truth = load_ground_truth(args.truth, catalog)
    if truth.dropped:
        print(f"warning: dropped {truth.dropped} unresolvable truth rows", file=sys.stderr)

    ablation = sampling_ablation(
        catalog,
        truth,
        sizes=sizes,
        ks=ks,
        sample_seed=sample.seed,
        embedder_config=embedder_cfg,
        lsh_config=lsh_cfg,
        corpus_root=str(args.corpus),
    )
    report_path = Path(args.report)
    ablation.save_json(report_path)
    csv_path = report_path.with_suffix(".csv")
    ablation.save_csv(csv_path)

    if args.json:
        json.dump(ablation.to_dict(), sys.stdout, indent=2, sort_keys=True)
        print()
    else:
        for label, run in ablation.runs.items():
            t = run.timing
            cells = "  ".join(
                f"p@{k}={run.precision[k]:.3f} r@{k}={run.recall[k]:.3f}" for k in run.ks
            )
            print(f"size={label:>5}  {cells}  lookup={t.mean_lookup_s * 1e3:.2f}ms")
        print(f"report written to {report_path}")
        print(f"plot data written to {csv_path}")
    return 0


def cmd_gen_testbed(args) -> int:
    spec = TestbedSpec(
        num_tables=args.tables,
        columns_per_table=args.columns,
        rows_per_table=args.rows,
        planted_pairs=args.pairs,
        noise=NoiseProfile(
            case_flip=args.case_flip,
            punctuation=args.punctuation,
            affix=args.affix,
        ),
        seed=args.seed,
    )
    result = generate_testbed(spec, args.out)
    if args.json:
        json.dump(
            {
                "corpus_dir": str(result.corpus_dir),
                "truth_path": str(result.truth_path),
                "tables": result.tables,
                "pairs": result.pairs,
            },
            sys.stdout,
            indent=2,
            sort_keys=True,
        )
        print()
    else:
        print(f"corpus written to {result.corpus_dir}")
        print(f"ground truth written to {result.truth_path}")
        print(f"{len(result.tables)} tables, {len(result.pairs)} planted pairs")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import ADDR_ENV, DEFAULT_ADDR, ServiceState, create_app

    engine = DiscoveryEngine.load(args.index)
    manifest_path = Path(str(args.index) + ".manifest.json")
    if manifest_path.exists():
        with open(manifest_path, "r", encoding="utf-8") as fh:
            engine.manifest = IndexManifest.from_dict(json.load(fh))

    state = ServiceState()
    state.engine = engine
    state.catalog = engine.catalog
    state.corpus_root = engine.index.extras.get("corpus_root", "")

    addr = args.addr or os.environ.get(ADDR_ENV) or DEFAULT_ADDR
    host, _, port_s = addr.rpartition(":")
    if not host or not port_s.isdigit():
        raise InvalidSpec(f"--addr must be host:port, got {addr!r}")
    app = create_app(state, ui_dir=args.ui_dir)
    print(f"serving on http://{host}:{port_s}")
    uvicorn.run(app, host=host, port=int(port_s), log_level="warning")
    return 0


_HANDLERS = {
    "index": cmd_index,
    "search": cmd_search,
    "eval": cmd_eval,
    "gen-testbed": cmd_gen_testbed,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _HANDLERS[args.command](args)
    except (WarpgateError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KeyboardInterrupt:
        return 1
    except Exception:
        traceback.print_exc(file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
