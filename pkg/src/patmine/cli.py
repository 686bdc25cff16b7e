"""Command-line interface.

Subcommands mirror the pipeline stages and are composable: feeding one
stage's artifacts to the next gives byte-identical reports to a monolithic
``patmine pipeline`` run with the same config and seed.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__, io, pipeline
from .config import PipelineConfig, apply_overrides, load_config
from .errors import PatmineError
from .graph import build_network
from .ingest import YearlySeries


def _common_options(sub):
    sub.add_argument("--config", help="flat key-value config file")
    sub.add_argument("--out", help="output directory (default from config)")
    sub.add_argument("--seed", type=int, help="seed for stochastic stages")
    sub.add_argument("--threads", type=int, help="worker threads (stage-level)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patmine",
        description="Patent analytics: collaboration network, communities, "
                    "text clusters and technology life-cycle forecasts")
    parser.add_argument("--version", action="version",
                        version=f"patmine {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("ingest", help="parse a corpus, emit edges and series")
    _common_options(p)
    p.add_argument("--input", help="corpus file (csv or jsonl)")
    p.add_argument("--format", choices=["csv", "jsonl"], help="corpus format")

    p = subs.add_parser("network", help="build the network, score centralities")
    _common_options(p)
    p.add_argument("--edges", required=True, help="edge list csv from ingest")

    p = subs.add_parser("communities", help="detect communities")
    _common_options(p)
    p.add_argument("--edges", required=True, help="edge list csv from ingest")
    p.add_argument("--resolution", type=float, help="modularity resolution")
    p.add_argument("--min-size", dest="min_size", type=int,
                   help="smallest community to report")

    p = subs.add_parser("cluster", help="vectorize and cluster patent texts")
    _common_options(p)
    p.add_argument("--corpus", required=True, help="corpus.jsonl from ingest")
    p.add_argument("--vectors", help="'tfidf' or an embedding file path")
    p.add_argument("--stopwords", help="stopword file, one term per line")
    p.add_argument("--k", type=int, help="fixed cluster count (skips the scan)")
    p.add_argument("--k-min", dest="k_min", type=int)
    p.add_argument("--k-max", dest="k_max", type=int)
    p.add_argument("--restarts", type=int)

    p = subs.add_parser("lifecycle", help="fit growth curves, classify stages")
    _common_options(p)
    p.add_argument("--corpus", help="corpus.jsonl from ingest")
    p.add_argument("--clusters", help="clusters.csv from the cluster stage")
    p.add_argument("--series", help="hand-written cluster,year,count csv")
    p.add_argument("--exclude-final-year", action="store_true", default=None,
                   help="drop the last (possibly partial) year before fitting")

    p = subs.add_parser("pipeline", help="run every stage")
    _common_options(p)
    p.add_argument("--input", help="corpus file (overrides config)")
    p.add_argument("--format", choices=["csv", "jsonl"])
    p.add_argument("--vectors", help="'tfidf' or an embedding file path")
    p.add_argument("--stopwords", help="stopword file")
    p.add_argument("--k", type=int)
    p.add_argument("--k-min", dest="k_min", type=int)
    p.add_argument("--k-max", dest="k_max", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--exclude-final-year", action="store_true", default=None)
    return parser


def _resolve_config(args) -> PipelineConfig:
    cfg = load_config(args.config) if args.config else PipelineConfig()
    return apply_overrides(cfg, args)


def _outdir(cfg: PipelineConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _finish(outdir: Path, stage: str, cfg: PipelineConfig, digest,
            timings: dict, stats: dict | None = None) -> None:
    outputs = [p.name for p in outdir.iterdir()
               if p.is_file() and p.name not in ("run_manifest.json",
                                                 "timings.json")]
    pipeline.write_manifest(outdir, stage, cfg, digest, outputs, stats=stats)
    pipeline.write_timings(outdir, timings)


def cmd_ingest(args) -> int:
    cfg = _resolve_config(args)
    outdir = _outdir(cfg)
    t0 = time.perf_counter()
    records, _, stats = pipeline.stage_ingest(cfg, outdir)
    _finish(outdir, "ingest", cfg, io.corpus_hash(records),
            {"ingest": time.perf_counter() - t0}, stats=stats)
    print(f"ingested {len(records)} records -> {outdir}")
    return 0


def cmd_network(args) -> int:
    cfg = _resolve_config(args)
    outdir = _outdir(cfg)
    t0 = time.perf_counter()
    edges = io.read_edges_csv(args.edges)
    upstream = io.load_sibling_manifest(args.edges)
    digest = upstream.get("corpus_hash") if upstream else None
    net = pipeline.stage_network(edges, outdir, top_members=cfg.top_members,
                                 weighted_distances=cfg.weighted_distances)
    _finish(outdir, "network", cfg, digest,
            {"network": time.perf_counter() - t0})
    print(f"scored {net.n} nodes / {net.edge_count} edges -> {outdir}")
    return 0


def cmd_communities(args) -> int:
    cfg = _resolve_config(args)
    outdir = _outdir(cfg)
    t0 = time.perf_counter()
    edges = io.read_edges_csv(args.edges)
    upstream = io.load_sibling_manifest(args.edges)
    digest = upstream.get("corpus_hash") if upstream else None
    net = build_network(edges)
    part = pipeline.stage_communities(net, cfg, outdir)
    _finish(outdir, "communities", cfg, digest,
            {"communities": time.perf_counter() - t0})
    print(f"found {part.community_count} communities "
          f"(modularity {part.modularity:.4f}) -> {outdir}")
    return 0


def cmd_cluster(args) -> int:
    cfg = _resolve_config(args)
    outdir = _outdir(cfg)
    t0 = time.perf_counter()
    records = io.read_corpus_jsonl(args.corpus)
    pipeline.check_corpus_consistency(args.corpus, records)
    docs, vectors, vocab = pipeline.stage_vectors(records, cfg)
    model = pipeline.stage_cluster(records, docs, vectors, vocab, cfg, outdir)
    _finish(outdir, "cluster", cfg, io.corpus_hash(records),
            {"cluster": time.perf_counter() - t0})
    print(f"clustered {len(records)} records into k={model.k} -> {outdir}")
    return 0


def cmd_lifecycle(args) -> int:
    cfg = _resolve_config(args)
    outdir = _outdir(cfg)
    t0 = time.perf_counter()
    digest = None
    extras = None
    if args.series:
        series = {}
        for label, rows in io.read_series_csv(args.series).items():
            rows.sort()
            start, end = rows[0][0], rows[-1][0]
            counts = [0] * (end - start + 1)
            for year, count in rows:
                counts[year - start] += count
            cumulative, total = [], 0
            for c in counts:
                total += c
                cumulative.append(total)
            series[label] = YearlySeries(start, counts, cumulative)
    elif args.corpus and args.clusters:
        records = io.read_corpus_jsonl(args.corpus)
        digest = io.corpus_hash(records)
        pipeline.check_corpus_consistency(args.corpus, records)
        pipeline.check_corpus_consistency(args.clusters, records)
        assignment_of = io.read_clusters_csv(args.clusters)
        missing = [r.id for r in records if r.id not in assignment_of]
        if missing:
            raise PatmineError(
                f"clusters file lacks {len(missing)} corpus ids "
                f"(first: {missing[0]})")
        series = pipeline.cluster_series(records, assignment_of,
                                         cfg.exclude_final_year)
        counts: dict[int, int] = {}
        for r in records:
            c = assignment_of[r.id]
            counts[c] = counts.get(c, 0) + 1
        extras = {c: {"n_patents": n,
                      "share_pct": round(100.0 * n / len(records), 1)}
                  for c, n in counts.items()}
    else:
        raise PatmineError(
            "lifecycle needs either --series or both --corpus and --clusters")
    rows = pipeline.stage_lifecycle(series, cfg, outdir, extras)
    _finish(outdir, "lifecycle", cfg, digest,
            {"lifecycle": time.perf_counter() - t0})
    print(f"fitted {len(rows)} cluster curves -> {outdir}")
    return 0


def cmd_pipeline(args) -> int:
    cfg = _resolve_config(args)
    if not cfg.input:
        raise PatmineError("pipeline needs an input corpus "
                           "(config key 'input' or --input)")
    manifest = pipeline.run_pipeline(cfg)
    print(f"pipeline complete -> {cfg.out} "
          f"({len(manifest['outputs'])} artifacts)")
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "network": cmd_network,
    "communities": cmd_communities,
    "cluster": cmd_cluster,
    "lifecycle": cmd_lifecycle,
    "pipeline": cmd_pipeline,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (PatmineError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
