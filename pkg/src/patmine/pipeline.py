"""Pipeline orchestration: ingest -> network -> communities -> vectors ->
clusters -> life-cycle fits, with per-stage artifact emission.

Each stage is a function over in-memory objects plus a writer, so the
subcommands and the monolithic ``pipeline`` run share one code path and
produce byte-identical reports. Every run directory gets a
``run_manifest.json`` (config echo, versions, seed, corpus hash) and a
``timings.json`` (wall-clock seconds per stage; the one file excluded from
the byte-level determinism contract).
"""

from __future__ import annotations

import platform
import time
from pathlib import Path

import numpy as np

from . import __version__, _accel, cluster as cl, community, graph, io, lifecycle, textvec
from .config import PipelineConfig
from .errors import ArtifactMismatchError, EmptyScopeError
from .ingest import CoRegistrationEdge, PatentRecord, YearlySeries, build_edge_list, parse_corpus, yearly_series


def tool_versions() -> dict:
    versions = {
        "patmine": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "accel": "numba" if _accel.NUMBA_ENABLED else "numpy",
    }
    if _accel.NUMBA_ENABLED:
        import numba
        versions["numba"] = numba.__version__
    return versions


def write_manifest(outdir: Path, stage: str, cfg: PipelineConfig | None,
                   corpus_digest: str | None, outputs: list[str],
                   failed_stage: str | None = None,
                   error: str | None = None,
                   stats: dict | None = None) -> None:
    config_echo = cfg.as_dict() if cfg else None
    if config_echo:
        # the run directory is wherever this manifest lives
        config_echo.pop("out", None)
    manifest = {
        "tool": "patmine",
        "versions": tool_versions(),
        "stage": stage,
        "seed": cfg.seed if cfg else None,
        "corpus_hash": corpus_digest,
        "config": config_echo,
        "outputs": sorted(outputs),
    }
    if stats:
        manifest["stats"] = stats
    if failed_stage:
        manifest["failed_stage"] = failed_stage
        manifest["error"] = error
    io.write_json(outdir / "run_manifest.json", manifest)


def write_timings(outdir: Path, timings: dict[str, float]) -> None:
    io.write_json(outdir / "timings.json",
                  {k: round(v, 6) for k, v in timings.items()})


# ---------------------------------------------------------------------------
# stages
# ---------------------------------------------------------------------------

def stage_ingest(cfg: PipelineConfig, outdir: Path) -> tuple[list[PatentRecord], list[CoRegistrationEdge], dict]:
    result = parse_corpus(cfg.input, format=cfg.format,
                          schema_map=cfg.schema_map(),
                          contributors_sep=cfg.contributors_sep,
                          year_window=(cfg.year_min, cfg.year_max))
    records = result.records
    edges = build_edge_list(records)
    io.write_corpus_jsonl(outdir / "corpus.jsonl", records)
    io.write_rejects_jsonl(outdir / "rejects.jsonl", result.rejects)
    io.write_edges_csv(outdir / "edges.csv", edges)
    if records:
        io.write_yearly_csv(outdir / "yearly.csv", yearly_series(records))
    stats = {"records": len(records), "rejected": len(result.rejects),
             "duplicate_ids": result.duplicate_ids}
    return records, edges, stats


def stage_network(edges: list[CoRegistrationEdge], outdir: Path,
                  top_members: int = 10,
                  weighted_distances: bool = False) -> graph.CollabNetwork:
    net = graph.build_network(edges)
    scores = [
        graph.degree(net),
        graph.weighted_degree(net),
        graph.closeness(net, weighted=weighted_distances),
        graph.betweenness(net, normalized=True, weighted=weighted_distances),
        graph.eigenvector(net),
    ]
    io.write_json(outdir / "centrality.json", io.centrality_json_rows(scores))
    io.write_centrality_csv(outdir / "centrality.csv", scores)
    io.write_gexf(outdir / "graph.gexf", net)

    _, comp_sizes = graph.connected_components(net)
    stats = graph.degree_stats(net)
    top = {sc.measure: [{"name": n, "value": v}
                        for n, v in graph.top_k(sc, top_members)]
           for sc in scores} if net.n else {}
    io.write_json(outdir / "graph_stats.json", {
        "nodes": net.n,
        "edges": net.edge_count,
        "average_degree": stats["average_degree"],
        "average_weighted_degree": stats["average_weighted_degree"],
        "density": stats["density"],
        "components": {"count": len(comp_sizes), "sizes": comp_sizes},
        "normalizations": {sc.measure: sc.normalization for sc in scores},
        "top": top,
    })
    return net


def stage_communities(net: graph.CollabNetwork, cfg: PipelineConfig,
                      outdir: Path) -> community.Partition:
    if net.n == 0:
        # a corpus of solo registrations has no network to partition
        part = community.Partition(np.zeros(0, np.int64), 0.0,
                                   cfg.resolution, cfg.seed)
        stats = []
    else:
        part = community.detect_communities(net, resolution=cfg.resolution,
                                            seed=cfg.seed)
        stats = community.community_stats(net, part, top_n=cfg.top_members,
                                          min_size=cfg.min_community_size)
    io.write_partition_csv(outdir / "partition.csv", net.names, part.assignment)
    io.write_json(outdir / "communities.json", {
        "modularity": part.modularity,
        "resolution": part.resolution,
        "seed": part.seed,
        "community_count": part.community_count,
        "communities": [{
            "community": s.community,
            "nodes": s.node_count,
            "node_share_pct": round(s.node_share_pct, 2),
            "edges": s.edge_count,
            "edge_share_pct": round(s.edge_share_pct, 2),
            "density": round(s.internal_density, 4),
            "top_members": s.top_members,
        } for s in stats],
    })
    return part


def stage_vectors(records: list[PatentRecord], cfg: PipelineConfig):
    """Tokenize and vectorize the corpus.

    Returns (docs, vectors, vocab); vocab is the TF-IDF vocabulary, built
    even for imported embeddings since representative terms need it.
    """
    stopwords = textvec.load_stopwords(cfg.stopwords or None)
    docs = [textvec.preprocess(r, stopwords) for r in records]
    vocab, tfidf_vectors = textvec.tfidf_vectorize(
        docs, min_df=cfg.min_df, max_terms=cfg.max_terms or None)
    if cfg.vectors == "tfidf":
        vectors = tfidf_vectors
    else:
        vectors = textvec.import_embeddings(cfg.vectors, records)
        if cfg.normalize_vectors:
            for v in vectors:
                norm = np.linalg.norm(v.values)
                if norm > 0:
                    v.values = v.values / norm
    return docs, vectors, vocab


def stage_cluster(records, docs, vectors, vocab, cfg: PipelineConfig,
                  outdir: Path) -> cl.ClusterModel:
    if cfg.k:
        model = cl.kmeans(vectors, cfg.k, seed=cfg.seed, restarts=cfg.restarts,
                          max_iter=cfg.kmeans_max_iter, tol=cfg.kmeans_tol)
        report = None
    else:
        report, model = cl.select_k(vectors, k_min=cfg.k_min, k_max=cfg.k_max,
                                    seed=cfg.seed, restarts=cfg.restarts,
                                    max_iter=cfg.kmeans_max_iter,
                                    tol=cfg.kmeans_tol)
        io.write_json(outdir / "kselection.json", {
            "chosen_k": report.chosen_k,
            "scores": report.scores,
        })
    io.write_clusters_csv(outdir / "clusters.csv",
                          [r.id for r in records], model.assignment)
    terms = cl.representative_terms(model, docs, vocab, top_n=cfg.top_terms)
    shares = cl.cluster_share(model)
    counts = np.bincount(model.assignment, minlength=model.k)
    io.write_json(outdir / "terms.json", [{
        "cluster": c,
        "size": int(counts[c]),
        "share_pct": shares[c],
        "terms": terms[c],
    } for c in range(model.k)])
    return model


def stage_lifecycle(series_by_cluster: dict, cfg: PipelineConfig,
                    outdir: Path, extras: dict | None = None) -> list[dict]:
    """Fit each cluster's series, classify stages, emit reports.

    ``series_by_cluster`` maps a cluster label to a YearlySeries. ``extras``
    optionally carries {label: {"n_patents": ..., "share_pct": ...}} rows.
    """
    thresholds = lifecycle.StageThresholds(
        cfg.emerging_upper, cfg.growth_upper, cfg.maturity_upper)
    reports = []
    curves = {}
    t_now = max(s.years()[-1] for s in series_by_cluster.values())
    t_min = min(s.start_year for s in series_by_cluster.values())
    for label in sorted(series_by_cluster, key=str):
        series = series_by_cluster[label]
        fit = lifecycle.fit_logistic(series, max_iter=cfg.fit_max_iter)
        ratio, stage = lifecycle.classify_stage(fit, t_now, thresholds)
        extra = extras.get(label, {}) if extras else {}
        reports.append(lifecycle.StageReport(
            cluster=label,
            current_ratio=ratio,
            stage=stage,
            transition_years=lifecycle.stage_years(fit, thresholds),
            fit=fit,
            n_patents=extra.get("n_patents", 0),
            share_pct=extra.get("share_pct", 0.0),
        ))
        curves[label] = lifecycle.scurve_samples(
            fit, t_min, t_now + cfg.horizon_years, cfg.scurve_step)

    rows = []
    for rep in reports:
        row = {"cluster": rep.cluster}
        if extras and rep.cluster in extras:
            row.update({"n_patents": rep.n_patents,
                        "share_pct": rep.share_pct})
        row.update({
            "ceiling": rep.fit.K,
            "inflection_year": rep.fit.a,
            "shape": rep.fit.b,
            "rss": rep.fit.rss,
            "converged": rep.fit.converged,
            "current_year": t_now,
            "current_ratio": rep.current_ratio,
            "stage": rep.stage,
            "growth_start": rep.transition_years["growth_start"],
            "maturity_start": rep.transition_years["maturity_start"],
            "saturation_start": rep.transition_years["saturation_start"],
        })
        rows.append(row)
    io.write_json(outdir / "stages.json", rows)
    io.write_scurves_csv(outdir / "scurves.csv", curves)
    return rows


def cluster_series(records: list[PatentRecord], assignment_of: dict[str, int],
                   exclude_final_year: bool) -> dict[int, YearlySeries]:
    """Per-cluster yearly series, optionally dropping the in-progress year."""
    scoped = records
    if exclude_final_year and records:
        final = max(r.year for r in records)
        scoped = [r for r in records if r.year != final]
        if not scoped:
            raise EmptyScopeError("excluding the final year empties the corpus")
    out: dict[int, YearlySeries] = {}
    for c in sorted(set(assignment_of.values())):
        ids = {pid for pid, cc in assignment_of.items() if cc == c}
        out[c] = yearly_series(scoped, include_ids=ids)
    return out


# ---------------------------------------------------------------------------
# whole pipeline
# ---------------------------------------------------------------------------

def run_pipeline(cfg: PipelineConfig) -> dict:
    """Execute every stage; returns the manifest dict.

    On a stage failure the partial outputs stay in place, the manifest
    records the failing stage, and the exception propagates.
    """
    outdir = Path(cfg.out)
    outdir.mkdir(parents=True, exist_ok=True)
    timings: dict[str, float] = {}
    digest = None
    ingest_stats = None
    stage = "ingest"
    try:
        t0 = time.perf_counter()
        records, edges, ingest_stats = stage_ingest(cfg, outdir)
        digest = io.corpus_hash(records)
        timings["ingest"] = time.perf_counter() - t0
        if not records:
            raise EmptyScopeError(f"no valid records in {cfg.input}")

        stage = "network"
        t0 = time.perf_counter()
        net = stage_network(edges, outdir, top_members=cfg.top_members,
                            weighted_distances=cfg.weighted_distances)
        timings["network"] = time.perf_counter() - t0

        stage = "communities"
        t0 = time.perf_counter()
        stage_communities(net, cfg, outdir)
        timings["communities"] = time.perf_counter() - t0

        stage = "vectors"
        t0 = time.perf_counter()
        docs, vectors, vocab = stage_vectors(records, cfg)
        timings["vectors"] = time.perf_counter() - t0

        stage = "cluster"
        t0 = time.perf_counter()
        model = stage_cluster(records, docs, vectors, vocab, cfg, outdir)
        timings["cluster"] = time.perf_counter() - t0

        stage = "lifecycle"
        t0 = time.perf_counter()
        assignment_of = {r.id: int(c) for r, c in zip(records, model.assignment)}
        series = cluster_series(records, assignment_of, cfg.exclude_final_year)
        shares = cl.cluster_share(model)
        counts = np.bincount(model.assignment, minlength=model.k)
        extras = {c: {"n_patents": int(counts[c]), "share_pct": shares[c]}
                  for c in range(model.k)}
        stage_lifecycle(series, cfg, outdir, extras)
        timings["lifecycle"] = time.perf_counter() - t0
    except Exception as exc:
        write_manifest(outdir, "pipeline", cfg, digest,
                       [p.name for p in outdir.iterdir() if p.is_file()],
                       failed_stage=stage, error=str(exc), stats=ingest_stats)
        write_timings(outdir, timings)
        raise

    outputs = [p.name for p in outdir.iterdir()
               if p.is_file() and p.name not in ("run_manifest.json", "timings.json")]
    write_manifest(outdir, "pipeline", cfg, digest, outputs, stats=ingest_stats)
    write_timings(outdir, timings)
    return io.read_json(outdir / "run_manifest.json")


def check_corpus_consistency(artifact_path, records: list[PatentRecord]) -> None:
    """Refuse to combine artifacts built from a different corpus."""
    manifest = io.load_sibling_manifest(artifact_path)
    if manifest is None:
        return
    recorded = manifest.get("corpus_hash")
    if recorded and recorded != io.corpus_hash(records):
        raise ArtifactMismatchError(
            f"{Path(artifact_path).name} was produced from a different corpus "
            f"(hash {recorded[:12]} != current corpus); refusing to mix artifacts")
