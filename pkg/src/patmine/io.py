"""Readers and writers for every pipeline artifact.

All JSON is UTF-8 with stable key order (insertion order of the builders);
CSV headers are fixed. The edge list uses the exact ``Source,Target,Weight``
header.
"""

from __future__ import annotations

import csv
import hashlib
import json
import xml.etree.ElementTree as ET
from pathlib import Path

from .errors import SchemaError
from .graph import CentralityScores, CollabNetwork
from .ingest import CoRegistrationEdge, PatentRecord

EDGES_HEADER = ["Source", "Target", "Weight"]


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def write_edges_csv(path, edges: list[CoRegistrationEdge]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(EDGES_HEADER)
        for e in edges:
            writer.writerow([e.source, e.target, e.weight])


def read_edges_csv(path) -> list[CoRegistrationEdge]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"edge list not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != EDGES_HEADER:
            raise SchemaError(
                f"edge list {path.name} must have header Source,Target,Weight")
        edges = []
        for row in reader:
            if not row:
                continue
            edges.append(CoRegistrationEdge(row[0], row[1], int(row[2])))
    return edges


def write_corpus_jsonl(path, records: list[PatentRecord]) -> None:
    """Normalized corpus artifact: one validated record per line."""
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps({
                "id": r.id,
                "title": r.title,
                "abstract": r.abstract,
                "contributors": r.contributors,
                "year": r.year,
            }, ensure_ascii=False) + "\n")


def read_corpus_jsonl(path) -> list[PatentRecord]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"corpus artifact not found: {path}")
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            records.append(PatentRecord(
                id=str(obj["id"]),
                title=obj.get("title", ""),
                abstract=obj.get("abstract", ""),
                contributors=[str(c) for c in obj.get("contributors", [])],
                year=int(obj["year"]),
            ))
    return records


def corpus_hash(records: list[PatentRecord]) -> str:
    digest = hashlib.sha256()
    for r in records:
        digest.update(json.dumps({
            "id": r.id, "title": r.title, "abstract": r.abstract,
            "contributors": r.contributors, "year": r.year,
        }, sort_keys=True, ensure_ascii=False).encode("utf-8"))
        digest.update(b"\n")
    return digest.hexdigest()


def write_rejects_jsonl(path, rejects: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for item in rejects:
            fh.write(json.dumps(item, ensure_ascii=False) + "\n")


def write_gexf(path, net: CollabNetwork) -> None:
    """GEXF 1.2 export: labeled nodes, weighted undirected edges."""
    root = ET.Element("gexf", {
        "xmlns": "http://www.gexf.net/1.2draft",
        "version": "1.2",
    })
    graph = ET.SubElement(root, "graph", {"defaultedgetype": "undirected"})
    nodes = ET.SubElement(graph, "nodes")
    for i, name in enumerate(net.names):
        ET.SubElement(nodes, "node", {"id": str(i), "label": name})
    edges = ET.SubElement(graph, "edges")
    eid = 0
    for u in range(net.n):
        for ei in range(net.indptr[u], net.indptr[u + 1]):
            v = int(net.indices[ei])
            if u < v:
                ET.SubElement(edges, "edge", {
                    "id": str(eid),
                    "source": str(u),
                    "target": str(v),
                    "weight": _fmt_weight(net.weights[ei]),
                })
                eid += 1
    tree = ET.ElementTree(root)
    ET.indent(tree)
    tree.write(path, encoding="utf-8", xml_declaration=True)


def _fmt_weight(w: float) -> str:
    return str(int(w)) if float(w).is_integer() else repr(float(w))


def write_centrality_csv(path, scores: list[CentralityScores]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["name", "measure", "value"])
        for sc in scores:
            for name, value in zip(sc.names, sc.values):
                writer.writerow([name, sc.measure, repr(float(value))])


def centrality_json_rows(scores: list[CentralityScores]) -> list[dict]:
    rows = []
    for sc in scores:
        for name, value in zip(sc.names, sc.values):
            rows.append({"name": name, "measure": sc.measure,
                         "value": float(value)})
    return rows


def write_partition_csv(path, names: list[str], assignment) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["Name", "CommunityId"])
        for name, cid in zip(names, assignment):
            writer.writerow([name, int(cid)])


def write_clusters_csv(path, ids: list[str], assignment) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "cluster"])
        for pid, cid in zip(ids, assignment):
            writer.writerow([pid, int(cid)])


def read_clusters_csv(path) -> dict[str, int]:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"cluster assignment not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["id", "cluster"]:
            raise SchemaError(f"{path.name} must have header id,cluster")
        return {row[0]: int(row[1]) for row in reader if row}


def write_yearly_csv(path, series) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year", "count", "cumulative"])
        for year, count, cum in zip(series.years(), series.counts,
                                    series.cumulative):
            writer.writerow([year, count, cum])


def write_scurves_csv(path, samples_by_cluster: dict[int, list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cluster", "t", "y"])
        for cluster in sorted(samples_by_cluster):
            for t, y in samples_by_cluster[cluster]:
                writer.writerow([cluster, repr(float(t)), repr(float(y))])


def read_series_csv(path) -> dict[str, list[tuple[int, int]]]:
    """Hand-written per-cluster yearly counts: header cluster,year,count."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"series file not found: {path}")
    out: dict[str, list[tuple[int, int]]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["cluster", "year", "count"]:
            raise SchemaError(f"{path.name} must have header cluster,year,count")
        for row in reader:
            if not row:
                continue
            out.setdefault(row[0], []).append((int(row[1]), int(row[2])))
    return out


def load_sibling_manifest(artifact_path) -> dict | None:
    """The run manifest written next to an artifact, if any."""
    manifest = Path(artifact_path).parent / "run_manifest.json"
    if manifest.exists():
        return read_json(manifest)
    return None
