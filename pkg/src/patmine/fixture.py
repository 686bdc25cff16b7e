"""Synthetic 200-patent fixture corpus with planted structure.

Three text clusters (disjoint topical vocabularies), three contributor
groups (dense intra-group collaboration, a handful of bridge patents), and
per-cluster publication years drawn from logistic growth curves whose
parameters are recorded in ``PLANTED``. Tests validate pipeline outputs
against this plant; the bundled data file is the seed-42 output of
``make_corpus``.

Regenerate with: ``python -m patmine.fixture --out corpus.jsonl``
"""

from __future__ import annotations

import argparse
import json
import math
from dataclasses import dataclass

import numpy as np

TOPIC_TERMS = {
    0: ["secure", "security", "key", "encryption", "authentication", "privacy",
        "trust", "cipher", "credential", "signature", "verification",
        "firewall", "intrusion", "token", "certificate", "tamper",
        "integrity", "attestation", "anomaly", "safeguard"],
    1: ["network", "wireless", "gateway", "routing", "protocol", "bandwidth",
        "antenna", "mesh", "latency", "spectrum", "modulation", "relay",
        "broadband", "cellular", "roaming", "handover", "beacon", "packet",
        "channel", "throughput"],
    2: ["sensor", "monitoring", "telemetry", "humidity", "temperature",
        "calibration", "actuator", "measurement", "environmental",
        "detector", "sampling", "probe", "acoustic", "optical", "vibration",
        "thermal", "moisture", "gauge", "meter", "irrigation"],
}

GENERIC_TERMS = ["device", "system", "method", "apparatus", "data", "module",
                 "unit", "controller", "platform", "interface"]

FILLER_WORDS = ["the", "a", "of", "for", "and", "with", "to", "in", "on", "is"]

CONTRIBUTOR_GROUPS = {
    0: ["Chen Wei", "Alvarez Maria", "Okonkwo Chidi", "Kim Minjun",
        "Haddad Layla", "Novak Petr", "Singh Priya", "Tanaka Hiro",
        "Mbeki Thandi", "Rossi Marco", "Ivanova Daria", "Fernandez Lucia"],
    1: ["Park Jisoo", "Mueller Hans", "Osei Kwame", "Li Na",
        "Johansson Erik", "Costa Ana", "Yamamoto Rin", "Dubois Claire",
        "Hassan Omar", "Petrov Nikolai"],
    2: ["Nguyen Linh", "Schmidt Anna", "Adeyemi Bola", "Wang Fang",
        "Eriksson Lars", "Moreau Paul", "Sato Yuki", "Khan Farah",
        "Silva Joao"],
}


@dataclass
class PlantedCluster:
    size: int
    inflection_year: float  # a
    shape: float            # b
    end_ratio: float        # cumulative share of the ceiling reached by 2024


PLANTED = {
    0: PlantedCluster(size=80, inflection_year=2017.7, shape=1.8, end_ratio=0.970),
    1: PlantedCluster(size=70, inflection_year=2021.6, shape=2.2, end_ratio=0.749),
    2: PlantedCluster(size=50, inflection_year=2025.0, shape=2.5, end_ratio=0.401),
}

FINAL_YEAR = 2024
DEFAULT_SEED = 42


def _logit(q: float) -> float:
    return math.log(q / (1.0 - q))


def _cluster_years(plant: PlantedCluster) -> list[int]:
    """Integer publication years tracing the planted growth curve."""
    years = []
    for i in range(1, plant.size + 1):
        q = plant.end_ratio * (i - 0.5) / plant.size
        tau = plant.inflection_year + plant.shape * _logit(q)
        years.append(min(math.ceil(tau), FINAL_YEAR))
    return years


def _make_text(rng: np.random.Generator, cluster: int) -> tuple[str, str]:
    topic = TOPIC_TERMS[cluster]
    title_terms = list(rng.choice(topic, size=3, replace=False))
    title_terms.append(str(rng.choice(GENERIC_TERMS)))
    title = " ".join(w.capitalize() for w in title_terms)

    n_topic = int(rng.integers(12, 19))
    n_generic = int(rng.integers(3, 6))
    n_filler = int(rng.integers(3, 6))
    words = (list(rng.choice(topic, size=n_topic, replace=True))
             + list(rng.choice(GENERIC_TERMS, size=n_generic, replace=True))
             + list(rng.choice(FILLER_WORDS, size=n_filler, replace=True)))
    rng.shuffle(words)
    return title, " ".join(words)


def _make_team(rng: np.random.Generator, cluster: int, bridge: bool) -> list[str]:
    pool = CONTRIBUTOR_GROUPS[cluster]
    size = int(rng.choice([2, 3, 4], p=[0.4, 0.4, 0.2]))
    team = list(rng.choice(pool, size=size, replace=False))
    if bridge:
        other = (cluster + 1) % 3
        team[-1] = str(rng.choice(CONTRIBUTOR_GROUPS[other]))
    return team


def make_corpus(seed: int = DEFAULT_SEED) -> tuple[list[dict], dict]:
    """Build the fixture rows plus the ground-truth plant description.

    Returns (records, truth) where truth maps each patent id to its planted
    cluster and records the group membership and curve parameters.
    """
    rng = np.random.default_rng(seed)
    rows = []
    truth_cluster: dict[str, int] = {}
    serial = 0
    for cluster, plant in PLANTED.items():
        years = _cluster_years(plant)
        for j, year in enumerate(years):
            serial += 1
            pid = f"P{serial:04d}"
            title, abstract = _make_text(rng, cluster)
            # two bridge patents per cluster keep the groups connected
            bridge = j in (10, 30)
            team = _make_team(rng, cluster, bridge)
            month = int(rng.integers(1, 13))
            day = int(rng.integers(1, 29))
            rows.append({
                "id": pid,
                "title": title,
                "abstract": abstract,
                "contributors": "; ".join(team),
                "date": f"{year}-{month:02d}-{day:02d}",
            })
            truth_cluster[pid] = cluster
    order = rng.permutation(len(rows))
    rows = [rows[i] for i in order]
    truth = {
        "cluster_of": truth_cluster,
        "groups": CONTRIBUTOR_GROUPS,
        "planted": PLANTED,
        "final_year": FINAL_YEAR,
    }
    return rows, truth


def write_corpus(path, seed: int = DEFAULT_SEED) -> None:
    rows, _ = make_corpus(seed)
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        description="Generate the synthetic patent fixture corpus")
    parser.add_argument("--out", required=True, help="output .jsonl path")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = parser.parse_args(argv)
    write_corpus(args.out, args.seed)
    print(f"wrote fixture corpus to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
