"""Pipeline configuration: defaults, flat key-value config files, CLI merge.

Config files are plain text, one ``key = value`` per line; ``#`` starts a
comment. Values are coerced from the field types below; booleans accept
true/false/1/0/yes/no. Every resolved value is echoed into the run manifest
so any output is reproducible from its manifest.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from pathlib import Path


@dataclass
class PipelineConfig:
    input: str = ""
    format: str = "csv"  # csv | jsonl
    id_column: str = "id"
    title_column: str = "title"
    abstract_column: str = "abstract"
    contributors_column: str = "contributors"
    date_column: str = "date"
    contributors_sep: str = ";"
    year_min: int = 1900
    year_max: int = 2100
    stopwords: str = ""  # empty -> bundled English list
    vectors: str = "tfidf"  # tfidf | path to an embedding file
    normalize_vectors: bool = True
    min_df: int = 1
    max_terms: int = 5000
    k: int = 0  # 0 -> scan k_min..k_max by Davies-Bouldin
    k_min: int = 2
    k_max: int = 11
    seed: int = 42
    restarts: int = 10
    kmeans_max_iter: int = 300
    kmeans_tol: float = 1e-6
    resolution: float = 1.0
    min_community_size: int = 1
    weighted_distances: bool = False
    top_terms: int = 12
    top_members: int = 10
    fit_max_iter: int = 500
    emerging_upper: float = 0.10
    growth_upper: float = 0.50
    maturity_upper: float = 0.90
    horizon_years: int = 10
    scurve_step: float = 0.5
    threads: int = 1
    exclude_final_year: bool = False
    out: str = "out"

    def schema_map(self) -> dict[str, str]:
        return {
            "id": self.id_column,
            "title": self.title_column,
            "abstract": self.abstract_column,
            "contributors": self.contributors_column,
            "date": self.date_column,
        }

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


_FIELD_TYPES = {f.name: f.type for f in fields(PipelineConfig)}


def _coerce(key: str, raw: str):
    ftype = _FIELD_TYPES[key]
    raw = raw.strip()
    if ftype == "bool":
        low = raw.lower()
        if low in {"true", "1", "yes", "on"}:
            return True
        if low in {"false", "0", "no", "off"}:
            return False
        raise ValueError(f"config key {key}: expected a boolean, got {raw!r}")
    if ftype == "int":
        return int(raw)
    if ftype == "float":
        return float(raw)
    return raw


def load_config(path) -> PipelineConfig:
    """Parse a flat key-value config file into a PipelineConfig."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"config file not found: {path}")
    cfg = PipelineConfig()
    for line_no, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path.name}:{line_no}: expected 'key = value'")
        key, raw = stripped.split("=", 1)
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ValueError(f"{path.name}:{line_no}: unknown config key {key!r}")
        setattr(cfg, key, _coerce(key, raw))
    if cfg.format == "json-lines":
        cfg.format = "jsonl"
    return cfg


def apply_overrides(cfg: PipelineConfig, args) -> PipelineConfig:
    """Fold parsed CLI options over a config (CLI wins where given)."""
    mapping = {
        "input": "input",
        "seed": "seed",
        "k": "k",
        "k_min": "k_min",
        "k_max": "k_max",
        "vectors": "vectors",
        "stopwords": "stopwords",
        "out": "out",
        "threads": "threads",
        "restarts": "restarts",
        "resolution": "resolution",
        "min_size": "min_community_size",
        "format": "format",
    }
    for arg_name, cfg_name in mapping.items():
        value = getattr(args, arg_name, None)
        if value is not None:
            setattr(cfg, cfg_name, value)
    if getattr(args, "exclude_final_year", False):
        cfg.exclude_final_year = True
    return cfg
