"""Turn patent titles+abstracts into numeric document vectors.

Two sources: a built-in TF-IDF path (self-contained) and an import path for
externally produced embedding vectors keyed by patent id.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import EmptyVocabularyError
from .ingest import PatentRecord

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


@dataclass
class TokenizedDoc:
    id: str
    tokens: list[str]


@dataclass
class Vocabulary:
    terms: list[str]
    document_frequency: dict[str, int]
    total_docs: int

    @property
    def size(self) -> int:
        return len(self.terms)


@dataclass
class DocVector:
    id: str
    values: np.ndarray
    dim: int
    source: str


def load_stopwords(path=None) -> set[str]:
    """Stopword set from a one-term-per-line file; bundled English default."""
    if path is None:
        text = resources.files("patmine.data").joinpath(
            "stopwords_en.txt").read_text(encoding="utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return {line.strip().casefold() for line in text.splitlines() if line.strip()}


def preprocess(record: PatentRecord, stopwords: set[str]) -> TokenizedDoc:
    """Case-fold title+abstract, split on non-alphanumeric runs, drop
    stopwords and tokens shorter than two characters."""
    text = (record.title + " " + record.abstract).casefold()
    tokens = [t for t in _TOKEN_RE.findall(text)
              if len(t) >= 2 and t not in stopwords]
    return TokenizedDoc(record.id, tokens)


def smoothed_idf(df: int, total_docs: int) -> float:
    return math.log((1.0 + total_docs) / (1.0 + df)) + 1.0


def tfidf_vectorize(docs: list[TokenizedDoc], min_df: int = 1,
                    max_terms: int | None = None) -> tuple[Vocabulary, list[DocVector]]:
    """Build a vocabulary and L2-normalized TF-IDF vectors.

    tf is the raw in-document count over the document token count; idf is
    the smoothed ln((1+N)/(1+df)) + 1. Terms with document frequency below
    ``min_df`` are dropped; if ``max_terms`` is set only the highest-df
    terms are kept (df ties broken by term, ascending). Vocabulary indices
    are lexicographic.
    """
    df: dict[str, int] = {}
    for doc in docs:
        for term in set(doc.tokens):
            df[term] = df.get(term, 0) + 1
    kept = [t for t, c in df.items() if c >= min_df]
    if max_terms is not None and len(kept) > max_terms:
        kept.sort(key=lambda t: (-df[t], t))
        kept = kept[:max_terms]
    kept.sort()
    if not kept:
        raise EmptyVocabularyError(
            "no terms survive tokenization and frequency filtering")

    vocab = Vocabulary(kept, {t: df[t] for t in kept}, total_docs=len(docs))
    return vocab, vectorize_with_vocab(docs, vocab)


def vectorize_with_vocab(docs: list[TokenizedDoc],
                         vocab: Vocabulary) -> list[DocVector]:
    """TF-IDF vectors for ``docs`` against a fixed vocabulary."""
    index = {t: i for i, t in enumerate(vocab.terms)}
    idf = np.array([smoothed_idf(vocab.document_frequency[t], vocab.total_docs)
                    for t in vocab.terms])
    out = []
    dim = len(vocab.terms)
    for doc in docs:
        vec = np.zeros(dim)
        if doc.tokens:
            inv_len = 1.0 / len(doc.tokens)
            for term in doc.tokens:
                i = index.get(term)
                if i is not None:
                    vec[i] += inv_len
            vec *= idf
            norm = np.linalg.norm(vec)
            if norm > 0:
                vec /= norm
        out.append(DocVector(doc.id, vec, dim, "tfidf"))
    return out


def import_embeddings(path, corpus: list[PatentRecord]) -> list[DocVector]:
    """Load externally produced per-patent vectors, matched to the corpus.

    The file is CSV (``id,v0,v1,...``) or JSON-lines
    (``{"id": ..., "vector": [...]}``); the format is sniffed from the first
    line. Every corpus id must be present; extra ids are ignored with a
    logged warning count.
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"embedding file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        first = fh.readline()
    rows = (_read_embeddings_jsonl(path) if first.lstrip().startswith("{")
            else _read_embeddings_csv(path))

    vectors: dict[str, np.ndarray] = {}
    dim = None
    for pid, vec in rows:
        if pid in vectors:
            raise ValueError(f"duplicate embedding row for id {pid!r}")
        if dim is None:
            dim = len(vec)
        elif len(vec) != dim:
            raise ValueError(
                f"dimension mismatch for id {pid!r}: {len(vec)} != {dim}")
        if not np.all(np.isfinite(vec)):
            raise ValueError(f"non-finite entry in vector for id {pid!r}")
        vectors[pid] = vec

    missing = [r.id for r in corpus if r.id not in vectors]
    if missing:
        shown = ", ".join(missing[:10])
        more = f" (+{len(missing) - 10} more)" if len(missing) > 10 else ""
        raise ValueError(f"embedding file missing ids: {shown}{more}")
    extra = len(vectors) - len({r.id for r in corpus})
    if extra > 0:
        logger.warning("ignoring %d embedding rows not in the corpus", extra)
    return [DocVector(r.id, vectors[r.id], dim, "imported") for r in corpus]


def _read_embeddings_csv(path: Path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            return
        for row in reader:
            if not row:
                continue
            yield row[0], np.array([float(x) for x in row[1:]])


def _read_embeddings_jsonl(path: Path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            obj = json.loads(line)
            yield str(obj["id"]), np.array([float(x) for x in obj["vector"]])
