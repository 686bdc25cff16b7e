import json
import logging
import math

import numpy as np
import pytest

from patmine.errors import EmptyVocabularyError
from patmine.ingest import PatentRecord
from patmine.textvec import (TokenizedDoc, import_embeddings, load_stopwords,
                             preprocess, smoothed_idf, tfidf_vectorize)

from oracles import tfidf_oracle


def rec(pid="P1", title="", abstract="", year=2020):
    return PatentRecord(pid, title, abstract, [], year)


class TestPreprocess:
    def test_stopword_and_case_rules(self):
        doc = preprocess(rec(title="Secure IoT Key Exchange"), {"iot"})
        assert doc.tokens == ["secure", "key", "exchange"]

    def test_all_stopwords(self):
        doc = preprocess(rec(title="The Of And"), {"the", "of", "and"})
        assert doc.tokens == []

    def test_split_on_non_alphanumeric(self):
        doc = preprocess(rec(title="Wi-Fi/BLE gateway"), set())
        assert doc.tokens == ["wi", "fi", "ble", "gateway"]

    def test_short_tokens_dropped(self):
        doc = preprocess(rec(title="a b charging x9"), set())
        assert doc.tokens == ["charging", "x9"]

    def test_idempotent(self):
        stop = load_stopwords()
        doc = preprocess(rec(title="Adaptive Key-Exchange", abstract="for IoT"),
                         stop)
        again = preprocess(rec(title=" ".join(doc.tokens)), stop)
        assert again.tokens == doc.tokens

    def test_bundled_stopwords(self):
        stop = load_stopwords()
        assert "the" in stop and "of" in stop
        doc = preprocess(rec(title="The method of the sensor"), stop)
        assert doc.tokens == ["method", "sensor"]

    def test_user_stopword_file(self, tmp_path):
        p = tmp_path / "stop.txt"
        p.write_text("Sensor\n\n  gateway \n", encoding="utf-8")
        stop = load_stopwords(p)
        assert stop == {"sensor", "gateway"}
        doc = preprocess(rec(title="Sensor gateway relay"), stop)
        assert doc.tokens == ["relay"]


class TestTfidf:
    def test_smoothed_idf_values(self):
        docs = [TokenizedDoc("d1", ["iot", "sensor"]),
                TokenizedDoc("d2", ["iot", "cloud"])]
        vocab, vectors = tfidf_vectorize(docs)
        assert smoothed_idf(vocab.document_frequency["iot"], 2) == pytest.approx(1.0)
        assert smoothed_idf(vocab.document_frequency["sensor"], 2) == pytest.approx(
            math.log(3 / 2) + 1, abs=1e-12)

    def test_single_doc_one_hot(self):
        vocab, vectors = tfidf_vectorize([TokenizedDoc("d", ["a-term", "a-term"])])
        assert vocab.terms == ["a-term"]
        assert np.linalg.norm(vectors[0].values) == pytest.approx(1.0)

    def test_ubiquitous_term_smaller_idf(self):
        docs = [TokenizedDoc(f"d{i}", ["common", f"rare{i}"]) for i in range(5)]
        vocab, _ = tfidf_vectorize(docs)
        idf_common = smoothed_idf(vocab.document_frequency["common"], 5)
        idf_rare = smoothed_idf(vocab.document_frequency["rare0"], 5)
        assert idf_common < idf_rare

    def test_l2_norms(self):
        rng = np.random.default_rng(2)
        terms = [f"t{i}" for i in range(20)]
        docs = [TokenizedDoc(f"d{i}",
                             list(rng.choice(terms, size=rng.integers(1, 10))))
                for i in range(15)]
        _, vectors = tfidf_vectorize(docs)
        for v in vectors:
            assert np.linalg.norm(v.values) == pytest.approx(1.0, abs=1e-9)

    def test_all_empty_docs_error(self):
        with pytest.raises(EmptyVocabularyError):
            tfidf_vectorize([TokenizedDoc("d1", []), TokenizedDoc("d2", [])])

    def test_min_df_and_max_terms(self):
        docs = [TokenizedDoc("d1", ["aa", "bb", "cc"]),
                TokenizedDoc("d2", ["aa", "bb"]),
                TokenizedDoc("d3", ["aa"])]
        vocab, _ = tfidf_vectorize(docs, min_df=2)
        assert vocab.terms == ["aa", "bb"]
        vocab, _ = tfidf_vectorize(docs, max_terms=1)
        assert vocab.terms == ["aa"]

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(4)
        terms = [f"w{i}" for i in range(12)]
        for trial in range(5):
            docs = [TokenizedDoc(f"d{i}",
                                 list(rng.choice(terms, size=rng.integers(0, 8))))
                    for i in range(int(rng.integers(2, 10)))]
            if not any(d.tokens for d in docs):
                continue
            vocab, vectors = tfidf_vectorize(docs, min_df=1)
            want_terms, want_vectors = tfidf_oracle([d.tokens for d in docs])
            assert vocab.terms == want_terms
            for got, want in zip(vectors, want_vectors):
                assert np.allclose(got.values, want, atol=1e-12)

    def test_empty_doc_keeps_zero_vector(self):
        docs = [TokenizedDoc("d1", ["term"]), TokenizedDoc("d2", [])]
        _, vectors = tfidf_vectorize(docs)
        assert np.all(vectors[1].values == 0.0)


class TestImportEmbeddings:
    def corpus(self):
        return [rec("P1"), rec("P2"), rec("P3")]

    def write_csv(self, path, rows, dim=4):
        header = "id," + ",".join(f"v{i}" for i in range(dim))
        lines = [header] + [pid + "," + ",".join(str(x) for x in vec)
                            for pid, vec in rows]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    def test_csv_import(self, tmp_path):
        rng = np.random.default_rng(0)
        rows = [(f"P{i}", list(rng.normal(size=384))) for i in (1, 2, 3)]
        p = self.write_csv(tmp_path / "e.csv", rows, dim=384)
        vectors = import_embeddings(p, self.corpus())
        assert len(vectors) == 3
        assert all(v.dim == 384 for v in vectors)
        assert [v.id for v in vectors] == ["P1", "P2", "P3"]
        assert all(v.source == "imported" for v in vectors)

    def test_jsonl_import(self, tmp_path):
        p = tmp_path / "e.jsonl"
        p.write_text("\n".join(
            json.dumps({"id": f"P{i}", "vector": [0.1 * i, 0.2]})
            for i in (1, 2, 3)) + "\n", encoding="utf-8")
        vectors = import_embeddings(p, self.corpus())
        assert vectors[1].values[0] == pytest.approx(0.2)

    def test_missing_id_listed(self, tmp_path):
        p = self.write_csv(tmp_path / "e.csv", [("P1", [1, 2, 3, 4]),
                                                ("P2", [1, 2, 3, 4])])
        with pytest.raises(ValueError, match="P3"):
            import_embeddings(p, self.corpus())

    def test_extra_ids_warned(self, tmp_path, caplog):
        rows = [(f"P{i}", [1.0, 2.0]) for i in (1, 2, 3, 4, 5)]
        p = self.write_csv(tmp_path / "e.csv", rows, dim=2)
        with caplog.at_level(logging.WARNING, logger="patmine.textvec"):
            vectors = import_embeddings(p, self.corpus())
        assert len(vectors) == 3
        assert "2" in caplog.text

    def test_dimension_mismatch_names_id(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("id,v0,v1\nP1,1,2\nP2,1,2\nP3,1,2,3\n", encoding="utf-8")
        with pytest.raises(ValueError, match="P3"):
            import_embeddings(p, self.corpus())

    def test_non_finite_rejected(self, tmp_path):
        p = tmp_path / "e.csv"
        p.write_text("id,v0,v1\nP1,1,NaN\nP2,1,2\nP3,1,2\n", encoding="utf-8")
        with pytest.raises(ValueError, match="P1"):
            import_embeddings(p, self.corpus())
