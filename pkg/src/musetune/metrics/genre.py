"""Genre Acc@1 by nearest candidate label in embedding space."""

from __future__ import annotations

import hashlib
from typing import Protocol, Sequence

import numpy as np

from ..errors import EmbedderError
from .tokens import tokenize


class TextEmbedder(Protocol):
    def embed(self, texts: Sequence[str]) -> np.ndarray: ...


class HashTfidfEmbedder:
    """Deterministic offline embedder: hashed token counts with IDF.

    Tokens hash (salted SHA-1, stable across runs and platforms) into a
    fixed-dimension vector; IDF weights come from the candidate texts of
    the call, and vectors are L2-normalized.
    """

    def __init__(self, dim: int = 256):
        self.dim = dim

    def _index(self, token: str) -> int:
        digest = hashlib.sha1(token.encode("utf-8")).digest()
        return int.from_bytes(digest[:8], "little") % self.dim

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        token_lists = [tokenize(t) for t in texts]
        n_docs = max(len(texts), 1)
        df: dict[str, int] = {}
        for tokens in token_lists:
            for tok in set(tokens):
                df[tok] = df.get(tok, 0) + 1
        out = np.zeros((len(texts), self.dim))
        for row, tokens in enumerate(token_lists):
            for tok in tokens:
                idf = np.log((1 + n_docs) / (1 + df.get(tok, 0))) + 1.0
                out[row, self._index(tok)] += idf
            norm = np.linalg.norm(out[row])
            if norm > 0:
                out[row] /= norm
        return out


class RemoteEmbedder:
    """POSTs {"texts": [...]} to an embedding endpoint returning {"embeddings": [[...]]}."""

    def __init__(self, endpoint_url: str, timeout_s: float = 30.0):
        self.endpoint_url = endpoint_url
        self.timeout_s = timeout_s

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        import requests

        try:
            resp = requests.post(
                self.endpoint_url, json={"texts": list(texts)}, timeout=self.timeout_s
            )
            resp.raise_for_status()
            return np.asarray(resp.json()["embeddings"], dtype=np.float64)
        except Exception as exc:
            raise EmbedderError(str(exc)) from exc


def genre_acc1(
    output_text: str,
    true_label: str,
    candidate_labels: Sequence[str],
    embedder: TextEmbedder | None = None,
) -> bool:
    """Correct iff the true label is the unique nearest candidate.

    Distances are Euclidean between the output embedding and each
    candidate label embedding; a tie is only correct when the tie set is
    exactly the true label.
    """
    if true_label not in candidate_labels:
        raise ValueError("true label must be among the candidates")
    embedder = embedder or HashTfidfEmbedder()
    vectors = embedder.embed([output_text, *candidate_labels])
    if not np.all(np.isfinite(vectors)):
        raise EmbedderError("embedder produced non-finite values")
    out_vec, cand_vecs = vectors[0], vectors[1:]
    dists = np.linalg.norm(cand_vecs - out_vec[None, :], axis=1)
    tie_set = {candidate_labels[i] for i in np.flatnonzero(dists == dists.min())}
    return tie_set == {true_label}
