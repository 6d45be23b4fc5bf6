"""Text embedding providers and the vector arithmetic they feed.

Two providers share one interface: `HashingEmbedder`, a deterministic local
fallback built on hashed character-3-gram counts, and `RemoteEmbedder`, a
client for an HTTP embedding service. Vectors are 1-D float64 numpy arrays;
batches are (n, dim) matrices.
"""

from __future__ import annotations

import math
from typing import Protocol, Sequence

import numpy as np
import requests

from wuglabels import kernels
from wuglabels.errors import (
    DimMismatch,
    EmptyInput,
    EmptyText,
    ProviderUnavailable,
    ZeroVector,
)

DEFAULT_DIM = 256
DEFAULT_HASH_SEED = 7919


class EmbeddingProvider(Protocol):
    dim: int

    def embed(self, texts: Sequence[str]) -> np.ndarray: ...


class HashingEmbedder:
    """Deterministic local embedder: hashed char-3-gram counts, L2-normalized.

    A pure function of the input string given (dim, seed); no model weights
    or network involved, which keeps every downstream property testable.
    """

    def __init__(self, dim: int = DEFAULT_DIM, seed: int = DEFAULT_HASH_SEED,
                 ngram: int = 3):
        self.dim = dim
        self.seed = seed
        self.ngram = ngram

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        _check_texts(texts)
        out = np.empty((len(texts), self.dim), dtype=np.float64)
        for i, text in enumerate(texts):
            counts = kernels.hash_ngram_counts(text, self.dim, self.ngram, self.seed)
            out[i] = counts
        norms = np.linalg.norm(out, axis=1, keepdims=True)
        # counts are non-negative and non-empty texts hash at least one gram
        return out / norms


class RemoteEmbedder:
    """Client for the POST /embed JSON protocol.

    Request {"texts": [...]}; response {"vectors": [[...], ...], "dim": n}.
    Retries are per request; concurrent callers never share retry state.
    """

    def __init__(self, url: str, batch_size: int = 32, retries: int = 2,
                 timeout: float = 60.0):
        self.url = url.rstrip("/")
        self.batch_size = batch_size
        self.retries = retries
        self.timeout = timeout
        self.dim: int | None = None

    def _post_batch(self, batch: list[str]) -> np.ndarray:
        last: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                resp = requests.post(
                    f"{self.url}/embed", json={"texts": batch}, timeout=self.timeout
                )
                resp.raise_for_status()
                payload = resp.json()
                vectors = np.asarray(payload["vectors"], dtype=np.float64)
                dim = int(payload["dim"])
                if vectors.shape != (len(batch), dim):
                    raise ProviderUnavailable(
                        f"embedding service returned shape {vectors.shape}, "
                        f"expected {(len(batch), dim)}"
                    )
                if self.dim is None:
                    self.dim = dim
                elif self.dim != dim:
                    raise DimMismatch(
                        f"embedding service changed dim {self.dim} -> {dim}"
                    )
                return vectors
            except (requests.RequestException, KeyError, ValueError) as exc:
                last = exc
        raise ProviderUnavailable(f"embedding service at {self.url}: {last}")

    def embed(self, texts: Sequence[str]) -> np.ndarray:
        _check_texts(texts)
        chunks = [
            self._post_batch(list(texts[i:i + self.batch_size]))
            for i in range(0, len(texts), self.batch_size)
        ]
        out = np.concatenate(chunks, axis=0)
        if not np.all(np.isfinite(out)):
            raise ProviderUnavailable("embedding service returned NaN/Inf values")
        return out


def _check_texts(texts: Sequence[str]) -> None:
    for t in texts:
        if not isinstance(t, str) or not t:
            raise EmptyText(f"cannot embed empty or non-string text: {t!r}")


def embed_batch(provider: EmbeddingProvider, texts: Sequence[str]) -> np.ndarray:
    """One row per text, order-preserving."""
    if len(texts) == 0:
        raise EmptyInput("no texts to embed")
    matrix = np.asarray(provider.embed(texts), dtype=np.float64)
    if not np.all(np.isfinite(matrix)):
        raise ZeroVector("provider emitted non-finite values")
    return matrix


def _check_dims(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimMismatch(f"vector dims differ: {a.shape} vs {b.shape}")


def dot(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_dims(a, b)
    return float(np.dot(a, b))


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_dims(a, b)
    na = math.sqrt(float(np.dot(a, a)))
    nb = math.sqrt(float(np.dot(b, b)))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine undefined for an all-zero vector")
    value = float(np.dot(a, b)) / (na * nb)
    return max(-1.0, min(1.0, value))


def centroid(vectors: Sequence[np.ndarray] | np.ndarray) -> np.ndarray:
    try:
        matrix = np.asarray(vectors, dtype=np.float64)
    except ValueError as exc:  # ragged input: unequal dims
        raise DimMismatch(str(exc)) from exc
    if matrix.size == 0:
        raise EmptyInput("centroid of an empty set")
    if matrix.ndim == 1:
        matrix = matrix[None, :]
    if matrix.ndim != 2:
        raise DimMismatch(f"expected vectors of equal dim, got shape {matrix.shape}")
    return matrix.mean(axis=0)
