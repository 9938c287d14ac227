"""Link-sign prediction harness.

Held-out edges are scored by a binary logistic regression over the
concatenated endpoint embeddings, fit on the training edges only. Quality
is summarized by AUC (probability a random positive test edge outranks a
random negative one, ties counted half) and by F1 of the positive-link
class at a fixed 0.5 threshold. :func:`run_experiment` wires the whole
protocol together: ingest, split, embed from the train side only, fit,
score.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.stats

from .graph import SignedEdge, SignedGraph, load_edge_list, split_train_test, to_undirected
from .model import SgcnConfig
from .spectral import spectral_embedding
from .training import TrainConfig, fit

__all__ = [
    "PairDataset",
    "LogisticModel",
    "EvalReport",
    "DegenerateDataError",
    "UndefinedMetricError",
    "METHODS",
    "build_pairs",
    "fit_logreg",
    "auc",
    "f1",
    "run_experiment",
]

METHODS = ("sse", "sgcn-1", "sgcn-1+", "sgcn-2")


class DegenerateDataError(ValueError):
    """Classifier input that cannot be fit, e.g. a single class."""


class UndefinedMetricError(ValueError):
    """Metric undefined for the given labels, e.g. AUC without both classes."""


@dataclass(frozen=True)
class PairDataset:
    """Edge-level features and labels: row = [z_u, z_v], label 1=positive link."""

    features: np.ndarray
    labels: np.ndarray


@dataclass(frozen=True)
class LogisticModel:
    weights: np.ndarray
    intercept: float

    def decision(self, features: np.ndarray) -> np.ndarray:
        return features @ self.weights + self.intercept

    def predict_proba(self, features: np.ndarray) -> np.ndarray:
        return 1.0 / (1.0 + np.exp(-self.decision(features)))


@dataclass(frozen=True)
class EvalReport:
    auc: float
    f1: float
    threshold: float
    n_test_pos: int
    n_test_neg: int


def build_pairs(z: np.ndarray, edges: list[SignedEdge]) -> PairDataset:
    """Concatenate endpoint embeddings per edge, oriented (min id, max id)."""
    width = z.shape[1]
    features = np.zeros((len(edges), 2 * width))
    labels = np.zeros(len(edges), dtype=np.intp)
    for row, (u, v, sign) in enumerate(edges):
        if not (0 <= u < z.shape[0] and 0 <= v < z.shape[0]):
            raise ValueError(f"edge ({u}, {v}) references unknown node")
        a, b = (u, v) if u < v else (v, u)
        features[row, :width] = z[a]
        features[row, width:] = z[b]
        labels[row] = 1 if sign > 0 else 0
    return PairDataset(features=features, labels=labels)


def fit_logreg(
    train: PairDataset, l2: float = 1.0, max_iter: int = 500
) -> LogisticModel:
    """Newton's method on the L2-regularized logistic loss.

    The penalty enters as ``l2 * ||w||^2 / m`` (intercept unpenalized).
    Iterates until the gradient sup-norm drops below 1e-6 or ``max_iter``
    steps; fully deterministic. Requires both classes in the labels.
    """
    y = train.labels.astype(np.float64)
    if y.min() == y.max():
        raise DegenerateDataError("training pairs contain a single class")
    x = train.features
    m, d = x.shape
    beta = np.zeros(d + 1)  # [w, intercept]

    def decision(b):
        return x @ b[:d] + b[d]

    def objective(b):
        margins = decision(b)
        nll = np.mean(np.logaddexp(0.0, margins) - y * margins)
        return nll + l2 * np.dot(b[:d], b[:d]) / m

    obj = objective(beta)
    for _ in range(max_iter):
        p = 1.0 / (1.0 + np.exp(-decision(beta)))
        residual = p - y
        grad = np.empty(d + 1)
        grad[:d] = x.T @ residual / m + 2.0 * l2 * beta[:d] / m
        grad[d] = residual.mean()
        if np.abs(grad).max() <= 1e-6:
            break
        s = p * (1.0 - p)
        xs = x * s[:, None]
        hess = np.empty((d + 1, d + 1))
        hess[:d, :d] = x.T @ xs / m
        hess[:d, :d][np.diag_indices(d)] += 2.0 * l2 / m
        hess[:d, d] = hess[d, :d] = xs.sum(axis=0) / m
        hess[d, d] = s.sum() / m
        try:
            step = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            step = grad
        # Backtrack if a full Newton step overshoots (near-separable data).
        t = 1.0
        for _ in range(30):
            candidate = beta - t * step
            new_obj = objective(candidate)
            if new_obj <= obj:
                beta, obj = candidate, new_obj
                break
            t *= 0.5
        else:
            break
    return LogisticModel(weights=beta[:d], intercept=float(beta[d]))


def auc(scores, labels) -> float:
    """Exact rank-based AUC: P(pos scores above neg) + half the tie mass."""
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    pos = labels == 1
    n_pos = int(pos.sum())
    n_neg = len(labels) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise UndefinedMetricError("AUC needs both a positive and a negative example")
    ranks = scipy.stats.rankdata(scores, method="average")
    return float((ranks[pos].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def f1(predictions, labels, positive_class: int = 1) -> float:
    """Harmonic mean of precision and recall for the chosen class; 0 if empty."""
    predictions = np.asarray(predictions)
    labels = np.asarray(labels)
    if len(predictions) == 0 or len(predictions) != len(labels):
        raise ValueError("predictions and labels must be same nonzero length")
    tp = int(np.sum((predictions == positive_class) & (labels == positive_class)))
    fp = int(np.sum((predictions == positive_class) & (labels != positive_class)))
    fn = int(np.sum((predictions != positive_class) & (labels == positive_class)))
    if 2 * tp + fp + fn == 0:
        return 0.0
    return 2.0 * tp / (2 * tp + fp + fn)


def run_experiment(
    source,
    method: str,
    seed: int,
    *,
    format: str = "weighted-csv",
    test_fraction: float = 0.2,
    embedding_dim: int = 64,
    hidden_dim: int = 32,
    train_cfg: TrainConfig | None = None,
    l2: float = 1.0,
    max_iter: int = 500,
    threshold: float = 0.5,
    feature_cache: dict | None = None,
) -> EvalReport:
    """One full link-sign prediction run, leak-free by construction.

    ``source`` is an edge-list path (parsed per ``format``) or an
    already-built :class:`SignedGraph`. The held-out test edges never touch
    feature construction, embedding training, or the classifier; the split
    and every downstream stage are deterministic in ``seed``. ``method`` is
    one of ``sse``, ``sgcn-1``, ``sgcn-1+``, ``sgcn-2``.

    ``feature_cache`` (optional dict, scoped to one dataset) memoizes the
    (split, spectral features) pair per (seed, test_fraction, dim), which
    several methods sharing a seed would otherwise recompute.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if isinstance(source, SignedGraph):
        graph = source
    else:
        graph = to_undirected(load_edge_list(source, format))

    dim = min(embedding_dim, graph.n)
    cache_key = (seed, test_fraction, dim)
    if feature_cache is not None and cache_key in feature_cache:
        split, x = feature_cache[cache_key]
    else:
        split = split_train_test(graph, test_fraction, seed)
        x = spectral_embedding(split.train, dim)
        if feature_cache is not None:
            feature_cache[cache_key] = (split, x)

    if method == "sse":
        z = x
    else:
        sgcn_cfg = sgcn_config_for(method, d_in=dim, d_hidden=hidden_dim)
        cfg = train_cfg if train_cfg is not None else TrainConfig(seed=seed)
        # Unit-norm eigenvector columns have O(1/sqrt(n)) entries; rescale the
        # model input to unit RMS so the layers start in their design regime.
        result = fit(split.train, x * np.sqrt(graph.n), cfg, sgcn_cfg)
        z = result.embeddings

    train_pairs = build_pairs(z, list(split.train.edges()))
    test_pairs = build_pairs(z, list(split.test))
    model = fit_logreg(train_pairs, l2=l2, max_iter=max_iter)
    probs = model.predict_proba(test_pairs.features)
    n_test_pos = int(test_pairs.labels.sum())
    return EvalReport(
        auc=auc(probs, test_pairs.labels),
        f1=f1((probs >= threshold).astype(int), test_pairs.labels),
        threshold=threshold,
        n_test_pos=n_test_pos,
        n_test_neg=len(test_pairs.labels) - n_test_pos,
    )


def sgcn_config_for(method: str, d_in: int, d_hidden: int = 32) -> SgcnConfig:
    """Model shape implied by a method name."""
    if method == "sgcn-1":
        return SgcnConfig(d_in=d_in, d_hidden=d_hidden, layers=1)
    if method == "sgcn-1+":
        return SgcnConfig(d_in=d_in, d_hidden=d_hidden, layers=2, variant="plus")
    if method == "sgcn-2":
        return SgcnConfig(d_in=d_in, d_hidden=d_hidden, layers=2)
    raise ValueError(f"method {method!r} does not use the two-track model")
