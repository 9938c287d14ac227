"""Objective, pair sampling, hand-derived gradients, and SGD training.

The objective has three pieces: a class-weighted 3-way softmax classifier
deciding whether a node pair is positively linked, negatively linked, or
unlinked; a pair of hinge terms pulling positively linked nodes closer than
unlinked ones and pushing negatively linked nodes farther than unlinked
ones; and an L2 penalty on all weights. Gradients are computed in closed
form by reverse mode through the two-track forward pass, with the hinge
subgradient taken as zero exactly at the kink.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .graph import SignedGraph
from .model import (
    LayerState,
    SgcnConfig,
    SgcnParams,
    forward_pass,
    init_params,
    neighbor_mean_ops,
)

__all__ = [
    "TrainConfig",
    "MlgParams",
    "TrainBatch",
    "LossParts",
    "FitResult",
    "SamplingError",
    "DivergenceError",
    "sample_batch",
    "loss",
    "loss_parts",
    "gradients",
    "fit",
]

# Class indices for pair labels: positive link, negative link, no link.
_CLASS_INDEX = {1: 0, -1: 1, 0: 2}


class SamplingError(RuntimeError):
    """Could not assemble a batch, e.g. no unlinked partners exist."""


class DivergenceError(RuntimeError):
    """Training produced a non-finite loss."""

    def __init__(self, epoch: int, value: float):
        super().__init__(f"non-finite loss {value!r} at epoch {epoch}")
        self.epoch = epoch


@dataclass(frozen=True)
class TrainConfig:
    """Optimization settings.

    ``margin_weight`` scales the two hinge terms against the classifier
    term; ``pairs_per_class`` caps how many pairs of each label one anchor
    contributes to a batch. ``classifier_bias`` toggles the per-class bias
    extension of the pair classifier.
    """

    margin_weight: float = 5.0
    reg_coeff: float = 1e-4
    learning_rate: float = 0.05
    batch_nodes: int = 500
    pairs_per_class: int = 5
    epochs: int = 300
    seed: int = 0
    classifier_bias: bool = True

    def __post_init__(self):
        if self.margin_weight < 0 or self.reg_coeff < 0:
            raise ValueError("margin_weight and reg_coeff must be nonnegative")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if self.batch_nodes < 1 or self.pairs_per_class < 1 or self.epochs < 0:
            raise ValueError("batch_nodes, pairs_per_class >= 1 and epochs >= 0")


@dataclass
class MlgParams:
    """Pair-classifier parameters: one weight row and bias per class.

    Rows follow the class order (positive, negative, none); each row acts on
    the concatenation of the two node embeddings.
    """

    theta: np.ndarray
    bias: np.ndarray

    @staticmethod
    def zeros(embedding_dim: int) -> "MlgParams":
        return MlgParams(
            theta=np.zeros((3, 2 * embedding_dim)), bias=np.zeros(3)
        )

    def copy(self) -> "MlgParams":
        return MlgParams(theta=self.theta.copy(), bias=self.bias.copy())


@dataclass(frozen=True)
class TrainBatch:
    """One sampled batch.

    ``pairs`` holds ``(i, j, s)`` with ``s`` in {+1, -1, 0}; the triplet
    lists hold ``(i, j, k)`` where ``j`` is a linked neighbor of ``i`` of
    the respective sign and ``k`` has no train edge to ``i``.
    ``class_weights`` maps each label present in the batch to its
    inverse-frequency weight.
    """

    pairs: tuple[tuple[int, int, int], ...]
    pos_triplets: tuple[tuple[int, int, int], ...]
    neg_triplets: tuple[tuple[int, int, int], ...]
    class_weights: dict[int, float] = field(compare=False)


@dataclass(frozen=True)
class LossParts:
    classifier: float
    margin: float
    regularizer: float

    @property
    def total(self) -> float:
        return self.classifier + self.margin + self.regularizer


@dataclass
class FitResult:
    params: SgcnParams
    mlg: MlgParams
    embeddings: np.ndarray
    history: list[LossParts]


def sample_batch(train: SignedGraph, cfg: TrainConfig, epoch: int) -> TrainBatch:
    """Draw anchors and per-anchor pairs; deterministic for (seed, epoch).

    Each anchor contributes up to ``pairs_per_class`` positive, negative,
    and no-link pairs; every linked pair additionally gets a fresh unlinked
    partner for the hinge terms. Class weights are set to
    ``total / (3 * count)`` so rarer labels weigh more.
    """
    if train.n < 2:
        raise SamplingError("graph too small to sample pairs from")
    rng = np.random.default_rng([cfg.seed % 2**32, epoch % 2**32])
    n_anchors = min(cfg.batch_nodes, train.n)
    anchors = rng.choice(train.n, size=n_anchors, replace=False)
    linked = [set(train.pos_adj[i]) | set(train.neg_adj[i]) for i in range(train.n)]

    def draw_unlinked(i: int) -> int:
        for _ in range(200):
            k = int(rng.integers(train.n))
            if k != i and k not in linked[i]:
                return k
        raise SamplingError(
            f"no unlinked partner found for node {i} after 200 draws"
        )

    pairs: list[tuple[int, int, int]] = []
    pos_triplets: list[tuple[int, int, int]] = []
    neg_triplets: list[tuple[int, int, int]] = []
    for i in anchors.tolist():
        for nbrs, sign, triplets in (
            (train.pos_adj[i], 1, pos_triplets),
            (train.neg_adj[i], -1, neg_triplets),
        ):
            take = min(cfg.pairs_per_class, len(nbrs))
            if take:
                chosen = rng.choice(len(nbrs), size=take, replace=False)
                for idx in chosen.tolist():
                    j = nbrs[idx]
                    pairs.append((i, j, sign))
                    triplets.append((i, j, draw_unlinked(i)))
        for _ in range(cfg.pairs_per_class):
            pairs.append((i, draw_unlinked(i), 0))

    counts: dict[int, int] = {}
    for _, _, s in pairs:
        counts[s] = counts.get(s, 0) + 1
    total = len(pairs)
    weights = {s: total / (3.0 * c) for s, c in counts.items()}
    return TrainBatch(
        pairs=tuple(pairs),
        pos_triplets=tuple(pos_triplets),
        neg_triplets=tuple(neg_triplets),
        class_weights=weights,
    )


def loss_parts(
    z: np.ndarray,
    mlg: MlgParams,
    batch: TrainBatch,
    params: SgcnParams,
    cfg: TrainConfig,
) -> LossParts:
    """Evaluate the three objective components at the given embeddings."""
    if not batch.pairs:
        raise ValueError("batch has no labeled pairs")
    idx_i = np.fromiter((p[0] for p in batch.pairs), dtype=np.intp)
    idx_j = np.fromiter((p[1] for p in batch.pairs), dtype=np.intp)
    labels = np.fromiter((_CLASS_INDEX[p[2]] for p in batch.pairs), dtype=np.intp)
    omega = np.fromiter((batch.class_weights[p[2]] for p in batch.pairs), dtype=np.float64)

    features = np.hstack([z[idx_i], z[idx_j]])
    logits = features @ mlg.theta.T + mlg.bias
    logits -= logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(logits).sum(axis=1))
    log_prob = logits[np.arange(len(labels)), labels] - log_norm
    classifier = float(np.mean(omega * -log_prob))

    margin = 0.0
    for triplets, closer_is_linked in (
        (batch.pos_triplets, True),
        (batch.neg_triplets, False),
    ):
        if not triplets:
            continue
        t = _margin_slack(z, triplets, closer_is_linked)
        margin += float(np.maximum(0.0, t).mean())
    margin *= cfg.margin_weight

    reg = 0.0
    if cfg.reg_coeff:
        reg = cfg.reg_coeff * (
            sum(float(np.sum(w * w)) for w in params.all_weights())
            + float(np.sum(mlg.theta * mlg.theta))
        )
    return LossParts(classifier=classifier, margin=margin, regularizer=reg)


def loss(
    z: np.ndarray,
    mlg: MlgParams,
    batch: TrainBatch,
    params: SgcnParams,
    cfg: TrainConfig,
) -> float:
    """Total objective value; see :func:`loss_parts` for the breakdown."""
    return loss_parts(z, mlg, batch, params, cfg).total


def _margin_slack(z, triplets, closer_is_linked):
    """Hinge slack per triplet: positive when the ordering is violated."""
    arr = np.asarray(triplets, dtype=np.intp)
    d_linked = np.sum((z[arr[:, 0]] - z[arr[:, 1]]) ** 2, axis=1)
    d_unlinked = np.sum((z[arr[:, 0]] - z[arr[:, 2]]) ** 2, axis=1)
    return d_linked - d_unlinked if closer_is_linked else d_unlinked - d_linked


def gradients(
    train: SignedGraph,
    x: np.ndarray,
    params: SgcnParams,
    mlg: MlgParams,
    batch: TrainBatch,
    cfg: TrainConfig,
    sgcn_cfg: SgcnConfig,
) -> tuple[SgcnParams, MlgParams]:
    """Exact gradient of the objective with respect to every parameter.

    Returns gradient containers shaped like ``params`` and ``mlg``. The
    forward pass is recomputed here; use :func:`fit` for training loops
    that share it.
    """
    ops = neighbor_mean_ops(train)
    states = forward_pass(train, x, params, sgcn_cfg, ops=ops)
    return _backward(states, x, params, mlg, batch, cfg, sgcn_cfg, ops)


def fit(
    train: SignedGraph,
    x: np.ndarray,
    cfg: TrainConfig,
    sgcn_cfg: SgcnConfig,
) -> FitResult:
    """Mini-batch SGD: sample, embed, differentiate, step, for each epoch.

    Deterministic for a fixed ``cfg.seed``. Raises :class:`DivergenceError`
    if the loss stops being finite.
    """
    params = init_params(sgcn_cfg, cfg.seed)
    mlg = MlgParams.zeros(sgcn_cfg.embedding_dim)
    ops = neighbor_mean_ops(train)
    history: list[LossParts] = []
    for epoch in range(cfg.epochs):
        batch = sample_batch(train, cfg, epoch)
        states = forward_pass(train, x, params, sgcn_cfg, ops=ops)
        z = np.hstack([states[-1].friend, states[-1].enemy])
        parts = loss_parts(z, mlg, batch, params, cfg)
        if not np.isfinite(parts.total):
            raise DivergenceError(epoch, parts.total)
        history.append(parts)
        grad_w, grad_mlg = _backward(states, x, params, mlg, batch, cfg, sgcn_cfg, ops)
        lr = cfg.learning_rate
        for w, gw in zip(params.w_friend, grad_w.w_friend):
            w -= lr * gw
        for w, gw in zip(params.w_enemy, grad_w.w_enemy):
            w -= lr * gw
        mlg.theta -= lr * grad_mlg.theta
        if cfg.classifier_bias:
            mlg.bias -= lr * grad_mlg.bias
    final = forward_pass(train, x, params, sgcn_cfg, ops=ops)[-1]
    z = np.hstack([final.friend, final.enemy])
    return FitResult(params=params, mlg=mlg, embeddings=z, history=history)


def _backward(
    states: list[LayerState],
    x: np.ndarray,
    params: SgcnParams,
    mlg: MlgParams,
    batch: TrainBatch,
    cfg: TrainConfig,
    sgcn_cfg: SgcnConfig,
    ops,
) -> tuple[SgcnParams, MlgParams]:
    pos_mean, neg_mean = ops
    h = sgcn_cfg.d_hidden
    final = states[-1]
    z = np.hstack([final.friend, final.enemy])
    n, zw = z.shape
    dz = np.zeros_like(z)

    # Classifier term.
    idx_i = np.fromiter((p[0] for p in batch.pairs), dtype=np.intp)
    idx_j = np.fromiter((p[1] for p in batch.pairs), dtype=np.intp)
    labels = np.fromiter((_CLASS_INDEX[p[2]] for p in batch.pairs), dtype=np.intp)
    omega = np.fromiter((batch.class_weights[p[2]] for p in batch.pairs), dtype=np.float64)
    m = len(batch.pairs)
    features = np.hstack([z[idx_i], z[idx_j]])
    logits = features @ mlg.theta.T + mlg.bias
    logits -= logits.max(axis=1, keepdims=True)
    probs = np.exp(logits)
    probs /= probs.sum(axis=1, keepdims=True)
    dlogits = probs
    dlogits[np.arange(m), labels] -= 1.0
    dlogits *= (omega / m)[:, None]
    grad_theta = dlogits.T @ features
    grad_bias = dlogits.sum(axis=0)
    dfeat = dlogits @ mlg.theta
    np.add.at(dz, idx_i, dfeat[:, :zw])
    np.add.at(dz, idx_j, dfeat[:, zw:])

    # Hinge terms.
    if cfg.margin_weight:
        for triplets, closer_is_linked in (
            (batch.pos_triplets, True),
            (batch.neg_triplets, False),
        ):
            if not triplets:
                continue
            arr = np.asarray(triplets, dtype=np.intp)
            diff_j = z[arr[:, 0]] - z[arr[:, 1]]
            diff_k = z[arr[:, 0]] - z[arr[:, 2]]
            slack = np.sum(diff_j**2, axis=1) - np.sum(diff_k**2, axis=1)
            if not closer_is_linked:
                slack = -slack
            scale = cfg.margin_weight / len(triplets)
            active = scale * (slack > 0).astype(np.float64)
            sign = 1.0 if closer_is_linked else -1.0
            coef = (2.0 * sign * active)[:, None]
            np.add.at(dz, arr[:, 0], coef * (diff_j - diff_k))
            np.add.at(dz, arr[:, 1], -coef * diff_j)
            np.add.at(dz, arr[:, 2], coef * diff_k)

    # Backpropagate dz through the layers.
    grad_friend = [np.zeros_like(w) for w in params.w_friend]
    grad_enemy = [np.zeros_like(w) for w in params.w_enemy]
    g_f = dz[:, :h].copy()
    g_e = dz[:, h:].copy()
    for layer in range(sgcn_cfg.layers, 1, -1):
        state = states[layer - 1]
        below = states[layer - 2]
        ds_f = g_f * (1.0 - state.friend**2)
        ds_e = g_e * (1.0 - state.enemy**2)
        if sgcn_cfg.variant == "plus":
            in_f = np.hstack([pos_mean @ below.friend, np.zeros_like(below.friend), below.friend])
            in_e = np.hstack([np.zeros_like(below.enemy), neg_mean @ below.enemy, below.enemy])
        else:
            in_f = np.hstack([pos_mean @ below.friend, neg_mean @ below.enemy, below.friend])
            in_e = np.hstack([pos_mean @ below.enemy, neg_mean @ below.friend, below.enemy])
        grad_friend[layer - 1] += ds_f.T @ in_f
        grad_enemy[layer - 1] += ds_e.T @ in_e
        da_f = ds_f @ params.w_friend[layer - 1]
        da_e = ds_e @ params.w_enemy[layer - 1]
        if sgcn_cfg.variant == "plus":
            g_f = pos_mean.T @ da_f[:, :h] + da_f[:, 2 * h :]
            g_e = neg_mean.T @ da_e[:, h : 2 * h] + da_e[:, 2 * h :]
        else:
            g_f = pos_mean.T @ da_f[:, :h] + neg_mean.T @ da_e[:, h : 2 * h] + da_f[:, 2 * h :]
            g_e = pos_mean.T @ da_e[:, :h] + neg_mean.T @ da_f[:, h : 2 * h] + da_e[:, 2 * h :]

    first = states[0]
    ds_f = g_f * (1.0 - first.friend**2)
    ds_e = g_e * (1.0 - first.enemy**2)
    in_f = np.hstack([pos_mean @ x, x])
    in_e = np.hstack([neg_mean @ x, x])
    grad_friend[0] += ds_f.T @ in_f
    grad_enemy[0] += ds_e.T @ in_e

    if cfg.reg_coeff:
        for gw, w in zip(grad_friend, params.w_friend):
            gw += 2.0 * cfg.reg_coeff * w
        for gw, w in zip(grad_enemy, params.w_enemy):
            gw += 2.0 * cfg.reg_coeff * w
        grad_theta += 2.0 * cfg.reg_coeff * mlg.theta

    return (
        SgcnParams(w_friend=grad_friend, w_enemy=grad_enemy, rng_seed=params.rng_seed),
        MlgParams(theta=grad_theta, bias=grad_bias),
    )
