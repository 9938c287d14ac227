"""Two-track graph convolution for signed networks.

Every node carries two hidden vectors per layer: a "friend" representation
aggregated along even-negative (balanced) walk structure and an "enemy"
representation for the odd-negative (unbalanced) side. The first layer
splits by direct edge sign; deeper layers cross the tracks over negative
edges, mirroring the reach-set recursion in :mod:`sgcn.balance`: friends of
friends and enemies of enemies feed the friend track, while friends'
enemies and enemies' friends feed the enemy track.

Weight matrices act on `[neighbor means, own state]` concatenations, so the
first layer maps ``2*d_in -> d_hidden`` per track and every later layer maps
``3*d_hidden -> d_hidden``. The final embedding is the concatenation of both
tracks' last-layer states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse

from .graph import SignedGraph

__all__ = [
    "SgcnConfig",
    "SgcnParams",
    "LayerState",
    "init_params",
    "neighbor_mean_ops",
    "forward_layer1",
    "forward_layer",
    "forward_layer_plus",
    "forward_pass",
    "embed_all",
]

_ACTIVATIONS = {"tanh": np.tanh}


@dataclass(frozen=True)
class SgcnConfig:
    """Model shape: input width, per-track hidden width, depth, and variant.

    ``variant="plus"`` is the ablation that repeats the first layer's
    sign-separated aggregation instead of crossing tracks; it is only
    defined at depth 2.
    """

    d_in: int
    d_hidden: int = 32
    layers: int = 2
    variant: str = "standard"
    activation: str = "tanh"

    def __post_init__(self):
        if self.d_in < 1 or self.d_hidden < 1:
            raise ValueError("d_in and d_hidden must be >= 1")
        if self.layers < 1:
            raise ValueError("need at least one layer")
        if self.variant not in ("standard", "plus"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.variant == "plus" and self.layers != 2:
            raise ValueError("the plus variant is defined only for layers=2")
        if self.activation not in _ACTIVATIONS:
            raise ValueError(f"unknown activation {self.activation!r}")

    @property
    def embedding_dim(self) -> int:
        return 2 * self.d_hidden

    def sigma(self):
        return _ACTIVATIONS[self.activation]


@dataclass
class SgcnParams:
    """Per-layer weight matrices for the friend and enemy tracks.

    ``w_friend[0]`` and ``w_enemy[0]`` are ``d_hidden x 2*d_in``; all later
    entries are ``d_hidden x 3*d_hidden``.
    """

    w_friend: list[np.ndarray]
    w_enemy: list[np.ndarray]
    rng_seed: int

    def all_weights(self) -> list[np.ndarray]:
        return list(self.w_friend) + list(self.w_enemy)

    def copy(self) -> "SgcnParams":
        return SgcnParams(
            w_friend=[w.copy() for w in self.w_friend],
            w_enemy=[w.copy() for w in self.w_enemy],
            rng_seed=self.rng_seed,
        )


@dataclass(frozen=True)
class LayerState:
    """Hidden matrices (n x d_hidden) of both tracks at one layer."""

    friend: np.ndarray
    enemy: np.ndarray


def init_params(cfg: SgcnConfig, seed: int) -> SgcnParams:
    """Draw each weight uniformly on [-s, s] with s = sqrt(6 / (fan_in + fan_out))."""
    rng = np.random.default_rng(seed)
    w_friend, w_enemy = [], []
    for layer in range(cfg.layers):
        fan_in = 2 * cfg.d_in if layer == 0 else 3 * cfg.d_hidden
        scale = np.sqrt(6.0 / (fan_in + cfg.d_hidden))
        w_friend.append(rng.uniform(-scale, scale, size=(cfg.d_hidden, fan_in)))
        w_enemy.append(rng.uniform(-scale, scale, size=(cfg.d_hidden, fan_in)))
    return SgcnParams(w_friend=w_friend, w_enemy=w_enemy, rng_seed=seed)


def neighbor_mean_ops(
    g: SignedGraph,
) -> tuple[scipy.sparse.csr_matrix, scipy.sparse.csr_matrix]:
    """Sparse operators taking node features to positive/negative neighbor means.

    Row ``i`` of the positive operator averages over ``pos_adj[i]``; a node
    with no neighbors of that sign gets an all-zero row, so an empty
    neighborhood contributes the zero vector.
    """
    return _mean_matrix(g.n, g.pos_adj), _mean_matrix(g.n, g.neg_adj)


def _mean_matrix(n: int, adj) -> scipy.sparse.csr_matrix:
    rows, cols, vals = [], [], []
    for i, nbrs in enumerate(adj):
        if not nbrs:
            continue
        w = 1.0 / len(nbrs)
        for j in nbrs:
            rows.append(i)
            cols.append(j)
            vals.append(w)
    return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=np.float64)


def forward_layer1(g: SignedGraph, x: np.ndarray, params: SgcnParams) -> LayerState:
    """First layer: each track sees its own sign's neighbor mean plus self."""
    x = _check_features(g, x)
    pos_mean, neg_mean = neighbor_mean_ops(g)
    return _layer1_from_ops(x, params, pos_mean, neg_mean)


def forward_layer(
    g: SignedGraph, state: LayerState, params: SgcnParams, layer: int
) -> LayerState:
    """Layer ``layer`` (1-based, >= 2): cross-track aggregation.

    The friend track blends positive neighbors' friend states with negative
    neighbors' enemy states; the enemy track does the opposite.
    """
    if layer < 2:
        raise ValueError("forward_layer handles layers >= 2; use forward_layer1")
    pos_mean, neg_mean = neighbor_mean_ops(g)
    return _layer_from_ops(state, params, layer - 1, pos_mean, neg_mean)


def forward_layer_plus(
    g: SignedGraph, state: LayerState, params: SgcnParams
) -> LayerState:
    """Second layer of the plus variant: repeat per-sign aggregation, no crossing.

    The cross-track input slot is zeroed on both tracks, so each sign's
    information propagates twice in isolation while the weight shapes stay
    identical to the standard variant.
    """
    pos_mean, neg_mean = neighbor_mean_ops(g)
    return _layer_plus_from_ops(state, params, pos_mean, neg_mean)


def forward_pass(
    g: SignedGraph,
    x: np.ndarray,
    params: SgcnParams,
    cfg: SgcnConfig,
    ops: tuple[scipy.sparse.csr_matrix, scipy.sparse.csr_matrix] | None = None,
) -> list[LayerState]:
    """Run all layers and return every intermediate :class:`LayerState`.

    ``ops`` may carry the pair from :func:`neighbor_mean_ops` to skip
    rebuilding it, e.g. across training epochs on a fixed graph.
    """
    x = _check_features(g, x)
    if len(params.w_friend) != cfg.layers or len(params.w_enemy) != cfg.layers:
        raise ValueError(
            f"params carry {len(params.w_friend)} layers, config asks for {cfg.layers}"
        )
    pos_mean, neg_mean = ops if ops is not None else neighbor_mean_ops(g)
    sigma = cfg.sigma()
    states = [_layer1_from_ops(x, params, pos_mean, neg_mean, sigma)]
    for layer in range(2, cfg.layers + 1):
        if cfg.variant == "plus":
            states.append(
                _layer_plus_from_ops(states[-1], params, pos_mean, neg_mean, sigma)
            )
        else:
            states.append(
                _layer_from_ops(states[-1], params, layer - 1, pos_mean, neg_mean, sigma)
            )
    return states


def embed_all(
    g: SignedGraph,
    x: np.ndarray,
    params: SgcnParams,
    cfg: SgcnConfig,
    ops: tuple[scipy.sparse.csr_matrix, scipy.sparse.csr_matrix] | None = None,
) -> np.ndarray:
    """Node embeddings: last layer's friend and enemy states, concatenated."""
    final = forward_pass(g, x, params, cfg, ops=ops)[-1]
    return np.hstack([final.friend, final.enemy])


def _check_features(g: SignedGraph, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != g.n:
        raise ValueError(f"feature matrix must be ({g.n}, d_in), got {x.shape}")
    return x


def _layer1_from_ops(x, params, pos_mean, neg_mean, sigma=np.tanh) -> LayerState:
    wf, we = params.w_friend[0], params.w_enemy[0]
    if wf.shape[1] != 2 * x.shape[1]:
        raise ValueError(
            f"layer-1 weights expect input width {wf.shape[1] // 2}, got {x.shape[1]}"
        )
    friend_in = np.hstack([pos_mean @ x, x])
    enemy_in = np.hstack([neg_mean @ x, x])
    return LayerState(friend=sigma(friend_in @ wf.T), enemy=sigma(enemy_in @ we.T))


def _layer_from_ops(state, params, w_index, pos_mean, neg_mean, sigma=np.tanh) -> LayerState:
    wf, we = params.w_friend[w_index], params.w_enemy[w_index]
    hf, he = state.friend, state.enemy
    friend_in = np.hstack([pos_mean @ hf, neg_mean @ he, hf])
    enemy_in = np.hstack([pos_mean @ he, neg_mean @ hf, he])
    return LayerState(friend=sigma(friend_in @ wf.T), enemy=sigma(enemy_in @ we.T))


def _layer_plus_from_ops(state, params, pos_mean, neg_mean, sigma=np.tanh) -> LayerState:
    wf, we = params.w_friend[1], params.w_enemy[1]
    hf, he = state.friend, state.enemy
    zero = np.zeros_like(hf)
    friend_in = np.hstack([pos_mean @ hf, zero, hf])
    enemy_in = np.hstack([zero, neg_mean @ he, he])
    return LayerState(friend=sigma(friend_in @ wf.T), enemy=sigma(enemy_in @ we.T))
