"""Signed spectral embedding: bottom eigenvectors of a signed Laplacian.

The plain signed Laplacian is ``D - A`` where ``A`` holds +1/-1 edge signs
and ``D`` is the diagonal of *absolute* degrees; it is symmetric positive
semidefinite, and a connected graph's smallest eigenvalue is zero exactly
when the graph is balanced (2-colorable across negative edges).

For embeddings the degree-normalized form ``I - D^{-1/2} A D^{-1/2}`` is
used by default: on sparse trust networks the plain operator's bottom
eigenvectors are indicator spikes on isolated nodes and tiny balanced
fragments (every such component contributes an exact zero eigenvalue),
which starves the embedding of any information about the main component.
Normalization keeps fragment eigenvectors at zero but moves isolated nodes
to eigenvalue 1, out of the informative bottom of the spectrum.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .graph import SignedGraph

__all__ = ["signed_adjacency", "signed_laplacian", "spectral_embedding"]

# Above this node count the dense eigensolver's O(n^2) memory stops being
# desk-friendly and a sparse shift-invert solver takes over.
_DENSE_LIMIT = 8000


def signed_adjacency(g: SignedGraph) -> scipy.sparse.csr_matrix:
    """The n-by-n sparse adjacency with entries in {+1, -1, 0}."""
    rows, cols, vals = [], [], []
    for u in range(g.n):
        for v in g.pos_adj[u]:
            rows.append(u)
            cols.append(v)
            vals.append(1.0)
        for v in g.neg_adj[u]:
            rows.append(u)
            cols.append(v)
            vals.append(-1.0)
    return scipy.sparse.csr_matrix(
        (vals, (rows, cols)), shape=(g.n, g.n), dtype=np.float64
    )


def signed_laplacian(g: SignedGraph) -> np.ndarray:
    """Dense signed Laplacian ``D - A`` with absolute-degree diagonal."""
    if g.n < 1:
        raise ValueError("graph must have at least one node")
    adj = signed_adjacency(g)
    degrees = np.asarray(np.abs(adj).sum(axis=1)).ravel()
    lap = -adj.toarray()
    lap[np.diag_indices(g.n)] = degrees
    return lap


def _embedding_operator(g: SignedGraph, normalization: str) -> scipy.sparse.csr_matrix:
    adj = signed_adjacency(g)
    degrees = np.asarray(np.abs(adj).sum(axis=1)).ravel()
    if normalization == "none":
        return scipy.sparse.diags(degrees) - adj
    if normalization != "degree":
        raise ValueError(f"unknown normalization {normalization!r}")
    inv_sqrt = np.zeros(g.n)
    nonzero = degrees > 0
    inv_sqrt[nonzero] = 1.0 / np.sqrt(degrees[nonzero])
    scaled = adj.multiply(inv_sqrt[:, None]).multiply(inv_sqrt[None, :])
    # Isolated nodes keep a bare identity row: eigenvalue 1, away from the
    # informative bottom of the [0, 2] spectrum.
    return scipy.sparse.identity(g.n, format="csr") - scipy.sparse.csr_matrix(scaled)


def spectral_embedding(
    g: SignedGraph,
    d: int,
    normalization: str = "degree",
    return_eigenvalues: bool = False,
):
    """Embed nodes with the ``d`` eigenvectors of the smallest eigenvalues.

    Columns are unit-norm eigenvectors of the signed Laplacian (degree
    normalized by default, ``normalization="none"`` for the plain form),
    ordered by ascending eigenvalue. Each eigenvector's sign is fixed so
    that its largest-magnitude entry is positive, making the output
    reproducible across runs and BLAS builds.
    """
    if not 1 <= d <= g.n:
        raise ValueError(f"need 1 <= d <= n, got d={d}, n={g.n}")
    operator = _embedding_operator(g, normalization)
    if g.n <= _DENSE_LIMIT:
        vals, vecs = scipy.linalg.eigh(operator.toarray(), subset_by_index=[0, d - 1])
    else:
        # Shift-invert around a point just below the spectrum; the operator
        # is PSD so a negative sigma keeps the factorization nonsingular.
        vals, vecs = scipy.sparse.linalg.eigsh(
            operator.tocsc(), k=d, sigma=-0.01, which="LM"
        )
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
    for j in range(vecs.shape[1]):
        lead = np.argmax(np.abs(vecs[:, j]))
        if vecs[lead, j] < 0:
            vecs[:, j] = -vecs[:, j]
    vecs = np.ascontiguousarray(vecs)
    if return_eigenvalues:
        return vecs, vals
    return vecs
