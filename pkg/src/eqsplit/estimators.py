"""Estimator-style wrappers around the solvers.

Thin adapters exposing get_params/set_params plus a fit step that accepts
either a Graph or a square 0/1 adjacency matrix.  The fitted attributes carry
the splitting; the heavy lifting stays in the functional modules.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .graph import Graph
from .oracle import EXHAUSTIVE_LIMIT, exact_f
from .splitter import SplitParams, split


def as_graph(X) -> Graph:
    """Coerce a Graph or symmetric 0/1 adjacency matrix into a Graph."""
    if isinstance(X, Graph):
        return X
    arr = np.asarray(X)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"adjacency matrix must be square, got shape {arr.shape}")
    if not np.array_equal(arr, arr.T):
        raise ValueError("adjacency matrix must be symmetric")
    if np.any(np.diag(arr) != 0):
        raise ValueError("adjacency matrix must have a zero diagonal")
    if not np.isin(arr, (0, 1)).all():
        raise ValueError("adjacency entries must be 0 or 1")
    iu, iv = np.nonzero(np.triu(arr, 1))
    return Graph._from_trusted(arr.shape[0], list(zip(iu.tolist(), iv.tolist())))


class RandomizedSplitter(BaseEstimator):
    """Finds two equal halves with equal induced edge counts after light deletion.

    Attributes after fit: ``result_`` (the full SplitResult), ``a_``, ``b_``,
    ``k_``, ``deleted_``.
    """

    def __init__(self, epsilon: float = 0.1, beta=None, seed: int = 0, max_attempts: int = 20):
        self.epsilon = epsilon
        self.beta = beta
        self.seed = seed
        self.max_attempts = max_attempts

    def fit(self, X, y=None):
        g = as_graph(X)
        params = SplitParams(
            epsilon=self.epsilon, beta=self.beta, seed=self.seed, max_attempts=self.max_attempts
        )
        self.result_ = split(g, self.epsilon, seed=self.seed, params=params)
        self.a_ = self.result_.a
        self.b_ = self.result_.b
        self.k_ = self.result_.k
        self.deleted_ = self.result_.deleted
        return self

    def fit_predict(self, X, y=None):
        """Per-vertex labels: 0 for side A, 1 for side B, -1 for deleted."""
        self.fit(X)
        n = max(max(self.a_ | self.b_ | self.deleted_, default=-1) + 1, 0)
        labels = np.full(n, -1, dtype=int)
        labels[sorted(self.a_)] = 0
        labels[sorted(self.b_)] = 1
        return labels


class ExactSplitter(BaseEstimator):
    """Exhaustive optimum for small graphs (n <= 14 by default)."""

    def __init__(self, limit: int = EXHAUSTIVE_LIMIT):
        self.limit = limit

    def fit(self, X, y=None):
        g = as_graph(X)
        self.result_ = exact_f(g, limit=self.limit)
        self.a_ = self.result_.a
        self.b_ = self.result_.b
        self.k_ = self.result_.k
        return self

    def fit_predict(self, X, y=None):
        self.fit(X)
        g = as_graph(X)
        labels = np.full(g.n, -1, dtype=int)
        labels[sorted(self.a_)] = 0
        labels[sorted(self.b_)] = 1
        return labels
