"""Slow, independent reference computations used by tests and ``selftest``."""
from __future__ import annotations

import itertools

import numpy as np


def kron_generator(N: int) -> np.ndarray:
    """Dense ``G_2^{(x)n}`` built with ``np.kron``."""
    G = np.array([[1]], dtype=np.uint8)
    while G.shape[0] < N:
        G = np.kron(G, np.array([[1, 0], [1, 1]], dtype=np.uint8))
    return G


def dense_transform(u) -> np.ndarray:
    u = np.asarray(u, dtype=np.int64)
    return (u @ kron_generator(u.shape[-1]).astype(np.int64) % 2).astype(np.uint8)


def _sgn(x: float) -> float:
    return (x > 0) - (x < 0)


def genie_leaf_llrs(llr, u) -> list[float]:
    """Leaf LLRs seen by an SC decoder whose past decisions are forced to ``u``."""
    llr = [float(v) for v in llr]
    N = len(llr)
    if N == 1:
        return llr
    h = N // 2
    a, b = llr[:h], llr[h:]
    left = [_sgn(x) * _sgn(y) * min(abs(x), abs(y)) for x, y in zip(a, b)]
    beta = dense_transform(u[:h]).tolist()
    right = [y + (1 - 2 * s) * x for x, y, s in zip(a, b, beta)]
    return genie_leaf_llrs(left, u[:h]) + genie_leaf_llrs(right, u[h:])


def path_metric(llr, u) -> float:
    """Min-sum path metric of the full input vector ``u``, summed in bit order."""
    pm = 0.0
    for lam, bit in zip(genie_leaf_llrs(llr, u), u):
        if (lam < 0 and bit == 0) or (lam > 0 and bit == 1):
            pm += abs(lam)
    return pm


def brute_force_min_metric(llr, info_set, N: int) -> tuple[np.ndarray, float]:
    """Input vector minimising :func:`path_metric` over all 2**|I| choices.

    Candidates are enumerated in lexicographic order of the information bits
    and the first minimiser wins.
    """
    best_u, best_pm = None, np.inf
    for bits in itertools.product((0, 1), repeat=len(info_set)):
        u = np.zeros(N, dtype=np.uint8)
        u[list(info_set)] = bits
        pm = path_metric(llr, u)
        if pm < best_pm:
            best_u, best_pm = u, pm
    return best_u, best_pm
