"""Compiled skip-gram negative-sampling kernels.

Random numbers come from a splitmix64 stream held in a one-element uint64
array, so single-threaded training is reproducible from the seed alone.
"""

import numpy as np
from numba import njit, prange

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TO_UNIT = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True)
def _next_u64(state):
    z = state[0] + _GOLDEN
    state[0] = z
    z = (z ^ (z >> np.uint64(30))) * _M1
    z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _uniform(state):
    return np.float64(_next_u64(state) >> np.uint64(11)) * _TO_UNIT


@njit(cache=True)
def _sigmoid(x):
    if x >= 0:
        return 1.0 / (1.0 + np.exp(-x))
    e = np.exp(x)
    return e / (1.0 + e)


@njit(cache=True)
def apply_update(w_in, w_out, center, targets, labels, n_targets, lr, grad_h, coef):
    """One SGNS step for ``center`` against ``targets[:n_targets]``.

    All coefficients are computed from the pre-update vectors before any
    vector is written, so the applied change is exactly ``lr`` times the
    gradient of the log-likelihood.
    """
    dim = w_in.shape[1]
    for k in range(n_targets):
        t = targets[k]
        dot = 0.0
        for d in range(dim):
            dot += w_in[center, d] * w_out[t, d]
        coef[k] = (labels[k] - _sigmoid(dot)) * lr
    for d in range(dim):
        grad_h[d] = 0.0
    for k in range(n_targets):
        t = targets[k]
        for d in range(dim):
            grad_h[d] += coef[k] * w_out[t, d]
    for k in range(n_targets):
        t = targets[k]
        for d in range(dim):
            w_out[t, d] += coef[k] * w_in[center, d]
    for d in range(dim):
        w_in[center, d] += grad_h[d]


@njit(cache=True)
def _draw_negatives(neg_cdf, context, negative, state, targets, labels):
    n = 1
    targets[0] = context
    labels[0] = 1.0
    total = neg_cdf[-1]
    for _ in range(negative):
        t = np.searchsorted(neg_cdf, _uniform(state) * total, side="right")
        if t >= neg_cdf.shape[0]:
            t = neg_cdf.shape[0] - 1
        if t == context:
            continue
        targets[n] = t
        labels[n] = 0.0
        n += 1
    return n


@njit(cache=True)
def count_pairs(offsets, window):
    total = 0
    for w in range(offsets.shape[0] - 1):
        length = offsets[w + 1] - offsets[w]
        for i in range(length):
            lo = max(0, i - window)
            hi = min(length, i + window + 1)
            total += hi - lo - 1
    return total


@njit(cache=True)
def train_serial(tokens, offsets, w_in, w_out, neg_cdf, window, negative, epochs, lr0, lr_min, state):
    """Deterministic training over all walks for ``epochs`` passes.

    Learning rate decays linearly from ``lr0`` to ``lr_min`` over all
    (center, context) pairs of all epochs.
    """
    dim = w_in.shape[1]
    targets = np.empty(negative + 1, dtype=np.int64)
    labels = np.empty(negative + 1, dtype=np.float64)
    grad_h = np.empty(dim, dtype=np.float64)
    coef = np.empty(negative + 1, dtype=np.float64)
    total = count_pairs(offsets, window) * epochs
    if total == 0:
        return
    done = 0
    for _ in range(epochs):
        for w in range(offsets.shape[0] - 1):
            s = offsets[w]
            e = offsets[w + 1]
            for i in range(s, e):
                center = tokens[i]
                lo = max(s, i - window)
                hi = min(e, i + window + 1)
                for j in range(lo, hi):
                    if j == i:
                        continue
                    lr = lr0 - (lr0 - lr_min) * done / total
                    n = _draw_negatives(neg_cdf, tokens[j], negative, state, targets, labels)
                    apply_update(w_in, w_out, center, targets, labels, n, lr, grad_h, coef)
                    done += 1


@njit(cache=True, parallel=True)
def train_parallel(tokens, offsets, w_in, w_out, neg_cdf, window, negative, epochs, lr0, lr_min, seed):
    """Lock-free (Hogwild) variant; results vary between runs."""
    dim = w_in.shape[1]
    n_walks = offsets.shape[0] - 1
    for ep in range(epochs):
        for w in prange(n_walks):
            state = np.empty(1, dtype=np.uint64)
            state[0] = np.uint64(seed) + np.uint64(ep * n_walks + w) * _GOLDEN
            targets = np.empty(negative + 1, dtype=np.int64)
            labels = np.empty(negative + 1, dtype=np.float64)
            grad_h = np.empty(dim, dtype=np.float64)
            coef = np.empty(negative + 1, dtype=np.float64)
            progress = (ep * n_walks + w) / (epochs * n_walks)
            lr = lr0 - (lr0 - lr_min) * progress
            s = offsets[w]
            e = offsets[w + 1]
            for i in range(s, e):
                center = tokens[i]
                lo = max(s, i - window)
                hi = min(e, i + window + 1)
                for j in range(lo, hi):
                    if j == i:
                        continue
                    n = _draw_negatives(neg_cdf, tokens[j], negative, state, targets, labels)
                    apply_update(w_in, w_out, center, targets, labels, n, lr, grad_h, coef)
