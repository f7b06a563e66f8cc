"""Vectorized evaluation of sums of monomials and simplex projections.

Both the hypergraph Lagrangian and the set-system weight function are sums
of coefficient-weighted monomials in the point coordinates, so one engine
serves both optimizers.  Points are processed in batches (one row per
restart).
"""

from __future__ import annotations

import numpy as np

__all__ = ["MonomialSystem", "project_rows_to_simplex", "pav_nonincreasing", "project_monotone_simplex"]


class MonomialSystem:
    """f(p) = sum_k coeff_k * prod_j p[idx[k, j]] and its gradient."""

    def __init__(self, idx, coeff, n):
        self.idx = np.asarray(idx, dtype=np.int64)
        self.coeff = np.asarray(coeff, dtype=np.float64)
        self.n = int(n)
        if self.idx.ndim != 2 or self.idx.shape[0] != self.coeff.shape[0]:
            raise ValueError("index and coefficient shapes disagree")
        m, w = self.idx.shape
        flat = self.idx.reshape(-1)
        order = np.argsort(flat, kind="stable")
        self._flat_order = order
        sorted_targets = flat[order]
        boundaries = np.flatnonzero(np.diff(sorted_targets)) + 1
        self._group_starts = np.concatenate(([0], boundaries))
        self._group_targets = sorted_targets[self._group_starts]

    def values(self, points):
        P = np.atleast_2d(points)
        monoms = P[:, self.idx].prod(axis=2)
        return monoms @ self.coeff

    def values_and_grads(self, points):
        P = np.atleast_2d(points)
        R = P.shape[0]
        m, w = self.idx.shape
        factors = P[:, self.idx]  # (R, m, w)
        pre = np.cumprod(factors, axis=2)
        suf = np.cumprod(factors[:, :, ::-1], axis=2)[:, :, ::-1]
        excl = np.empty_like(factors)
        excl[:, :, 0] = suf[:, :, 1] if w > 1 else 1.0
        if w > 1:
            excl[:, :, -1] = pre[:, :, -2]
            for j in range(1, w - 1):
                excl[:, :, j] = pre[:, :, j - 1] * suf[:, :, j + 1]
        contrib = excl * self.coeff[None, :, None]  # (R, m, w)
        flat = contrib.reshape(R, m * w)[:, self._flat_order]
        sums = np.add.reduceat(flat, self._group_starts, axis=1)
        grads = np.zeros((R, self.n))
        grads[:, self._group_targets] = sums
        values = pre[:, :, -1] @ self.coeff
        return values, grads


def project_rows_to_simplex(P):
    """Euclidean projection of each row onto the probability simplex."""
    P = np.atleast_2d(P)
    n = P.shape[1]
    srt = np.sort(P, axis=1)[:, ::-1]
    css = np.cumsum(srt, axis=1) - 1.0
    ks = np.arange(1, n + 1)
    cond = srt - css / ks > 0
    rho = cond.sum(axis=1)
    theta = css[np.arange(P.shape[0]), rho - 1] / rho
    return np.maximum(P - theta[:, None], 0.0)


def pav_nonincreasing(row):
    """Pool-adjacent-violators projection onto non-increasing sequences."""
    values = []
    weights = []
    for x in row:
        values.append(float(x))
        weights.append(1.0)
        # merging restores x[i] >= x[i+1]
        while len(values) > 1 and values[-2] < values[-1]:
            v = (values[-2] * weights[-2] + values[-1] * weights[-1]) / (
                weights[-2] + weights[-1]
            )
            w = weights[-2] + weights[-1]
            values.pop()
            weights.pop()
            values[-1] = v
            weights[-1] = w
    out = np.empty(len(row))
    pos = 0
    for v, w in zip(values, weights):
        cnt = int(w)
        out[pos : pos + cnt] = v
        pos += cnt
    return out


def project_monotone_simplex(q, s, max_rounds=50):
    """Project onto {q in simplex : q[0] >= ... >= q[s-1]}, q[s:] free.

    Alternates isotonic regression on the first s coordinates with simplex
    projection of the whole vector until both constraints hold.
    """
    q = np.array(q, dtype=np.float64)
    for _ in range(max_rounds):
        q[:s] = pav_nonincreasing(q[:s])
        q = project_rows_to_simplex(q[None, :])[0]
        diffs = np.diff(q[:s])
        if (diffs <= 1e-15).all():
            break
    return q
