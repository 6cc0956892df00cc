"""Pure numpy implementations of the compiled kernels."""

import numpy as np
from scipy import sparse


def interval_sums(a, lo, delta, left, right):
    a = np.ascontiguousarray(a, dtype=float)
    n = a.shape[0]
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    i0 = np.maximum(np.floor((left - lo) / delta).astype(np.intp), 0)
    i1 = np.minimum(np.ceil((right - lo) / delta).astype(np.intp) - 1, n - 1)
    counts = np.maximum(i1 - i0 + 1, 0)
    rows = np.repeat(np.arange(len(left)), counts)
    starts = np.repeat(i0, counts)
    first = np.repeat(np.cumsum(counts) - counts, counts)
    cols = starts + np.arange(counts.sum()) - first
    c0 = lo + cols * delta
    c1 = lo + (cols + 1) * delta
    w = np.minimum(c1, right[rows]) - np.maximum(c0, left[rows])
    keep = w > 0
    W = sparse.csr_matrix((w[keep], (rows[keep], cols[keep])), shape=(len(left), n))
    return np.asarray(W @ a)


def ball_accumulate(f, pos, offsets, coeffs, v, use_max):
    acc = np.zeros(len(pos))
    for off in offsets:
        val = np.zeros(len(pos))
        for l, c in enumerate(coeffs):
            val = val + c * f[pos + l * off]
        val = np.abs(val)
        if use_max:
            np.maximum(acc, val, out=acc)
        elif v == 1.0:
            acc += val
        else:
            acc += val ** v
    return acc
