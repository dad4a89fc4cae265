"""Unpacked one-byte-per-entry GF(2) routines.

Deliberately naive; they exist so the packed kernels can be checked against
an independent implementation.
"""

import numpy as np


def mul(a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for i in range(a.shape[0]):
        for k in np.nonzero(a[i])[0]:
            out[i] ^= b[k]
    return out.astype(np.uint8)


def rref(m):
    m = np.array(m, dtype=np.uint8) & 1
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if len(nz) == 0:
            continue
        p = r + nz[0]
        m[[r, p]] = m[[p, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(m):
    return len(rref(m)[1])


def nullspace(m):
    m = np.asarray(m, dtype=np.uint8)
    r, pivots = rref(m)
    n = m.shape[1]
    free = [c for c in range(n) if c not in pivots]
    out = np.zeros((len(free), n), dtype=np.uint8)
    for t, f in enumerate(free):
        out[t, f] = 1
        for i, c in enumerate(pivots):
            out[t, c] = r[i, f]
    return out


def inverse(m):
    n = m.shape[0]
    aug = np.concatenate([np.asarray(m, dtype=np.uint8), np.eye(n, dtype=np.uint8)], axis=1)
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n or pivots[n - 1] != n - 1:
        raise ValueError("singular")
    return r[:, n:]
