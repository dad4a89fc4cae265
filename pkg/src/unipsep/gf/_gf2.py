"""Packed GF(2) kernels.

A GF(2) matrix with ``n`` columns is stored as a C-contiguous ``uint64``
array of shape ``(nrows, nwords(n))``.  Column ``j`` lives in word ``j >> 6``
at bit ``j & 63``.  Padding bits past ``n`` are always zero; every kernel
below relies on that.
"""

import numpy as np
from numba import njit

ONE = np.uint64(1)
ZERO = np.uint64(0)


def nwords(ncols):
    return max(1, (ncols + 63) >> 6)


def pack(bits):
    """Pack a 0/1 array of shape (m, n) into words."""
    bits = np.ascontiguousarray(bits, dtype=np.uint8)
    m, n = bits.shape
    w = nwords(n)
    padded = np.zeros((m, w * 64), dtype=np.uint8)
    padded[:, :n] = bits & 1
    return np.packbits(padded, axis=1, bitorder="little").view("<u8").astype(np.uint64).reshape(m, w)


def unpack(words, ncols):
    m = words.shape[0]
    raw = np.ascontiguousarray(words, dtype="<u8").view(np.uint8).reshape(m, -1)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :ncols].copy()


@njit(cache=True)
def popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def get_bit(row, j):
    return (row[j >> 6] >> np.uint64(j & 63)) & ONE


@njit(cache=True)
def first_bit(row, ncols):
    for w in range(row.shape[0]):
        x = row[w]
        if x != ZERO:
            j = 0
            while ((x >> np.uint64(j)) & ONE) == ZERO:
                j += 1
            c = (w << 6) + j
            if c < ncols:
                return c
            return -1
    return -1


@njit(cache=True)
def mul(a, b):
    """Four-Russians product: ``a`` is (m, *) with b.shape[0] columns, ``b`` is (k, wb)."""
    m = a.shape[0]
    k = b.shape[0]
    wb = b.shape[1]
    out = np.zeros((m, wb), dtype=np.uint64)
    table = np.zeros((256, wb), dtype=np.uint64)
    for k0 in range(0, k, 8):
        kk = min(8, k - k0)
        for t in range(kk):
            hi = 1 << t
            for s in range(hi):
                for w in range(wb):
                    table[hi + s, w] = table[s, w] ^ b[k0 + t, w]
        word = k0 >> 6
        sh = np.uint64(k0 & 63)
        mask = np.uint64((1 << kk) - 1)
        for i in range(m):
            idx = np.int64((a[i, word] >> sh) & mask)
            if idx != 0:
                for w in range(wb):
                    out[i, w] ^= table[idx, w]
    return out


@njit(cache=True)
def mul_naive(a, b):
    """Row-by-row XOR product, kept as an in-package cross-check for ``mul``."""
    m = a.shape[0]
    k = b.shape[0]
    wb = b.shape[1]
    out = np.zeros((m, wb), dtype=np.uint64)
    for i in range(m):
        for j in range(k):
            if (a[i, j >> 6] >> np.uint64(j & 63)) & ONE:
                for w in range(wb):
                    out[i, w] ^= b[j, w]
    return out


@njit(cache=True)
def echelonize(m, ncols, reduced):
    """In-place Gauss-Jordan; returns pivot columns.

    With ``reduced`` false only rows below each pivot are cleared, which is
    all ``rank`` needs.
    """
    nrows, W = m.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        w = c >> 6
        bit = ONE << np.uint64(c & 63)
        p = -1
        for i in range(r, nrows):
            if m[i, w] & bit:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(w, W):
                tmp = m[r, k]
                m[r, k] = m[p, k]
                m[p, k] = tmp
        start = 0 if reduced else r + 1
        for i in range(start, nrows):
            if i != r and (m[i, w] & bit):
                for k in range(w, W):
                    m[i, k] ^= m[r, k]
        pivots[r] = c
        r += 1
    return pivots[:r].copy()


@njit(cache=True)
def nullspace_from_rref(r, pivots, ncols):
    """Right kernel basis from a reduced echelon form with the given pivots."""
    rank = pivots.shape[0]
    W = nwords_nb(ncols)
    is_piv = np.zeros(ncols, dtype=np.bool_)
    for i in range(rank):
        is_piv[pivots[i]] = True
    out = np.zeros((ncols - rank, W), dtype=np.uint64)
    t = 0
    for f in range(ncols):
        if is_piv[f]:
            continue
        out[t, f >> 6] |= ONE << np.uint64(f & 63)
        for i in range(rank):
            if (r[i, f >> 6] >> np.uint64(f & 63)) & ONE:
                c = pivots[i]
                out[t, c >> 6] |= ONE << np.uint64(c & 63)
        t += 1
    return out


@njit(cache=True)
def nwords_nb(ncols):
    return max(1, (ncols + 63) >> 6)


@njit(cache=True)
def transpose(a, ncols):
    m = a.shape[0]
    out = np.zeros((ncols, nwords_nb(m)), dtype=np.uint64)
    for i in range(m):
        wi = i >> 6
        bi = ONE << np.uint64(i & 63)
        for w in range(a.shape[1]):
            x = a[i, w]
            j = w << 6
            while x != ZERO:
                if x & ONE:
                    out[j, wi] |= bi
                x >>= ONE
                j += 1
    return out


@njit(cache=True)
def xor_shifted(dst, src, offset):
    """dst ^= src shifted up by ``offset`` bits (src padding must be zero)."""
    q0 = offset >> 6
    s = offset & 63
    nd = dst.shape[0]
    if s == 0:
        for t in range(src.shape[0]):
            if q0 + t < nd:
                dst[q0 + t] ^= src[t]
    else:
        sh = np.uint64(s)
        back = np.uint64(64 - s)
        for t in range(src.shape[0]):
            x = src[t]
            if x == ZERO:
                continue
            if q0 + t < nd:
                dst[q0 + t] ^= x << sh
            if q0 + t + 1 < nd:
                dst[q0 + t + 1] ^= x >> back


@njit(cache=True)
def kron(a, a_cols, b, b_cols):
    ma = a.shape[0]
    mb = b.shape[0]
    out = np.zeros((ma * mb, nwords_nb(a_cols * b_cols)), dtype=np.uint64)
    for i in range(ma):
        for j in range(a_cols):
            if (a[i, j >> 6] >> np.uint64(j & 63)) & ONE:
                for k in range(mb):
                    xor_shifted(out[i * mb + k], b[k], j * b_cols)
    return out


@njit(cache=True)
def vecmat(v, m, nrows_m):
    out = np.zeros(m.shape[1], dtype=np.uint64)
    for w in range(v.shape[0]):
        x = v[w]
        j = w << 6
        while x != ZERO and j < nrows_m:
            if x & ONE:
                for k in range(m.shape[1]):
                    out[k] ^= m[j, k]
            x >>= ONE
            j += 1
    return out


@njit(cache=True)
def _reduce(v, basis, piv, k):
    """Reduce ``v`` in place against a semi-echelon basis; return first set bit or -1."""
    for i in range(k):
        c = piv[i]
        if (v[c >> 6] >> np.uint64(c & 63)) & ONE:
            for w in range(v.shape[0]):
                v[w] ^= basis[i, w]
    return first_bit(v, v.shape[0] * 64)


@njit(cache=True)
def spin(seeds, gens, n, limit):
    """Close the span of ``seeds`` under right multiplication by each of ``gens``.

    Returns a semi-echelon basis (each row has a pivot column where all later
    rows vanish) and its pivots.  Stops early once the dimension exceeds
    ``limit``.
    """
    W = nwords_nb(n)
    basis = np.zeros((n, W), dtype=np.uint64)
    piv = np.empty(n, dtype=np.int64)
    k = 0
    for s in range(seeds.shape[0]):
        v = seeds[s].copy()
        c = _reduce(v, basis, piv, k)
        if c >= 0:
            basis[k] = v
            piv[k] = c
            k += 1
    j = 0
    while j < k and k < n and k <= limit:
        for g in range(gens.shape[0]):
            v = vecmat(basis[j], gens[g], n)
            c = _reduce(v, basis, piv, k)
            if c >= 0:
                basis[k] = v
                piv[k] = c
                k += 1
                if k == n:
                    break
        j += 1
    return basis[:k].copy(), piv[:k].copy()


@njit(cache=True)
def krylov_blocks(theta, n):
    """Cyclic decomposition used for the characteristic polynomial.

    Returns ``(degrees, coeffs)``: block ``b`` contributes a monic polynomial
    of degree ``degrees[b]`` whose ``degrees[b] + 1`` coefficients (lowest
    first) are stored consecutively in ``coeffs``.  The product of the blocks
    is the characteristic polynomial of ``theta``.
    """
    W = nwords_nb(n)
    Wt = nwords_nb(n + 1)
    basis = np.zeros((n, W), dtype=np.uint64)
    track = np.zeros((n, Wt), dtype=np.uint64)
    piv = np.empty(n, dtype=np.int64)
    degrees = np.zeros(n, dtype=np.int64)
    coeffs = np.zeros(2 * n + 1, dtype=np.uint8)
    nblocks = 0
    ncoef = 0
    k = 0
    e = np.zeros(W, dtype=np.uint64)
    nxt = 0
    while k < n:
        # next start vector: first standard basis vector outside the span
        while True:
            e[:] = ZERO
            e[nxt >> 6] = ONE << np.uint64(nxt & 63)
            nxt += 1
            c = _reduce(e, basis, piv, k)
            if c >= 0:
                break
        start = k
        v = e.copy()
        t = np.zeros(Wt, dtype=np.uint64)
        t[0] = ONE
        while True:
            basis[k] = v
            track[k] = t
            piv[k] = c
            k += 1
            w = vecmat(v, theta, n)
            tw = np.zeros(Wt, dtype=np.uint64)
            carry = ZERO
            for q in range(Wt):
                x = t[q]
                tw[q] = (x << ONE) | carry
                carry = x >> np.uint64(63)
            for i in range(k):
                ci = piv[i]
                if (w[ci >> 6] >> np.uint64(ci & 63)) & ONE:
                    for q in range(W):
                        w[q] ^= basis[i, q]
                    if i >= start:
                        for q in range(Wt):
                            tw[q] ^= track[i, q]
            c = first_bit(w, n)
            if c < 0:
                d = k - start
                degrees[nblocks] = d
                nblocks += 1
                for j in range(d + 1):
                    coeffs[ncoef + j] = np.uint8((tw[j >> 6] >> np.uint64(j & 63)) & ONE)
                ncoef += d + 1
                break
            v = w
            t = tw
    return degrees[:nblocks].copy(), coeffs[:ncoef].copy()


@njit(cache=True)
def compound_minors(g, idx_rows, idx_cols, p, inv):
    """Matrix of i x i minors det(g[S, T]) mod p over index-subset lists.

    ``g`` is an unpacked uint8 matrix, ``idx_rows``/``idx_cols`` are (N, i)
    subset arrays and ``inv`` is the table of inverses mod p.
    """
    nr = idx_rows.shape[0]
    nc = idx_cols.shape[0]
    i = idx_rows.shape[1]
    out = np.zeros((nr, nc), dtype=np.uint8)
    sub = np.zeros((i, i), dtype=np.int64)
    for a in range(nr):
        for b in range(nc):
            for r in range(i):
                for s in range(i):
                    sub[r, s] = g[idx_rows[a, r], idx_cols[b, s]]
            det = 1
            for c in range(i):
                pr = -1
                for r in range(c, i):
                    if sub[r, c] % p != 0:
                        pr = r
                        break
                if pr < 0:
                    det = 0
                    break
                if pr != c:
                    for s in range(i):
                        tmp = sub[c, s]
                        sub[c, s] = sub[pr, s]
                        sub[pr, s] = tmp
                    det = -det
                piv = sub[c, c] % p
                det = (det * piv) % p
                ip = inv[piv]
                for r in range(c + 1, i):
                    f = (sub[r, c] * ip) % p
                    if f != 0:
                        for s in range(c, i):
                            sub[r, s] = (sub[r, s] - f * sub[c, s]) % p
            out[a, b] = np.uint8(det % p)
    return out


@njit(cache=True)
def take(a, rows, cols):
    """Packed submatrix a[rows][:, cols]."""
    out = np.zeros((rows.shape[0], nwords_nb(cols.shape[0])), dtype=np.uint64)
    for r in range(rows.shape[0]):
        src = a[rows[r]]
        for t in range(cols.shape[0]):
            j = cols[t]
            if (src[j >> 6] >> np.uint64(j & 63)) & ONE:
                out[r, t >> 6] |= ONE << np.uint64(t & 63)
    return out
