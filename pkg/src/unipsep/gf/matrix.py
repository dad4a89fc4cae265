"""Dense matrices over a prime field.

GF(2) matrices are bit-packed (see :mod:`unipsep.gf._gf2`); every other prime
uses one byte per entry.  Instances are immutable: the backing array is
flagged read-only and every operation returns a new matrix.
"""

from __future__ import annotations

import numpy as np

from ..errors import DimensionMismatch, PrimeMismatch, SingularMatrix
from . import _gf2


def _check_prime(p):
    if p < 2 or p > 251 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{p} is not a supported prime")


def _inverse_table(p):
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


class FieldMatrix:
    """An ``nrows`` x ``ncols`` matrix with entries in GF(prime)."""

    __slots__ = ("prime", "nrows", "ncols", "_data", "_hash")

    def __init__(self, prime, nrows, ncols, data):
        self.prime = int(prime)
        self.nrows = int(nrows)
        self.ncols = int(ncols)
        data = np.ascontiguousarray(data)
        data.flags.writeable = False
        self._data = data
        self._hash = None

    # construction ---------------------------------------------------------

    @classmethod
    def from_entries(cls, prime, entries):
        _check_prime(prime)
        arr = np.asarray(entries, dtype=np.int64)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        if arr.ndim != 2:
            raise ValueError("entries must be two-dimensional")
        arr = np.mod(arr, prime).astype(np.uint8)
        m, n = arr.shape
        if prime == 2:
            return cls(2, m, n, _gf2.pack(arr))
        return cls(prime, m, n, arr)

    @classmethod
    def _from_packed(cls, nrows, ncols, words):
        return cls(2, nrows, ncols, words)

    @classmethod
    def zeros(cls, prime, nrows, ncols):
        if prime == 2:
            return cls(2, nrows, ncols, np.zeros((nrows, _gf2.nwords(ncols)), dtype=np.uint64))
        return cls(prime, nrows, ncols, np.zeros((nrows, ncols), dtype=np.uint8))

    @classmethod
    def identity(cls, prime, n):
        if prime == 2:
            words = np.zeros((n, _gf2.nwords(n)), dtype=np.uint64)
            idx = np.arange(n)
            words[idx, idx >> 6] = np.left_shift(np.uint64(1), (idx & 63).astype(np.uint64))
            return cls(2, n, n, words)
        return cls(prime, n, n, np.eye(n, dtype=np.uint8))

    @classmethod
    def unit_vector(cls, prime, n, j):
        e = np.zeros((1, n), dtype=np.uint8)
        e[0, j] = 1
        return cls.from_entries(prime, e)

    @classmethod
    def vstack(cls, mats, prime=None, ncols=None):
        mats = list(mats)
        if not mats:
            if prime is None or ncols is None:
                raise ValueError("empty stack needs prime and ncols")
            return cls.zeros(prime, 0, ncols)
        p, n = mats[0].prime, mats[0].ncols
        for m in mats:
            _same_prime(mats[0], m)
            if m.ncols != n:
                raise DimensionMismatch("vstack needs equal column counts")
        data = np.concatenate([m._data for m in mats], axis=0)
        return cls(p, sum(m.nrows for m in mats), n, data)

    @classmethod
    def block_diag(cls, mats):
        mats = list(mats)
        p = mats[0].prime
        n = sum(m.nrows for m in mats)
        k = sum(m.ncols for m in mats)
        out = np.zeros((n, k), dtype=np.uint8)
        r = c = 0
        for m in mats:
            _same_prime(mats[0], m)
            out[r:r + m.nrows, c:c + m.ncols] = m.entries
            r += m.nrows
            c += m.ncols
        return cls.from_entries(p, out)

    # views ----------------------------------------------------------------

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def is_square(self):
        return self.nrows == self.ncols

    @property
    def entries(self):
        """Entries as a fresh ``uint8`` array of shape (nrows, ncols)."""
        if self.prime == 2:
            return _gf2.unpack(self._data, self.ncols)
        return self._data.copy()

    @property
    def packed(self):
        if self.prime != 2:
            raise ValueError("only GF(2) matrices are bit-packed")
        return self._data

    def row(self, i):
        return FieldMatrix(self.prime, 1, self.ncols, self._data[i:i + 1].copy())

    def rows(self, idx):
        idx = np.asarray(idx, dtype=np.int64)
        return FieldMatrix(self.prime, len(idx), self.ncols, self._data[idx].copy())

    def __getitem__(self, ij):
        i, j = ij
        if self.prime == 2:
            return int((int(self._data[i, j >> 6]) >> (j & 63)) & 1)
        return int(self._data[i, j])

    def submatrix(self, rows, cols):
        rows = np.asarray(rows, dtype=np.int64).reshape(-1)
        cols = np.asarray(cols, dtype=np.int64).reshape(-1)
        if self.prime == 2:
            return FieldMatrix(2, len(rows), len(cols), _gf2.take(self._data, rows, cols))
        return FieldMatrix(self.prime, len(rows), len(cols), self._data[np.ix_(rows, cols)].copy())

    def columns(self, cols):
        return self.submatrix(np.arange(self.nrows), cols)

    def __reduce__(self):
        return (FieldMatrix, (self.prime, self.nrows, self.ncols, np.array(self._data)))

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return (self.prime == other.prime and self.shape == other.shape
                and np.array_equal(self._data, other._data))

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.prime, self.nrows, self.ncols, self._data.tobytes()))
        return self._hash

    def __repr__(self):
        if self.nrows * self.ncols <= 400:
            body = "\n".join(" ".join(str(x) for x in r) for r in self.entries)
            return f"FieldMatrix(GF({self.prime}), {self.nrows}x{self.ncols}):\n{body}"
        return f"FieldMatrix(GF({self.prime}), {self.nrows}x{self.ncols})"

    def is_zero(self):
        return not self._data.any()

    def is_identity(self):
        return self.is_square and self == FieldMatrix.identity(self.prime, self.nrows)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        _same_prime(self, other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        if self.prime == 2:
            return FieldMatrix(2, self.nrows, self.ncols, self._data ^ other._data)
        s = (self._data.astype(np.int16) + other._data) % self.prime
        return FieldMatrix(self.prime, self.nrows, self.ncols, s.astype(np.uint8))

    def __neg__(self):
        if self.prime == 2:
            return self
        return FieldMatrix(self.prime, self.nrows, self.ncols,
                           ((self.prime - self._data.astype(np.int16)) % self.prime).astype(np.uint8))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c %= self.prime
        if c == 0:
            return FieldMatrix.zeros(self.prime, self.nrows, self.ncols)
        if c == 1:
            return self
        s = (self._data.astype(np.int64) * c) % self.prime
        return FieldMatrix(self.prime, self.nrows, self.ncols, s.astype(np.uint8))

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __pow__(self, k):
        if not self.is_square:
            raise DimensionMismatch("powers need a square matrix")
        if k < 0:
            return mat_inverse(self) ** (-k)
        result = FieldMatrix.identity(self.prime, self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    @property
    def T(self):
        return transpose(self)

    def kron(self, other):
        _same_prime(self, other)
        if self.prime == 2:
            data = _gf2.kron(self._data, self.ncols, other._data, other.ncols)
            return FieldMatrix(2, self.nrows * other.nrows, self.ncols * other.ncols, data)
        k = np.kron(self._data.astype(np.int64), other._data.astype(np.int64)) % self.prime
        return FieldMatrix(self.prime, self.nrows * other.nrows, self.ncols * other.ncols,
                           k.astype(np.uint8))

    # text format ----------------------------------------------------------

    def to_text(self):
        lines = [f"{self.prime} {self.nrows} {self.ncols}"]
        lines.extend(" ".join(str(int(x)) for x in r) for r in self.entries)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        mat, rest = _parse_matrix(text.split("\n"), 0)
        if any(line.strip() for line in text.split("\n")[rest:]):
            raise ValueError("trailing data after matrix")
        return mat


def _parse_matrix(lines, pos):
    """Parse one matrix in the text format starting at ``lines[pos]``."""
    try:
        p, m, n = (int(x) for x in lines[pos].split(" "))
    except (ValueError, IndexError) as exc:
        raise ValueError(f"bad matrix header at line {pos + 1}") from exc
    rows = []
    for i in range(m):
        parts = lines[pos + 1 + i].split(" ") if n else []
        if len(parts) != n:
            raise ValueError(f"row {i} has {len(parts)} entries, expected {n}")
        vals = [int(x) for x in parts]
        if any(v < 0 or v >= p for v in vals):
            raise ValueError(f"row {i} has entries outside 0..{p - 1}")
        rows.append(vals)
    arr = np.array(rows, dtype=np.int64).reshape(m, n)
    return FieldMatrix.from_entries(p, arr), pos + 1 + m


def _same_prime(a, b):
    if a.prime != b.prime:
        raise PrimeMismatch(f"GF({a.prime}) vs GF({b.prime})")


def transpose(m):
    if m.prime == 2:
        return FieldMatrix(2, m.ncols, m.nrows, _gf2.transpose(m._data, m.ncols))
    return FieldMatrix(m.prime, m.ncols, m.nrows, m._data.T.copy())


def mat_mul(a, b):
    """Matrix product over GF(p)."""
    _same_prime(a, b)
    if a.ncols != b.nrows:
        raise DimensionMismatch(f"cannot multiply {a.shape} by {b.shape}")
    if a.prime == 2:
        if a.nrows == 0 or b.nrows == 0:
            return FieldMatrix.zeros(2, a.nrows, b.ncols)
        return FieldMatrix(2, a.nrows, b.ncols, _gf2.mul(a._data, b._data))
    prod = (a._data.astype(np.int64) @ b._data.astype(np.int64)) % a.prime
    return FieldMatrix(a.prime, a.nrows, b.ncols, prod.astype(np.uint8))


# elimination ----------------------------------------------------------------


def _echelon_gfp(arr, p, reduced=True, ncols=None):
    """Gauss-Jordan on an int64 array in place; returns pivot columns."""
    inv = _inverse_table(p)
    m, n = arr.shape
    ncols = n if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == m:
            break
        nz = np.nonzero(arr[r:, c])[0]
        if len(nz) == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            arr[[r, piv]] = arr[[piv, r]]
        arr[r] = (arr[r] * inv[arr[r, c]]) % p
        targets = np.nonzero(arr[:, c])[0] if reduced else r + 1 + np.nonzero(arr[r + 1:, c])[0]
        targets = targets[targets != r]
        if len(targets):
            arr[targets] = (arr[targets] - np.outer(arr[targets, c], arr[r])) % p
        pivots.append(c)
        r += 1
    return np.array(pivots, dtype=np.int64)


def row_echelon(m):
    """Reduced row echelon form and pivot columns.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows.  Pivots
    are chosen as the first row with a nonzero entry in each column.
    """
    if m.prime == 2:
        data = m._data.copy()
        piv = _gf2.echelonize(data, m.ncols, True)
        return FieldMatrix(2, len(piv), m.ncols, data[:len(piv)].copy()), piv
    arr = m._data.astype(np.int64)
    piv = _echelon_gfp(arr, m.prime)
    return FieldMatrix(m.prime, len(piv), m.ncols, arr[:len(piv)].astype(np.uint8)), piv


def rank(m):
    """Row rank over GF(p)."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    if m.prime == 2:
        return len(_gf2.echelonize(m._data.copy(), m.ncols, False))
    return len(_echelon_gfp(m._data.astype(np.int64), m.prime, reduced=False))


def nullspace_basis(m):
    """Basis of the right kernel ``{x : m x = 0}``, one vector per row."""
    n = m.ncols
    if m.nrows == 0:
        return FieldMatrix.identity(m.prime, n)
    r, piv = row_echelon(m)
    if m.prime == 2:
        return FieldMatrix(2, n - len(piv), n, _gf2.nullspace_from_rref(r._data, piv, n))
    rr = r._data.astype(np.int64)
    p = m.prime
    pivset = set(int(c) for c in piv)
    free = [c for c in range(n) if c not in pivset]
    out = np.zeros((len(free), n), dtype=np.int64)
    for t, f in enumerate(free):
        out[t, f] = 1
        out[t, piv] = (-rr[:, f]) % p
    return FieldMatrix(p, len(free), n, out.astype(np.uint8))


def left_nullspace_basis(m):
    """Basis of ``{v : v m = 0}`` as rows."""
    return nullspace_basis(transpose(m))


def mat_inverse(m):
    """Two-sided inverse; raises :class:`SingularMatrix`."""
    if not m.is_square:
        raise DimensionMismatch("inverse needs a square matrix")
    n = m.nrows
    if n == 0:
        return m
    if m.prime == 2:
        w = _gf2.nwords(n)
        aug = np.zeros((n, 2 * w), dtype=np.uint64)
        aug[:, :w] = m._data
        aug[:, w:] = FieldMatrix.identity(2, n)._data
        piv = _gf2.echelonize(aug, n, True)
        if len(piv) < n:
            raise SingularMatrix("matrix is singular over GF(2)")
        return FieldMatrix(2, n, n, aug[:, w:].copy())
    p = m.prime
    aug = np.concatenate([m._data.astype(np.int64), np.eye(n, dtype=np.int64)], axis=1)
    piv = _echelon_gfp(aug, p, ncols=n)
    if len(piv) < n:
        raise SingularMatrix(f"matrix is singular over GF({p})")
    return FieldMatrix(p, n, n, aug[:, n:].astype(np.uint8))


def solve_rows(basis, vectors):
    """Coordinates ``X`` with ``X @ basis == vectors`` for a full-row-rank basis.

    Raises :class:`ValueError` if some vector is outside the row space.
    """
    _same_prime(basis, vectors)
    r, piv = row_echelon(basis)
    if len(piv) != basis.nrows:
        raise ValueError("basis rows are linearly dependent")
    # basis[:, piv] is invertible because basis = T @ r with r[:, piv] = I
    coords = vectors.columns(piv) @ mat_inverse(basis.columns(piv))
    if coords @ basis != vectors:
        raise ValueError("vector outside the row space")
    return coords
