"""Sparse matrix/vector kernels over pluggable semirings.

Three semirings are supported:

* ``min_plus``  -- naturals with a saturating infinity (tropical algebra),
  backed by int64 numpy arrays with a reserved sentinel ``INF``;
* ``plus_times_bignat`` -- exact arbitrary-precision naturals (Python ints),
  used for exact counting;
* ``plus_times_float`` -- double precision, used only for spectral radii.

The exact and floating paths never mix.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import BudgetExceeded, NoConvergence, NotFound, NotPrimitive

# Sentinel for +infinity in the tropical semiring.  2**61 leaves headroom so
# that INF + INF still fits in int64; every kernel clamps back to INF.
INF = np.int64(1) << np.int64(61)

MIN_PLUS = "min_plus"
PLUS_TIMES_BIGNAT = "plus_times_bignat"
PLUS_TIMES_FLOAT = "plus_times_float"


@dataclass(frozen=True)
class Recurrence:
    """Eventually-periodic behaviour: M^(l+period) = M^l + increment for l >= start."""

    start: int
    period: int
    increment: int


def _clamp(arr):
    np.minimum(arr, INF, out=arr)
    return arr


class SparseSemiringMatrix:
    """Row-partitioned sparse square matrix over one of the semirings.

    Absent entries encode the absorbing element (INF for min_plus, 0 for
    plus_times).  Column indices are strictly increasing within a row.
    """

    def __init__(self, dim, indptr, cols, vals, kind=MIN_PLUS):
        self.dim = int(dim)
        self.kind = kind
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.cols = np.asarray(cols, dtype=np.int64)
        if kind == PLUS_TIMES_BIGNAT:
            self.vals = list(vals)
        elif kind == PLUS_TIMES_FLOAT:
            self.vals = np.asarray(vals, dtype=np.float64)
        else:
            self.vals = np.asarray(vals, dtype=np.int64)
        self._by_col = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rows(cls, dim, rows, kind=MIN_PLUS):
        """rows: iterable over per-row lists of (col, val), cols sorted."""
        indptr = np.zeros(dim + 1, dtype=np.int64)
        cols = []
        vals = []
        for i, row in enumerate(rows):
            for c, v in row:
                cols.append(c)
                vals.append(v)
            indptr[i + 1] = len(cols)
        return cls(dim, indptr, np.array(cols, dtype=np.int64), vals, kind)

    @classmethod
    def from_dense(cls, dense, kind=MIN_PLUS):
        dense = np.asarray(dense)
        dim = dense.shape[0]
        absorb = INF if kind == MIN_PLUS else 0
        indptr = [0]
        cols = []
        vals = []
        for i in range(dim):
            for j in range(dim):
                if dense[i, j] != absorb:
                    cols.append(j)
                    vals.append(dense[i, j])
            indptr.append(len(cols))
        return cls(dim, np.array(indptr), np.array(cols, dtype=np.int64), vals, kind)

    @classmethod
    def identity(cls, dim, kind=MIN_PLUS):
        one = 0 if kind == MIN_PLUS else 1
        indptr = np.arange(dim + 1, dtype=np.int64)
        cols = np.arange(dim, dtype=np.int64)
        vals = [one] * dim if kind == PLUS_TIMES_BIGNAT else np.full(dim, one)
        return cls(dim, indptr, cols, vals, kind)

    # -- basic views -------------------------------------------------------

    @property
    def nnz(self):
        return len(self.cols)

    def row(self, i):
        lo, hi = self.indptr[i], self.indptr[i + 1]
        return self.cols[lo:hi], self.vals[lo:hi]

    def to_dense(self):
        if self.kind == MIN_PLUS:
            out = np.full((self.dim, self.dim), INF, dtype=np.int64)
        elif self.kind == PLUS_TIMES_FLOAT:
            out = np.zeros((self.dim, self.dim))
        else:
            out = [[0] * self.dim for _ in range(self.dim)]
        for i in range(self.dim):
            lo, hi = int(self.indptr[i]), int(self.indptr[i + 1])
            for k in range(lo, hi):
                out[i][self.cols[k]] = self.vals[k]
        return np.asarray(out) if self.kind != PLUS_TIMES_BIGNAT else out

    def to_scipy(self):
        vals = self.vals if self.kind != PLUS_TIMES_BIGNAT else np.asarray(
            [float(v) for v in self.vals]
        )
        return sp.csr_matrix(
            (np.asarray(vals, dtype=np.float64), self.cols.astype(np.int64), self.indptr),
            shape=(self.dim, self.dim),
        )

    def support_csr(self):
        data = np.ones(self.nnz, dtype=bool)
        return sp.csr_matrix((data, self.cols, self.indptr), shape=(self.dim, self.dim))

    def _col_sorted(self):
        """COO sorted by column, with reduceat segment starts (cached)."""
        if self._by_col is None:
            rows = np.repeat(
                np.arange(self.dim, dtype=np.int64), np.diff(self.indptr)
            )
            order = np.argsort(self.cols, kind="stable")
            srows = rows[order]
            scols = self.cols[order]
            svals = np.asarray(self.vals)[order]
            uniq, starts = np.unique(scols, return_index=True)
            self._by_col = (srows, svals, uniq, starts)
        return self._by_col


# -- products ----------------------------------------------------------------


def mat_vec(M: SparseSemiringMatrix, v):
    """Semiring product M (.) v."""
    if M.kind == MIN_PLUS:
        v = np.asarray(v, dtype=np.int64)
        out = np.full(M.dim, INF, dtype=np.int64)
        if M.nnz:
            gathered = _clamp(v[M.cols] + np.asarray(M.vals))
            counts = np.diff(M.indptr)
            mask = counts > 0
            starts = M.indptr[:-1][mask]
            out[mask] = np.minimum.reduceat(gathered, starts)
        return out
    if M.kind == PLUS_TIMES_BIGNAT:
        out = [0] * M.dim
        cols, vals, indptr = M.cols, M.vals, M.indptr
        for i in range(M.dim):
            acc = 0
            for k in range(int(indptr[i]), int(indptr[i + 1])):
                acc += vals[k] * v[cols[k]]
            out[i] = acc
        return out
    return M.to_scipy().dot(np.asarray(v, dtype=np.float64))


def vec_mat(v, M: SparseSemiringMatrix):
    """Semiring product v^T (.) M."""
    if M.kind == MIN_PLUS:
        v = np.asarray(v, dtype=np.int64)
        out = np.full(M.dim, INF, dtype=np.int64)
        if M.nnz:
            srows, svals, uniq, starts = M._col_sorted()
            gathered = _clamp(v[srows] + svals)
            out[uniq] = np.minimum.reduceat(gathered, starts)
        return out
    if M.kind == PLUS_TIMES_BIGNAT:
        out = [0] * M.dim
        cols, vals, indptr = M.cols, M.vals, M.indptr
        for i in range(M.dim):
            vi = v[i]
            if vi == 0:
                continue
            for k in range(int(indptr[i]), int(indptr[i + 1])):
                out[cols[k]] += vi * vals[k]
        return out
    return M.to_scipy().T.dot(np.asarray(v, dtype=np.float64))


def minplus_matmul_dense(A, B, row_chunk=None):
    """Dense tropical product, chunked over rows to bound memory."""
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    d = A.shape[0]
    out = np.empty((d, A.shape[1] if B.ndim == 1 else B.shape[1]), dtype=np.int64)
    if row_chunk is None:
        row_chunk = max(1, int(2**24 // max(1, B.size)))
    for lo in range(0, d, row_chunk):
        hi = min(d, lo + row_chunk)
        block = A[lo:hi, :, None] + B[None, :, :]
        _clamp(block)
        out[lo:hi] = block.min(axis=1)
    return out


def minplus_matmul_dense_sparse(A, B: SparseSemiringMatrix):
    """Tropical product of a dense A by a sparse B, updating per row of B."""
    A = np.asarray(A, dtype=np.int64)
    d = A.shape[0]
    out = np.full((d, B.dim), INF, dtype=np.int64)
    vals = np.asarray(B.vals)
    for k in range(B.dim):
        lo, hi = int(B.indptr[k]), int(B.indptr[k + 1])
        if lo == hi:
            continue
        cols = B.cols[lo:hi]
        cand = A[:, k:k + 1] + vals[lo:hi][None, :]
        np.minimum(out[:, cols], cand, out=cand)
        out[:, cols] = cand
    return _clamp(out)


def mat_mul(A: SparseSemiringMatrix, B: SparseSemiringMatrix, fill_budget=200_000_000):
    """Semiring matrix product; result re-sparsified."""
    if A.dim != B.dim or A.kind != B.kind:
        raise ValueError("dimension/semiring mismatch")
    if A.dim * A.dim > fill_budget:
        raise BudgetExceeded(f"product fill {A.dim}x{A.dim} exceeds budget")
    if A.kind == MIN_PLUS:
        dense = minplus_matmul_dense_sparse(minplus_to_dense(A), B)
        return SparseSemiringMatrix.from_dense(dense, MIN_PLUS)
    if A.kind == PLUS_TIMES_BIGNAT:
        rows = []
        for i in range(A.dim):
            acc = {}
            ca, va = A.row(i)
            lo = int(A.indptr[i])
            for k in range(len(ca)):
                avi = A.vals[lo + k]
                cb, _ = B.row(int(ca[k]))
                lob = int(B.indptr[int(ca[k])])
                for kb in range(len(cb)):
                    j = int(cb[kb])
                    acc[j] = acc.get(j, 0) + avi * B.vals[lob + kb]
            rows.append(sorted(acc.items()))
        return SparseSemiringMatrix.from_rows(A.dim, rows, PLUS_TIMES_BIGNAT)
    prod = A.to_scipy().dot(B.to_scipy()).tocsr()
    return SparseSemiringMatrix(A.dim, prod.indptr, prod.indices, prod.data, A.kind)


def minplus_to_dense(M):
    if isinstance(M, SparseSemiringMatrix):
        return M.to_dense()
    return np.asarray(M, dtype=np.int64)


# -- primitivity and power periodicity ---------------------------------------


def _support_period(adj: sp.csr_matrix):
    """(strongly_connected, period) of the support digraph, by BFS-level gcd."""
    n = adj.shape[0]
    ncomp, _ = sp.csgraph.connected_components(adj, directed=True, connection="strong")
    if ncomp != 1:
        return False, 0
    level = sp.csgraph.dijkstra(adj, directed=True, unweighted=True, indices=0)
    level = level.astype(np.int64)
    rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(adj.indptr))
    diffs = level[rows] + 1 - level[adj.indices]
    g = int(np.gcd.reduce(np.abs(diffs))) if len(diffs) else 0
    return True, g


def support_is_primitive(M) -> bool:
    """True iff the support digraph is strongly connected and aperiodic,
    which for nonnegative matrices is equivalent to primitivity."""
    if isinstance(M, SparseSemiringMatrix):
        adj = M.support_csr()
    else:
        adj = sp.csr_matrix(np.asarray(M) < INF)
    sc, period = _support_period(adj)
    return sc and period == 1


def is_primitive(M, cap=64):
    """Smallest-exponent primitivity test on the support digraph.

    Returns ``("yes", k)``, ``("no", None)`` or ``("unknown", None)``.
    For dimensions above ~4000 the exact smallest k is not computed; the
    first power found all-finite during boolean squaring is reported.
    """
    if isinstance(M, SparseSemiringMatrix):
        adj = M.support_csr()
    else:
        dense = np.asarray(M)
        adj = sp.csr_matrix(dense < INF)
    n = adj.shape[0]
    sc, period = _support_period(adj)
    if not sc or period != 1:
        return ("no", None)
    full = n * n
    power = adj.copy()
    k = 1
    while k <= cap:
        if power.nnz == full:
            return ("yes", k)
        power = (power.dot(adj) > 0).tocsr()
        power.eliminate_zeros()
        k += 1
    return ("unknown", None)


def _norm_hash(arr):
    return hashlib.blake2b(arr.tobytes(), digest_size=16).digest()


def detect_recurrence(M, max_exponent=256, checkpoint_every=8):
    """Find (l0, r, p) with M^(l+r) = M^l + p entrywise, in min-plus.

    Powers are normalized as M^l - min(M^l); hashes of the normalized
    matrices are stored, full matrices only at checkpoints.  A hash collision
    is verified by exact comparison (recomputing from the nearest checkpoint).
    """
    base = minplus_to_dense(M)
    dim = base.shape[0]
    sparse = SparseSemiringMatrix.from_dense(base, MIN_PLUS)

    seen = {}  # hash -> exponent
    mins = {}
    checkpoints = {}
    power = base.copy()
    exponent = 1
    had_infinite = False

    def normalized(p):
        m = p.min()
        if m >= INF:
            raise NotPrimitive("power is entirely infinite")
        q = p - m
        q[p >= INF] = INF
        return q, int(m)

    def power_at(l):
        c = max(e for e in checkpoints if e <= l)
        p = checkpoints[c].copy()
        for _ in range(l - c):
            p = minplus_matmul_dense_sparse(p, sparse)
        return p

    while exponent <= max_exponent:
        norm, mn = normalized(power)
        infinite = bool((norm >= INF).any())
        if infinite:
            had_infinite = True
        h = _norm_hash(norm)
        if h in seen:
            l0 = seen[h]
            prev = power_at(l0)
            pnorm, pmn = normalized(prev)
            if np.array_equal(pnorm, norm):
                if infinite:
                    # the repeat propagates the infinite pattern forever,
                    # so no power is entrywise finite
                    raise NotPrimitive("periodic infinite entries in powers")
                return Recurrence(start=l0, period=exponent - l0, increment=mn - pmn)
        else:
            seen[h] = exponent
            mins[exponent] = mn
        if exponent % checkpoint_every == 1 or exponent == 1:
            checkpoints[exponent] = power.copy()
        power = minplus_matmul_dense_sparse(power, sparse)
        exponent += 1
    if had_infinite and dim > 1:
        raise NotPrimitive("infinite entries persisted through the exponent budget")
    raise NotFound(f"no power recurrence within exponent {max_exponent}")


def detect_vector_recurrence(v0, M: SparseSemiringMatrix, max_exponent=512):
    """Find (l0, r, p) with v0.T M^(l+r) = v0.T M^l + p entrywise.

    Same normalize-and-hash scheme as :func:`detect_recurrence`, applied to
    the vector sequence v_l = v0.T M^l.  A repeat of the normalized vector
    proves the recurrence for every later l (tropical products commute with
    adding a constant), so the result is exact, not heuristic.
    """
    v = np.asarray(v0, dtype=np.int64).copy()
    seen = {}
    exponent = 0
    while exponent <= max_exponent:
        mn = int(v.min())
        if mn >= INF:
            raise NotPrimitive("vector is entirely infinite")
        norm = v - mn
        norm[v >= INF] = INF
        h = _norm_hash(norm)
        if h in seen:
            l0, prev_mn, prev = seen[h]
            if np.array_equal(prev, norm):
                return Recurrence(start=l0, period=exponent - l0, increment=mn - prev_mn)
        else:
            seen[h] = (exponent, mn, norm.copy())
        v = vec_mat(v, M)
        exponent += 1
    raise NotFound(f"no vector recurrence within exponent {max_exponent}")


# -- spectral radius ----------------------------------------------------------


def spectral_radius(M, tol=1e-12, max_iters=10000):
    """Largest eigenvalue of a nonnegative matrix by power iteration.

    Deterministic all-ones start, L-infinity normalization per step;
    converged when the Rayleigh estimate moves by less than ``tol``
    (relatively) over one step.  Not interval-certified.
    """
    if isinstance(M, SparseSemiringMatrix):
        A = M.to_scipy()
    elif sp.issparse(M):
        A = M.tocsr()
    else:
        A = np.asarray(M, dtype=np.float64)
    n = A.shape[0]
    x = np.ones(n, dtype=np.float64)
    est = 0.0
    for _ in range(max_iters):
        y = A.dot(x)
        norm = np.abs(y).max()
        if norm == 0.0:
            return 0.0
        y /= norm
        new_est = float(y.dot(A.dot(y)) / y.dot(y))
        if est != 0.0 and abs(new_est - est) <= tol * abs(est):
            return new_est
        est = new_est
        x = y
    raise NoConvergence(f"power iteration did not converge in {max_iters} iterations")
