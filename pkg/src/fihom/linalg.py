"""Exact dense linear algebra over prime fields and the rationals.

Matrices are plain numpy arrays: ``int64`` residues in ``[0, p)`` for a
prime field, ``object`` arrays of ``flint.fmpq`` for the rationals.  The
field object travels alongside and supplies arithmetic.  Every routine
pivots deterministically on the first nonzero entry in column order, so all
derived bases are reproducible.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from flint import fmpq, fmpq_mat, nmod_mat

# Above this many entries elimination is handed to FLINT.
_FLINT_THRESHOLD = 20_000
# below this many multiply-adds int64 matmul beats converting to float64 for BLAS
_BLAS_THRESHOLD = 200_000
_DENSE_SWITCH = 40_000


def _is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class PrimeField:
    kind = "prime"

    def __init__(self, p):
        p = int(p)
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        if p >= 2 ** 31:
            raise ValueError("prime fields are limited to p < 2**31")
        self.p = p
        self.characteristic = p
        self.dtype = np.int64
        # float64 products are exact while k * (p-1)^2 < 2^53
        self._float_depth = (2 ** 53) // max(1, (p - 1) ** 2)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))

    # -- scalars --------------------------------------------------------
    def element(self, x):
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction) or hasattr(x, "denominator"):
            num, den = int(x.numerator), int(x.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"{x} is undefined in GF({self.p})")
            return num % self.p * pow(den, -1, self.p) % self.p
        return int(x) % self.p

    def to_str(self, x):
        return str(int(x) % self.p)

    def one(self):
        return 1

    def zero(self):
        return 0

    def inv(self, x):
        x = int(x) % self.p
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(x, self.p - 2, self.p)

    def nonzero_elements(self):
        return list(range(1, self.p))

    # -- arrays ---------------------------------------------------------
    def zeros(self, rows, cols):
        return np.zeros((rows, cols), dtype=np.int64)

    def eye(self, n):
        return np.eye(n, dtype=np.int64)

    def array(self, rows):
        a = np.array(rows, dtype=object)
        if a.size == 0:
            return np.zeros(a.shape, dtype=np.int64)
        return np.vectorize(self.element, otypes=[np.int64])(a)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def scale(self, c, a):
        return (a * (int(c) % self.p)) % self.p

    def matmul(self, a, b):
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        k = a.shape[1]
        if a.size == 0 or b.size == 0:
            return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        if k <= self._float_depth and a.shape[0] * k * b.shape[1] > _BLAS_THRESHOLD:
            prod = a.astype(np.float64) @ b.astype(np.float64)
            return np.rint(prod).astype(np.int64) % self.p
        if k * (self.p - 1) ** 2 < 2 ** 63:
            return (a @ b) % self.p
        return ((a.astype(object) @ b.astype(object)) % self.p).astype(np.int64)

    def is_zero(self, a):
        return not np.any(a)

    def equal(self, a, b):
        return a.shape == b.shape and np.array_equal(a % self.p, b % self.p)

    def rref(self, a):
        """Trimmed reduced row echelon form: ``(R, pivots)`` with R of shape (rank, cols)."""
        rows, cols = a.shape
        if rows == 0 or cols == 0 or not np.any(a):
            return np.zeros((0, cols), dtype=np.int64), []
        if rows * cols > _FLINT_THRESHOLD:
            m = nmod_mat(rows, cols, (a % self.p).ravel().tolist(), self.p)
            r, rank = m.rref()
            head = r.entries()[:rank * cols]
            R = np.fromiter(map(int, head), dtype=np.int64, count=rank * cols).reshape(rank, cols)
            return R, _pivots_of(R)
        return _rref_modp(a, self.p)

    def rank(self, a):
        rows, cols = a.shape
        if rows == 0 or cols == 0:
            return 0
        if rows * cols > _FLINT_THRESHOLD:
            return nmod_mat(rows, cols, (a % self.p).ravel().tolist(), self.p).rank()
        return len(_rref_modp(a, self.p)[1])


class RationalField:
    kind = "rational"
    characteristic = 0
    dtype = object

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rational")

    def element(self, x):
        if isinstance(x, fmpq):
            return x
        if isinstance(x, str):
            x = Fraction(x.strip())
        if isinstance(x, Fraction) or hasattr(x, "denominator"):
            return fmpq(int(x.numerator), int(x.denominator))
        return fmpq(int(x))

    def to_str(self, x):
        return str(x)

    def one(self):
        return fmpq(1)

    def zero(self):
        return fmpq(0)

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / fmpq(x)

    def nonzero_elements(self):
        return [fmpq(v) for v in (-3, -2, -1, 1, 2, 3)]

    def zeros(self, rows, cols):
        out = np.empty((rows, cols), dtype=object)
        out.fill(fmpq(0))
        return out

    def eye(self, n):
        out = self.zeros(n, n)
        for i in range(n):
            out[i, i] = fmpq(1)
        return out

    def array(self, rows):
        a = np.array(rows, dtype=object)
        if a.size == 0:
            return self.zeros(*a.shape) if a.ndim == 2 else np.empty(a.shape, dtype=object)
        return np.vectorize(self.element, otypes=[object])(a)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def scale(self, c, a):
        return a * self.element(c)

    def matmul(self, a, b):
        if a.shape[1] != b.shape[0]:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        r, k = a.shape
        c = b.shape[1]
        if r == 0 or c == 0 or k == 0:
            return self.zeros(r, c)
        if r * k * c <= 4096:
            return a.dot(b)
        # group actions and face maps are mostly monomial; skip the
        # conversion into flint when one factor is that sparse
        ai, aj = np.nonzero(a)
        if len(ai) * c <= r * k + k * c:
            out = self.zeros(r, c)
            if len(np.unique(ai)) == len(ai):
                # at most one entry per row: copy rows, multiplying only off +-1
                vals = a[ai, aj]
                one, minus = vals == 1, vals == -1
                rest = ~(one | minus)
                out[ai[one]] = b[aj[one]]
                out[ai[minus]] = -b[aj[minus]]
                if rest.any():
                    out[ai[rest]] = b[aj[rest]] * vals[rest][:, None]
                return out
            for i, j in zip(ai.tolist(), aj.tolist()):
                out[i] += a[i, j] * b[j]
            return out
        bi, bj = np.nonzero(b)
        if len(bi) * r <= r * k + k * c:
            out = self.zeros(r, c)
            for i, j in zip(bi.tolist(), bj.tolist()):
                out[:, j] += a[:, i] * b[i, j]
            return out
        prod = _to_fmpq_mat(a) * _to_fmpq_mat(b)
        return _from_fmpq_mat(prod, r, c)

    def is_zero(self, a):
        return all(x == 0 for x in a.flat)

    def equal(self, a, b):
        return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))

    def rref(self, a):
        rows, cols = a.shape
        if rows == 0 or cols == 0 or self.is_zero(a):
            return self.zeros(0, cols), []
        r, rank = _to_fmpq_mat(a).rref()
        R = _from_fmpq_mat(r, rows, cols)[:rank]
        return R, _pivots_of(R)

    def rank(self, a):
        if a.shape[0] == 0 or a.shape[1] == 0:
            return 0
        return _to_fmpq_mat(a).rank()


def _to_fmpq_mat(a):
    return fmpq_mat(a.shape[0], a.shape[1], list(a.ravel()))


def _from_fmpq_mat(m, rows, cols):
    out = np.empty(rows * cols, dtype=object)
    out[:] = m.entries()
    return out.reshape(rows, cols)


def _pivots_of(R):
    piv = []
    for row in R:
        nz = np.flatnonzero(row != 0)
        piv.append(int(nz[0]))
    return piv


def _rref_modp(a, p):
    A = np.array(a, dtype=np.int64) % p
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i], c:] = A[[i, r], c:]
        inv = pow(int(A[r, c]), p - 2, p)
        if inv != 1:
            A[r, c:] = A[r, c:] * inv % p
        f = A[:, c].copy()
        f[r] = 0
        hit = np.flatnonzero(f)
        if hit.size:
            A[hit, c:] = (A[hit, c:] - np.outer(f[hit], A[r, c:])) % p
        pivots.append(c)
        r += 1
    return A[:r], pivots


def field_from_spec(spec):
    """``"q"``/``"rational"``/``0`` -> QQ; an integer or ``"p"`` string -> GF(p)."""
    if isinstance(spec, (PrimeField, RationalField)):
        return spec
    if isinstance(spec, dict):
        if spec.get("kind") == "rational":
            return RationalField()
        return PrimeField(int(spec["characteristic"]))
    if isinstance(spec, str):
        s = spec.strip().lower()
        if s in ("q", "qq", "rational", "0"):
            return RationalField()
        if s.startswith("f_") or s.startswith("gf"):
            s = s.lstrip("gf_()").rstrip(")")
        return PrimeField(int(s))
    if int(spec) == 0:
        return RationalField()
    return PrimeField(int(spec))


def field_to_json(field):
    if field.kind == "rational":
        return {"kind": "rational", "characteristic": 0}
    return {"kind": "prime", "characteristic": field.p}


# -- public operations ------------------------------------------------------

def rref(A, field):
    """Reduced row echelon form ``(R, pivots, rank)``; R has A's shape."""
    R, piv = field.rref(A)
    full = field.zeros(*A.shape)
    full[: len(piv)] = R
    return full, piv, len(piv)


def rank(A, field):
    if A.size > _DENSE_SWITCH and np.count_nonzero(A) * 10 < A.size:
        return sparse_rank(A, field)
    if hasattr(field, "rank"):
        return field.rank(A)
    return len(field.rref(A)[1])


def sparse_rank(A, field):
    """Rank by Markowitz-ordered sparse elimination.

    Meant for very sparse matrices such as Koszul differentials, whose
    columns carry only a handful of signed entries. Dense input is accepted;
    only its nonzero pattern is used.
    """
    rows_idx, cols_idx = np.nonzero(A)
    if not len(rows_idx):
        return 0
    prime = getattr(field, "p", None)
    vals = A[rows_idx, cols_idx]
    rows = {}
    cols = {}
    for i, j, v in zip(rows_idx.tolist(), cols_idx.tolist(), vals.tolist()):
        rows.setdefault(i, {})[j] = v
        cols.setdefault(j, set()).add(i)
    nnz = len(vals)
    heap = [(len(r), j) for j, r in cols.items()]
    heapq.heapify(heap)
    rank = 0
    while heap:
        count, c = heapq.heappop(heap)
        live = cols.get(c)
        if live is None:
            continue
        if not live:
            del cols[c]
            continue
        if len(live) != count:
            heapq.heappush(heap, (len(live), c))
            continue
        r = min(live, key=lambda i: len(rows[i]))
        prow = rows.pop(r)
        for cc in prow:
            cols[cc].discard(r)
        inv = pow(prow[c], -1, prime) if prime else 1 / prow[c]
        touched = set(prow)
        for i in list(live):
            row = rows[i]
            f = row[c] * inv
            for cc, v in prow.items():
                nv = row.get(cc, 0) - f * v
                if prime:
                    nv %= prime
                if nv == 0:
                    if cc in row:
                        del row[cc]
                        cols[cc].discard(i)
                        nnz -= 1
                else:
                    if cc not in row:
                        cols[cc].add(i)
                        nnz += 1
                    row[cc] = nv
        nnz -= len(prow)
        del cols[c]
        rank += 1
        area = len(rows) * len(cols)
        if area > _DENSE_SWITCH and nnz > area // 4:
            # fill-in has made the rest dense; finish there
            return rank + _dense_rest(rows, cols, field)
        for cc in touched:
            if cc != c and cc in cols:
                heapq.heappush(heap, (len(cols[cc]), cc))
    return rank


def _dense_rest(rows, cols, field):
    ci = {c: k for k, c in enumerate(cols)}
    M = field.zeros(len(rows), len(cols))
    for k, row in enumerate(rows.values()):
        for c, v in row.items():
            M[k, ci[c]] = v
    return rank(M, field)


def kernel_basis(A, field):
    """Columns spanning ``ker A``, one per free column of the RREF.

    Each basis vector is 1 at its own free column and 0 at the others, so a
    kernel vector's coordinates are its entries on the free columns.
    """
    cols = A.shape[1]
    R, piv = field.rref(A)
    free = [c for c in range(cols) if c not in set(piv)]
    K = field.zeros(cols, len(free))
    for j, f in enumerate(free):
        K[f, j] = field.one()
        if piv:
            K[piv, j] = field.neg(R[:, f])
    return K


def image_basis(A, field):
    """Columns spanning the column space of ``A`` in reduced echelon shape."""
    R, _ = field.rref(A.T)
    return R.T.copy()


def solve(A, b, field):
    """One solution ``x`` of ``A x = b`` (``b`` a vector or matrix), or None."""
    vec = b.ndim == 1
    B = b.reshape(-1, 1) if vec else b
    rows, cols = A.shape
    aug = np.concatenate([A, B], axis=1)
    R, piv = field.rref(aug)
    if any(p >= cols for p in piv):
        return None
    x = field.zeros(cols, B.shape[1])
    for i, p in enumerate(piv):
        x[p] = R[i, cols:]
    return x[:, 0] if vec else x


def quotient_basis(S, ambient_dim, field):
    """Standard-basis indices completing the columns of ``S`` to a basis.

    The indices are the non-pivot columns of the RREF of ``S^T``, i.e. the
    greedy choice scanning from the highest index downwards, returned in
    increasing order.
    """
    if S.shape[0] != ambient_dim:
        raise ValueError("subspace vectors must have length ambient_dim")
    if S.shape[1] == 0:
        return list(range(ambient_dim))
    _, piv = field.rref(S.T)
    if len(piv) != S.shape[1]:
        raise ValueError("subspace columns are linearly dependent")
    pivset = set(piv)
    return [i for i in range(ambient_dim) if i not in pivset]


@dataclass
class Subspace:
    """A subspace with basis columns that restrict to the identity on ``rows``."""

    basis: np.ndarray
    rows: list

    @property
    def dim(self):
        return self.basis.shape[1]

    def coords(self, w):
        return w[self.rows]


def subspace_of_span(A, field):
    """Subspace spanned by the columns of ``A``."""
    R, piv = field.rref(A.T)
    return Subspace(R.T.copy(), piv)


def subspace_of_kernel(A, field):
    cols = A.shape[1]
    R, piv = field.rref(A)
    pivset = set(piv)
    free = [c for c in range(cols) if c not in pivset]
    K = field.zeros(cols, len(free))
    for j, f in enumerate(free):
        K[f, j] = field.one()
        if piv:
            K[piv, j] = field.neg(R[:, f])
    return Subspace(K, free)


@dataclass
class Quotient:
    """Quotient of ``F^ambient`` by a subspace.

    ``proj`` maps ambient vectors to coordinates on the complement indices
    ``keep``; ``keep`` are also the lift (standard basis vectors).
    """

    proj: np.ndarray
    keep: list
    ambient: int

    @property
    def dim(self):
        return len(self.keep)

    def lift(self, field):
        L = field.zeros(self.ambient, len(self.keep))
        for j, q in enumerate(self.keep):
            L[q, j] = field.one()
        return L


def quotient_by_span(A, field):
    """Quotient of the ambient space by the column span of ``A``."""
    d = A.shape[0]
    R, piv = field.rref(A.T)
    pivset = set(piv)
    keep = [i for i in range(d) if i not in pivset]
    proj = field.zeros(len(keep), d)
    for j, q in enumerate(keep):
        proj[j, q] = field.one()
    if piv and keep:
        proj[:, piv] = field.neg(R[:, keep].T)
    return Quotient(proj, keep, d)
