"""Exact dense/sparse linear algebra: rank, kernel bases, reduced row echelon.

Two execution backends sit behind one interface:

* F_p: numpy float64 arrays holding integers in [0, p).  Products stay below
  2^53, so BLAS matmuls are exact; elimination is blocked (panel factorization
  plus one rank-k update per panel) to route the cubic work through dgemm.
* Q: fraction-free (Bareiss) forward elimination on cleared-denominator
  integer rows, Fractions only in the final normalization.

A Markowitz-pivot sparse eliminator is available as well; it hands the active
submatrix to the dense code once fill-in passes DENSE_FALLBACK_DENSITY.  For
F_p the auto dispatch goes straight to the blocked dense path: with numpy the
vectorized dense elimination beats per-entry Python sparse updates at every
size this library produces.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

import numpy as np

from .fields import Field, FieldElement, FieldError, PrimeField, QQ, RationalField

DENSE_FALLBACK_DENSITY = 0.25
_PANEL = 160


# ---------------------------------------------------------------------------
# numpy mod-p kernels
# ---------------------------------------------------------------------------

def _mm_modp(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact (a @ b) mod p for float64 integer matrices with entries in [0,p).

    Accumulated dot products stay below 2^53 for all shapes this library
    builds (inner dimension up to ~8e6), so dgemm is exact.
    """
    if a.shape[1] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]))
    if a.shape[1] * (p - 1) * (p - 1) >= 2 ** 53:
        # split the inner dimension; never triggered below ~8.8e6 columns
        k = a.shape[1] // 2
        return (_mm_modp(a[:, :k], b[:k], p) + _mm_modp(a[:, k:], b[k:], p)) % p
    return (a @ b) % p


def echelon_modp(a: np.ndarray, p: int, reduced: bool = False,
                 block: int = _PANEL) -> list[int]:
    """In-place row echelon (optionally RREF) of a mod p; returns pivot columns.

    Blocked right-looking elimination: within a panel only the panel columns
    are kept current and multipliers are stored in place; at panel end the
    pivot rows' right blocks are fixed by forward substitution and the
    remaining rows receive one rank-k dgemm update.
    """
    m, n = a.shape
    pivots: list[int] = []
    r = 0
    j0 = 0
    while r < m and j0 < n:
        j1 = min(j0 + block, n)
        rr = r
        pcols: list[int] = []
        invs: list[int] = []
        for j in range(j0, j1):
            if rr >= m:
                break
            col = a[rr:m, j]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            ip = rr + int(nz[0])
            if ip != rr:
                a[[rr, ip], :] = a[[ip, rr], :]
            inv = pow(int(a[rr, j]), p - 2, p)
            invs.append(inv)
            if inv != 1:
                a[rr, j:j1] = (a[rr, j:j1] * inv) % p
            if rr + 1 < m:
                below = a[rr + 1:m, j]
                nzr = np.nonzero(below)[0]
                if nzr.size and j + 1 < j1:
                    rows = nzr + rr + 1
                    a[np.ix_(rows, np.arange(j + 1, j1))] = (
                        a[np.ix_(rows, np.arange(j + 1, j1))]
                        - np.outer(below[nzr], a[rr, j + 1:j1])
                    ) % p
                # column j below the pivot keeps the multipliers for the update
            pcols.append(j)
            rr += 1
        k = len(pcols)
        if k:
            if j1 < n:
                u_blk = a[r:rr, j1:n]
                for u in range(k):
                    if u:
                        lrow = a[r + u, pcols[:u]]
                        if np.any(lrow):
                            u_blk[u] = (u_blk[u] - lrow @ u_blk[:u]) % p
                    if invs[u] != 1:
                        u_blk[u] = (u_blk[u] * invs[u]) % p
                if rr < m:
                    lmat = a[rr:m, :][:, pcols]
                    if np.any(lmat):
                        a[rr:m, j1:n] = (a[rr:m, j1:n] - _mm_modp(lmat, u_blk, p)) % p
            for u, pc in enumerate(pcols):
                a[r + u + 1:m, pc] = 0.0
        pivots.extend(pcols)
        r = rr
        j0 = j1
    if reduced and pivots:
        _back_substitute_modp(a, pivots, p, block)
    return pivots


def _back_substitute_modp(a: np.ndarray, pivots: list[int], p: int, block: int) -> None:
    n = a.shape[1]
    nb = (len(pivots) + block - 1) // block
    for bi in range(nb - 1, -1, -1):
        lo, hi = bi * block, min((bi + 1) * block, len(pivots))
        for u in range(hi - 1, lo - 1, -1):
            if u == 0:
                continue
            col = a[lo:u, pivots[u]]
            nz = np.nonzero(col)[0]
            if nz.size:
                rows = nz + lo
                a[np.ix_(rows, np.arange(pivots[u], n))] = (
                    a[np.ix_(rows, np.arange(pivots[u], n))]
                    - np.outer(col[nz], a[u, pivots[u]:n])
                ) % p
        if lo > 0:
            above = a[0:lo, :][:, pivots[lo:hi]]
            if np.any(above):
                a[0:lo, :] = (a[0:lo, :] - _mm_modp(above, a[lo:hi, :], p)) % p


def rref_modp(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = np.asarray(a, dtype=np.float64) % p
    pivots = echelon_modp(a, p, reduced=True)
    return a, pivots


def rank_modp(a: np.ndarray, p: int) -> int:
    a = np.asarray(a, dtype=np.float64) % p
    return len(echelon_modp(a, p, reduced=False))


def kernel_modp(a: np.ndarray, p: int) -> np.ndarray:
    """Columns form the canonical RREF kernel basis of a (over F_p)."""
    m, n = a.shape
    r, pivots = rref_modp(a, p)
    pivset = set(pivots)
    free = [j for j in range(n) if j not in pivset]
    k = np.zeros((n, len(free)))
    for idx, j in enumerate(free):
        k[j, idx] = 1.0
        if pivots:
            k[pivots, idx] = (-r[: len(pivots), j]) % p
    return k


# ---------------------------------------------------------------------------
# rational kernels (Bareiss forward pass, Fractions at the end)
# ---------------------------------------------------------------------------

def _rows_cleared(a: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in a:
        row = [Fraction(x) for x in row]
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _bareiss_echelon(rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Fraction-free row echelon; returns (integer echelon rows, pivot cols)."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    piv_cols: list[int] = []
    prev = 1
    r = 0
    for j in range(n):
        ip = next((i for i in range(r, m) if rows[i][j] != 0), None)
        if ip is None:
            continue
        rows[r], rows[ip] = rows[ip], rows[r]
        pivot = rows[r][j]
        for i in range(r + 1, m):
            if rows[i][j] == 0 and prev == 1:
                continue
            fi = rows[i][j]
            rows[i] = [(pivot * rows[i][c] - fi * rows[r][c]) // prev for c in range(n)]
        piv_cols.append(j)
        prev = pivot
        r += 1
        if r == m:
            break
    return rows[:r], piv_cols


def rref_fraction(a: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    rows = _rows_cleared(a)
    if not rows:
        return [], []
    ech, pivots = _bareiss_echelon(rows)
    n = len(rows[0])
    out = [[Fraction(x) for x in row] for row in ech]
    for i, pc in enumerate(pivots):
        inv = 1 / out[i][pc]
        out[i] = [x * inv for x in out[i]]
    for i in range(len(pivots) - 1, -1, -1):
        pc = pivots[i]
        for u in range(i):
            f = out[u][pc]
            if f:
                out[u] = [x - f * y for x, y in zip(out[u], out[i])]
    return out, pivots


def rank_fraction(a: Sequence[Sequence[Fraction]]) -> int:
    rows = _rows_cleared(a)
    if not rows:
        return 0
    return len(_bareiss_echelon(rows)[1])


def kernel_fraction(a: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    if not a:
        return []
    n = len(a[0])
    r, pivots = rref_fraction(a)
    pivset = set(pivots)
    basis = []
    for j in range(n):
        if j in pivset:
            continue
        v = [Fraction(0)] * n
        v[j] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -r[i][j]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# field-dispatched dense helpers (numpy float64 for F_p, lists for Q)
# ---------------------------------------------------------------------------

def dense_rref(field: Field, a):
    if isinstance(field, PrimeField):
        return rref_modp(np.asarray(a, dtype=np.float64), field.p)
    return rref_fraction(a)


def dense_rank(field: Field, a) -> int:
    if isinstance(field, PrimeField):
        return rank_modp(np.asarray(a, dtype=np.float64), field.p)
    return rank_fraction(a)


def dense_kernel(field: Field, a):
    """Kernel basis as columns (numpy) over F_p, as row list over Q."""
    if isinstance(field, PrimeField):
        return kernel_modp(np.asarray(a, dtype=np.float64), field.p)
    return kernel_fraction(a)


def dense_matmul(field: Field, a, b):
    if isinstance(field, PrimeField):
        return _mm_modp(np.asarray(a, dtype=np.float64),
                        np.asarray(b, dtype=np.float64), field.p)
    return [[sum(x * y for x, y in zip(ra, cb)) for cb in zip(*b)] for ra in a]


# ---------------------------------------------------------------------------
# sparse elimination with dense fallback
# ---------------------------------------------------------------------------

def _sparse_echelon(entries: dict, shape: tuple[int, int], field: Field,
                    fallback: float = DENSE_FALLBACK_DENSITY):
    """Markowitz-style sparse forward elimination.

    Returns pivot rows as {col: scalar} dicts with unit pivot, keyed by pivot
    column.  When the active submatrix density crosses ``fallback`` the
    remaining rows are densified and finished by the dense backend.
    """
    m, n = shape
    rows: list[dict] = [dict() for _ in range(m)]
    for (i, j), v in entries.items():
        if v != field.zero:
            rows[i][j] = v
    active = [i for i in range(m) if rows[i]]
    col_rows: dict[int, set] = {}
    for i in active:
        for j in rows[i]:
            col_rows.setdefault(j, set()).add(i)
    piv_rows: dict[int, dict] = {}

    def densify_remaining():
        rem = [i for i in active if rows[i]]
        cols = sorted({j for i in rem for j in rows[i]})
        cmap = {j: idx for idx, j in enumerate(cols)}
        if isinstance(field, PrimeField):
            a = np.zeros((len(rem), len(cols)))
            for ii, i in enumerate(rem):
                for j, v in rows[i].items():
                    a[ii, cmap[j]] = v
            r, piv = rref_modp(a, field.p)
            for ii, pj in enumerate(piv):
                piv_rows[cols[pj]] = {
                    cols[jj]: int(r[ii, jj]) for jj in range(len(cols)) if r[ii, jj]
                }
        else:
            a = [[rows[i].get(j, Fraction(0)) for j in cols] for i in rem]
            r, piv = rref_fraction(a)
            for ii, pj in enumerate(piv):
                piv_rows[cols[pj]] = {
                    cols[jj]: r[ii][jj] for jj in range(len(cols)) if r[ii][jj]
                }

    while True:
        live = [i for i in active if rows[i]]
        if not live:
            break
        nnz = sum(len(rows[i]) for i in live)
        live_cols = {j for j in col_rows if col_rows[j]}
        if live_cols and nnz / (len(live) * len(live_cols)) > fallback:
            densify_remaining()
            for i in live:
                rows[i] = {}
            break
        # Markowitz heuristic: thinnest column, then thinnest row in it
        pc = min(live_cols, key=lambda j: (len(col_rows[j]), j))
        pr = min(col_rows[pc], key=lambda i: (len(rows[i]), i))
        prow = rows[pr]
        inv = field.inv(prow[pc])
        prow = {j: field.mul(v, inv) for j, v in prow.items()}
        rows[pr] = {}
        for j in prow:
            col_rows[j].discard(pr)
        for i in list(col_rows[pc]):
            f = rows[i].get(pc)
            if f is None:
                continue
            ri = rows[i]
            for j, v in prow.items():
                nv = field.sub(ri.get(j, field.zero), field.mul(f, v))
                if nv == field.zero:
                    if j in ri:
                        del ri[j]
                        col_rows[j].discard(i)
                else:
                    if j not in ri:
                        col_rows.setdefault(j, set()).add(i)
                    ri[j] = nv
        piv_rows[pc] = prow
        active = [i for i in active if rows[i]]

    # Gauss-Jordan pass to RREF; descending pivot order keeps each prow clean
    # of larger pivots by the time it is used, so one pass suffices
    for pc in sorted(piv_rows, reverse=True):
        prow = piv_rows[pc]
        for qc, qrow in piv_rows.items():
            if qc == pc:
                continue
            f = qrow.get(pc)
            if f is None:
                continue
            for j, v in prow.items():
                nv = field.sub(qrow.get(j, field.zero), field.mul(f, v))
                if nv == field.zero:
                    qrow.pop(j, None)
                else:
                    qrow[j] = nv
    return piv_rows


# ---------------------------------------------------------------------------
# ExactMatrix
# ---------------------------------------------------------------------------

class ExactMatrix:
    """Immutable sparse matrix over one exact field (COO storage, no zeros)."""

    __slots__ = ("rows", "cols", "field", "_entries")

    def __init__(self, rows: int, cols: int, field: Field,
                 entries: Iterable[tuple[int, int, object]] = ()):
        self.rows = rows
        self.cols = cols
        self.field = field
        ent: dict[tuple[int, int], object] = {}
        for i, j, v in entries:
            if not (0 <= i < rows and 0 <= j < cols):
                raise IndexError(f"entry ({i},{j}) outside {rows}x{cols}")
            if isinstance(v, FieldElement):
                if v.field != field:
                    raise FieldError("mixed-field entries")
                v = v.value
            v = field.normalize(v)
            if v != field.zero:
                ent[(i, j)] = v
        self._entries = ent

    @classmethod
    def from_dense(cls, data: Sequence[Sequence[object]], field: Field) -> "ExactMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        return cls(rows, cols, field,
                   ((i, j, v) for i, row in enumerate(data) for j, v in enumerate(row)))

    @classmethod
    def identity(cls, n: int, field: Field) -> "ExactMatrix":
        return cls(n, n, field, ((i, i, 1) for i in range(n)))

    def entry(self, i: int, j: int) -> FieldElement:
        return FieldElement(self._entries.get((i, j), self.field.zero), self.field)

    def entries(self):
        for (i, j), v in sorted(self._entries.items()):
            yield i, j, FieldElement(v, self.field)

    @property
    def nnz(self) -> int:
        return len(self._entries)

    @property
    def density(self) -> float:
        cells = self.rows * self.cols
        return self.nnz / cells if cells else 0.0

    def to_dense(self):
        if isinstance(self.field, PrimeField):
            a = np.zeros((self.rows, self.cols))
            for (i, j), v in self._entries.items():
                a[i, j] = v
            return a
        a = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for (i, j), v in self._entries.items():
            a[i][j] = v
        return a

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(self.cols, self.rows, self.field,
                           ((j, i, v) for (i, j), v in self._entries.items()))

    def mul_vector(self, vec: Sequence[object]) -> list:
        f = self.field
        out = [f.zero] * self.rows
        for (i, j), v in self._entries.items():
            out[i] = f.add(out[i], f.mul(v, f.normalize(vec[j])))
        return out

    def is_invertible(self) -> bool:
        return self.rows == self.cols and rank(self) == self.rows

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and other.rows == self.rows
                and other.cols == self.cols and other.field == self.field
                and other._entries == self._entries)

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols} over {self.field.name}, nnz={self.nnz})"


def _auto_method(m: ExactMatrix) -> str:
    if isinstance(m.field, PrimeField):
        return "dense"
    return "sparse" if m.rows * m.cols > 10000 and m.density < DENSE_FALLBACK_DENSITY else "dense"


def rank(m: ExactMatrix, method: str = "auto") -> int:
    return rank_kernel(m, method)[0]


def rank_kernel(m: ExactMatrix, method: str = "auto") -> tuple[int, list[list]]:
    """Rank and a kernel basis (list of length-``cols`` coordinate vectors)."""
    if method == "auto":
        method = _auto_method(m)
    field = m.field
    if method == "dense":
        if isinstance(field, PrimeField):
            k = dense_kernel(field, m.to_dense())
            basis = [[int(k[i, c]) for i in range(m.cols)] for c in range(k.shape[1])]
            return m.cols - len(basis), basis
        if m.rows == 0:
            basis = [[Fraction(0)] * m.cols for _ in range(m.cols)]
            for i in range(m.cols):
                basis[i][i] = Fraction(1)
            return 0, basis
        basis = dense_kernel(field, m.to_dense())
        return m.cols - len(basis), basis
    piv_rows = _sparse_echelon(m._entries, (m.rows, m.cols), field)
    pivset = set(piv_rows)
    basis = []
    for j in range(m.cols):
        if j in pivset:
            continue
        v = [field.zero] * m.cols
        v[j] = field.one
        for pc, prow in piv_rows.items():
            c = prow.get(j)
            if c is not None:
                v[pc] = field.neg(c)
        basis.append(v)
    return m.cols - len(basis), basis


def matrix_inverse(m: ExactMatrix) -> ExactMatrix:
    """Inverse of a square ExactMatrix; raises on singular input."""
    n = m.rows
    if m.cols != n:
        raise ValueError("inverse of a non-square matrix")
    field = m.field
    if isinstance(field, PrimeField):
        aug = np.zeros((n, 2 * n))
        for (i, j), v in m._entries.items():
            aug[i, j] = v
        aug[:, n:] = np.eye(n)
        r, pivots = rref_modp(aug, field.p)
        if pivots[:n] != list(range(n)) or len(pivots) < n:
            raise ValueError("singular matrix")
        return ExactMatrix(n, n, field,
                           ((i, j, int(r[i, n + j])) for i in range(n) for j in range(n)))
    aug = [[Fraction(0)] * (2 * n) for _ in range(n)]
    for (i, j), v in m._entries.items():
        aug[i][j] = v
    for i in range(n):
        aug[i][n + i] = Fraction(1)
    r, pivots = rref_fraction(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ValueError("singular matrix")
    return ExactMatrix(n, n, field,
                       ((i, j, r[i][n + j]) for i in range(n) for j in range(n)))


def rref(m: ExactMatrix, method: str = "auto") -> tuple[ExactMatrix, list[int]]:
    """Reduced row echelon form (zero rows dropped) and pivot columns."""
    if method == "auto":
        method = _auto_method(m)
    field = m.field
    if method == "sparse":
        piv_rows = _sparse_echelon(m._entries, (m.rows, m.cols), field)
        # Markowitz pivots need not be the staircase set; one more reduction
        # of the (rank many) pivot rows yields the canonical RREF
        if isinstance(field, PrimeField):
            dense = np.zeros((len(piv_rows), m.cols))
            for i, pc in enumerate(sorted(piv_rows)):
                for j, v in piv_rows[pc].items():
                    dense[i, j] = v
            r, pivots = rref_modp(dense, field.p)
            ent = [(i, j, int(r[i, j])) for i in range(len(pivots))
                   for j in np.nonzero(r[i])[0]]
        else:
            dense = [[Fraction(0)] * m.cols for _ in piv_rows]
            for i, pc in enumerate(sorted(piv_rows)):
                for j, v in piv_rows[pc].items():
                    dense[i][j] = v
            r, pivots = rref_fraction(dense)
            ent = [(i, j, v) for i in range(len(pivots))
                   for j, v in enumerate(r[i]) if v]
        return ExactMatrix(len(pivots), m.cols, field, ent), pivots
    if isinstance(field, PrimeField):
        r, pivots = rref_modp(m.to_dense(), field.p)
        ent = [(i, j, int(r[i, j])) for i in range(len(pivots))
               for j in np.nonzero(r[i])[0]]
        return ExactMatrix(len(pivots), m.cols, field, ent), pivots
    r, pivots = rref_fraction(m.to_dense())
    ent = [(i, j, v) for i in range(len(pivots)) for j, v in enumerate(r[i]) if v]
    return ExactMatrix(len(pivots), m.cols, field, ent), pivots
