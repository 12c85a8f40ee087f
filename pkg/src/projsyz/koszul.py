"""Graded module slices, Koszul complexes, Betti numbers, and the
mapping-cone long exact sequence verifier.

Betti numbers are homology dimensions of the Koszul complex
Lambda^i W (x) M, never minimal free resolutions: over Sym(W) the Koszul
complex on W resolves k, so beta_{i,d} = dim ker d_{i,d} - rank d_{i+1,d}
with d(e_{s_1}^...^e_{s_i} (x) m) = sum_r (-1)^{r+1} e..^e_hat{s_r}..e (x)
x_{s_r} m.  Exterior blocks are index subsets in increasing order, blocks
sorted lexicographically, which pins every matrix bit for bit.

For large windows the module is first cut down by a regular sequence of
generic linear forms in the subring variables: if l is verified injective on
every multiplication step inside the window (plus one degree of slack), then
Tor over Sym(W)/l of M/lM equals Tor over Sym(W) of M in all window degrees;
torsion appearing only beyond the verified degrees could contaminate nothing
below it.  Each quotient drops one variable and collapses the slice
dimensions, which is what makes the 9-variable corpus windows cheap.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .errors import TruncationError
from .fields import Field, PrimeField
from .groebner import GLOBAL_DEGREE_CAP, Ideal
from .linalg import (
    ExactMatrix,
    kernel_fraction,
    rank_fraction,
    rref_fraction,
    rref_modp,
    kernel_modp,
    rank_modp,
    _mm_modp,
)
from .polyring import Monomial, RingDescriptor, packer


# ---------------------------------------------------------------------------
# small field-dispatched dense helpers (float64 mod p vs object/Fraction)
# ---------------------------------------------------------------------------

def _zeros(fieldp, rows, cols):
    if fieldp:
        return np.zeros((rows, cols))
    a = np.empty((rows, cols), dtype=object)
    a[:] = Fraction(0)
    return a


def _rank(field: Field, a) -> int:
    if isinstance(field, PrimeField):
        return rank_modp(np.array(a, dtype=np.float64), field.p)
    return rank_fraction([list(r) for r in a])


def _rref(field: Field, a):
    if isinstance(field, PrimeField):
        return rref_modp(np.array(a, dtype=np.float64), field.p)
    rows, piv = rref_fraction([list(r) for r in a])
    out = np.empty((len(rows), a.shape[1] if hasattr(a, "shape") else len(a[0])),
                   dtype=object)
    for i, r in enumerate(rows):
        out[i] = r
    return out, piv


def _kernel_cols(field: Field, a):
    """Kernel basis as a (cols x nullity) matrix, canonical RREF form."""
    if isinstance(field, PrimeField):
        return kernel_modp(np.array(a, dtype=np.float64), field.p)
    rows = kernel_fraction([list(r) for r in a])
    n = a.shape[1] if hasattr(a, "shape") else (len(a[0]) if len(a) else 0)
    out = np.empty((n, len(rows)), dtype=object)
    out[:] = Fraction(0)
    for j, r in enumerate(rows):
        for i, v in enumerate(r):
            out[i, j] = v
    return out


def _matmul(field: Field, a, b):
    if isinstance(field, PrimeField):
        return _mm_modp(np.asarray(a, dtype=np.float64),
                        np.asarray(b, dtype=np.float64), field.p)
    return np.asarray(a, dtype=object) @ np.asarray(b, dtype=object)


# ---------------------------------------------------------------------------
# normal-form vector tables
# ---------------------------------------------------------------------------

class NFTable:
    """Normal-form coordinates of monomials in the standard-monomial bases.

    Memoized dynamic programming per degree: a non-standard monomial reduces
    through its Groebner reducer's tail into strictly smaller monomials of
    the same degree, so vectors are combined in increasing monomial order.
    """

    def __init__(self, ideal: Ideal, cap: int):
        self.ideal = ideal
        self.cap = cap
        self.ring = ideal.ring
        self.field = ideal.ring.field
        self.pk, self.reducers, self.complete = ideal.packed_gb(cap=cap)
        self._std: dict[int, dict[int, int]] = {}
        self._memo: dict[int, dict[int, object]] = {}

    def std_list(self, m: int) -> list[int]:
        return self.ideal.std_packed(m)

    def std_index(self, m: int) -> dict[int, int]:
        got = self._std.get(m)
        if got is None:
            got = {v: i for i, v in enumerate(self.std_list(m))}
            self._std[m] = got
        return got

    def vector(self, m: int, mon: int):
        memo = self._memo.setdefault(m, {})
        got = memo.get(mon)
        if got is not None:
            return got
        pk = self.pk
        prime = isinstance(self.field, PrimeField)
        p = self.field.p if prime else None
        idx = self.std_index(m)
        dim = len(idx)
        km = pk.kmask
        stack = [mon]
        while stack:
            cur = stack[-1]
            if cur in memo:
                stack.pop()
                continue
            si = idx.get(cur)
            if si is not None:
                if prime:
                    vec = np.zeros(dim)
                    vec[si] = 1.0
                else:
                    vec = np.empty(dim, dtype=object)
                    vec[:] = Fraction(0)
                    vec[si] = Fraction(1)
                memo[cur] = vec
                stack.pop()
                continue
            mmask = pk.supp_mask(cur)
            hit = None
            for lm, lmask, tail in self.reducers:
                if lmask & ~mmask:
                    continue
                if pk.divides(lm, cur):
                    hit = (lm, tail)
                    break
            if hit is None:
                raise TruncationError(
                    "monomial outside the certified initial ideal", self.cap)
            lm, tail = hit
            shift = cur - lm + km
            children = [(t + shift - km, c) for t, c in tail]
            missing = [c for c, _ in children if c not in memo]
            if missing:
                stack.extend(missing)
                continue
            if prime:
                if children:
                    rows = np.stack([memo[c] for c, _ in children])
                    coeffs = np.array([cv for _, cv in children], dtype=np.float64)
                    vec = (-(coeffs @ rows)) % p
                else:
                    vec = np.zeros(dim)
            else:
                vec = np.empty(dim, dtype=object)
                vec[:] = Fraction(0)
                for c, cv in children:
                    vec = vec - cv * memo[c]
            memo[cur] = vec
            stack.pop()
        return memo[mon]


# ---------------------------------------------------------------------------
# graded module slices
# ---------------------------------------------------------------------------

@dataclass
class GradedModuleSlice:
    """Graded pieces of R/I (or R/I_{>=trunc}) with multiplication maps.

    ``dims[j]`` is the k-dimension of degree j for 0 <= j <= max_degree;
    ``mult[v][j]`` is the matrix of multiplication by the variable at ambient
    index ``var_indices[v]`` from degree j to j+1.  ``basis[j]`` holds packed
    standard monomials when the slice still has monomial labels (quotient
    slices produced by regular-sequence reduction do not).
    """

    ring: RingDescriptor
    t: int
    max_degree: int
    dims: list[int]
    mult: list[list]               # mult[v][j]: dims[j+1] x dims[j]
    var_indices: tuple[int, ...]
    truncation: int | None = None
    basis: list[list[int]] | None = None
    notes: dict = dataclass_field(default_factory=dict)

    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def zero_from(self) -> int | None:
        """First degree with a zero piece; all higher pieces vanish too.

        Valid because every slice here is a quotient of a standard graded
        ring (degree-1 generated), so M_j = 0 forces M_{j+1} = M_1 M_j = 0.
        """
        for j, d in enumerate(self.dims):
            if d == 0:
                return j
        return None

    def dim_at(self, j: int) -> int:
        if j < 0:
            return 0
        if j <= self.max_degree:
            return self.dims[j]
        if self.zero_from is not None:
            return 0
        raise TruncationError("degree beyond slice coverage", self.max_degree)

    def basis_monomials(self, j: int) -> list[Monomial]:
        if self.basis is None:
            raise ValueError("reduced slice has no monomial labels")
        pk = packer(self.ring.nvars, self.ring.order)
        return [Monomial(pk.unpack(v)) for v in self.basis[j]]

    def w_positions(self, t: int | None = None) -> list[int]:
        """Positions (into mult) of the Koszul variables x_t..x_n."""
        t = self.t if t is None else t
        return [k for k, v in enumerate(self.var_indices) if v >= t]


def build_slice(ideal: Ideal, t: int = 0, truncation: int | None = None,
                max_degree: int = 6) -> GradedModuleSlice:
    """Bases and multiplication maps of R/I (or of R/I_{>=truncation}).

    Multiplication matrices are normal-form images of the standard-monomial
    bases; they are built for every ring variable so one slice serves all
    subring levels and the connecting maps.
    """
    if max_degree > GLOBAL_DEGREE_CAP:
        raise TruncationError("slice beyond the global degree cap", GLOBAL_DEGREE_CAP)
    ring = ideal.ring
    nf = NFTable(ideal, cap=max_degree + 1)
    pk = nf.pk
    prime = isinstance(ring.field, PrimeField)

    def basis_at(j: int) -> list[int]:
        if truncation is not None and j < truncation:
            return [pk.pack(e) for e in ring.monomials_of_degree(j)]
        return nf.std_list(j)

    bases = [basis_at(j) for j in range(max_degree + 1)]
    dims = [len(b) for b in bases]
    var_packed = [pk.pack(tuple(1 if k == v else 0 for k in range(ring.nvars)))
                  for v in range(ring.nvars)]
    mult: list[list] = []
    km = pk.kmask
    for v in range(ring.nvars):
        mats = []
        for j in range(max_degree):
            tgt_all = truncation is not None and j + 1 < truncation
            if tgt_all:
                tgt_index = {m: i for i, m in enumerate(bases[j + 1])}
            cols = []
            for u in bases[j]:
                w = u + var_packed[v] - km
                if tgt_all:
                    vec = _zeros(prime, dims[j + 1], 1)[:, 0]
                    vec[tgt_index[w]] = 1.0 if prime else Fraction(1)
                    cols.append(vec)
                else:
                    cols.append(nf.vector(j + 1, w))
            if cols:
                mat = np.stack(cols, axis=1)
            else:
                mat = _zeros(prime, dims[j + 1], 0)
            mats.append(mat)
        mult.append(mats)
    sl = GradedModuleSlice(ring, t, max_degree, dims, mult,
                           tuple(range(ring.nvars)), truncation, bases)
    if t > 0:
        tail = dims[max(0, max_degree - 2):]
        sl.notes["subring_dims_tail"] = tail
        sl.notes["dims_stabilized"] = len(set(tail)) == 1
    return sl


def check_mult_commute(sl: GradedModuleSlice, j: int) -> bool:
    """Multiplication maps commute pairwise as maps M_j -> M_{j+2}."""
    if j + 2 > sl.max_degree:
        raise TruncationError("need degree j+2 inside the slice", sl.max_degree)
    f = sl.field
    for a in range(len(sl.var_indices)):
        for b in range(a + 1, len(sl.var_indices)):
            ab = _matmul(f, sl.mult[a][j + 1], sl.mult[b][j])
            ba = _matmul(f, sl.mult[b][j + 1], sl.mult[a][j])
            if isinstance(f, PrimeField):
                if np.any(ab != ba):
                    return False
            elif (ab != ba).any():
                return False
    return True


# ---------------------------------------------------------------------------
# Koszul differentials
# ---------------------------------------------------------------------------

def _differential_dense(sl: GradedModuleSlice, wpos: list[int], i: int, d: int):
    """Matrix of d: Lambda^i W (x) M_{d-i} -> Lambda^{i-1} W (x) M_{d-i+1}."""
    j = d - i
    prime = isinstance(sl.field, PrimeField)
    if j < 0 or i < 0:
        return _zeros(prime, 0, 0)
    w = len(wpos)
    from math import comb
    bs, bt = sl.dim_at(j), sl.dim_at(j + 1)
    if i == 0 or i > w or bs == 0 or bt == 0:
        cols = comb(w, i) * bs if i <= w else 0
        rows = comb(w, i - 1) * bt if 0 < i <= w + 1 else 0
        if i == 0:
            rows = 0
        return _zeros(prime, rows, cols)
    src_blocks = list(combinations(range(w), i))
    tgt_blocks = {s: k for k, s in enumerate(combinations(range(w), i - 1))}
    out = _zeros(prime, len(tgt_blocks) * bt, len(src_blocks) * bs)
    p = sl.field.p if prime else None
    for cb, s in enumerate(src_blocks):
        c0 = cb * bs
        for r, sr in enumerate(s):
            tb = tgt_blocks[s[:r] + s[r + 1:]]
            r0 = tb * bt
            block = sl.mult[wpos[sr]][j]
            if r % 2 == 0:
                out[r0:r0 + bt, c0:c0 + bs] += block
            else:
                out[r0:r0 + bt, c0:c0 + bs] -= block
    if prime:
        out %= p
    return out


def koszul_differential(sl: GradedModuleSlice, t: int, i: int, d: int) -> ExactMatrix:
    """Public form of the differential over W = {x_t..x_n} as an ExactMatrix.

    Rows and columns are indexed by (sorted index subset, basis element) in
    lexicographic block order.
    """
    wpos = sl.w_positions(t)
    a = _differential_dense(sl, wpos, i, d)
    field = sl.field
    rows, cols = a.shape
    if isinstance(field, PrimeField):
        ri, ci = np.nonzero(a)
        return ExactMatrix(rows, cols, field,
                           ((int(r), int(c), int(a[r, c])) for r, c in zip(ri, ci)))
    return ExactMatrix(rows, cols, field,
                       ((r, c, a[r, c]) for r in range(rows) for c in range(cols)
                        if a[r, c]))


# ---------------------------------------------------------------------------
# regular-sequence reduction of slices
# ---------------------------------------------------------------------------

def reduce_slice_once(sl: GradedModuleSlice, t: int, rng: random.Random):
    """Quotient by one verified-regular generic linear form in x_t..x_n.

    Returns the reduced slice or None when injectivity of the multiplication
    by the drawn form fails in some covered degree (depth exhausted, or an
    unlucky draw; the caller retries).
    """
    wpos = sl.w_positions(t)
    if len(wpos) <= 1:
        return None
    f = sl.field
    prime = isinstance(f, PrimeField)
    if prime:
        coeffs = [rng.randrange(1, f.p) for _ in wpos]
    else:
        coeffs = [Fraction(rng.randrange(1, 97)) for _ in wpos]
    # multiplication by the form, degree by degree; must be injective
    ell = []
    for j in range(sl.max_degree):
        m = None
        for c, pos in zip(coeffs, wpos):
            term = sl.mult[pos][j] * (float(c) if prime else c)
            m = term if m is None else m + term
        if prime:
            m = m % f.p
        ell.append(m)
        if sl.dims[j] and _rank(f, m) < sl.dims[j]:
            return None
    # canonical projections: quotient coords = non-pivot rows of the image
    projs = [None] * (sl.max_degree + 1)
    frees = [None] * (sl.max_degree + 1)
    newdims = [0] * (sl.max_degree + 1)
    newdims[0] = sl.dims[0]
    frees[0] = list(range(sl.dims[0]))
    eye0 = _zeros(prime, sl.dims[0], sl.dims[0])
    for k in range(sl.dims[0]):
        eye0[k, k] = 1.0 if prime else Fraction(1)
    projs[0] = eye0
    for j in range(1, sl.max_degree + 1):
        img = ell[j - 1].T  # rows span the image inside M_j
        rr, piv = _rref(f, img)
        pivset = set(piv)
        free = [k for k in range(sl.dims[j]) if k not in pivset]
        pr = _zeros(prime, len(free), sl.dims[j])
        fidx = {k: a for a, k in enumerate(free)}
        for a, k in enumerate(free):
            pr[a, k] = 1.0 if prime else Fraction(1)
        for i_row, pc in enumerate(piv):
            col = rr[i_row]
            for k in free:
                v = col[k]
                if v:
                    pr[fidx[k], pc] = (-v) % f.p if prime else -v
        projs[j] = pr
        frees[j] = free
        newdims[j] = len(free)
    drop = wpos[-1]
    keep = [k for k in range(len(sl.var_indices)) if k != drop and
            sl.var_indices[k] >= t]
    keep_low = [k for k in range(len(sl.var_indices)) if sl.var_indices[k] < t]
    keep_all = keep_low + keep
    new_mult = []
    for pos in keep_all:
        mats = []
        for j in range(sl.max_degree):
            sect_cols = frees[j]
            m = sl.mult[pos][j][:, sect_cols] if sl.dims[j] else \
                _zeros(prime, sl.dims[j + 1], 0)
            mats.append(_matmul(f, projs[j + 1], m))
        new_mult.append(mats)
    out = GradedModuleSlice(sl.ring, sl.t, sl.max_degree, newdims, new_mult,
                            tuple(sl.var_indices[k] for k in keep_all),
                            sl.truncation, None,
                            dict(sl.notes))
    out.notes["reductions"] = sl.notes.get("reductions", 0) + 1
    return out


def reduce_slice(sl: GradedModuleSlice, t: int, seed: int = 0,
                 retries: int = 3) -> GradedModuleSlice:
    """Quotient by a maximal verified-regular sequence of generic forms."""
    rng = random.Random(seed)
    cur = sl
    while True:
        nxt = None
        for _ in range(retries):
            nxt = reduce_slice_once(cur, t, rng)
            if nxt is not None:
                break
        if nxt is None:
            return cur
        cur = nxt


# ---------------------------------------------------------------------------
# Betti tables
# ---------------------------------------------------------------------------

@dataclass
class BettiTable:
    """beta_{i,d} = dim Tor_i(M,k)_d; d is the absolute internal degree.

    Besides the computed rectangle (i <= max_i, d <= certified_max_d) two
    structural vanishing certificates may apply: columns beyond
    ``column_bound`` vanish by Hilbert's syzygy theorem over the (possibly
    regular-sequence-reduced) ring actually used, and slopes beyond
    ``slope_bound`` vanish when the reduced module was verified artinian
    with that top degree.
    """

    ring_label: str
    nvars: int
    field_name: str
    entries: dict[tuple[int, int], int]
    max_i: int
    max_d: int
    certified_max_d: int
    column_bound: int | None = None
    slope_bound: int | None = None
    meta: dict = dataclass_field(default_factory=dict)

    def beta(self, i: int, d: int) -> int:
        return self.entries.get((i, d), 0)

    def beta_slope(self, i: int, j: int) -> int:
        """Paper-facing convention: beta_{i,j} in internal degree i+j."""
        return self.beta(i, i + j)

    def is_certified(self, i: int, d: int) -> bool:
        if i <= self.max_i and d <= self.certified_max_d:
            return True
        if self.column_bound is not None and i > self.column_bound:
            return True
        return self.slope_bound is not None and d - i > self.slope_bound

    def complete(self) -> bool:
        """Every entry of the full table is certified (all others vanish)."""
        return (self.column_bound is not None and self.slope_bound is not None
                and self.max_i >= self.column_bound
                and self.certified_max_d >= self.column_bound + self.slope_bound)

    def nonzero(self) -> list[tuple[int, int, int]]:
        return [(i, d, b) for (i, d), b in sorted(self.entries.items()) if b]


class _RankCache:
    def __init__(self, sl: GradedModuleSlice, wpos: list[int]):
        self.sl = sl
        self.wpos = wpos
        self._ranks: dict[tuple[int, int], int] = {}
        self._cols: dict[tuple[int, int], int] = {}

    def rank_and_cols(self, i: int, d: int) -> tuple[int, int]:
        key = (i, d)
        if key not in self._ranks:
            j = d - i
            w = len(self.wpos)
            if j < 0 or i < 0 or i > w:
                self._ranks[key] = 0
                self._cols[key] = 0
            else:
                a = _differential_dense(self.sl, self.wpos, i, d)
                self._cols[key] = a.shape[1]
                self._ranks[key] = _rank(self.sl.field, a) if a.shape[0] and a.shape[1] else 0
        return self._ranks[key], self._cols[key]


def betti_numbers(ideal: Ideal, t: int = 0, max_i: int = 3, max_d: int = 4,
                  truncation: int | None = None, reduce: bool = True,
                  seed: int = 0, slice_: GradedModuleSlice | None = None) -> BettiTable:
    """Graded Betti numbers of R/I as a module over S_t, by Koszul homology.

    ``reduce`` enables the verified regular-sequence quotient; it never
    changes certified values, only matrix sizes.
    """
    sl = slice_ if slice_ is not None else build_slice(
        ideal, t, truncation, max_degree=max_d + 1)
    reductions = 0
    if reduce:
        red = reduce_slice(sl, t, seed)
        reductions = red.notes.get("reductions", 0)
        sl = red
    wpos = sl.w_positions(t)
    cache = _RankCache(sl, wpos)
    entries: dict[tuple[int, int], int] = {}
    for i in range(max_i + 1):
        for d in range(i, max_d + 1):
            rank_i, cols_i = cache.rank_and_cols(i, d)
            rank_next, _ = cache.rank_and_cols(i + 1, d)
            beta = cols_i - rank_i - rank_next
            if beta:
                entries[(i, d)] = beta
    label = "R" if t == 0 else f"S_{t}"
    zero_from = sl.zero_from
    return BettiTable(label, ideal.ring.nvars - t, ideal.ring.field.name,
                      entries, max_i, max_d, certified_max_d=max_d,
                      column_bound=len(wpos),
                      slope_bound=None if zero_from is None else zero_from - 1,
                      meta={"reductions": reductions, "t": t,
                            "truncation": truncation})


def euler_characteristic_checks(ideal: Ideal, max_d: int, seed: int = 0) -> list[int]:
    """Residuals of sum_i (-1)^i beta_{i,d} = sum_m HF(m) [z^d](1-z)^{n+1}."""
    from math import comb
    n1 = ideal.ring.nvars
    table = betti_numbers(ideal, 0, max_i=n1, max_d=max_d, reduce=True, seed=seed)
    res = []
    for d in range(max_d + 1):
        lhs = sum((-1) ** i * table.beta(i, d) for i in range(n1 + 1))
        rhs = sum((-1) ** k * comb(n1, k) * ideal.hilbert_function(d - k)
                  for k in range(min(d, n1) + 1))
        res.append(lhs - rhs)
    return res


# ---------------------------------------------------------------------------
# Betti table text formats
# ---------------------------------------------------------------------------

def betti_table_text(b: BettiTable) -> str:
    """The grid layout: row label j, entries beta_{i,i+j}, '.' for zero."""
    imax = max([i for (i, d) in b.entries] + [0])
    jvals = [d - i for (i, d) in b.entries]
    jmax = max(jvals + [0])
    jmin = min(jvals + [0])
    lines = [f"betti ring={b.ring_label} rows=j cols=i"]
    width = max([len(str(v)) for v in b.entries.values()] + [1])
    head = "j\\i " + " ".join(f"{i:>{width}}" for i in range(imax + 1))
    lines.append(head)
    for j in range(jmin, jmax + 1):
        row = [f"{j:<3} "]
        row.append(" ".join(
            f"{b.beta(i, i + j):>{width}}" if b.beta(i, i + j) else f"{'.':>{width}}"
            for i in range(imax + 1)))
        lines.append("".join(row))
    return "\n".join(lines) + "\n"


def betti_table_tsv(b: BettiTable) -> str:
    lines = ["i\td\tbeta"]
    for (i, d), v in sorted(b.entries.items()):
        lines.append(f"{i}\t{d}\t{v}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# mapping-cone long exact sequence
# ---------------------------------------------------------------------------

class _Homology:
    """Canonical homology data at one (level, i, d) spot.

    Kernel basis columns are the canonical RREF kernel of the outgoing
    differential; kernel coordinates of a cycle are read off its free
    columns.  The image is stored as RREF rows in kernel coordinates; the
    quotient coordinates are its non-pivot positions.
    """

    def __init__(self, field: Field, d_out, d_in):
        self.field = field
        self.kernel = _kernel_cols(field, d_out)       # chain_dim x k
        kfree = []
        npiv_rows = None
        # free columns of the RREF of d_out are exactly where kernel vectors
        # carry their defining 1 entries
        if isinstance(field, PrimeField):
            _, piv = rref_modp(np.array(d_out, dtype=np.float64), field.p)
        else:
            _, piv = rref_fraction([list(r) for r in d_out])
        pivset = set(piv)
        cols = d_out.shape[1] if hasattr(d_out, "shape") else (
            len(d_out[0]) if len(d_out) else 0)
        self.free_cols = [j for j in range(cols) if j not in pivset]
        k = len(self.free_cols)
        # image of the incoming differential, in kernel coordinates
        if d_in is not None and getattr(d_in, "shape", (0, 0))[1]:
            img_coords = np.asarray(d_in)[self.free_cols, :].T
            self.im_rows, self.im_piv = _rref(field, img_coords)
            self.im_rows = self.im_rows[: len(self.im_piv)]
        else:
            self.im_rows, self.im_piv = _zeros(isinstance(field, PrimeField), 0, k), []
        impiv = set(self.im_piv)
        self.quot_coords = [j for j in range(k) if j not in impiv]
        self.dim = len(self.quot_coords)

    def kernel_coords(self, chain_vec):
        return chain_vec[self.free_cols]

    def project(self, chain_vec):
        """Quotient coordinates of a cycle (reduce by the image rows)."""
        v = self.kernel_coords(chain_vec)
        f = self.field
        prime = isinstance(f, PrimeField)
        for i, pc in enumerate(self.im_piv):
            c = v[pc]
            if c:
                v = (v - c * self.im_rows[i]) % f.p if prime else v - c * self.im_rows[i]
        return v[self.quot_coords]

    def representative(self, q: int):
        """Canonical chain-level lift of the q-th quotient basis vector."""
        return self.kernel[:, self.quot_coords[q]]


@dataclass
class LESNode:
    degree: int
    i: int
    label: str
    dim: int
    dim_image_in: int
    dim_kernel_out: int
    exact: bool
    verifiable: bool


@dataclass
class LESReport:
    t: int
    max_i: int
    max_d: int
    nodes: list[LESNode]
    exact: bool

    def text(self) -> str:
        lines = [f"les t={self.t}->{self.t+1} max_i={self.max_i} max_d={self.max_d} "
                 f"exact={'yes' if self.exact else 'NO'}"]
        for n in self.nodes:
            status = "exact" if n.exact else ("FAIL" if n.verifiable else "unverifiable")
            lines.append(f"d={n.degree} i={n.i} {n.label:<14} dim={n.dim} "
                         f"im_in={n.dim_image_in} ker_out={n.dim_kernel_out} {status}")
        return "\n".join(lines) + "\n"


def verify_les(ideal: Ideal, t: int, max_i: int, max_d: int,
               truncation: int | None = None,
               slice_: GradedModuleSlice | None = None) -> LESReport:
    """Exactness of the mapping-cone sequence relating Tor over S_t and S_{t+1}.

    For each internal degree the sequence

      ... -> Tor_i^{S_{t+1}}(M)_d -> Tor_i^{S_t}(M)_d ->
             Tor_{i-1}^{S_{t+1}}(M)_{d-1} --x_t--> Tor_{i-1}^{S_{t+1}}(M)_d -> ...

    is built with explicit homology bases; at every node the dimension of
    the incoming image must equal the dimension of the outgoing kernel.
    """
    sl = slice_ if slice_ is not None else build_slice(
        ideal, t, truncation, max_degree=max_d + 1)
    f = sl.field
    prime = isinstance(f, PrimeField)
    wbig = sl.w_positions(t)
    wsmall = sl.w_positions(t + 1)
    xt_pos = wbig[0]

    diffs: dict[tuple[int, int, int], object] = {}

    def diff(level: int, i: int, d: int):
        key = (level, i, d)
        if key not in diffs:
            wpos = wbig if level == 0 else wsmall
            j = d - i
            if j < 0 or i < 0 or i > len(wpos):
                w = len(wpos)
                ncols = 0
                if 0 <= i <= w and 0 <= j <= sl.max_degree:
                    from math import comb
                    ncols = comb(w, i) * sl.dims[j]
                diffs[key] = _zeros(prime, 0, ncols)
            else:
                diffs[key] = _differential_dense(sl, wpos, i, d)
        return diffs[key]

    homs: dict[tuple[int, int, int], _Homology] = {}

    def hom(level: int, i: int, d: int) -> _Homology:
        key = (level, i, d)
        if key not in homs:
            homs[key] = _Homology(f, diff(level, i, d), diff(level, i + 1, d))
        return homs[key]

    # chain maps
    from math import comb

    def chain_alpha(i: int, d: int):
        """Inclusion Lambda^i W' (x) M -> Lambda^i W (x) M (subsets without x_t)."""
        j = d - i
        bs = sl.dims[j] if 0 <= j <= sl.max_degree else 0
        src_blocks = list(combinations(range(len(wsmall)), i))
        tgt_blocks = {s: k for k, s in enumerate(combinations(range(len(wbig)), i))}
        out = _zeros(prime, comb(len(wbig), i) * bs, comb(len(wsmall), i) * bs)
        for cb, s in enumerate(src_blocks):
            tb = tgt_blocks[tuple(x + 1 for x in s)]
            for r in range(bs):
                out[tb * bs + r, cb * bs + r] = 1.0 if prime else Fraction(1)
        return out

    def chain_beta(i: int, d: int):
        """Strip x_t: Lambda^i W (x) M_{d-i} -> Lambda^{i-1} W' (x) M_{d-i}."""
        j = d - i
        bs = sl.dims[j] if 0 <= j <= sl.max_degree else 0
        src_blocks = list(combinations(range(len(wbig)), i))
        tgt_blocks = {s: k for k, s in enumerate(combinations(range(len(wsmall)), i - 1))}
        out = _zeros(prime, comb(len(wsmall), i - 1) * bs, comb(len(wbig), i) * bs)
        for cb, s in enumerate(src_blocks):
            if not s or s[0] != 0:
                continue
            tb = tgt_blocks[tuple(x - 1 for x in s[1:])]
            for r in range(bs):
                out[tb * bs + r, cb * bs + r] = 1.0 if prime else Fraction(1)
        return out

    def chain_delta(i: int, d: int):
        """x_t on classes: Lambda^i W' (x) M_{d-1-i} -> Lambda^i W' (x) M_{d-i}."""
        j = d - 1 - i
        if j < 0 or j + 1 > sl.max_degree or i > len(wsmall):
            return _zeros(prime, 0, 0)
        blocks = comb(len(wsmall), i)
        xt = sl.mult[xt_pos][j]
        out = _zeros(prime, blocks * sl.dims[j + 1], blocks * sl.dims[j])
        for bidx in range(blocks):
            out[bidx * sl.dims[j + 1]:(bidx + 1) * sl.dims[j + 1],
                bidx * sl.dims[j]:(bidx + 1) * sl.dims[j]] = xt
        return out

    def induced(src: _Homology, tgt: _Homology, chain_map):
        cols = []
        for q in range(src.dim):
            v = src.representative(q)
            w = _matmul(f, chain_map, v.reshape(-1, 1))[:, 0]
            cols.append(tgt.project(w))
        if not cols:
            return _zeros(prime, tgt.dim, 0)
        return np.stack(cols, axis=1)

    def rk(mat):
        if mat is None or mat.shape[1] == 0 or mat.shape[0] == 0:
            return 0
        return _rank(f, mat)

    nodes: list[LESNode] = []
    all_exact = True
    for d in range(max_d + 1):
        # the degree-d strand, from high homological index down
        for i in range(max_i, -1, -1):
            a_sp = hom(1, i, d)                    # Tor_i^{S_{t+1}}(M)_d
            b_sp = hom(0, i, d)                    # Tor_i^{S_t}(M)_d
            c_sp = hom(1, i - 1, d - 1) if i >= 1 and d >= 1 else None
            a_next = hom(1, i - 1, d) if i >= 1 else None

            m_alpha = induced(a_sp, b_sp, chain_alpha(i, d))
            m_delta_in = None
            if d >= 1:
                m_delta_in = induced(hom(1, i, d - 1), a_sp, chain_delta(i, d))
            m_beta = induced(b_sp, c_sp, chain_beta(i, d)) if c_sp is not None else None
            m_delta_out = None
            if c_sp is not None and a_next is not None:
                m_delta_out = induced(c_sp, a_next, chain_delta(i - 1, d))

            # node A_i: incoming delta, outgoing alpha (at d=0 incoming is 0)
            im_in = rk(m_delta_in)
            ker_out = a_sp.dim - rk(m_alpha)
            ex = im_in == ker_out
            nodes.append(LESNode(d, i, f"Tor^S{t+1}_{i}", a_sp.dim, im_in, ker_out,
                                 ex, True))
            all_exact &= ex

            # node B_i: incoming alpha, outgoing beta (lands in 0 when i=0 or d=0)
            im_in_b = rk(m_alpha)
            ker_out_b = b_sp.dim - rk(m_beta) if m_beta is not None else b_sp.dim
            ex_b = im_in_b == ker_out_b
            nodes.append(LESNode(d, i, f"Tor^S{t}_{i}", b_sp.dim, im_in_b, ker_out_b,
                                 ex_b, True))
            all_exact &= ex_b

            # node C_i: incoming beta, outgoing delta
            if c_sp is not None:
                im_in_c = rk(m_beta)
                ker_out_c = c_sp.dim - rk(m_delta_out)
                ex_c = im_in_c == ker_out_c
                nodes.append(LESNode(d - 1, i - 1, f"Tor^S{t+1}_{i-1}(-1)", c_sp.dim,
                                     im_in_c, ker_out_c, ex_c, True))
                all_exact &= ex_c
    return LESReport(t, max_i, max_d, nodes, all_exact)
