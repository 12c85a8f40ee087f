"""Degreewise linear-algebra oracles, computed from generators only.

These routines never touch a Groebner basis: each graded piece I_m is the
row space of generator multiples, triangularized by RREF over the degree-m
monomials sorted decreasing in DEGLEX.  That single column order does all
the work at once, because within one total degree DEGLEX sorts by x_0-power
first and puts every monomial containing an eliminated variable before the
variable-free ones.  So one sweep yields ideal dimensions, membership tests,
elimination intersections for any t, the x_0-stratified data behind the
partial elimination ideals, and minimal-generator counts.

They exist to cross-check the Groebner routes and must stay independent of
them.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .fields import Field, PrimeField
from .linalg import dense_rref, rref_modp
from .polyring import Polynomial, RingDescriptor, packer


class DegreewiseSpans:
    """Triangular bases of an ideal's graded pieces, built from generators.

    Degree m is assembled as (R_1 * I_{m-1})_m plus the degree-m generators;
    the rank of the multiples alone is kept, which makes minimal-generator
    counts a by-product.
    """

    def __init__(self, gens: list[Polynomial], ring: RingDescriptor | None = None):
        if not gens and ring is None:
            raise ValueError("need a ring for the zero ideal")
        self.ring = ring or gens[0].ring
        self.field = self.ring.field
        self.gens = [g for g in gens if not g.is_zero()]
        for g in self.gens:
            if not g.is_homogeneous():
                raise ValueError("degreewise spans need homogeneous generators")
        self._cols: dict[int, list[tuple]] = {}
        self._col_index: dict[int, dict[tuple, int]] = {}
        self._data: dict[int, dict] = {}

    def columns(self, m: int) -> list[tuple]:
        got = self._cols.get(m)
        if got is None:
            got = self.ring.monomials_of_degree(m)  # already sorted decreasing
            self._cols[m] = got
            self._col_index[m] = {e: i for i, e in enumerate(got)}
        return got

    def _vector(self, f: Polynomial, m: int):
        idx = self._col_index[m]
        if isinstance(self.field, PrimeField):
            v = np.zeros(len(idx))
            for e, c in f.terms.items():
                v[idx[e]] = c
            return v
        v = [Fraction(0)] * len(idx)
        for e, c in f.terms.items():
            v[idx[e]] = c
        return v

    def data(self, m: int) -> dict:
        """{'rows', 'pivots', 'rank', 'mult_rank', 'new_gen_rows'} at degree m."""
        got = self._data.get(m)
        if got is not None:
            return got
        cols = self.columns(m)
        dim = len(cols)
        gens_m = [g for g in self.gens if g.degree() == m]
        if m == 0 or not self.gens or m < min(g.degree() for g in self.gens):
            prev_rows = None
        else:
            prev = self.data(m - 1)
            prev_rows = prev["rows"]
        if isinstance(self.field, PrimeField):
            blocks = []
            if prev_rows is not None and prev_rows.shape[0]:
                pidx = self._col_index[m]
                pcols = self.columns(m - 1)
                for v in range(self.ring.nvars):
                    scatter = np.zeros((prev_rows.shape[0], dim))
                    tgt = [pidx[tuple(e[k] + (1 if k == v else 0)
                                      for k in range(len(e)))] for e in pcols]
                    scatter[:, tgt] = prev_rows
                    blocks.append(scatter)
            mult_rows = np.vstack(blocks) if blocks else np.zeros((0, dim))
            mult_reduced, mult_piv = rref_modp(mult_rows, self.field.p)
            mult_rank = len(mult_piv)
            mult_reduced = mult_reduced[:mult_rank]
            if gens_m:
                gen_rows = np.vstack([self._vector(g, m) for g in gens_m])
                all_rows = np.vstack([mult_reduced, gen_rows])
            else:
                all_rows = mult_reduced
            reduced, pivots = rref_modp(all_rows, self.field.p)
            rank = len(pivots)
            rows = reduced[:rank]
            got = {"rows": rows, "pivots": pivots, "rank": rank,
                   "mult_rank": mult_rank, "mult_rows": mult_reduced,
                   "mult_pivots": mult_piv}
            self._data[m] = got
            return got
        else:
            rows_l: list[list[Fraction]] = []
            if prev_rows is not None:
                pidx = self._col_index[m]
                pcols = self.columns(m - 1)
                for v in range(self.ring.nvars):
                    for row in prev_rows:
                        nr = [Fraction(0)] * dim
                        for j, c in enumerate(row):
                            if c:
                                e = pcols[j]
                                nr[pidx[tuple(e[k] + (1 if k == v else 0)
                                              for k in range(len(e)))]] = c
                        rows_l.append(nr)
            mult_red, mult_piv = dense_rref(self.field, rows_l) if rows_l else ([], [])
            all_rows = list(mult_red) + [self._vector(g, m) for g in gens_m]
            reduced, pivots = dense_rref(self.field, all_rows) if all_rows else ([], [])
            rank = len(pivots)
            rows = reduced
            got = {"rows": rows, "pivots": pivots, "rank": rank,
                   "mult_rank": len(mult_piv), "mult_rows": mult_red,
                   "mult_pivots": mult_piv}
        self._data[m] = got
        return got

    def dim(self, m: int) -> int:
        return self.data(m)["rank"]

    def reduce_vector(self, m: int, f: Polynomial):
        """Residue of f's coefficient vector modulo the degree-m basis."""
        d = self.data(m)
        if isinstance(self.field, PrimeField):
            v = self._vector(f, m)
            rows, pivots = d["rows"], d["pivots"]
            for i, pc in enumerate(pivots):
                c = v[pc]
                if c:
                    v = (v - c * rows[i]) % self.field.p
            return v
        v = self._vector(f, m)
        for i, pc in enumerate(d["pivots"]):
            c = v[pc]
            if c:
                v = [a - c * b for a, b in zip(v, d["rows"][i])]
        return v

    def contains(self, f: Polynomial) -> bool:
        if f.is_zero():
            return True
        comps: dict[int, dict] = {}
        for e, c in f.terms.items():
            comps.setdefault(sum(e), {})[e] = c
        for m, terms in comps.items():
            res = self.reduce_vector(m, Polynomial(self.ring, terms))
            if isinstance(self.field, PrimeField):
                if np.any(res):
                    return False
            elif any(res):
                return False
        return True

    def row_polynomial(self, m: int, i: int) -> Polynomial:
        d = self.data(m)
        cols = self.columns(m)
        if isinstance(self.field, PrimeField):
            row = d["rows"][i]
            terms = {cols[j]: int(row[j]) for j in np.nonzero(row)[0]}
        else:
            terms = {cols[j]: c for j, c in enumerate(d["rows"][i]) if c}
        return Polynomial(self.ring, terms)

    # -- elimination ------------------------------------------------------------

    def eliminated_rows(self, m: int, t: int) -> list[int]:
        """Row indices whose pivot monomial avoids x_0..x_{t-1} entirely.

        By the column order those rows are supported on x_t..x_n alone and
        form a triangular basis of (I cap S_t)_m.
        """
        d = self.data(m)
        cols = self.columns(m)
        return [i for i, pc in enumerate(d["pivots"])
                if all(cols[pc][k] == 0 for k in range(t))]

    def eliminated_dim(self, m: int, t: int) -> int:
        return len(self.eliminated_rows(m, t))

    def eliminated_polynomials(self, m: int, t: int) -> list[Polynomial]:
        sub = self.ring.subring(t)
        out = []
        for i in self.eliminated_rows(m, t):
            f = self.row_polynomial(m, i)
            out.append(Polynomial(sub, {e[t:]: c for e, c in f.terms.items()}))
        return out

    # -- x_0 strata (partial elimination) ------------------------------------------

    def strata_pivots(self, m: int) -> list[int]:
        """x_0-exponent of each pivot, i.e. d0 of each triangular basis row."""
        d = self.data(m)
        cols = self.columns(m)
        return [cols[pc][0] for pc in d["pivots"]]

    def tilde_k_dim(self, m: int, i: int) -> int:
        """dim of {f in I_m : d0(f) <= i}."""
        return sum(1 for k in self.strata_pivots(m) if k <= i)

    def k_level_polynomials(self, m: int, i: int) -> list[Polynomial]:
        """x_0^i-coefficients of the rows with d0 exactly i (degree m rows)."""
        d = self.data(m)
        cols = self.columns(m)
        sub = self.ring.subring(1)
        out = []
        for r, pc in enumerate(d["pivots"]):
            if cols[pc][0] != i:
                continue
            f = self.row_polynomial(m, r)
            terms = {e[1:]: c for e, c in f.terms.items() if e[0] == i}
            out.append(Polynomial(sub, terms))
        return out

    # -- minimal generators ------------------------------------------------------

    def new_generator_count(self, m: int) -> int:
        d = self.data(m)
        return d["rank"] - d["mult_rank"]

    def select_new_generators(self, m: int,
                              candidates: list[Polynomial]) -> list[Polynomial]:
        """Candidates completing (R_1*I_{m-1})_m to I_m, greedily in order."""
        d = self.data(m)
        need = d["rank"] - d["mult_rank"]
        if need == 0:
            return []
        prime = isinstance(self.field, PrimeField)
        rows = [r for r in d["mult_rows"]]
        pivots = list(d["mult_pivots"])
        chosen: list[Polynomial] = []
        for g in candidates:
            if len(chosen) == need:
                break
            v = self._vector(g, m)
            changed = True
            while changed:
                changed = False
                for row, pc in zip(rows, pivots):
                    c = v[pc]
                    if c:
                        v = (v - c * row) % self.field.p if prime else \
                            [a - c * b for a, b in zip(v, row)]
                        changed = True
            nz = np.nonzero(v)[0] if prime else [i for i, c in enumerate(v) if c]
            if len(nz) == 0:
                continue
            pc = int(nz[0]) if prime else nz[0]
            inv = pow(int(v[pc]), self.field.p - 2, self.field.p) if prime else \
                1 / v[pc]
            v = (v * inv) % self.field.p if prime else [c * inv for c in v]
            rows.append(v)
            pivots.append(pc)
            chosen.append(g)
        if len(chosen) < need:
            raise ValueError("candidates do not span the new generators")
        return chosen

    def minimal_generator_degrees(self, upto: int) -> dict[int, int]:
        out = {}
        for m in range(upto + 1):
            c = self.new_generator_count(m)
            if c:
                out[m] = c
        return out


# ---------------------------------------------------------------------------
# convenience wrappers used by cross-checks
# ---------------------------------------------------------------------------

def membership_oracle(gens: list[Polynomial], f: Polynomial) -> bool:
    return DegreewiseSpans(gens).contains(f)


def hf_oracle(gens: list[Polynomial], ring: RingDescriptor, m: int) -> int:
    """dim (R/I)_m by generator-span linear algebra."""
    sp = DegreewiseSpans(gens, ring)
    return len(sp.columns(m)) - sp.dim(m)


def degree_basis_dim(gens: list[Polynomial], m: int) -> int:
    return DegreewiseSpans(gens).dim(m)


def eliminate_oracle_dims(gens: list[Polynomial], t: int, maxdeg: int) -> list[int]:
    sp = DegreewiseSpans(gens)
    return [sp.eliminated_dim(m, t) for m in range(maxdeg + 1)]


def beta1_oracle(gens: list[Polynomial], ring: RingDescriptor, maxdeg: int) -> dict[int, int]:
    """Minimal-generator count of the ideal per degree (= beta_{1,m} of R/I)."""
    return DegreewiseSpans(gens, ring).minimal_generator_degrees(maxdeg)
