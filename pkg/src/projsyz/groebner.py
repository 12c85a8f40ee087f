"""Buchberger's algorithm, normal forms, elimination, colon/saturation,
Hilbert functions, Krull dimension and degree.

The engine works on packed-integer monomials (see polyring.MonomialPacker):
dict {packed: coefficient} polynomials, heap-driven reduction, Gebauer-Moller
pair criteria, normal (minimal pair degree first) selection.  For homogeneous
input a degree cap turns this into the truncated variant: the returned basis
is a Groebner basis "up to the cap" (initial ideal correct in all degrees
<= cap), which is what the degreewise consumers need.

Elimination uses DEGLEX with the eliminated variables greatest; on
homogeneous input this is an elimination-compatible choice degree by degree.
The colon uses the classic auxiliary-variable intersection trick under a
genuine block elimination order (the intermediate ideal is inhomogeneous, so
DEGLEX would not do).
"""

from __future__ import annotations

import heapq
import random
from fractions import Fraction
from itertools import combinations
from math import gcd

from .errors import TruncationError
from .fields import Field, FieldError, PrimeField, RationalField
from .linalg import ExactMatrix, matrix_inverse
from .polyring import (
    Monomial,
    MonomialPacker,
    Polynomial,
    RingDescriptor,
    packer,
    parse_polynomial,
    polynomial_to_string,
    substitute_linear,
)

GLOBAL_DEGREE_CAP = 30


# ---------------------------------------------------------------------------
# packed reduction
# ---------------------------------------------------------------------------

def _reduce_modp(f: dict, reducers: list, pk: MonomialPacker, p: int) -> dict:
    """Full normal form of a packed dict modulo monic packed reducers (F_p)."""
    if not f:
        return {}
    work = dict(f)
    heap = [-m for m in work]
    heapq.heapify(heap)
    out: dict = {}
    km = pk.kmask
    supp = pk.supp_mask
    divides = pk.divides
    while heap:
        mu = -heapq.heappop(heap)
        c = work.pop(mu, 0)
        if not c:
            continue
        mmask = supp(mu)
        hit = None
        for lm, lmask, tail in reducers:
            if lmask & ~mmask:
                continue
            if divides(lm, mu):
                hit = (lm, tail)
                break
        if hit is None:
            out[mu] = c
            continue
        lm, tail = hit
        shift = mu - lm + km
        for t, cv in tail:
            tt = t + shift - km
            nv = (work.get(tt, 0) - c * cv) % p
            if nv:
                if tt not in work:
                    heapq.heappush(heap, -tt)
                work[tt] = nv
            else:
                work.pop(tt, None)
    return out


def _reduce_generic(f: dict, reducers: list, pk: MonomialPacker, field: Field) -> dict:
    if not f:
        return {}
    work = dict(f)
    heap = [-m for m in work]
    heapq.heapify(heap)
    out: dict = {}
    km = pk.kmask
    zero = field.zero
    while heap:
        mu = -heapq.heappop(heap)
        c = work.pop(mu, zero)
        if c == zero:
            continue
        mmask = pk.supp_mask(mu)
        hit = None
        for lm, lmask, tail in reducers:
            if lmask & ~mmask:
                continue
            if pk.divides(lm, mu):
                hit = (lm, tail)
                break
        if hit is None:
            out[mu] = c
            continue
        lm, tail = hit
        shift = mu - lm + km
        for t, cv in tail:
            tt = t + shift - km
            nv = field.sub(work.get(tt, zero), field.mul(c, cv))
            if nv == zero:
                work.pop(tt, None)
            else:
                if tt not in work:
                    heapq.heappush(heap, -tt)
                work[tt] = nv
    return out


def _reduce_packed(f: dict, reducers: list, pk: MonomialPacker, field: Field) -> dict:
    if isinstance(field, PrimeField):
        return _reduce_modp(f, reducers, pk, field.p)
    return _reduce_generic(f, reducers, pk, field)


def _make_monic(f: dict, field: Field) -> dict:
    lm = max(f)
    inv = field.inv(f[lm])
    if inv == field.one:
        return f
    return {m: field.mul(c, inv) for m, c in f.items()}


def _reducer_entry(f: dict, pk: MonomialPacker):
    """(lm, support mask, tail items) for a monic packed polynomial."""
    lm = max(f)
    tail = tuple((m, c) for m, c in f.items() if m != lm)
    return lm, pk.supp_mask(lm), tail


# ---------------------------------------------------------------------------
# Buchberger with Gebauer-Moller pair handling
# ---------------------------------------------------------------------------

def _gb_core(polys: list[dict], pk: MonomialPacker, field: Field,
             cap: int | None = None) -> tuple[list[dict], bool]:
    """Reduced Groebner basis of packed polynomials; (basis, complete flag).

    With a cap, S-pairs whose lcm degree exceeds the cap are discarded and
    the flag comes back False unless none were discarded.
    """
    basis: list[dict] = []
    lms: list[int] = []
    masks: list[int] = []
    reducers: list = []
    pairs: list = []  # heap of (deg, lcm, i, j)
    complete = True

    def reduce_now(f: dict) -> dict:
        return _reduce_packed(f, reducers, pk, field)

    def add_element(h: dict) -> None:
        nonlocal pairs, complete
        h = _make_monic(h, field)
        t = len(basis)
        lmt = max(h)
        # Gebauer-Moller update of the pair set
        survivors = []
        for deg, l, i, j in pairs:
            if pk.divides(lmt, l) and pk.lcm(lms[i], lmt) != l and pk.lcm(lms[j], lmt) != l:
                continue
            survivors.append((deg, l, i, j))
        cand = []
        for i in range(t):
            l = pk.lcm(lms[i], lmt)
            cand.append((l, i))
        # M criterion: strict divisibility among the new lcms
        keep = []
        for l, i in cand:
            if any(lo != l and pk.divides(lo, l) for lo, _ in cand):
                continue
            keep.append((l, i))
        # F criterion + product criterion per lcm class
        by_lcm: dict[int, list[int]] = {}
        for l, i in keep:
            by_lcm.setdefault(l, []).append(i)
        fresh = []
        for l, idxs in by_lcm.items():
            if any(pk.coprime(lms[i], lmt) for i in idxs):
                continue
            i = idxs[0]
            d = pk.degree(l)
            if cap is not None and d > cap:
                complete = False
                continue
            fresh.append((d, l, i, t))
        pairs = survivors + fresh
        heapq.heapify(pairs)
        basis.append(h)
        lms.append(lmt)
        masks.append(pk.supp_mask(lmt))
        reducers.append(_reducer_entry(h, pk))

    seeds = []
    for f in polys:
        if f:
            seeds.append(_make_monic(f, field))
    seeds.sort(key=lambda f: (pk.degree(max(f)), max(f)))
    for f in seeds:
        h = reduce_now(f)
        if h:
            add_element(h)

    while pairs:
        deg, l, i, j = heapq.heappop(pairs)
        if cap is not None and deg > cap:
            complete = False
            continue
        fi, fj = basis[i], basis[j]
        km = pk.kmask
        si = l - lms[i] + km
        sj = l - lms[j] + km
        s: dict = {}
        for m, c in fi.items():
            s[m + si - km] = c
        for m, c in fj.items():
            mm = m + sj - km
            v = field.sub(s.get(mm, field.zero), c)
            if v == field.zero:
                s.pop(mm, None)
            else:
                s[mm] = v
        h = reduce_now(s)
        if h:
            add_element(h)

    # minimal basis: drop elements whose lm is divisible by another lm
    order_idx = sorted(range(len(basis)), key=lambda i: lms[i])
    minimal: list[int] = []
    for i in order_idx:
        if any(pk.divides(lms[j], lms[i]) for j in minimal):
            continue
        minimal.append(i)
    # tail-reduce each against the others
    final: list[dict] = []
    min_set = [(lms[i], masks[i], basis[i]) for i in minimal]
    for lm_i, _, f in min_set:
        others = [_reducer_entry(g, pk) for lm_g, _, g in min_set if lm_g != lm_i]
        h = _reduce_packed(f, others, pk, field)
        final.append(_make_monic(h, field))
    final.sort(key=lambda f: (pk.degree(max(f)), max(f)))
    return final, complete


# ---------------------------------------------------------------------------
# packing boundaries
# ---------------------------------------------------------------------------

def _pack_poly(f: Polynomial, pk: MonomialPacker) -> dict:
    return {pk.pack(e): c for e, c in f.terms.items()}

def _unpack_poly(d: dict, pk: MonomialPacker, ring: RingDescriptor) -> Polynomial:
    return Polynomial(ring, {pk.unpack(m): c for m, c in d.items()})


def buchberger(gens: list[Polynomial], order: str | None = None,
               cap: int | None = None) -> list[Polynomial]:
    """Reduced Groebner basis (monic, sorted by increasing degree then order).

    All S-polynomials of the returned basis reduce to zero; no leading term
    divides another; tails are fully reduced.
    """
    basis, _ = buchberger_flagged(gens, order, cap)
    return basis


def buchberger_flagged(gens: list[Polynomial], order: str | None = None,
                       cap: int | None = None) -> tuple[list[Polynomial], bool]:
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return [], True
    ring = gens[0].ring
    order = order or ring.order
    if cap is not None and any(not g.is_homogeneous() for g in gens):
        raise ValueError("degree-capped bases require homogeneous generators")
    pk = packer(ring.nvars, order)
    packed = [_pack_poly(g, pk) for g in gens]
    out, complete = _gb_core(packed, pk, ring.field, cap)
    out_ring = ring if order == ring.order else ring.with_order(order)
    return [_unpack_poly(f, pk, out_ring) for f in out], complete


def normal_form(f: Polynomial, basis: list[Polynomial], order: str | None = None) -> Polynomial:
    """Division-algorithm remainder of f modulo ``basis`` under ``order``.

    The result has no term divisible by any leading term of the basis, and
    f minus the result lies in the ideal generated by the basis.
    """
    ring = f.ring
    order = order or ring.order
    pk = packer(ring.nvars, order)
    reducers = [_reducer_entry(_make_monic(_pack_poly(g, pk), ring.field), pk)
                for g in basis if not g.is_zero()]
    return _unpack_poly(_reduce_packed(_pack_poly(f, pk), reducers, pk, ring.field),
                        pk, ring)


def spolynomial(f: Polynomial, g: Polynomial, order: str | None = None) -> Polynomial:
    ring = f.ring
    order = order or ring.order
    pk = packer(ring.nvars, order)
    fp = _make_monic(_pack_poly(f, pk), ring.field)
    gp = _make_monic(_pack_poly(g, pk), ring.field)
    l = pk.lcm(max(fp), max(gp))
    km = pk.kmask
    si, sj = l - max(fp) + km, l - max(gp) + km
    s: dict = {}
    for m, c in fp.items():
        s[m + si - km] = c
    for m, c in gp.items():
        mm = m + sj - km
        v = ring.field.sub(s.get(mm, ring.field.zero), c)
        if v == ring.field.zero:
            s.pop(mm, None)
        else:
            s[mm] = v
    return _unpack_poly(s, pk, ring)


def exact_divide(h: Polynomial, f: Polynomial) -> Polynomial:
    """h / f for h in the principal ideal (f); raises if not divisible."""
    ring = h.ring
    pk = packer(ring.nvars, ring.order)
    field = ring.field
    hp = _pack_poly(h, pk)
    fp = _pack_poly(f, pk)
    lmf = max(fp)
    lcf_inv = field.inv(fp[lmf])
    km = pk.kmask
    q: dict = {}
    while hp:
        mu = max(hp)
        if not pk.divides(lmf, mu):
            raise ValueError("not divisible")
        c = field.mul(hp[mu], lcf_inv)
        shift = mu - lmf + km
        q[shift] = c
        for m, cv in fp.items():
            tt = m + shift - km
            nv = field.sub(hp.get(tt, field.zero), field.mul(c, cv))
            if nv == field.zero:
                hp.pop(tt, None)
            else:
                hp[tt] = nv
    return _unpack_poly(q, pk, ring)


# ---------------------------------------------------------------------------
# Ideal
# ---------------------------------------------------------------------------

class Ideal:
    """Homogeneous ideal: generator list plus lazily cached Groebner bases.

    The GB cache is keyed by order tag and stores the largest computed cap;
    a complete basis (cap None) satisfies any later capped request.  The
    ``saturated`` flag is tri-state: 'yes' / 'no' / 'unknown'.
    """

    def __init__(self, ring: RingDescriptor, generators, saturated: str = "unknown"):
        self.ring = ring
        gens = []
        for g in generators:
            if isinstance(g, str):
                g = parse_polynomial(g, ring)
            if g.ring != ring:
                raise FieldError("generator from a different ring")
            if g.is_zero():
                continue
            if not g.is_homogeneous():
                raise ValueError(f"inhomogeneous generator: {g}")
            gens.append(g)
        self.generators: tuple[Polynomial, ...] = tuple(gens)
        self.saturated = saturated
        self._gb: dict[str, tuple[int | None, list[Polynomial], bool]] = {}
        self._std_cache: dict = {}
        self.meta: dict = {}

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, ring: RingDescriptor) -> "Ideal":
        return cls(ring, [])

    def plus(self, extra, saturated: str = "unknown") -> "Ideal":
        extra_gens = extra.generators if isinstance(extra, Ideal) else tuple(extra)
        return Ideal(self.ring, self.generators + tuple(extra_gens), saturated)

    # -- basics ---------------------------------------------------------------

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        if any(g.degree() == 0 for g in self.generators):
            return True
        return any(g.degree() == 0 for g in self.groebner_basis())

    def __repr__(self):
        return f"Ideal({len(self.generators)} gens over {self.ring.field.name}[{','.join(self.ring.variables)}])"

    # -- Groebner bases ---------------------------------------------------------

    def groebner_basis(self, order: str | None = None, cap: int | None = None) -> list[Polynomial]:
        order = order or self.ring.order
        cached = self._gb.get(order)
        if cached is not None:
            ccap, basis, complete = cached
            if complete or ccap is None or (cap is not None and ccap >= cap):
                return basis
        basis, complete = buchberger_flagged(list(self.generators), order, cap)
        self._gb[order] = (None if complete else cap, basis, complete)
        return basis

    def gb_complete(self, order: str | None = None) -> bool:
        order = order or self.ring.order
        cached = self._gb.get(order)
        return bool(cached and cached[2])

    def packed_gb(self, order: str | None = None, cap: int | None = None):
        """(packer, reducer entries, complete flag) for internal consumers."""
        order = order or self.ring.order
        basis = self.groebner_basis(order, cap)
        pk = packer(self.ring.nvars, order)
        entries = [_reducer_entry(_make_monic(_pack_poly(g, pk), self.ring.field), pk)
                   for g in basis]
        return pk, entries, self.gb_complete(order)

    def contains(self, f: Polynomial) -> bool:
        if f.is_zero():
            return True
        cap = f.degree() if f.is_homogeneous() else None
        return normal_form(f, self.groebner_basis(cap=cap), self.ring.order).is_zero()

    def reduce(self, f: Polynomial, cap: int | None = None) -> Polynomial:
        return normal_form(f, self.groebner_basis(cap=cap), self.ring.order)

    # -- standard monomials / Hilbert data -------------------------------------

    def _lm_data(self, m: int, order: str | None = None):
        order = order or self.ring.order
        pk = packer(self.ring.nvars, order)
        basis = self.groebner_basis(order, cap=m)
        lms = []
        for g in basis:
            if g.degree() <= m:
                lm = max(pk.pack(e) for e in g.terms)
                lms.append((lm, pk.supp_mask(lm)))
        return pk, lms

    def std_packed(self, m: int, order: str | None = None) -> list[int]:
        """Packed standard monomials of degree m, sorted decreasing."""
        order = order or self.ring.order
        key = (order, m)
        got = self._std_cache.get(key)
        if got is not None:
            return got
        pk, lms = self._lm_data(m, order)
        out = []
        for e in self.ring.monomials_of_degree(m):
            v = pk.pack(e)
            vmask = pk.supp_mask(v)
            for lm, lmask in lms:
                if lmask & ~vmask:
                    continue
                if pk.divides(lm, v):
                    break
            else:
                out.append(v)
        out.sort(reverse=True)
        self._std_cache[key] = out
        return out

    def std_monomials(self, m: int, order: str | None = None) -> list[Monomial]:
        order = order or self.ring.order
        pk = packer(self.ring.nvars, order)
        return [Monomial(pk.unpack(v)) for v in self.std_packed(m, order)]

    def hilbert_function(self, m: int, order: str | None = None) -> int:
        return len(self.std_packed(m, order))

    # -- dimension and degree ----------------------------------------------------

    def krull_dim(self) -> int:
        """Krull dimension of R/I via initial-ideal combinatorics."""
        if self.is_unit():
            raise ValueError("krull_dim of the unit ideal (R/I is the zero ring)")
        basis = self.groebner_basis()
        supports = []
        for g in basis:
            supports.append(frozenset(i for i, e in enumerate(g.leading_exponents()) if e))
        supports = set(supports)
        n = self.ring.nvars
        best = 0
        for size in range(n, 0, -1):
            if size <= best:
                break
            for combo in combinations(range(n), size):
                s = set(combo)
                if all(not supp <= s for supp in supports):
                    best = size
                    break
            if best:
                break
        return best

    def hilbert_values(self, upto: int) -> list[int]:
        return [self.hilbert_function(m) for m in range(upto + 1)]

    def degree_of(self, cap: int = GLOBAL_DEGREE_CAP) -> int:
        """(dim-1)! times the Hilbert polynomial's leading coefficient.

        Reads the constant value of the (dim-1)-th finite difference once a
        window of dim+2 consecutive values has constant differences.
        """
        dim = self.krull_dim()
        if dim == 0:
            return 0
        values: list[int] = []
        for m in range(cap + 1):
            values.append(self.hilbert_function(m))
            window = dim + 2
            if len(values) >= window:
                seg = values[-window:]
                for _ in range(dim - 1):
                    seg = [b - a for a, b in zip(seg, seg[1:])]
                if len(set(seg)) == 1:
                    return seg[0]
        raise TruncationError("Hilbert function did not stabilize", cap)


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    if a.ring != b.ring:
        raise FieldError("ideals in different rings")
    return Ideal(a.ring, a.generators + b.generators)


def same_ideal(a: Ideal, b: Ideal) -> bool:
    """Exact equality via reduced Groebner bases (unique per order)."""
    if a.ring != b.ring:
        return False
    ga = a.groebner_basis(a.ring.order)
    gb = b.groebner_basis(a.ring.order)
    return {frozenset(g.terms.items()) for g in ga} == {frozenset(g.terms.items()) for g in gb}


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------

def eliminate(ideal: Ideal, t: int, cap: int | None = None) -> Ideal:
    """I intersected with k[x_t..x_n] (DEGLEX with eliminated vars greatest).

    Valid because all generators are homogeneous; the returned ideal lives in
    the coordinate subring.  With a cap the result is certified only in
    degrees <= cap (recorded in meta).
    """
    ring = ideal.ring
    if not 0 <= t < ring.nvars:
        raise ValueError(f"elimination count {t} out of range for {ring.nvars} variables")
    if t == 0:
        return ideal
    basis = ideal.groebner_basis("deglex", cap)
    sub = ring.subring(t)
    gens = []
    for g in basis:
        if all(all(e[i] == 0 for i in range(t)) for e in g.terms):
            gens.append(Polynomial(sub, {e[t:]: c for e, c in g.terms.items()}))
    out = Ideal(sub, gens)
    out.meta["elimination_cap"] = cap if not ideal.gb_complete("deglex") else None
    return out


# ---------------------------------------------------------------------------
# colon, intersection, saturation
# ---------------------------------------------------------------------------

def _aux_gb(block_one: list[Polynomial], block_f: list[Polynomial],
            ring: RingDescriptor) -> list[dict]:
    """GB of  t*I + (1-t)*J  under the t-eliminating block order; packed."""
    pk = packer(ring.nvars + 1, "elim1")
    field = ring.field
    packed = []
    for g in block_one:
        packed.append({pk.pack((1,) + e): c for e, c in g.terms.items()})
    for f in block_f:
        d = {pk.pack((0,) + e): c for e, c in f.terms.items()}
        for e, c in f.terms.items():
            m = pk.pack((1,) + e)
            v = field.sub(d.get(m, field.zero), c)
            if v == field.zero:
                d.pop(m, None)
            else:
                d[m] = v
        packed.append(d)
    basis, _ = _gb_core(packed, pk, field, cap=None)
    return [f for f in basis if all(pk.unpack(m)[0] == 0 for m in f)]


def _strip_aux(fs: list[dict], ring: RingDescriptor) -> list[Polynomial]:
    pk = packer(ring.nvars + 1, "elim1")
    out = []
    for f in fs:
        out.append(Polynomial(ring, {pk.unpack(m)[1:]: c for m, c in f.items()}))
    return out


def intersect(a: Ideal, b: Ideal) -> Ideal:
    """I cap J via the auxiliary-variable trick."""
    if a.ring != b.ring:
        raise FieldError("ideals in different rings")
    if a.is_zero_ideal() or b.is_zero_ideal():
        return Ideal.zero(a.ring)
    got = _aux_gb(list(a.generators), list(b.generators), a.ring)
    return Ideal(a.ring, _strip_aux(got, a.ring))


def colon(ideal: Ideal, f: Polynomial) -> Ideal:
    """(I : f) computed as (I cap (f)) / f."""
    if f.is_zero():
        raise ValueError("colon by zero")
    if ideal.is_zero_ideal():
        return Ideal.zero(ideal.ring)
    got = _aux_gb(list(ideal.generators), [f], ideal.ring)
    members = _strip_aux(got, ideal.ring)
    return Ideal(ideal.ring, [exact_divide(h, f) for h in members])


def colon_ideal(ideal: Ideal, j: Ideal) -> Ideal:
    """(I : J) as the intersection of the single-generator colons."""
    gens = [g for g in j.generators]
    if not gens:
        raise ValueError("colon by the zero ideal")
    out = colon(ideal, gens[0])
    for g in gens[1:]:
        out = intersect(out, colon(ideal, g))
    return out


def saturate(ideal: Ideal, j: Ideal, max_rounds: int = 50) -> Ideal:
    """(I : J^infty): iterate colon by J until stabilization."""
    cur = ideal
    for _ in range(max_rounds):
        nxt = colon_ideal(cur, j)
        if same_ideal(nxt, cur):
            out = Ideal(cur.ring, cur.generators,
                        saturated="yes" if _is_irrelevant(j) else cur.saturated)
            out._gb = cur._gb
            return out
        cur = nxt
    raise RuntimeError("saturation did not stabilize")


def _is_irrelevant(j: Ideal) -> bool:
    names = set()
    for g in j.generators:
        if len(g.terms) != 1 or g.degree() != 1:
            return False
        (e,) = g.terms
        names.add(e.index(1))
    return names == set(range(j.ring.nvars))


def irrelevant_ideal(ring: RingDescriptor) -> Ideal:
    return Ideal(ring, [ring.variable(i) for i in range(ring.nvars)])


def _coords_rows(ring: RingDescriptor, rows) -> list[Polynomial]:
    forms = []
    for row in rows:
        forms.append(Polynomial(ring, {
            tuple(1 if j == k else 0 for k in range(ring.nvars)): ring.field.normalize(c)
            for j, c in enumerate(row) if ring.field.normalize(c) != ring.field.zero
        }))
    return forms


def change_coordinates(ideal: Ideal, rows) -> Ideal:
    """Substitute x_i by the linear form with coefficients rows[i]."""
    forms = _coords_rows(ideal.ring, rows)
    return Ideal(ideal.ring,
                 [substitute_linear(g, forms, ideal.ring) for g in ideal.generators])


def saturate_irrelevant(ideal: Ideal, seed: int = 0, attempts: int = 10) -> Ideal:
    """Saturation w.r.t. the irrelevant maximal ideal, reverse-lex route.

    (I : l^infty) for a generic linear form l equals the saturation; it is
    read off a DEGREVLEX basis with l moved into the last variable by
    dividing every basis element by its maximal last-variable power.  A
    second generic form certifies the fixed point; failures redraw.
    """
    ring = ideal.ring
    n = ring.nvars
    if ideal.is_zero_ideal():
        return Ideal(ring, [], saturated="yes")
    rng = random.Random(seed)
    field = ring.field

    def colon_linf(cur: Ideal) -> Ideal:
        coeffs = [field.normalize(rng.randrange(1, 30011))
                  if isinstance(field, PrimeField)
                  else Fraction(rng.randrange(1, 97)) for _ in range(n)]
        # M: unit rows completing the form's row; invertible since coeffs[0] != 0
        m = [[field.zero] * n for _ in range(n)]
        for r, i in enumerate(range(1, n)):
            m[r][i] = field.one
        m[n - 1] = list(coeffs)
        mat = ExactMatrix.from_dense(m, field)
        b = matrix_inverse(mat)
        rows_fwd = [[b.entry(i, j).value for j in range(n)] for i in range(n)]
        moved = change_coordinates(cur, rows_fwd)
        basis = buchberger(list(moved.generators), "degrevlex")
        divided = []
        for g in basis:
            k = min(e[n - 1] for e in g.terms)
            if k:
                g = Polynomial(g.ring, {e[:n - 1] + (e[n - 1] - k,): c
                                        for e, c in g.terms.items()})
            divided.append(Polynomial(ring, dict(g.terms)))
        rows_back = [[mat.entry(i, j).value for j in range(n)] for i in range(n)]
        return change_coordinates(Ideal(ring, divided), rows_back)

    cur = colon_linf(ideal)
    for _ in range(attempts):
        nxt = colon_linf(cur)
        if same_ideal(nxt, cur):
            out = Ideal(ring, cur.groebner_basis(ring.order), saturated="yes")
            return out
        cur = nxt
    raise RuntimeError("irrelevant saturation did not stabilize")


# ---------------------------------------------------------------------------
# ideal file format
# ---------------------------------------------------------------------------

def load_ideal(text: str) -> Ideal:
    """Parse the line-oriented ideal file format.

    ``field Q`` or ``field F <prime>``; ``vars`` (priority order, leftmost
    greatest); ``order deglex|degrevlex|lex``; one ``gen <polynomial>`` per
    line; ``#`` starts a comment.
    """
    from .fields import field_from_tag

    field = None
    variables = None
    order = "deglex"
    gens: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if head == "field":
            field = field_from_tag(rest)
        elif head == "vars":
            variables = tuple(rest.split())
        elif head == "order":
            if rest not in ("deglex", "degrevlex", "lex"):
                raise ValueError(f"line {lineno}: unknown order {rest!r}")
            order = rest
        elif head == "gen":
            gens.append(rest)
        else:
            raise ValueError(f"line {lineno}: unknown directive {head!r}")
    if field is None or variables is None:
        raise ValueError("ideal file needs 'field' and 'vars' lines")
    ring = RingDescriptor(variables, field, order)
    return Ideal(ring, [parse_polynomial(g, ring) for g in gens])


def save_ideal(ideal: Ideal) -> str:
    """Serialize to the ideal file format (Q generators get denominators cleared)."""
    from .fields import field_tag

    ring = ideal.ring
    lines = [f"field {field_tag(ring.field)}",
             "vars " + " ".join(ring.variables),
             f"order {ring.order}"]
    for g in ideal.generators:
        if isinstance(ring.field, RationalField):
            den = 1
            for c in g.terms.values():
                den = den * c.denominator // gcd(den, c.denominator)
            g = g.scale(den)
        lines.append("gen " + polynomial_to_string(g))
    return "\n".join(lines) + "\n"
