"""Deterministic constructors for the example varieties and seeded centers.

Families: rational normal curves (2x2 Hankel minors), higher secant
varieties of rational normal curves ((l+1)-minors of the catalecticant
Hankel matrix), rational normal scrolls (2x2 minors of the concatenated
1-generic block matrix), and Veronese embeddings (quadratic binomials of
the monomial map).  Every family carries a parametrization so points of X
can be sampled exactly; tangent-type centers for scrolls are spans of named
subvarieties (ruling line, fiber, sub-scroll) rather than Jacobian data.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .errors import GenericityError
from .fields import DEFAULT_FIELD, Field, PrimeField
from .groebner import Ideal
from .polyring import Polynomial, RingDescriptor

RETRY_BUDGET = 10


@dataclass(frozen=True)
class VarietySpec:
    """family in {rnc, veronese, scroll, catalecticant_secant} with params:

    rnc: (d,); veronese: (n, d); scroll: (a_1, ..., a_k);
    catalecticant_secant: (n, l) for S^l of the degree-n rational normal curve.
    """

    family: str
    params: tuple[int, ...]

    def ambient_dim(self) -> int:
        if self.family == "rnc":
            return self.params[0]
        if self.family == "veronese":
            n, d = self.params
            from math import comb
            return comb(n + d, d) - 1
        if self.family == "scroll":
            return sum(self.params) + len(self.params) - 1
        if self.family == "catalecticant_secant":
            return self.params[0]
        raise ValueError(f"unknown family {self.family!r}")

    def ring(self, field: Field = DEFAULT_FIELD, order: str = "deglex") -> RingDescriptor:
        n = self.ambient_dim()
        return RingDescriptor(tuple(f"x{i}" for i in range(n + 1)), field, order)

    def describe(self) -> str:
        return f"{self.family}({','.join(map(str, self.params))})"


def _minor(ring: RingDescriptor, matrix: list[list[int]], rows, cols) -> Polynomial:
    """Determinant of a submatrix of single-variable entries (by index)."""
    from itertools import permutations

    n = ring.nvars
    terms: dict = {}
    k = len(rows)
    for perm in permutations(range(k)):
        sign = 1
        seen = list(perm)
        for a in range(k):
            for b in range(a + 1, k):
                if seen[a] > seen[b]:
                    sign = -sign
        e = [0] * n
        for r in range(k):
            e[matrix[rows[r]][cols[perm[r]]]] += 1
        e = tuple(e)
        c = ring.field.add(terms.get(e, ring.field.zero), ring.field.normalize(sign))
        if c == ring.field.zero:
            terms.pop(e, None)
        else:
            terms[e] = c
    return Polynomial(ring, terms)


def _scroll_matrix(params: tuple[int, ...]) -> list[list[int]]:
    top, bot = [], []
    base = 0
    for a in params:
        for j in range(a):
            top.append(base + j)
            bot.append(base + j + 1)
        base += a + 1
    return [top, bot]


def build_ideal(spec: VarietySpec, field: Field = DEFAULT_FIELD,
                order: str = "deglex") -> Ideal:
    ring = spec.ring(field, order)
    if spec.family == "rnc":
        d = spec.params[0]
        mat = [[i for i in range(d)], [i + 1 for i in range(d)]]
        gens = [_minor(ring, mat, (0, 1), cols)
                for cols in combinations(range(d), 2)]
    elif spec.family == "scroll":
        mat = _scroll_matrix(spec.params)
        w = len(mat[0])
        gens = [_minor(ring, mat, (0, 1), cols)
                for cols in combinations(range(w), 2)]
    elif spec.family == "catalecticant_secant":
        n, ell = spec.params
        rows_n, cols_n = ell + 1, n - ell + 1
        if rows_n > cols_n:
            raise ValueError("catalecticant shape needs l+1 <= n-l+1")
        mat = [[r + c for c in range(cols_n)] for r in range(rows_n)]
        gens = [_minor(ring, mat, tuple(range(rows_n)), cols)
                for cols in combinations(range(cols_n), rows_n)]
    elif spec.family == "veronese":
        n, d = spec.params
        mons = RingDescriptor(tuple(f"t{i}" for i in range(n + 1))).monomials_of_degree(d)
        index = {m: i for i, m in enumerate(mons)}
        gens = []
        seen_sums: dict[tuple, tuple] = {}
        nv = ring.nvars
        for a in range(len(mons)):
            for b in range(a, len(mons)):
                s = tuple(x + y for x, y in zip(mons[a], mons[b]))
                if s not in seen_sums:
                    seen_sums[s] = (a, b)
                    continue
                c, dd = seen_sums[s]
                e1 = [0] * nv
                e1[a] += 1
                e1[b] += 1
                e2 = [0] * nv
                e2[c] += 1
                e2[dd] += 1
                gens.append(Polynomial.from_terms(ring, [(tuple(e1), 1), (tuple(e2), -1)]))
    else:
        raise ValueError(f"unknown family {spec.family!r}")
    ideal = Ideal(ring, [g for g in gens if not g.is_zero()], saturated="yes")
    ideal.meta["spec"] = spec
    return ideal


# ---------------------------------------------------------------------------
# exact points on X
# ---------------------------------------------------------------------------

def _moment_vector(field: Field, d: int, s, t) -> list:
    out = []
    for k in range(d + 1):
        v = field.one
        for _ in range(d - k):
            v = field.mul(v, s)
        for _ in range(k):
            v = field.mul(v, t)
        out.append(v)
    return out


def _rand_scalar(field: Field, rng: random.Random, nonzero: bool = False):
    if isinstance(field, PrimeField):
        lo = 1 if nonzero else 0
        return rng.randrange(lo, field.p)
    from fractions import Fraction
    lo = 1 if nonzero else 0
    return Fraction(rng.randrange(lo, 97))


def sample_point(spec: VarietySpec, rng: random.Random,
                 field: Field = DEFAULT_FIELD) -> list:
    """A random exact point on X (all ideal generators vanish on it)."""
    if spec.family == "rnc":
        s, t = _rand_scalar(field, rng, True), _rand_scalar(field, rng)
        return _moment_vector(field, spec.params[0], s, t)
    if spec.family == "scroll":
        s, t = _rand_scalar(field, rng, True), _rand_scalar(field, rng)
        out = []
        for a in spec.params:
            u = _rand_scalar(field, rng, True)
            out.extend(field.mul(u, v) for v in _moment_vector(field, a, s, t))
        return out
    if spec.family == "catalecticant_secant":
        n, ell = spec.params
        total = [field.zero] * (n + 1)
        for _ in range(ell):
            s, t = _rand_scalar(field, rng, True), _rand_scalar(field, rng)
            c = _rand_scalar(field, rng, True)
            for i, v in enumerate(_moment_vector(field, n, s, t)):
                total[i] = field.add(total[i], field.mul(c, v))
        return total
    if spec.family == "veronese":
        n, d = spec.params
        y = [_rand_scalar(field, rng, True) for _ in range(n + 1)]
        mons = RingDescriptor(tuple(f"t{i}" for i in range(n + 1))).monomials_of_degree(d)
        out = []
        for m in mons:
            v = field.one
            for yi, e in zip(y, m):
                for _ in range(e):
                    v = field.mul(v, yi)
            out.append(v)
        return out
    raise ValueError(f"unknown family {spec.family!r}")


def on_variety(ideal: Ideal, point: list) -> bool:
    f = ideal.ring.field
    pt = [f.normalize(c) for c in point]
    return all(g.evaluate(pt) == f.zero for g in ideal.generators)


# ---------------------------------------------------------------------------
# named spans for scroll strata
# ---------------------------------------------------------------------------

def _block_bounds(params: tuple[int, ...]) -> list[tuple[int, int]]:
    out = []
    base = 0
    for a in params:
        out.append((base, base + a))
        base += a + 1
    return out


def span_points(spec: VarietySpec, names: list[str], rng: random.Random,
                field: Field = DEFAULT_FIELD) -> list[list]:
    """Spanning points of named scroll subvarieties.

    'l<i>' is the i-th ruling line (its block must have a_i = 1),
    'F' a fiber of the scroll map over a random base point,
    'sub:<i>,<j>,...' the sub-scroll on the listed blocks.
    """
    if spec.family != "scroll":
        raise ValueError("named spans are defined for scrolls")
    bounds = _block_bounds(spec.params)
    n1 = spec.ambient_dim() + 1
    pts: list[list] = []

    def unit(i):
        v = [field.zero] * n1
        v[i] = field.one
        return v

    for name in names:
        if name.startswith("l"):
            bi = int(name[1:]) - 1
            if spec.params[bi] != 1:
                raise ValueError(f"block {bi+1} is not a line")
            lo, hi = bounds[bi]
            pts.extend([unit(lo), unit(hi)])
        elif name == "F":
            s, t = _rand_scalar(field, rng, True), _rand_scalar(field, rng, True)
            for (lo, _hi), a in zip(bounds, spec.params):
                v = [field.zero] * n1
                for k, c in enumerate(_moment_vector(field, a, s, t)):
                    v[lo + k] = c
                pts.append(v)
        elif name.startswith("sub:"):
            for bi in (int(x) - 1 for x in name[4:].split(",")):
                lo, hi = bounds[bi]
                pts.extend(unit(i) for i in range(lo, hi + 1))
        else:
            raise ValueError(f"unknown named subvariety {name!r}")
    return pts


def random_center(spec: VarietySpec, stratum: str, seed: int = 0,
                  field: Field = DEFAULT_FIELD, count: int = 1,
                  span: list[str] | None = None,
                  ideal: Ideal | None = None) -> list[list]:
    """Seeded center points for a projection stratum.

    GENERIC_OUTER: uniform points rejected while on X; SECANT: a point on
    the line through two sampled X-points, rejected while on X; SPAN_OF: a
    random point in the span of the named subvarieties (or given points);
    INNER: a sampled point of X.  Redraws up to the 10-attempt budget.
    """
    rng = random.Random(seed)
    ideal = ideal if ideal is not None else build_ideal(spec, field)

    def draw_generic() -> list:
        return [_rand_scalar(field, rng) for _ in range(spec.ambient_dim() + 1)]

    def combine(points: list[list]) -> list:
        out = [field.zero] * (spec.ambient_dim() + 1)
        for p in points:
            c = _rand_scalar(field, rng, True)
            for i, v in enumerate(p):
                out[i] = field.add(out[i], field.mul(c, v))
        return out

    centers: list[list] = []
    for _ in range(count):
        for _attempt in range(RETRY_BUDGET):
            if stratum == "GENERIC_OUTER":
                q = draw_generic()
                ok = any(v != field.zero for v in q) and not on_variety(ideal, q)
            elif stratum == "SECANT":
                q = combine([sample_point(spec, rng, field),
                             sample_point(spec, rng, field)])
                ok = not on_variety(ideal, q)
            elif stratum == "SPAN_OF":
                base = span_points(spec, span or [], rng, field)
                q = combine(base)
                ok = not on_variety(ideal, q)
            elif stratum == "INNER":
                q = sample_point(spec, rng, field)
                ok = True
            else:
                raise ValueError(f"unknown stratum {stratum!r}")
            if ok:
                centers.append(q)
                break
        else:
            raise GenericityError(
                f"stratum {stratum} rejected {RETRY_BUDGET} draws (seed {seed})")
    return centers
