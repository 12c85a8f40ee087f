"""Linear projections: standardized centers, image ideals, fibers, linear
sections, secant loci, and the module-level projection identities.

A center is a span of points.  Standardization extends the spanning points
to a basis by greedy pivoting and rewrites the ideal so the center becomes
the coordinate subspace where the last n+1-t coordinates vanish; from then
on everything (elimination, partial elimination ideals, fibers) happens in
the standard position.  Centers are points rather than linear forms because
the tangent-type strata arrive naturally as spans.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dataclass_field

from .degreewise import DegreewiseSpans
from .errors import DimensionError, HypothesisError
from .fields import Field, PrimeField
from .groebner import (
    Ideal,
    change_coordinates,
    eliminate,
    saturate_irrelevant,
)
from .koszul import BettiTable, betti_numbers
from .linalg import ExactMatrix, matrix_inverse, rref
from .partial_elim import partial_elim_ideal
from .polyring import Polynomial, RingDescriptor, substitute_linear
from .syzygy import PASS, check_ndp, pd_depth, regularity

DISJOINT = "DISJOINT"
MEETS_X = "MEETS_X"
UNKNOWN = "UNKNOWN"


@dataclass
class ProjectionSetup:
    """A standardized projection: center, change matrix, rewritten ideal."""

    source: Ideal
    center: list[list]
    matrix: ExactMatrix           # columns: center points, then greedy units
    moved: Ideal                  # source ideal in the standardized coordinates
    t: int
    disjointness: str

    @property
    def ring(self) -> RingDescriptor:
        return self.source.ring

    def subring(self) -> RingDescriptor:
        return self.ring.subring(self.t)


def _extend_to_basis(points: list[list], field: Field) -> list[list]:
    """Columns of an invertible matrix: the points, then greedy unit vectors."""
    n = len(points[0])
    cols = [list(map(field.normalize, p)) for p in points]
    _, piv = rref(ExactMatrix.from_dense(cols, field))
    if len(piv) != len(points):
        raise ValueError("center points are linearly dependent")
    pivot_rows = set(piv)
    for j in range(n):
        if j not in pivot_rows:
            unit = [field.zero] * n
            unit[j] = field.one
            cols.append(unit)
    return cols


def make_projection(ideal: Ideal, center: list[list]) -> ProjectionSetup:
    """Standardize the center to the first t coordinate points and rewrite I.

    Disjointness of the center from X is decided exactly: the restriction of
    the moved ideal to the center's coordinate subspace cuts out a cone
    whose Krull dimension is 0 exactly when the intersection is empty (the
    saturation of I' + (x_t..x_n) is then the unit ideal).
    """
    ring = ideal.ring
    field = ring.field
    n = ring.nvars
    if any(len(p) != n for p in center):
        raise ValueError("center points must have one coordinate per variable")
    cols = _extend_to_basis(center, field)
    t = len(center)
    bmat = ExactMatrix.from_dense([[cols[j][i] for j in range(n)]
                                   for i in range(n)], field)
    rows = [[bmat.entry(i, j).value for j in range(n)] for i in range(n)]
    moved = change_coordinates(ideal, rows)
    moved.saturated = ideal.saturated

    # restrict to the center's subspace: x_t..x_n -> 0
    sub = RingDescriptor(ring.variables[:t], field, ring.order)
    restricted = []
    for g in moved.generators:
        terms = {e[:t]: c for e, c in g.terms.items()
                 if all(e[k] == 0 for k in range(t, n))}
        f = Polynomial(sub, terms)
        if not f.is_zero():
            restricted.append(f)
    if not restricted:
        status = MEETS_X
    else:
        j = Ideal(sub, restricted)
        status = DISJOINT if (j.is_unit() or j.krull_dim() == 0) else MEETS_X
    return ProjectionSetup(ideal, [list(map(field.normalize, p)) for p in center],
                           bmat, moved, t, status)


def project_ideal(setup: ProjectionSetup, saturate: bool = True,
                  seed: int = 0) -> Ideal:
    """The image ideal: eliminate the center coordinates, then saturate.

    Inner projections are allowed (elimination computes the closure of the
    image).  Generator counts before and after saturation are recorded in
    the result's meta.
    """
    raw = eliminate(setup.moved, setup.t)
    pre_counts = _generator_degree_counts(raw)
    if not saturate or raw.is_zero_ideal():
        raw.meta["generators_before_saturation"] = pre_counts
        return raw
    sat = saturate_irrelevant(raw, seed=seed)
    mins = minimal_generators(sat)
    out = Ideal(sat.ring, mins, saturated="yes")
    out.meta["generators_before_saturation"] = pre_counts
    out.meta["generators_after_saturation"] = _generator_degree_counts(out)
    return out


def _generator_degree_counts(ideal: Ideal) -> dict[int, int]:
    out: dict[int, int] = {}
    for g in ideal.generators:
        out[g.degree()] = out.get(g.degree(), 0) + 1
    return out


def minimal_generators(ideal: Ideal, probe: int | None = None) -> list[Polynomial]:
    """A minimal generating set: new generators at degree m complete
    (R_1 * I_{m-1})_m to I_m, picked among the given generators first and
    the Groebner basis elements second.
    """
    if ideal.is_zero_ideal():
        return []
    if ideal.is_unit():
        return [ideal.ring.one()]
    basis = ideal.groebner_basis()
    top = probe if probe is not None else max(g.degree() for g in basis)
    spans = DegreewiseSpans(list(ideal.generators), ideal.ring)
    out: list[Polynomial] = []
    for m in range(top + 1):
        candidates = [g for g in ideal.generators if g.degree() == m]
        candidates += [g for g in basis if g.degree() == m]
        out.extend(spans.select_new_generators(m, candidates))
    return out


# ---------------------------------------------------------------------------
# finite schemes: fibers and linear sections
# ---------------------------------------------------------------------------

@dataclass
class FiniteSchemeReport:
    ideal: Ideal                  # saturated ideal inside the span's ring
    length: int
    regularity: int               # scheme convention: reg of the ideal sheaf
    reg_certified: bool
    bound: int | None = None      # C(t+d-1, t) when the linearity level is known
    span_dim: int = 0
    details: dict = dataclass_field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return self.length == 0


def _restrict_to_span(ideal: Ideal, points: list[list]) -> Ideal:
    """Pull I back along P^k -> P^n, (s_0..s_k) -> sum s_j * p_j."""
    ring = ideal.ring
    field = ring.field
    k = len(points)
    sub = RingDescriptor(tuple(f"s{i}" for i in range(k)), field, ring.order)
    forms = []
    for i in range(ring.nvars):
        terms = {}
        for j, p in enumerate(points):
            c = field.normalize(p[i])
            if c != field.zero:
                e = [0] * k
                e[j] = 1
                terms[tuple(e)] = c
        forms.append(Polynomial(sub, terms))
    gens = [substitute_linear(g, forms, sub) for g in ideal.generators]
    return Ideal(sub, [g for g in gens if not g.is_zero()])


def _finite_scheme_report(section: Ideal, bound: int | None,
                          seed: int = 0) -> FiniteSchemeReport:
    k = section.ring.nvars - 1
    if section.is_unit() or (not section.is_zero_ideal()
                             and section.krull_dim() == 0):
        sat = saturate_irrelevant(section, seed=seed) if not section.is_unit() \
            else section
        return FiniteSchemeReport(sat, 0, 0, True, bound, k,
                                  {"empty": True})
    if section.is_zero_ideal() or section.krull_dim() != 1:
        raise DimensionError("intersection is not zero-dimensional")
    sat = saturate_irrelevant(section, seed=seed)
    if sat.is_unit():
        return FiniteSchemeReport(sat, 0, 0, True, bound, k, {"empty": True})
    length = sat.degree_of()
    table = betti_numbers(sat, 0, max_i=k + 1, max_d=length + k + 2,
                          reduce=True, seed=seed)
    reg_mod, certified = regularity(table)
    return FiniteSchemeReport(sat, length, reg_mod + 1, certified, bound, k, {})


def fiber_report(setup: ProjectionSetup, y: list, d_level: int | None = None,
                 seed: int = 0) -> FiniteSchemeReport:
    """The fiber over y in P^{n-t}: X cut with the span of the center and a
    lift of y, presented inside that span.

    The report carries the fiber-length bound C(t+d-1, t) when the
    linearity level d of the source is supplied.
    """
    ring = setup.ring
    field = ring.field
    n = ring.nvars
    t = setup.t
    if len(y) != n - t:
        raise ValueError("image point has one coordinate per subring variable")
    lift = [field.zero] * t + [field.normalize(c) for c in y]
    span = [[field.one if i == j else field.zero for i in range(n)]
            for j in range(t)] + [lift]
    section = _restrict_to_span(setup.moved, span)
    from math import comb
    bound = comb(t + d_level - 1, t) if d_level is not None else None
    return _finite_scheme_report(section, bound, seed)


def linear_section(ideal: Ideal, span: list[list], d_level: int | None = None,
                   seed: int = 0) -> FiniteSchemeReport:
    """X cut with the span of the given points, inside that span."""
    field = ideal.ring.field
    pts = [[field.normalize(c) for c in p] for p in span]
    _, piv = rref(ExactMatrix.from_dense(pts, field))
    if len(piv) != len(pts):
        raise ValueError("spanning points are linearly dependent")
    section = _restrict_to_span(ideal, pts)
    return _finite_scheme_report(section, None if d_level is None else d_level,
                                 seed)


# ---------------------------------------------------------------------------
# secant loci and the one-point projection identities
# ---------------------------------------------------------------------------

@dataclass
class SecantLocusReport:
    setup: ProjectionSetup
    k1: Ideal                     # first partial elimination ideal, saturated
    sigma: Ideal                  # ideal of the secant locus inside X
    s: int                        # dim of Z_1 (projective); -1 when empty
    k1_linear: bool
    length: int | None            # of Sigma_q when s = 0
    details: dict = dataclass_field(default_factory=dict)


def secant_locus(ideal: Ideal, q: list, p_check: int = 2,
                 seed: int = 0) -> SecantLocusReport:
    """Secant locus of the projection from q (not on X), for N_{2,p} inputs.

    Computes K_1 after standardizing q, verifies its generators are linear,
    saturates, and returns the cone over Z_1 intersected with X together
    with s = dim Z_1 (s = -1 when the locus is empty, matching the moving-
    center convention) and the length-2 check when s = 0.
    """
    field = ideal.ring.field
    if all(g.evaluate([field.normalize(c) for c in q]) == field.zero
           for g in ideal.generators):
        raise HypothesisError("center lies on X (inner projection)")
    table = betti_numbers(ideal, 0, max_i=p_check, max_d=2 + p_check + 1, seed=seed)
    ndp = check_ndp(table, 2, p_check)
    if ndp.status != PASS:
        raise HypothesisError(f"N_2,{p_check} must hold ({ndp.status})")
    setup = make_projection(ideal, [q])
    k1 = partial_elim_ideal(setup.moved, 1)
    if k1.is_unit():
        sigma = Ideal(setup.moved.ring, [setup.moved.ring.one()])
        return SecantLocusReport(setup, k1, sigma, -1, True, None,
                                 {"empty": True})
    sat_k1 = saturate_irrelevant(k1, seed=seed)
    gen_degs = [g.degree() for g in minimal_generators(sat_k1)]
    k1_linear = all(d <= 1 for d in gen_degs)
    s = sat_k1.krull_dim() - 1
    lift_ring = setup.moved.ring
    lifted = [Polynomial(lift_ring, {(0,) + e: c for e, c in g.terms.items()})
              for g in sat_k1.generators]
    sigma = saturate_irrelevant(setup.moved.plus(lifted), seed=seed)
    length = sigma.degree_of() if s == 0 else None
    return SecantLocusReport(setup, sat_k1, sigma, s, k1_linear, length,
                             {"k1_generator_degrees": gen_degs})


@dataclass
class Prop41Report:
    s: int
    quadrics_source: int
    quadrics_image: int
    quadrics_expected: int
    quadrics_ok: bool
    depth_source: int
    depth_image: int
    depth_expected: int
    depth_ok: bool


def check_prop41(source: Ideal, setup: ProjectionSetup, image: Ideal,
                 s: int, seed: int = 0) -> Prop41Report:
    """Quadric counts and depth of a one-point outer projection.

    dim (I_Y)_2 = dim (I_X)_2 - n + s, and depth(S/I_Y) =
    min(depth(R/I_X), s+2); the cohomological hypothesis behind the depth
    statement is not checkable here and the caller carries that caveat.
    """
    n = source.ring.nvars - 1
    from math import comb
    qs = comb(n + 2, 2) - source.hilbert_function(2)
    qi = comb(n + 1, 2) - image.hilbert_function(2)
    expected = qs - n + s
    bx = betti_numbers(source, 0, max_i=source.ring.nvars,
                       max_d=source.ring.nvars + 3, seed=seed)
    by = betti_numbers(image, 0, max_i=image.ring.nvars,
                       max_d=image.ring.nvars + 4, seed=seed)
    dx = pd_depth(bx).depth
    dy = pd_depth(by).depth
    want = min(dx, s + 2)
    return Prop41Report(s, qs, qi, expected, qi == expected,
                        dx, dy, want, dy == want)


@dataclass
class HFSequenceReport:
    residuals: dict[int, int]

    @property
    def passed(self) -> bool:
        return all(v == 0 for v in self.residuals.values())


def check_thm39_hf(source: Ideal, image: Ideal, z1: Ideal,
                   cap: int = 8) -> HFSequenceReport:
    """Hilbert functions along 0 -> S/I_Y -> R/I_X -> (S/I_Z1)(-1) -> 0."""
    residuals = {}
    for m in range(cap + 1):
        lhs = source.hilbert_function(m)
        rhs = image.hilbert_function(m)
        if m >= 1:
            rhs += z1.hilbert_function(m - 1)
        residuals[m] = lhs - rhs
    return HFSequenceReport(residuals)


# ---------------------------------------------------------------------------
# center file format
# ---------------------------------------------------------------------------

def load_center(text: str, field: Field) -> list[list]:
    """Lines ``point <c_0> ... <c_n>``; '#' comments."""
    pts = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head != "point":
            raise ValueError(f"line {lineno}: expected 'point', got {head!r}")
        vals = []
        for tok in rest.split():
            if "/" in tok and not isinstance(field, PrimeField):
                from fractions import Fraction
                vals.append(field.normalize(Fraction(tok)))
            else:
                vals.append(field.normalize(int(tok)))
        pts.append(vals)
    if not pts:
        raise ValueError("no points in center file")
    return pts


def save_center(points: list[list]) -> str:
    return "".join("point " + " ".join(str(c) for c in p) + "\n" for p in points)
