"""Partial elimination ideals K_i(I), their filtration, multiplicity loci,
and the structural checks on them.

The production rule reads a reduced DEGLEX Groebner basis with the first
variable greatest: an element f with leading x_0-power d0(f) = e <= i
contributes its x_0^e-leading coefficient (a polynomial in the remaining
variables) to K_i.  The rule is cross-checked against the literal
degreewise definition: K_i's degree-(m-i) piece is the x_0^i-coefficient
image of {f in I_m : d0(f) <= i}, extracted by stratified linear algebra.
That oracle agreement is the module's central correctness property and is
exercised in CI; the rule is never trusted silently.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

from .degreewise import DegreewiseSpans
from .errors import HypothesisError
from .groebner import Ideal, saturate_irrelevant
from .koszul import betti_numbers
from .polyring import OrderError, Polynomial, RingDescriptor
from .syzygy import PASS, check_ndp


GROEBNER_RULE = "GROEBNER_RULE"
DEGREEWISE_ORACLE = "DEGREEWISE_ORACLE"


def _require_deglex_x0(ideal: Ideal) -> None:
    if ideal.ring.order != "deglex":
        raise OrderError("partial elimination ideals need DEGLEX with the "
                         "first variable greatest")


def partial_elim_ideal(ideal: Ideal, level: int, cap: int | None = None) -> Ideal:
    """K_level(I) from a reduced DEGLEX Groebner basis (Groebner rule).

    Writes each basis element f with d0(f) <= level as x_0^{d0} fbar + lower
    x_0-power terms and collects the fbar.  A unit K_i (some pure x_0 power
    in the basis) comes back as the explicitly flagged unit ideal.
    """
    _require_deglex_x0(ideal)
    basis = ideal.groebner_basis("deglex", cap)
    sub = ideal.ring.subring(1)
    gens: list[Polynomial] = []
    for g in basis:
        e = g.leading_exponents()[0]
        if e > level:
            continue
        terms = {exps[1:]: c for exps, c in g.terms.items() if exps[0] == e}
        gens.append(Polynomial(sub, terms))
    out = Ideal(sub, gens)
    out.meta["provenance"] = GROEBNER_RULE
    out.meta["level"] = level
    out.meta["cap"] = cap if not ideal.gb_complete("deglex") else None
    return out


def pei_oracle(ideal: Ideal, level: int, max_degree: int) -> Ideal:
    """K_level(I) assembled degreewise from the literal definition.

    For every m <= max_degree the subspace {f in I_m : d0(f) <= level} is
    cut out by stratified row reduction of generator spans; the x_0^level
    coefficient images of its triangular basis generate the answer in
    degrees <= max_degree - level.
    """
    _require_deglex_x0(ideal)
    spans = DegreewiseSpans(list(ideal.generators), ideal.ring)
    sub = ideal.ring.subring(1)
    gens: list[Polynomial] = []
    for m in range(max_degree + 1):
        gens.extend(spans.k_level_polynomials(m, level))
    out = Ideal(sub, gens)
    out.meta["provenance"] = DEGREEWISE_ORACLE
    out.meta["level"] = level
    out.meta["max_degree"] = max_degree
    return out


def pei_agree(ideal: Ideal, level: int, max_degree: int) -> bool:
    """Rule vs oracle, degreewise up to max_degree - level."""
    rule = partial_elim_ideal(ideal, level, cap=max_degree)
    oracle = pei_oracle(ideal, level, max_degree)
    top = max_degree - level
    for m in range(top + 1):
        if rule.hilbert_function(m) != oracle.hilbert_function(m):
            return False
    # containment one way (same dimensions force equality)
    for g in oracle.generators:
        if g.degree() <= top and not rule.contains(g):
            return False
    return True


@dataclass
class PEIFiltration:
    """Chain K_0(I) <= K_1(I) <= ... with provenance per level."""

    base: Ideal
    levels: list[tuple[int, Ideal]]
    provenance: list[str]

    def level(self, i: int) -> Ideal:
        for k, ideal in self.levels:
            if k == i:
                return ideal
        raise KeyError(i)

    def check_filtration(self) -> bool:
        """K_i <= K_{i+1} via generator membership."""
        for (k1, a), (k2, b) in zip(self.levels, self.levels[1:]):
            for g in a.generators:
                if not b.contains(g):
                    return False
        return True


def pei_filtration(ideal: Ideal, top_level: int, cap: int | None = None,
                   oracle_degree: int | None = None) -> PEIFiltration:
    levels = []
    prov = []
    for i in range(top_level + 1):
        if oracle_degree is not None:
            levels.append((i, pei_oracle(ideal, i, oracle_degree)))
            prov.append(DEGREEWISE_ORACLE)
        else:
            levels.append((i, partial_elim_ideal(ideal, i, cap)))
            prov.append(GROEBNER_RULE)
    return PEIFiltration(ideal, levels, prov)


@dataclass
class PEISequenceReport:
    level: int
    residuals: dict[int, int]

    @property
    def passed(self) -> bool:
        return all(v == 0 for v in self.residuals.values())


def verify_pei_sequence(ideal: Ideal, level: int, max_degree: int) -> PEISequenceReport:
    """Degreewise dimension check of the filtration's exact sequence:

    dim tilde-K_i(I)_m - dim tilde-K_{i-1}(I)_m = dim K_i(I)_{m-i}.

    The tilde dimensions come from the stratified oracle, the K_i dimension
    from the Groebner rule, so zero residuals bind the two routes together.
    """
    if level < 1:
        raise ValueError("the sequence starts at level 1")
    _require_deglex_x0(ideal)
    spans = DegreewiseSpans(list(ideal.generators), ideal.ring)
    k_i = partial_elim_ideal(ideal, level, cap=max_degree)
    residuals = {}
    for m in range(max_degree + 1):
        lhs = spans.tilde_k_dim(m, level) - spans.tilde_k_dim(m, level - 1)
        if m - level < 0:
            rhs = 0
        elif k_i.is_unit():
            rhs = len(k_i.ring.monomials_of_degree(m - level))
        else:
            rhs = len(k_i.ring.monomials_of_degree(m - level)) - \
                k_i.hilbert_function(m - level)
        residuals[m] = lhs - rhs
    return PEISequenceReport(level, residuals)


def multiple_locus(ideal: Ideal, level: int, seed: int = 0) -> Ideal:
    """Saturated K_level(I): cuts out Z_level set-theoretically.

    Saturation only; no radical is taken, so downstream claims are about
    V(K_level) as a set.
    """
    k = partial_elim_ideal(ideal, level)
    if k.is_unit() or k.is_zero_ideal():
        k.meta["set_theoretic_only"] = True
        return k
    out = saturate_irrelevant(k, seed=seed)
    out.meta.update(k.meta)
    out.meta["set_theoretic_only"] = True
    return out


@dataclass
class Prop38Report:
    d: int
    max_gen_degree_k_dminus1: int | None
    max_gen_degree_k_dminus2: int | None
    linear_bound_ok: bool
    cubic_bound_ok: bool
    details: dict = dataclass_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.linear_bound_ok and self.cubic_bound_ok


def _max_min_generator_degree(ideal: Ideal, probe: int) -> int | None:
    """Largest degree of a minimal generator, probed up to ``probe``."""
    if ideal.is_zero_ideal():
        return None
    if ideal.is_unit():
        return 0
    spans = DegreewiseSpans(list(ideal.generators), ideal.ring)
    degs = spans.minimal_generator_degrees(probe)
    return max(degs) if degs else None


def check_prop38(ideal: Ideal, d: int, max_i: int = 2, probe: int | None = None,
                 seed: int = 0) -> Prop38Report:
    """K_{d-1} generated by at most linear forms, K_{d-2} by at most cubics,
    for an ideal satisfying N_{d,2} (hypothesis verified first).
    """
    table = betti_numbers(ideal, 0, max_i=2, max_d=d + 3, seed=seed)
    ndp = check_ndp(table, d, 2)
    if ndp.status != PASS:
        raise HypothesisError(f"N_{d},2 hypothesis {ndp.status}"
                              f" (witness {ndp.witness})")
    probe = probe if probe is not None else d + 4
    k1 = multiple_locus(ideal, d - 1, seed=seed)
    k2 = multiple_locus(ideal, d - 2, seed=seed) if d >= 2 else None
    m1 = _max_min_generator_degree(k1, probe)
    m2 = _max_min_generator_degree(k2, probe) if k2 is not None else None
    return Prop38Report(
        d, m1, m2,
        linear_bound_ok=(m1 is None or m1 <= 1),
        cubic_bound_ok=(m2 is None or m2 <= 3),
        details={"k_dminus1_unit": k1.is_unit(),
                 "k_dminus2_unit": k2.is_unit() if k2 is not None else None})
