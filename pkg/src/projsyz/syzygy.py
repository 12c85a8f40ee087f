"""Betti-table interpretation: property N_{d,p}, regularity, projective
dimension and depth, and the identities tying a module's tables over the
ambient ring and over coordinate subrings.

Degree bookkeeping: tables store the absolute internal degree d; the
slope-style value beta_{i,j} of the literature lives in internal degree
i+j.  All conversions go through slope_to_internal/internal_to_slope,
nothing else converts by hand.

Checks distinguish three outcomes: pass, fail (with a witness), and
inconclusive when the certified window does not cover the tested region.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from math import comb

from .errors import HypothesisError
from .koszul import BettiTable

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"


def slope_to_internal(i: int, j: int) -> int:
    """beta_{i,j} in slope convention sits in internal degree i+j."""
    return i + j


def internal_to_slope(i: int, d: int) -> int:
    return d - i


# ---------------------------------------------------------------------------
# property N_{d,p}
# ---------------------------------------------------------------------------

@dataclass
class NdpReport:
    d: int
    p: int
    status: str
    witness: tuple[int, int] | None = None   # (i, internal degree) of a violation
    checked_max_d: int = 0

    @property
    def passed(self) -> bool:
        return self.status == PASS


def check_ndp(b: BettiTable, d: int, p: int) -> NdpReport:
    """Tor_i concentrated in internal degree < d+i for all i <= p.

    Inconclusive (not fail) when the tested region leaves the certified
    window: the table never claims vanishing beyond what it computed.  A
    certified slope bound <= d-1 covers the whole region beyond the window.
    """
    slope_covered = b.slope_bound is not None and b.slope_bound <= d - 1
    if b.max_i < p or (b.certified_max_d < d + p and not slope_covered):
        return NdpReport(d, p, INCONCLUSIVE, None, b.certified_max_d)
    for i in range(p + 1):
        for m in range(d + i, b.certified_max_d + 1):
            if b.beta(i, m):
                return NdpReport(d, p, FAIL, (i, m), b.certified_max_d)
    return NdpReport(d, p, PASS, None, b.certified_max_d)


# ---------------------------------------------------------------------------
# regularity, projective dimension, depth
# ---------------------------------------------------------------------------

def regularity(b: BettiTable) -> tuple[int, bool]:
    """max{d - i : beta_{i,d} != 0} over certified entries.

    Certified when the full row one above the reported value lies inside
    the certified window and vanishes.
    """
    value = 0
    for (i, d), v in b.entries.items():
        if v and b.is_certified(i, d):
            value = max(value, d - i)
    if b.complete():
        return value, True
    certified = True
    for i in range(b.max_i + 1):
        d = i + value + 1
        if not b.is_certified(i, d) or b.beta(i, d):
            certified = False
            break
    return value, certified


@dataclass
class PdDepthReport:
    pd: int
    depth: int
    exact: bool


def pd_depth(b: BettiTable, nvars: int | None = None) -> PdDepthReport:
    """Projective dimension and depth via Auslander-Buchsbaum.

    nvars defaults to the table's ring variable count.  Exact when a
    certified zero column sits above the last nonzero one: either inside
    the window, or because the column bound (Hilbert syzygy over the
    reduced ring) already caps pd.  Otherwise the result is only a bound
    (pd >= value, depth <= value).
    """
    n = b.nvars if nvars is None else nvars
    pd = max([i for (i, _d), v in b.entries.items() if v], default=0)
    capped = b.column_bound is not None and pd >= b.column_bound
    window_ok = pd < b.max_i and (b.complete() or b.certified_max_d >= pd + 1)
    exact = window_ok or pd == n or capped
    return PdDepthReport(pd, n - pd, exact)


# ---------------------------------------------------------------------------
# Corollary-style identities for subring tables
# ---------------------------------------------------------------------------

@dataclass
class IdentityReport:
    name: str
    status: str
    residuals: list[tuple[int, int]] = dataclass_field(default_factory=list)
    details: dict = dataclass_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS


def _is_d_linear_to(b: BettiTable, d: int, p: int) -> bool:
    """R/I has only beta_{i, i+d-1} in columns 1..p (d-linear ideal)."""
    for (i, dd), v in b.entries.items():
        if v and 1 <= i <= p and dd != i + (d - 1):
            return False
    return True


def check_cor23(b_r: BettiTable, b_s1: BettiTable, d: int, p: int) -> IdentityReport:
    """Subring Betti numbers of a d-linear-to-step-p module over S_1.

    (a) the only generator degrees over S_1 are 0..d-1, one dimension
    each, and column i sits in internal degree i+d-1 for 1 <= i <= p-1;
    (b) beta^{S_1}_{i,d-1} = (-1)^i + sum_{1<=j<=i} (-1)^{j+i} beta^R_{j,d-1}.
    """
    if p < 2:
        raise HypothesisError("corollary needs p >= 2")
    if not _is_d_linear_to(b_r, d, p):
        raise HypothesisError(f"R-table is not {d}-linear through step {p}")
    if b_s1.max_i < p - 1 or b_s1.certified_max_d < (p - 1) + (d - 1):
        return IdentityReport("cor23", INCONCLUSIVE)
    shape_ok = True
    for j in range(d):
        if b_s1.beta(0, j) != 1:
            shape_ok = False
    for j in range(d, b_s1.certified_max_d + 1):
        if b_s1.beta(0, j):
            shape_ok = False
    for i in range(1, p):
        for dd in range(i, b_s1.certified_max_d + 1):
            if b_s1.beta(i, dd) and dd != slope_to_internal(i, d - 1):
                shape_ok = False
    residuals = []
    for i in range(1, p):
        expected = (-1) ** i + sum((-1) ** (j + i) * b_r.beta_slope(j, d - 1)
                                   for j in range(1, i + 1))
        actual = b_s1.beta_slope(i, d - 1)
        residuals.append((i, actual - expected))
    status = PASS if shape_ok and all(r == 0 for _, r in residuals) else FAIL
    return IdentityReport("cor23", status, residuals, {"shape_ok": shape_ok})


def check_thm26_shape(b_st: BettiTable, d: int, p: int, t: int) -> IdentityReport:
    """Simplest-syzygy shape of R/I_{>=d} over S_t up to step p-t.

    Tor_0 concentrated in degrees 0..d-1 with dimension C(i+t-1, t-1);
    Tor_alpha concentrated in internal degree alpha+d-1 for alpha <= p-t.
    """
    if not 1 <= t <= p:
        raise HypothesisError("need 1 <= t <= p")
    steps = p - t
    if b_st.max_i < steps or b_st.certified_max_d < steps + d - 1:
        return IdentityReport("thm26_shape", INCONCLUSIVE)
    residuals = []
    ok = True
    for i in range(d):
        got = b_st.beta(0, i)
        want = comb(i + t - 1, t - 1)
        residuals.append((i, got - want))
        ok &= got == want
    for j in range(d, b_st.certified_max_d + 1):
        if b_st.beta(0, j):
            ok = False
    for alpha in range(1, steps + 1):
        for dd in range(alpha, b_st.certified_max_d + 1):
            v = b_st.beta(alpha, dd)
            if v and dd != alpha + d - 1:
                ok = False
    return IdentityReport("thm26_shape", PASS if ok else FAIL, residuals,
                          {"generator_dims": [b_st.beta(0, i) for i in range(d)]})


def secant_bound(b_r: BettiTable, p: int) -> tuple[int, int]:
    """Length bound for an l-secant (p+1)-plane: p+2+min{p+1, beta_{p+1,2}}.

    Hypotheses: N_{2,p} and N_{3,p+1}; the relevant Betti number sits in
    internal degree p+3.  Returns (bound, beta_{p+1, p+3}).
    """
    ndp2 = check_ndp(b_r, 2, p)
    if ndp2.status != PASS:
        raise HypothesisError(f"N_2,{p} does not hold ({ndp2.status})")
    ndp3 = check_ndp(b_r, 3, p + 1)
    if ndp3.status != PASS:
        raise HypothesisError(f"N_3,{p+1} does not hold ({ndp3.status})")
    beta = b_r.beta(p + 1, slope_to_internal(p + 1, 2))
    return p + 2 + min(p + 1, beta), beta


def check_remark42(b_y: BettiTable, b_x: BettiTable, n: int, s: int,
                   i_range) -> IdentityReport:
    """Betti differences of a one-point projection against the closed form.

    beta_{i,2}(S/I_Y) - beta_{i+1,1}(S/I_Y)
      = C(n-s-1, i+1) + (-1)^i + sum_{1<=j<=i+1} (-1)^{j+i} beta^R_{j,1}(R/I_X).
    """
    residuals = []
    for i in i_range:
        lhs = b_y.beta_slope(i, 2) - b_y.beta_slope(i + 1, 1)
        rhs = comb(n - s - 1, i + 1) + (-1) ** i + sum(
            (-1) ** (j + i) * b_x.beta_slope(j, 1) for j in range(1, i + 2))
        residuals.append((i, lhs - rhs))
    status = PASS if all(r == 0 for _, r in residuals) else FAIL
    return IdentityReport("remark42", status, residuals,
                          {"positivity_implies_cubics":
                           [(i, r) for i, r in residuals]})


def report_tsv(reports: list) -> str:
    """Machine-readable (check, status, witness) lines."""
    lines = ["check\tstatus\twitness"]
    for r in reports:
        if isinstance(r, NdpReport):
            wit = f"{r.witness[0]},{r.witness[1]}" if r.witness else "-"
            lines.append(f"ndp_{r.d}_{r.p}\t{r.status}\t{wit}")
        else:
            bad = [f"{i}:{v}" for i, v in getattr(r, "residuals", []) if v]
            lines.append(f"{r.name}\t{r.status}\t{';'.join(bad) or '-'}")
    return "\n".join(lines) + "\n"
