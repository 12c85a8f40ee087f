"""Buchberger, normal forms, elimination, colon/saturation, Hilbert data."""

import random

import pytest

from projsyz.errors import TruncationError
from projsyz.fields import DEFAULT_FIELD, QQ
from projsyz.groebner import (
    Ideal,
    buchberger,
    colon,
    eliminate,
    intersect,
    irrelevant_ideal,
    load_ideal,
    normal_form,
    same_ideal,
    saturate,
    saturate_irrelevant,
    save_ideal,
    spolynomial,
)
from projsyz.polyring import RingDescriptor, parse_polynomial, random_polynomial

R2 = RingDescriptor(("x0", "x1"), DEFAULT_FIELD, "deglex")
R4 = RingDescriptor(("x0", "x1", "x2", "x3"), DEFAULT_FIELD, "deglex")
TC_GENS = ["x0*x2 - x1^2", "x0*x3 - x1*x2", "x1*x3 - x2^2"]


def twisted_cubic(order="deglex"):
    return Ideal(RingDescriptor(("x0", "x1", "x2", "x3"), DEFAULT_FIELD, order), TC_GENS)


def test_normal_form_examples():
    f = parse_polynomial("x0*x2 - x1^2", R4)
    assert normal_form(f, [f]).is_zero()
    one = R2.one()
    assert normal_form(one, [R2.variable(0), R2.variable(1)]) == one
    assert normal_form(parse_polynomial("x0^2", R2),
                       [parse_polynomial("x0 - x1", R2)]) == parse_polynomial("x1^2", R2)


def test_normal_form_idempotent_and_member():
    rng = random.Random(1)
    gens = [random_polynomial(R4, 2, rng) for _ in range(2)]
    basis = buchberger(gens)
    f = random_polynomial(R4, 3, rng)
    r = normal_form(f, basis)
    assert normal_form(r, basis) == r
    assert Ideal(R4, gens).contains(f - r)


def test_buchberger_principal_and_monomial():
    f = parse_polynomial("3*x0^2 - x1^2", R2)
    gb = buchberger([f])
    assert len(gb) == 1 and gb[0] == f.monic()
    gb2 = buchberger([R2.variable(0), R2.variable(1)])
    assert [str(g) for g in gb2] == ["x1", "x0"]


def test_twisted_cubic_gb_is_the_minors():
    ideal = twisted_cubic("degrevlex")
    gb = ideal.groebner_basis()
    assert len(gb) == 3
    for g in gb:
        assert g.degree() == 2
    # Buchberger criterion: every S-polynomial reduces to zero
    for i in range(3):
        for j in range(i + 1, 3):
            assert normal_form(spolynomial(gb[i], gb[j]), gb).is_zero()


@pytest.mark.parametrize("seed", range(5))
def test_buchberger_criterion_random(seed):
    rng = random.Random(seed)
    gens = [random_polynomial(R4, rng.randrange(1, 3), rng) for _ in range(3)]
    gb = buchberger(gens)
    for i in range(len(gb)):
        for j in range(i + 1, len(gb)):
            assert normal_form(spolynomial(gb[i], gb[j]), gb).is_zero()
    # reduced: no lead term divides another, tails reduced
    for i, g in enumerate(gb):
        rest = gb[:i] + gb[i + 1:]
        assert normal_form(g, rest) == g


def test_membership_matches_degreewise_linear_algebra():
    from projsyz.degreewise import degree_basis_dim, membership_oracle
    rng = random.Random(7)
    ring = RingDescriptor(("x0", "x1", "x2"), DEFAULT_FIELD, "deglex")
    gens = [random_polynomial(ring, 2, rng) for _ in range(2)]
    ideal = Ideal(ring, gens)
    for _ in range(20):
        f = random_polynomial(ring, rng.randrange(2, 5), rng)
        if rng.random() < 0.4:
            f = f + gens[0] * random_polynomial(ring, f.degree() - 2, rng)
        assert ideal.contains(f) == membership_oracle(gens, f)


def test_hilbert_function_examples():
    zero3 = Ideal.zero(RingDescriptor(("x0", "x1", "x2"), DEFAULT_FIELD))
    assert zero3.hilbert_function(2) == 6
    tc = twisted_cubic()
    assert tc.hilbert_function(2) == 7
    assert [tc.hilbert_function(m) for m in range(5)] == [1, 4, 7, 10, 13]
    irr = irrelevant_ideal(R4)
    assert irr.hilbert_function(1) == 0
    stds = tc.std_monomials(1)
    assert [m.to_string(tc.ring) for m in stds] == ["x0", "x1", "x2", "x3"]


def test_krull_dim_and_degree():
    assert Ideal.zero(R4).krull_dim() == 4
    assert Ideal.zero(R4).degree_of() == 1
    tc = twisted_cubic()
    assert tc.krull_dim() == 2
    assert tc.degree_of() == 3
    with pytest.raises(TruncationError):
        tc.degree_of(cap=1)


def test_eliminate_examples():
    ideal = Ideal(R2, ["x0 - x1"])
    assert eliminate(ideal, 1).is_zero_ideal()
    ideal2 = Ideal(R2, ["x0", "x1^2"])
    el = eliminate(ideal2, 1)
    assert [str(g) for g in el.generators] == ["x1^2"]
    with pytest.raises(ValueError):
        eliminate(ideal, 2)


def test_eliminate_matches_degreewise_oracle():
    from projsyz.degreewise import eliminate_oracle_dims
    rng = random.Random(3)
    ring = RingDescriptor(("x0", "x1", "x2", "x3"), DEFAULT_FIELD, "deglex")
    gens = [random_polynomial(ring, 2, rng) for _ in range(3)]
    ideal = Ideal(ring, gens)
    el = eliminate(ideal, 1)
    dims = eliminate_oracle_dims(gens, 1, 5)
    for m in range(6):
        assert ideal.ring.subring(1).monomials_of_degree(m) is not None
        got = len(el.ring.monomials_of_degree(m)) - el.hilbert_function(m)
        assert got == dims[m], f"degree {m}"


def test_colon_and_saturate_examples():
    rq = RingDescriptor(("x0", "x1"), QQ, "deglex")
    i = Ideal(rq, ["x0^2"])
    assert [str(g) for g in colon(i, parse_polynomial("x0", rq)).generators] == ["x0"]
    j = Ideal(rq, ["x0^2", "x0*x1"])
    s = saturate(j, irrelevant_ideal(rq))
    assert [str(g) for g in s.generators] == ["x0"]
    assert s.saturated == "yes"
    # fixed point
    s2 = saturate(s, irrelevant_ideal(rq))
    assert same_ideal(s, s2)


def test_saturate_idempotent_modp():
    i = Ideal(R2, ["x0^2", "x0*x1"])
    s = saturate(i, irrelevant_ideal(R2))
    assert same_ideal(s, saturate(s, irrelevant_ideal(R2)))
    fast = saturate_irrelevant(i)
    assert same_ideal(s, fast)
    assert fast.saturated == "yes"


def test_saturate_irrelevant_on_twisted_cubic_is_identity():
    tc = twisted_cubic()
    s = saturate_irrelevant(tc)
    assert same_ideal(s, tc)


def test_intersect():
    i = Ideal(R2, ["x0"])
    j = Ideal(R2, ["x1"])
    k = intersect(i, j)
    assert [str(g) for g in k.generators] == ["x0*x1"]


def test_unit_ideal_and_constants():
    u = Ideal(R2, [R2.one()])
    assert u.is_unit()
    assert not twisted_cubic().is_unit()


def test_ideal_file_roundtrip(tmp_path):
    tc = twisted_cubic()
    text = save_ideal(tc)
    back = load_ideal(text)
    assert back.ring == tc.ring
    assert same_ideal(back, tc)
    commented = "# a comment\n" + text
    assert same_ideal(load_ideal(commented), tc)


def test_capped_gb_matches_full_initial_ideal():
    tc = twisted_cubic()
    capped = Ideal(tc.ring, tc.generators)
    full_hf = [tc.hilbert_function(m) for m in range(4)]
    capped_hf = []
    for m in range(4):
        capped.groebner_basis(cap=m)
        capped_hf.append(capped.hilbert_function(m))
    assert capped_hf == full_hf
