from fractions import Fraction as Q

import pytest
from hypothesis import given, strategies as st

from e6dirac.root_datum import (
    ambient_to_ktype,
    build_e6_datum,
    coroot_pairing,
    dim_ktype,
    dot,
    is_ktype_weight,
    ktype_to_ambient,
    ktype_to_zeta,
    norm_sq,
    parse_vector,
    scale,
    vec,
    zeta_coords,
    zeta_norm_sq,
    zeta_to_ambient,
    zeta_to_ktype,
)

D = build_e6_datum()
H = Q(1, 2)


def test_root_counts():
    assert len(D.all_roots) == 72
    assert len(D.positive_roots) == 36
    assert len(D.compact_positive) == 20
    assert len(D.noncompact_positive) == 16


def test_weyl_vectors():
    assert D.rho == vec((0, 1, 2, 3, 4, -4, -4, 4))
    assert D.rho_c == vec((0, 1, 2, 3, 4, 0, 0, 0))
    assert D.rho_n == vec((0, 0, 0, 0, 0, -4, -4, 4))
    assert norm_sq(D.rho) == 78
    assert norm_sq(D.rho_c) == 30


def test_half_sums_as_vector_identities():
    def half(vs):
        return tuple(sum((v[k] for v in vs), Q(0)) / 2 for k in range(8))

    assert half(D.positive_roots) == D.rho
    assert half(D.compact_positive) == D.rho_c
    assert half(D.noncompact_positive) == D.rho_n


def test_zeta_and_beta():
    assert D.zeta == (0, 0, 0, 0, 0, Q(-2, 3), Q(-2, 3), Q(2, 3))
    assert D.beta == (H, H, H, H, H, -H, -H, H)
    assert D.beta in D.noncompact_positive
    for a in D.all_roots:
        compact = dot(a, D.zeta) == 0
        assert compact == D.is_compact(a)
    assert {a for a in D.all_roots if dot(a, D.zeta) > 0} == set(D.noncompact_positive)


def test_fundamental_weight_duality():
    for i, z in enumerate(D.fundamental_weights):
        for j, a in enumerate(D.simple_roots):
            assert coroot_pairing(z, a) == (1 if i == j else 0)


def test_root_closure_and_negation():
    roots = set(D.all_roots)
    pos = set(D.positive_roots)
    neg = {scale(-1, a) for a in pos}
    assert pos.isdisjoint(neg) and pos | neg == roots
    for a in D.all_roots:
        for b in D.all_roots:
            if dot(a, b) == -1:
                assert tuple(x + y for x, y in zip(a, b)) in roots


def test_coroot_pairing_examples():
    assert coroot_pairing(D.rho, D.simple_roots[0]) == 1
    assert coroot_pairing(D.fundamental_weights[0], D.simple_roots[1]) == 0
    # rho_c against beta by the explicit dot product of the two vectors
    assert coroot_pairing(D.rho_c, D.beta) == sum(x * y for x, y in zip(D.rho_c, D.beta)) == 5
    with pytest.raises(ValueError):
        coroot_pairing(D.rho, D.rho)


def test_coordinate_examples():
    assert ktype_to_ambient([1, 0, 0, 0, 0, 3]) == D.beta
    assert ktype_to_ambient([0] * 6) == (0,) * 8
    assert ktype_to_zeta([0, 0, 0, 0, 0, -12]) == (-3, 0, 0, 0, 0, 0)


def test_zeta_coords_rejects_vectors_off_the_weight_space():
    with pytest.raises(ValueError, match="not in weight space"):
        zeta_coords((0, 0, 0, 0, 0, 1, -1, 0))


def test_is_ktype_weight_examples():
    assert is_ktype_weight([1, 0, 0, 0, 0, 3])
    assert is_ktype_weight([0, 0, 0, 0, 1, -18])
    assert not is_ktype_weight([0, 0, 0, 0, 0, 1])
    assert not is_ktype_weight([-1, 0, 0, 0, 0, 0])
    assert not is_ktype_weight([0, 0, 0, 0, 0])


@pytest.mark.parametrize(
    "mu,dim",
    [
        ([0, 0, 0, 0, 1, -18], 10),
        ([0, 1, 0, 0, 1, -21], 144),
        ([0, 0, 0, 0, 2, -24], 54),
        ([0, 2, 0, 0, 1, -24], 1050),
        ([0, 0, 0, 0, 0, -12], 1),
        ([0, 1, 0, 0, 0, -15], 16),
        ([0, 2, 0, 0, 0, -18], 126),
        ([0, 3, 0, 0, 0, -21], 672),
    ],
)
def test_dim_ktype_printed_branch_dims(mu, dim):
    assert dim_ktype(mu) == dim


def _dim_ambient(mu):
    """Weyl dimension formula evaluated directly on ambient vectors."""
    v = tuple(x + y for x, y in zip(ktype_to_ambient(mu), D.rho_c))
    out = Q(1)
    for a in D.compact_positive:
        out *= dot(v, a) / dot(D.rho_c, a)
    return out


def test_dim_ktype_known_modules():
    # p+ has highest weight beta and dimension 16; k_ss = so(10) has dimension 45
    assert dim_ktype(ambient_to_ktype(D.beta)) == 16
    top_compact = max(D.compact_positive, key=lambda a: dot(a, D.rho))
    assert dim_ktype(ambient_to_ktype(top_compact)) == 45
    assert dim_ktype([0] * 6) == 1


def test_dim_ktype_rejects_nondominant():
    with pytest.raises(ValueError):
        dim_ktype([-1, 0, 0, 0, 0, 3])


@st.composite
def ktypes(draw):
    ae = draw(st.tuples(*[st.integers(0, 6)] * 5))
    n1 = draw(st.integers(-30, 30))
    a, b, c, d, e = ae
    return (a, b, c, d, e, 4 * n1 + 3 * a + 5 * b + 6 * c + 4 * d + 2 * e)


@given(ktypes())
def test_ktype_round_trips(mu):
    assert is_ktype_weight(mu)
    assert zeta_to_ktype(ktype_to_zeta(mu)) == mu
    assert ambient_to_ktype(ktype_to_ambient(mu)) == mu
    assert zeta_to_ambient(ktype_to_zeta(mu)) == ktype_to_ambient(mu)
    assert zeta_norm_sq(ktype_to_zeta(mu)) == norm_sq(ktype_to_ambient(mu))


@given(ktypes(), st.integers(-10, 10))
def test_dim_ktype_independent_of_central_coordinate(mu, shift):
    other = (*mu[:5], mu[5] + 4 * shift)
    assert dim_ktype(other) == dim_ktype(mu) == _dim_ambient(mu)


@given(st.lists(st.fractions(max_denominator=12).map(lambda x: x.limit_denominator(12)), min_size=6, max_size=6))
def test_zeta_coords_round_trip(n):
    assert zeta_coords(zeta_to_ambient(n)) == tuple(n)


def test_parse_vector_forms():
    assert parse_vector("[1, 0, -3/2]") == (1, 0, Q(-3, 2))
    assert parse_vector("1,0,-3") == (1, 0, -3)
    assert parse_vector("[3,-4,-1,2,2,-3]/2") == (Q(3, 2), -2, Q(-1, 2), 1, 1, Q(-3, 2))
    with pytest.raises(ValueError):
        parse_vector("[1,x,2]")
    with pytest.raises(ValueError):
        parse_vector("[1,2]", 6)
