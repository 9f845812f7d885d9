from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given, strategies as st

from e6dirac.root_datum import (
    RANK,
    build_e6_datum,
    dot,
    is_ktype_weight,
    ambient_to_ktype,
    norm_sq,
    scale,
    sub,
    zeta_coords,
    zeta_to_ambient,
)
from oracles import nnls_projection
from e6dirac.weyl import (
    WeylElement,
    build_parabolic,
    classify_range,
    compact_group,
    dominate_batch,
    full_group,
    generate_group,
    hd_shift_dominant,
    is_dominant,
    make_dominant,
    minimal_coset_reps,
    project_dominant_cone,
    project_dominant_zeta,
    simple_reflection,
)

D = build_e6_datum()

rationals = st.builds(lambda p, q: Q(p, q), st.integers(-12, 12), st.sampled_from([1, 2, 3, 4]))
zeta_vectors = st.lists(rationals, min_size=RANK, max_size=RANK).map(tuple)


def test_group_orders():
    assert len(full_group()) == 51840
    assert len(compact_group()) == 1920
    trivial = generate_group([])
    assert len(trivial) == 1 and trivial[0].is_identity()


def test_weyl_element_algebra():
    s1 = simple_reflection(1)
    assert (s1 * s1).is_identity()
    assert s1.det() == -1
    w = WeylElement.from_word([1, 3, 4, 2, 5])
    assert (w * w.inverse()).is_identity()
    assert w.det() == -1
    assert WeylElement.from_matrix(w.matrix) == w
    assert w.act(D.rho) == simple_reflection(1).act(
        simple_reflection(3).act(simple_reflection(4).act(simple_reflection(2).act(simple_reflection(5).act(D.rho))))
    )
    with pytest.raises(ValueError):
        WeylElement.from_matrix([[Q(1, 3)] * 8] * 8)


def test_zeta_matrix_matches_ambient_action():
    w = WeylElement.from_word([2, 4, 1, 3, 6])
    n = (1, -2, 3, 0, 5, -1)
    assert tuple(int(x) for x in w.zeta_matrix() @ np.array(n)) == zeta_coords(w.act(zeta_to_ambient(n)))


def test_sampled_group_elements_permute_roots():
    rng = np.random.default_rng(7)
    roots = set(D.all_roots)
    g = full_group()
    for i in rng.choice(len(g), size=100, replace=False):
        w = g[int(i)]
        assert {w.act(a) for a in D.all_roots} == roots
        assert w.det() in (1, -1)


def test_make_dominant_examples():
    assert make_dominant(D.rho) == (D.rho, WeylElement.identity())
    v = simple_reflection(1).act(D.rho)
    d, w = make_dominant(v)
    assert d == D.rho and w == simple_reflection(1)
    assert w.act(v) == d
    assert make_dominant(v, tie_break="highest")[0] == D.rho


def test_make_dominant_eta1_shift():
    # compact-dominant form of eta_1 - rho_n^(j) at the minimizing j, plus rho_c, has norm^2 42
    from e6dirac.norms import spin_norm
    from e6dirac.root_datum import ktype_to_ambient

    mu = ktype_to_ambient([0, 0, 0, 0, 1, -18])
    j = min(spin_norm([0, 0, 0, 0, 1, -18]).argmin_js)
    d, _ = make_dominant(sub(mu, minimal_coset_reps()[j].shift), "compact")
    assert is_dominant(d, "compact")
    assert norm_sq(tuple(x + y for x, y in zip(d, D.rho_c))) == 42


@given(zeta_vectors, st.integers(0, 51839))
def test_make_dominant_orbit_invariance(n, k):
    v = zeta_to_ambient(n)
    w = full_group()[k]
    d1, w1 = make_dominant(v)
    d2, _ = make_dominant(w.act(v))
    assert d1 == d2
    assert w1.act(v) == d1
    assert is_dominant(d1)


@given(zeta_vectors, st.integers(0, 1919))
def test_compact_dominant_orbit_invariance(n, k):
    v = zeta_to_ambient(n)
    u = compact_group()[k]
    assert make_dominant(v, "compact")[0] == make_dominant(u.act(v), "compact")[0]


@given(st.lists(st.integers(-40, 40), min_size=RANK, max_size=RANK))
def test_dominate_batch_matches_make_dominant(n):
    dom, sign = dominate_batch(np.array([n]), "compact", with_sign=True)
    d, w = make_dominant(zeta_to_ambient(n), "compact")
    assert tuple(int(x) for x in dom[0]) == zeta_coords(d)
    assert int(sign[0]) == w.det()


# ---------------------------------------------------------------- coset representatives

def test_coset_reps_basic():
    reps = minimal_coset_reps()
    assert len(reps) == 27 == len(full_group()) // len(compact_group())
    assert reps[0].element.is_identity()
    assert reps[0].shift == D.rho_n
    images = [r.element.act(D.rho) for r in reps]
    assert len(set(images)) == 27
    for r, img in zip(reps, images):
        assert is_dominant(img, "compact", strict=True)
        assert r.shift == sub(img, D.rho_c)
        assert is_ktype_weight(ambient_to_ktype(r.shift))
        assert r.element == WeylElement.from_word(r.element.word)


def _lengths(packed: np.ndarray) -> np.ndarray:
    """Number of positive roots sent to negative roots, for 4 * matrices."""
    pos2 = np.array([[int(2 * x) for x in a] for a in D.positive_roots])
    rho = np.array([int(x) for x in D.rho])
    imgs = np.einsum("nij,rj->nri", packed.astype(np.int64), pos2)
    return ((imgs @ rho) < 0).sum(axis=1)


def test_coset_reps_have_minimal_length():
    """Dominance characterization agrees with minimal length in each coset W_K w."""
    k = compact_group().packed.astype(np.int64)
    for r in minimal_coset_reps():
        coset = np.einsum("nij,jk->nik", k, r.element.scaled) // 4
        lengths = _lengths(coset)
        own = len(r.element.word)
        assert lengths.min() == own and (lengths == own).sum() == 1


# ---------------------------------------------------------------- cone projection

def test_projection_examples():
    assert project_dominant_cone(D.rho) == D.rho
    assert project_dominant_cone(scale(-1, D.rho)) == (0,) * 8


@given(zeta_vectors)
def test_projection_matchesnnls_projection(n):
    assert project_dominant_zeta(n) == nnls_projection(n)


@given(zeta_vectors)
def test_projection_idempotent(n):
    p = project_dominant_zeta(n)
    assert all(x >= 0 for x in p)
    assert project_dominant_zeta(p) == p


@given(zeta_vectors, zeta_vectors)
def test_projection_is_1_lipschitz(u, v):
    pu = zeta_to_ambient(project_dominant_zeta(u))
    pv = zeta_to_ambient(project_dominant_zeta(v))
    assert norm_sq(sub(pu, pv)) <= norm_sq(sub(zeta_to_ambient(u), zeta_to_ambient(v)))


# ---------------------------------------------------------------- parabolics

def test_parabolic_examples():
    p = build_parabolic(D.zeta)
    assert set(p.nilrad_roots) == set(D.noncompact_positive)
    assert p.rho_u == sub(D.rho, D.rho_c)
    assert p.rho_u_cap_p == p.rho_u
    p0 = build_parabolic((0,) * 8)
    assert p0.nilrad_roots == () and p0.rho_u == (0,) * 8
    assert len(p0.levi_roots) == 72
    pr = build_parabolic(D.rho)
    assert set(pr.nilrad_roots) == set(D.positive_roots) and pr.rho_u == D.rho
    for xi in (D.zeta, D.rho, zeta_to_ambient((0, 1, 0, 0, 2, 0))):
        q = build_parabolic(xi)
        assert tuple(a + b for a, b in zip(q.rho_L, q.rho_u)) == D.rho


def test_classify_range_examples():
    p = build_parabolic(D.rho)
    assert classify_range((0,) * 8, p) == "good"
    assert classify_range(scale(-1, D.rho), p) == "weakly_good"
    assert classify_range(scale(-2, D.rho), p) == "neither"


def test_hd_shift_dominant():
    p = build_parabolic(D.zeta)
    assert hd_shift_dominant((0,) * 8, p)  # rho_n is compact-dominant
    # rho_n is central in k, so the shift does not help a compact-antidominant weight
    assert all(dot(D.rho_n, a) == 0 for a in D.compact_positive)
    assert not hd_shift_dominant(scale(-1, D.rho_c), p)
