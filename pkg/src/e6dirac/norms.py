"""Spin norm, lambda norm, atlas height and unitarily small K-types.

Hot paths run on 4 * zeta coordinates held in int64 numpy arrays; every result
is handed back as exact Fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache
from typing import Sequence

import numpy as np

from .root_datum import (
    RANK,
    Vector,
    ambient_to_ktype,
    build_e6_datum,
    format_weight,
    is_ktype_weight,
    scale,
    zeta_coords,
    zeta_norm_sq,
    zeta_to_ambient,
)
from .weyl import dominate_batch, full_group, minimal_coset_reps, project_dominant_zeta

# 2*rho in simple-root coordinates; height(q) = B(q, 2 rho) = sum_i c_i * q_i for q in zeta coords
TWO_RHO_COEFFS = (16, 22, 30, 42, 30, 16)
NORM_2RHO_SQ = 312
RHO_C_ZETA = (-5, 1, 1, 1, 1, 1)
# -4 * zeta_1-coefficient of w_1..w_5
_W_TO_ZETA1 = np.array([3, 5, 6, 4, 2], dtype=np.int64)


def ktype_to_zeta4(mu: Sequence) -> np.ndarray:
    """4 * zeta coordinates of a K-type weight, as integers."""
    a, b, c, d, e, f = (Q(x) for x in mu)
    out = [-3 * a - 5 * b - 6 * c - 4 * d - 2 * e + f, 4 * a, 4 * b, 4 * c, 4 * d, 4 * e]
    if any(x.denominator != 1 for x in out):
        raise ValueError(f"{format_weight(mu)}: 4*zeta coordinates are not integral")
    return np.array([int(x) for x in out], dtype=np.int64)


def zeta4_to_ktype(n4: Sequence) -> tuple[int, ...]:
    n1, *rest = (int(x) for x in n4)
    assert all(x % 4 == 0 for x in rest)
    a, b, c, d, e = (x // 4 for x in rest)
    return (a, b, c, d, e, n1 + 3 * a + 5 * b + 6 * c + 4 * d + 2 * e)


def _norm48(rows: np.ndarray) -> np.ndarray:
    """48 * B(v, v) for rows of 4 * zeta coordinates."""
    g3 = build_e6_datum().gram3
    return np.einsum("ni,ij,nj->n", rows, g3, rows)


@lru_cache(maxsize=None)
def _shift4() -> np.ndarray:
    s = np.array([r.shift_zeta for r in minimal_coset_reps()], dtype=np.int64) * 4
    s.setflags(write=False)
    return s


# ---------------------------------------------------------------- spin norm

@dataclass(frozen=True)
class SpinNormResult:
    norm_sq: Q
    argmin_js: frozenset[int]
    dominant_shifts: dict[int, Vector]
    all_norms_sq: tuple[Q, ...]  # one entry per coset representative j

    def dominant_shift_zeta(self, j: int) -> tuple[Q, ...]:
        return zeta_coords(self.dominant_shifts[j])


def spin_shift_rows(mu: Sequence) -> np.ndarray:
    """4 * zeta coords of {mu - rho_n^(j)} + rho_c for j = 0..26."""
    rows = ktype_to_zeta4(mu)[None, :] - _shift4()
    dom, _ = dominate_batch(rows, "compact")
    return dom + 4 * np.array(RHO_C_ZETA, dtype=np.int64)


def _require_ktype(mu: Sequence) -> None:
    if not is_ktype_weight(mu):
        raise ValueError(f"{format_weight(mu)} is not a K-type highest weight")


def spin_norm(mu: Sequence) -> SpinNormResult:
    _require_ktype(mu)
    rows = spin_shift_rows(mu)
    n48 = _norm48(rows)
    best = int(n48.min())
    js = frozenset(int(j) for j in np.flatnonzero(n48 == best))
    shifts = {j: zeta_to_ambient([Q(int(x), 4) for x in rows[j]]) for j in sorted(js)}
    return SpinNormResult(Q(best, 48), js, shifts, tuple(Q(int(x), 48) for x in n48))


def spin_norm_sq_batch(mus4: np.ndarray) -> np.ndarray:
    """48 * spin norm^2 for an (N, 6) array of 4 * zeta coordinates."""
    n, s = len(mus4), _shift4()
    rows = (mus4[:, None, :] - s[None, :, :]).reshape(-1, RANK)
    dom, _ = dominate_batch(rows, "compact")
    dom += 4 * np.array(RHO_C_ZETA, dtype=np.int64)
    return _norm48(dom).reshape(n, len(s)).min(axis=1)


# ---------------------------------------------------------------- lambda norm

@dataclass(frozen=True)
class LambdaResult:
    lambda_a: Vector
    norm_sq: Q
    height: int


def _dominate_with_word(n4: np.ndarray, tie_break: str) -> tuple[np.ndarray, list[int]]:
    c = build_e6_datum().cartan_np
    x = n4.copy()
    applied: list[int] = []
    while True:
        neg = np.flatnonzero(x < 0)
        if not len(neg):
            return x, applied
        i = int(neg[0] if tie_break == "lowest" else neg[-1])
        x = x - x[i] * c[i]
        applied.append(i)


def _reflect_zeta(n: Sequence[Q], i: int) -> tuple[Q, ...]:
    c = build_e6_datum().cartan
    return tuple(n[j] - n[i] * c[i][j] for j in range(RANK))


def lambda_stats(mu: Sequence) -> LambdaResult:
    """Projection of mu + 2rho_c - rho' onto the dominant chamber, done chamber-free.

    mu + 2rho_c is conjugated into the standard dominant chamber by w, the
    standard rho is subtracted, the result is projected onto the closed dominant
    cone, and w^-1 carries it back.
    """
    _require_ktype(mu)
    x4 = ktype_to_zeta4(mu) + 8 * np.array(RHO_C_ZETA, dtype=np.int64)
    d4, applied = _dominate_with_word(x4, "lowest")
    d4_alt, _ = _dominate_with_word(x4, "highest")
    if not (d4 == d4_alt).all():
        raise AssertionError("dominant conjugate depends on the reflection order")
    q = project_dominant_zeta([Q(int(x), 4) - 1 for x in d4])
    norm = zeta_norm_sq(q)
    height = sum((c * x for c, x in zip(TWO_RHO_COEFFS, q)), Q(0))
    if height.denominator != 1:
        raise AssertionError(f"non-integer height {height} for {format_weight(mu)}")
    back = q
    for i in reversed(applied):
        back = _reflect_zeta(back, i)
    return LambdaResult(zeta_to_ambient(back), norm, int(height))


# ---------------------------------------------------------------- u-small

@lru_cache(maxsize=None)
def _usmall_system() -> tuple[np.ndarray, np.ndarray]:
    """(G, h) with mu u-small iff G @ (4 zeta(mu + 2 rho_c)) <= h.

    Row (j, i) is 12 * B(., w^(j) zeta_i) on 4 * zeta coordinates, and
    h_i = 12 * 2 B(rho, zeta_i).
    """
    g3 = build_e6_datum().gram3
    rows, rhs = [], []
    h = 8 * g3.sum(axis=1)
    for rep in minimal_coset_reps():
        m = rep.element.zeta_matrix()
        for i in range(RANK):
            rows.append(g3 @ m[:, i])
            rhs.append(h[i])
    g, hh = np.array(rows, dtype=np.int64), np.array(rhs, dtype=np.int64)
    g.setflags(write=False)
    hh.setflags(write=False)
    return g, hh


def usmall_mask(mus4: np.ndarray) -> np.ndarray:
    g, h = _usmall_system()
    x = mus4 + 8 * np.array(RHO_C_ZETA, dtype=np.int64)
    return (x @ g.T <= h).all(axis=1)


def is_usmall(mu: Sequence) -> bool:
    _require_ktype(mu)
    return bool(usmall_mask(ktype_to_zeta4(mu)[None, :])[0])


def usmall_box() -> tuple[tuple[int, int], ...]:
    """Exact coordinate ranges of mu over the hull of W.2rho, shifted by -2rho_c.

    The maximum of a linear functional over a polytope is attained at a vertex,
    and every vertex of the hull is some w(2 rho); so these are exact LP optima
    of the relaxation obtained by dropping Delta+(k)-dominance.
    """
    d = build_e6_datum()
    packed = full_group().packed.astype(np.int64)
    orbit4 = packed @ np.array([int(2 * x) for x in d.rho], dtype=np.int64)  # 4 * w(2 rho)
    # K-coordinates are B(., alpha_2..alpha_6) and B(., 4a1+3a2+5a3+6a4+4a5+2a6)
    f_root = [4, 3, 5, 6, 4, 2]
    fvec = [sum(c * r[k] for c, r in zip(f_root, d.simple_roots)) for k in range(8)]
    lin2 = np.array([[int(2 * x) for x in r] for r in list(d.simple_roots[1:]) + [fvec]])
    k8 = orbit4 @ lin2.T
    shift = [int(x) for x in ambient_to_ktype(scale(2, d.rho_c))]
    out = []
    for col in range(RANK):
        lo, hi = int(k8[:, col].min()), int(k8[:, col].max())
        assert lo % 8 == 0 and hi % 8 == 0
        lo, hi = lo // 8 - shift[col], hi // 8 - shift[col]
        out.append((max(lo, 0), hi) if col < 5 else (lo, hi))
    return tuple(out)


def enumerate_usmall() -> set[tuple[int, ...]]:
    """All K-type highest weights that are u-small.

    Scans the exact vertex box. The a..e part is pruned by a ball bound first:
    the compact part and the zeta part of mu + 2rho_c are B-orthogonal, and the
    whole vector lies in the ball of radius |2 rho| around 0, which also bounds f.
    """
    box = usmall_box()
    ae = np.stack(
        np.meshgrid(*[np.arange(lo, hi + 1) for lo, hi in box[:5]], indexing="ij"), -1
    ).reshape(-1, 5)
    # compact part of mu + 2rho_c: K-coordinates (a+2, ..., e+2, 0)
    x4 = np.zeros((len(ae), RANK), dtype=np.int64)
    x4[:, 1:] = 4 * (ae + 2)
    x4[:, 0] = -(ae + 2) @ _W_TO_ZETA1
    cn48 = _norm48(x4)
    keep = cn48 <= 48 * NORM_2RHO_SQ
    ae, cn48 = ae[keep], cn48[keep]
    # |f/4 zeta|^2 = f^2 / 12, so f^2 <= 4 * (48*312 - cn48)
    fmax = np.array([math.isqrt(int(4 * (48 * NORM_2RHO_SQ - c))) for c in cn48], dtype=np.int64)
    fmax = np.minimum(fmax, box[5][1])
    out: set[tuple[int, ...]] = set()
    for row, top in zip(ae, fmax):
        lo = max(-int(top), box[5][0])
        parity = int(row @ _W_TO_ZETA1) % 4
        start = lo + ((parity - lo) % 4)
        fs = np.arange(start, int(top) + 1, 4)
        if not len(fs):
            continue
        mus4 = np.empty((len(fs), RANK), dtype=np.int64)
        mus4[:, 1:] = 4 * row
        mus4[:, 0] = fs - row @ _W_TO_ZETA1
        for f in fs[usmall_mask(mus4)]:
            out.add((*(int(v) for v in row), int(f)))
    return out


def usmall_by_dominance() -> set[tuple[int, ...]]:
    """Independent route: mu + 2rho_c = w^(j) d with d dominant and d <= 2rho in dominance order.

    Used as a cross-check of enumerate_usmall.
    """
    from itertools import product

    d = build_e6_datum()
    g3 = d.gram3
    two = np.full(RANK, 2, dtype=np.int64)
    # dominant d with |d|^2 <= 312 has d_i <= sqrt(312 / |zeta_i|^2)
    bounds = [math.isqrt(3 * NORM_2RHO_SQ // int(g3[i, i])) for i in range(RANK)]
    grid = np.array(list(product(*[range(b + 1) for b in bounds])), dtype=np.int64)
    grid = grid[((two - grid) @ g3.T >= 0).all(axis=1)]
    rho_c2 = 2 * np.array(RHO_C_ZETA, dtype=np.int64)
    out = set()
    for rep in minimal_coset_reps():
        m = rep.element.zeta_matrix()
        mus = grid @ m.T - rho_c2
        for n in mus[(mus[:, 1:] >= 0).all(axis=1)]:
            out.add(zeta4_to_ktype(4 * n))
    return out
