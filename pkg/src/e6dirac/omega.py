"""Candidate infinitesimal characters: Omega, Omega_1..3, the minimal set V, and involution utilities.

An infinitesimal character is stored as six nonnegative integers n, meaning
sum n_i zeta_i. Involutions theta_x act on the Cartan as Weyl group elements.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction as Q
from typing import Iterable, Sequence

import numpy as np

from .norms import NORM_2RHO_SQ, spin_shift_rows
from .root_datum import (
    RANK,
    Vector,
    add,
    build_e6_datum,
    format_vector,
    scale,
    sub,
    zeta_coords,
    zeta_to_ambient,
)
from .weyl import WeylElement, dominate_batch, make_dominant

InfChar = tuple[int, ...]
FULL_SUPPORT = frozenset(range(RANK))


# ---------------------------------------------------------------- involutions

@dataclass(frozen=True)
class InvolutionRecord:
    kgb_index: int
    theta: WeylElement
    support: frozenset[int]
    provenance: str = ""

    @property
    def matrix(self) -> tuple[tuple[Q, ...], ...]:
        return self.theta.matrix

    @property
    def fully_supported(self) -> bool:
        return self.support == FULL_SUPPORT


def weyl_support(w: WeylElement) -> frozenset[int]:
    """Simple roots (0-based) needed to write w, read off from the image of 1 - w.

    w lies in the parabolic subgroup W_J iff it fixes zeta_i for every i outside J,
    iff the image of 1 - w is spanned by the alpha_j with j in J.
    """
    d = build_e6_datum()
    cinv = d.cartan_inverse
    out = set()
    for z in d.fundamental_weights:
        n = zeta_coords(sub(z, w.act(z)))
        coeffs = [sum((cinv[i][j] * n[j] for j in range(RANK)), Q(0)) for i in range(RANK)]
        out.update(i for i, c in enumerate(coeffs) if c)
    return frozenset(out)


def check_involution(theta: WeylElement) -> None:
    """Raise ValueError unless theta is an orthogonal involution permuting the roots."""
    m = theta.scaled
    ident = 16 * np.eye(8, dtype=np.int64)
    if not (m @ m == ident).all():
        raise ValueError("theta^2 is not the identity")
    if not (m @ m.T == ident).all():
        raise ValueError("theta does not preserve B")
    roots2 = _roots_times_two()
    images = roots2 @ m.T  # 8 * theta(root)
    if (images % 4).any():
        raise ValueError("theta maps a root outside the root system")
    known = {r.tobytes() for r in roots2}
    for a, img in zip(build_e6_datum().all_roots, images // 4):
        if img.tobytes() not in known:
            raise ValueError(f"theta maps the root {format_vector(a)} outside the root system")


@lru_cache(maxsize=None)
def _roots_times_two() -> np.ndarray:
    r = np.array([[int(2 * x) for x in a] for a in build_e6_datum().all_roots], dtype=np.int64)
    r.setflags(write=False)
    return r


def make_record(kgb_index: int, theta: WeylElement, support: Iterable[int] | None = None, provenance: str = "") -> InvolutionRecord:
    check_involution(theta)
    computed = weyl_support(theta)
    if support is not None and frozenset(support) != computed:
        raise ValueError(f"x={kgb_index}: declared support {sorted(support)} differs from {sorted(computed)}")
    return InvolutionRecord(kgb_index, theta, computed, provenance)


# ---------------------------------------------------------------- single characters

def is_strongly_regular(infchar: Sequence[int]) -> bool:
    return all(x >= 1 for x in infchar)


def conjecture_check(infchar: Sequence[int]) -> bool:
    return all(x in (0, 1) for x in infchar)


def infchar_norm_sq(infchar: Sequence) -> Q:
    from .root_datum import zeta_norm_sq

    return zeta_norm_sq(infchar)


def nu_of(infchar: Sequence, theta: InvolutionRecord | WeylElement) -> Vector:
    w = theta.theta if isinstance(theta, InvolutionRecord) else theta
    lam = zeta_to_ambient(infchar)
    return scale(Q(1, 2), sub(lam, w.act(lam)))


def infchar_from_parameter(
    theta: InvolutionRecord | WeylElement, lam: Sequence, nu: Sequence
) -> InfChar:
    """Dominant zeta coordinates of 1/2 (1 + theta) lambda + nu."""
    w = theta.theta if isinstance(theta, InvolutionRecord) else theta
    lam_a = zeta_to_ambient(lam)
    v = add(scale(Q(1, 2), add(lam_a, w.act(lam_a))), zeta_to_ambient(nu))
    dom, _ = make_dominant(v, "full")
    n = zeta_coords(dom)
    if any(x.denominator != 1 for x in n):
        raise ValueError("non-integral infinitesimal character")
    return tuple(int(x) for x in n)


def quadratic_form(theta: InvolutionRecord | WeylElement) -> tuple[tuple[Q, ...], ...]:
    """Q with |Lambda - theta Lambda|^2 = n^T Q n for Lambda = sum n_i zeta_i."""
    q3 = quadratic_form3(theta)
    return tuple(tuple(Q(int(x), 3) for x in row) for row in q3)


def quadratic_form3(theta: InvolutionRecord | WeylElement) -> np.ndarray:
    """3 * Q, an integer matrix."""
    w = theta.theta if isinstance(theta, InvolutionRecord) else theta
    m = np.eye(RANK, dtype=np.int64) - w.zeta_matrix()
    return m.T @ build_e6_datum().gram3 @ m


def check_sign_structure(q3: np.ndarray) -> bool:
    return bool((np.diag(q3) > 0).all() and (q3 >= 0).all())


# ---------------------------------------------------------------- Omega

def distinct_thetas(records: Iterable[InvolutionRecord]) -> list[InvolutionRecord]:
    seen: dict[bytes, InvolutionRecord] = {}
    for r in records:
        seen.setdefault(r.theta.scaled.tobytes(), r)
    return list(seen.values())


def _ellipsoid_points(q3: np.ndarray, bound3: int) -> np.ndarray:
    """All n >= 0 with n^T (3Q) n <= bound3, for 3Q with nonnegative entries.

    Coordinates are added one at a time; with nonnegative entries the partial
    form only grows, so partial vectors over the bound are dropped early.
    """
    tops = [math.isqrt(int(bound3) // int(q3[i, i])) for i in range(RANK)]
    pts = np.zeros((1, 0), dtype=np.int64)
    val = np.zeros(1, dtype=np.int64)
    for k in range(RANK):
        ext = np.arange(tops[k] + 1, dtype=np.int64)
        cross = pts @ q3[:k, k] if k else np.zeros(len(pts), dtype=np.int64)
        nv = val[:, None] + 2 * cross[:, None] * ext[None, :] + q3[k, k] * ext[None, :] ** 2
        keep = nv <= bound3
        rows, cols = np.nonzero(keep)
        pts = np.concatenate([pts[rows], ext[cols][:, None]], axis=1)
        val = nv[rows, cols]
    return pts


def build_omega(thetas: Iterable[InvolutionRecord]) -> set[InfChar]:
    """Non-strongly-regular Lambda with |Lambda - theta Lambda|^2 <= |2 rho|^2 for some theta."""
    out: set[InfChar] = set()
    for rec in distinct_thetas(thetas):
        if not rec.fully_supported:
            raise ValueError(f"x={rec.kgb_index} is not fully supported")
        q3 = quadratic_form3(rec)
        if not check_sign_structure(q3):
            raise AssertionError(f"x={rec.kgb_index}: quadratic form has a negative coefficient")
        pts = _ellipsoid_points(q3, 3 * NORM_2RHO_SQ)
        pts = pts[(pts == 0).any(axis=1)]
        out.update(map(tuple, pts.tolist()))
    return out


def build_omega2(usmall: Iterable[Sequence[int]] | None = None) -> set[InfChar]:
    """Non-strongly-regular integral Lambda conjugate to {mu - rho_n^(j)} + rho_c, mu u-small."""
    if usmall is None:
        from .norms import enumerate_usmall

        usmall = enumerate_usmall()
    rows = np.concatenate([spin_shift_rows(mu) for mu in sorted(usmall)])
    dom, _ = dominate_batch(rows, "full")
    dom = dom[(dom % 4 == 0).all(axis=1)] // 4
    dom = dom[(dom == 0).any(axis=1)]
    return set(map(tuple, dom.tolist()))


def minimal_elements(s: Iterable[Sequence[int]]) -> set[InfChar]:
    """Members of s that do not dominate another member coordinatewise."""
    items = sorted({tuple(int(x) for x in v) for v in s})
    if not items:
        return set()
    a = np.array(items, dtype=np.int64)
    out = set()
    for i, v in enumerate(a):
        below = (a <= v).all(axis=1)
        below[i] = False
        if not below.any():
            out.add(items[i])
    return out


def partition_omega(
    omega: set[InfChar], omega2: set[InfChar], v: set[InfChar]
) -> tuple[set[InfChar], set[InfChar]]:
    if not omega2 <= omega:
        raise ValueError("Omega_2 is not contained in Omega")
    rest = sorted(omega - omega2)
    if not rest:
        return set(), set()
    r = np.array(rest, dtype=np.int64)
    vv = np.array(sorted(v), dtype=np.int64).reshape(-1, RANK)
    dominated = (r[:, None, :] >= vv[None, :, :]).all(axis=2).any(axis=1)
    omega3 = {rest[i] for i in np.flatnonzero(dominated)}
    omega1 = set(rest) - omega3
    return omega1, omega3


@dataclass(frozen=True)
class OmegaPartition:
    omega: frozenset[InfChar]
    omega1: frozenset[InfChar]
    omega2: frozenset[InfChar]
    omega3: frozenset[InfChar]
    V: frozenset[InfChar]


def omega_partition(thetas: Iterable[InvolutionRecord], usmall=None) -> OmegaPartition:
    omega = build_omega(thetas)
    omega2 = build_omega2(usmall)
    v = minimal_elements(omega2)
    omega1, omega3 = partition_omega(omega, omega2, v)
    return OmegaPartition(*(frozenset(x) for x in (omega, omega1, omega2, omega3, v)))
