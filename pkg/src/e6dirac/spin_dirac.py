"""Spin module weights, E_mu (x) S by the Brauer-Klimyk rule, and Dirac cohomology from branching data."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .norms import RHO_C_ZETA, _norm48, ktype_to_zeta4, spin_norm, zeta4_to_ktype
from .root_datum import (
    RANK,
    Vector,
    build_e6_datum,
    format_weight,
    is_ktype_weight,
    zeta_coords,
    zeta_norm_sq,
    zeta_to_ambient,
)
from .weyl import dominate_batch

KWeight = tuple[int, ...]
InfChar = tuple[int, ...]


# ---------------------------------------------------------------- spin weights

@dataclass(frozen=True)
class SpinWeightMultiset:
    """Weights 1/2 sum eps_b * b over the 16 roots of p+, counted per sign vector.

    ``zeta2`` holds 2 * zeta coordinates of the distinct weights and ``mult``
    their multiplicities, aligned row by row.
    """

    zeta2: np.ndarray
    mult: np.ndarray

    @property
    def total(self) -> int:
        return int(self.mult.sum())

    @property
    def entries(self) -> dict[Vector, int]:
        return {
            zeta_to_ambient([Q(int(x), 2) for x in row]): int(m) for row, m in zip(self.zeta2, self.mult)
        }

    def as_counter(self) -> Counter:
        return Counter({tuple(int(x) for x in row): int(m) for row, m in zip(self.zeta2, self.mult)})

    def highest(self) -> Vector:
        """The unique weight maximal in the dominance order; it is the only one of maximal height."""
        heights = self.zeta2 @ np.array([16, 22, 30, 42, 30, 16])
        top = np.flatnonzero(heights == heights.max())
        assert len(top) == 1
        return zeta_to_ambient([Q(int(x), 2) for x in self.zeta2[top[0]]])


@lru_cache(maxsize=None)
def spin_weights() -> SpinWeightMultiset:
    d = build_e6_datum()
    acc: Counter = Counter({(0,) * RANK: 1})
    for beta in d.noncompact_positive:
        b = tuple(int(x) for x in zeta_coords(beta))
        nxt: Counter = Counter()
        for w, m in acc.items():
            nxt[tuple(x + y for x, y in zip(w, b))] += m
            nxt[tuple(x - y for x, y in zip(w, b))] += m
        acc = nxt
    keys = sorted(acc)
    z2 = np.array(keys, dtype=np.int64)
    mult = np.array([acc[k] for k in keys], dtype=np.int64)
    z2.setflags(write=False)
    mult.setflags(write=False)
    return SpinWeightMultiset(z2, mult)


# ---------------------------------------------------------------- tensor product

def tensor_with_spin(mu: Sequence) -> dict[KWeight, int]:
    """Multiplicities of the K-types in E_mu (x) S.

    Each weight nu of S contributes to t = mu + nu + rho_c; singular t cancel,
    regular t contribute det(w) to dom(t) - rho_c.
    """
    if not is_ktype_weight(mu):
        raise ValueError(f"{format_weight(mu)} is not a K-type highest weight")
    s = spin_weights()
    t = ktype_to_zeta4(mu)[None, :] + 2 * s.zeta2 + 4 * np.array(RHO_C_ZETA, dtype=np.int64)
    dom, sign = dominate_batch(t, "compact", with_sign=True)
    regular = (dom[:, 1:] > 0).all(axis=1)
    dom = dom[regular] - 4 * np.array(RHO_C_ZETA, dtype=np.int64)
    coeff = (sign * s.mult)[regular]
    keys, inv = np.unique(dom, axis=0, return_inverse=True)
    net = np.zeros(len(keys), dtype=np.int64)
    np.add.at(net, inv.ravel(), coeff)
    if (net < 0).any():
        raise AssertionError(f"negative multiplicity in the tensor product for {format_weight(mu)}")
    return {zeta4_to_ktype(k): int(c) for k, c in zip(keys, net) if c}


# ---------------------------------------------------------------- branching data

@dataclass(frozen=True)
class BranchList:
    ktypes: tuple[tuple[KWeight, int], ...]
    height_bound: int | None = None
    source_parameter: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        for mu, m in self.ktypes:
            if not is_ktype_weight(mu):
                raise ValueError(f"branch entry {format_weight(mu)} is not a K-type highest weight")
            if m <= 0:
                raise ValueError(f"branch entry {format_weight(mu)} has multiplicity {m}")

    @classmethod
    def of(cls, entries: Iterable, height_bound: int | None = None, source_parameter=None) -> "BranchList":
        kt = tuple((tuple(int(x) for x in mu), int(m)) for mu, m in entries)
        return cls(kt, height_bound, source_parameter)

    def weights(self) -> list[KWeight]:
        return [mu for mu, _ in self.ktypes]


def spin_lowest(branch: BranchList) -> tuple[set[KWeight], Q]:
    if not branch.ktypes:
        raise ValueError("empty branch")
    norms = {mu: spin_norm(mu).norm_sq for mu, _ in branch.ktypes}
    best = min(norms.values())
    return {mu for mu, n in norms.items() if n == best}, best


def dirac_inequality_holds(mu: Sequence, infchar: Sequence) -> bool:
    return spin_norm(mu).norm_sq >= zeta_norm_sq(infchar)


@dataclass(frozen=True)
class HDResult:
    weights: frozenset[KWeight]
    with_multiplicity: dict[KWeight, int]
    module_spin_sq: Q
    infchar_norm_sq: Q


def _dominant_full4(rows: np.ndarray) -> np.ndarray:
    dom, _ = dominate_batch(rows, "full")
    return dom


def dirac_cohomology(branch: BranchList, infchar: Sequence) -> HDResult:
    """H_D of a unitary module from its branching and infinitesimal character.

    Only spin-lowest K-types can contribute, and only when the Dirac inequality
    is an equality; the contributions are the gamma in E_mu (x) S with
    gamma + rho_c conjugate to Lambda.
    """
    for mu, _ in branch.ktypes:
        if not is_ktype_weight(mu):
            raise ValueError(f"branch entry {format_weight(mu)} is not a K-type highest weight")
    lam = tuple(int(x) for x in infchar)
    lam_sq = zeta_norm_sq(lam)
    lowest, spin_sq = spin_lowest(branch)
    if spin_sq != lam_sq:
        return HDResult(frozenset(), {}, spin_sq, lam_sq)
    lam4 = 4 * np.array(lam, dtype=np.int64)
    rho_c4 = 4 * np.array(RHO_C_ZETA, dtype=np.int64)
    acc: Counter = Counter()
    for mu, m in branch.ktypes:
        if mu not in lowest:
            continue
        tens = tensor_with_spin(mu)
        keys = list(tens)
        shifted = np.array([ktype_to_zeta4(g) for g in keys], dtype=np.int64) + rho_c4
        same_norm = _norm48(shifted) == 48 * lam_sq
        conj = (_dominant_full4(shifted) == lam4).all(axis=1)
        for g, ok in zip(keys, same_norm & conj):
            if ok:
                acc[g] += m * tens[g]
    for g in acc:
        v = ktype_to_zeta4(g) + rho_c4
        assert int(_norm48(v[None, :])[0]) == 48 * lam_sq
    return HDResult(frozenset(acc), dict(acc), spin_sq, lam_sq)
