"""Weyl groups W(g, t_f) and W(k, t_f), dominance, coset representatives, cone projection.

Group elements are 8x8 matrices acting on ambient vectors. Every element of
W(E6) maps the E8 lattice to itself, so 4*M is an integer matrix; elements are
stored that way and only converted to Fractions on request.

The ``*_batch`` helpers work on integer-scaled zeta coordinates (rows of an
``(N, 6)`` array). In that basis the simple reflection s_i is the row operation
``n -> n - n_i * C[i]``, which keeps large enumerations in exact integer numpy.
"""

from __future__ import annotations

from collections.abc import Sequence as SequenceABC
from dataclasses import dataclass
from fractions import Fraction as Q
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Literal, Sequence

import numpy as np

from .root_datum import (
    DIM,
    RANK,
    Vector,
    add,
    build_e6_datum,
    dot,
    format_rational,
    reflect,
    scale,
    sub,
    vec,
    zeta_coords,
    zeta_to_ambient,
    zero,
)

System = Literal["full", "compact"]
_SCALE = 4


def _system_indices(system: System) -> tuple[int, ...]:
    if system == "full":
        return tuple(range(RANK))
    if system == "compact":
        return build_e6_datum().compact_indices
    raise ValueError(f"unknown system {system!r}")


# ---------------------------------------------------------------- elements

class WeylElement:
    """An element of W(g, t_f) as an exact 8x8 matrix, optionally with a word.

    ``word`` lists 1-based simple-reflection labels, composed left to right as
    a product of matrices: word (1, 3) is s_1 s_3.
    """

    __slots__ = ("_m", "word")

    def __init__(self, scaled: np.ndarray, word: tuple[int, ...] | None = None):
        m = np.asarray(scaled, dtype=np.int64).reshape(DIM, DIM)
        m.setflags(write=False)
        self._m = m
        self.word = word

    @classmethod
    def identity(cls) -> "WeylElement":
        return cls(_SCALE * np.eye(DIM, dtype=np.int64), ())

    @classmethod
    def from_word(cls, word: Iterable[int]) -> "WeylElement":
        word = tuple(word)
        m = _SCALE * np.eye(DIM, dtype=np.int64)
        for i in word:
            m = m @ _simple_reflection_scaled(i) // _SCALE
        return cls(m, word)

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence]) -> "WeylElement":
        m = [[Q(x) * _SCALE for x in row] for row in rows]
        if len(m) != DIM or any(len(r) != DIM for r in m):
            raise ValueError("expected an 8x8 matrix")
        if any(x.denominator != 1 for r in m for x in r):
            raise ValueError("matrix entries must lie in (1/4)Z")
        return cls(np.array([[int(x) for x in r] for r in m], dtype=np.int64))

    @property
    def scaled(self) -> np.ndarray:
        """4 * matrix, integer."""
        return self._m

    @property
    def matrix(self) -> tuple[tuple[Q, ...], ...]:
        return tuple(tuple(Q(int(x), _SCALE) for x in row) for row in self._m)

    def act(self, v: Sequence) -> Vector:
        v = vec(v)
        return tuple(sum((Q(int(a), _SCALE) * x for a, x in zip(row, v)), Q(0)) for row in self._m)

    __call__ = act

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        word = self.word + other.word if self.word is not None and other.word is not None else None
        return WeylElement(self._m @ other._m // _SCALE, word)

    def inverse(self) -> "WeylElement":
        word = tuple(reversed(self.word)) if self.word is not None else None
        return WeylElement(self._m.T.copy(), word)

    def det(self) -> int:
        # determinant of an orthogonal matrix is the parity of any word
        if self.word is not None:
            return -1 if len(self.word) % 2 else 1
        return int(round(np.linalg.det(self._m / _SCALE)))

    def is_identity(self) -> bool:
        return bool((self._m == _SCALE * np.eye(DIM, dtype=np.int64)).all())

    def zeta_matrix(self) -> np.ndarray:
        """Integer 6x6 matrix M with zeta_coords(w v) = M zeta_coords(v)."""
        d = build_e6_datum()
        cols = [zeta_coords(self.act(z)) for z in d.fundamental_weights]
        return np.array([[int(cols[j][i]) for j in range(RANK)] for i in range(RANK)], dtype=np.int64)

    def to_json(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.matrix]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, WeylElement) and bool((self._m == other._m).all())

    def __hash__(self) -> int:
        return hash(self._m.tobytes())

    def __repr__(self) -> str:
        return f"WeylElement(word={self.word})"


@lru_cache(maxsize=None)
def _simple_reflection_scaled(i: int) -> np.ndarray:
    a = build_e6_datum().simple_roots[i - 1]
    m = np.array([[_SCALE * (int(r == c) - a[r] * a[c]) for c in range(DIM)] for r in range(DIM)])
    assert all(x.denominator == 1 for x in m.flat)
    out = m.astype(np.int64)
    out.setflags(write=False)
    return out


def simple_reflection(i: int) -> WeylElement:
    return WeylElement(_simple_reflection_scaled(i), (i,))


class WeylGroup(SequenceABC):
    """Immutable table of group elements packed as int8 arrays (4 * matrix)."""

    def __init__(self, packed: np.ndarray, generators: tuple[int, ...]):
        packed.setflags(write=False)
        self._packed = packed
        self.generators = generators

    def __len__(self) -> int:
        return len(self._packed)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        return WeylElement(self._packed[i].astype(np.int64))

    @property
    def packed(self) -> np.ndarray:
        return self._packed


def generate_group(generators: Iterable[int]) -> WeylGroup:
    """Breadth-first closure of the given simple reflections (1-based labels)."""
    gens = tuple(sorted(set(generators)))
    mats = [_simple_reflection_scaled(i) for i in gens]
    ident = (_SCALE * np.eye(DIM, dtype=np.int64))[None]
    seen = {ident[0].astype(np.int8).tobytes()}
    blocks = [ident]
    frontier = ident
    while len(frontier) and mats:
        cand = np.concatenate([np.einsum("ij,njk->nik", s, frontier) // _SCALE for s in mats])
        new = []
        for m in cand:
            key = m.astype(np.int8).tobytes()
            if key not in seen:
                seen.add(key)
                new.append(m)
        frontier = np.array(new, dtype=np.int64).reshape(-1, DIM, DIM)
        blocks.append(frontier)
    packed = np.concatenate(blocks).astype(np.int8)
    return WeylGroup(packed, gens)


@lru_cache(maxsize=None)
def full_group() -> WeylGroup:
    return generate_group(range(1, 7))


@lru_cache(maxsize=None)
def compact_group() -> WeylGroup:
    return generate_group(range(2, 7))


# ---------------------------------------------------------------- dominance

def make_dominant(
    v: Sequence, system: System = "full", tie_break: Literal["lowest", "highest"] = "lowest"
) -> tuple[Vector, WeylElement]:
    """Return (d, w) with d dominant for the chosen system and w v = d.

    Reflects in the lowest-index simple root with negative pairing first
    (``tie_break="highest"`` picks the highest instead; d is the same).
    """
    d = build_e6_datum()
    idx = _system_indices(system)
    v = vec(v)
    applied: list[int] = []
    while True:
        neg = [i for i in idx if dot(v, d.simple_roots[i]) < 0]
        if not neg:
            break
        i = neg[0] if tie_break == "lowest" else neg[-1]
        v = reflect(v, d.simple_roots[i])
        applied.append(i + 1)
    return v, WeylElement.from_word(reversed(applied))


def is_dominant(v: Sequence, system: System = "full", strict: bool = False) -> bool:
    d = build_e6_datum()
    for i in _system_indices(system):
        p = dot(v, d.simple_roots[i])
        if p < 0 or (strict and p == 0):
            return False
    return True


def dominate_batch(
    arr: np.ndarray, system: System = "full", with_sign: bool = False
) -> tuple[np.ndarray, np.ndarray | None]:
    """Make every row of an integer (N, 6) zeta-coordinate array dominant.

    Rows may be any integer multiple of the true coordinates; reflections are
    linear so the scale is preserved. Returns the dominant rows and, if asked,
    the determinant of the Weyl element used for each row.
    """
    c = build_e6_datum().cartan_np
    idx = np.array(_system_indices(system))
    x = np.array(arr, dtype=np.int64, copy=True)
    sign = np.ones(len(x), dtype=np.int64) if with_sign else None
    rows = np.arange(len(x))
    while True:
        sub_ = x[:, idx]
        negmask = sub_ < 0
        active = negmask.any(axis=1)
        if not active.any():
            return x, sign
        first = idx[np.argmax(negmask, axis=1)]
        r = rows[active]
        i = first[active]
        x[r] -= x[r, i][:, None] * c[i]
        if with_sign:
            sign[r] *= -1


# ---------------------------------------------------------------- W^1

@dataclass(frozen=True)
class CosetRep:
    index: int
    element: WeylElement
    shift: Vector  # rho_n^{(j)} = w^{(j)} rho - rho_c
    shift_zeta: tuple[int, ...]


@lru_cache(maxsize=None)
def minimal_coset_reps() -> tuple[CosetRep, ...]:
    """The 27 elements w with w(rho) strictly Delta+(k)-dominant, identity first.

    Words come from a breadth-first search on the orbit of rho, so they are
    reduced and the list is ordered by length.
    """
    d = build_e6_datum()
    c = d.cartan_np
    start = (1,) * RANK
    words = {start: ()}
    frontier = [start]
    while frontier:
        nxt = []
        for n in frontier:
            for i in range(RANK):
                m = tuple(int(x) for x in np.array(n) - n[i] * c[i])
                if m not in words:
                    words[m] = (i + 1,) + words[n]
                    nxt.append(m)
        frontier = nxt
    assert len(words) == 51840
    reps = [(w, n) for n, w in words.items() if all(x > 0 for x in n[1:])]
    reps.sort(key=lambda t: (len(t[0]), t[0]))
    rho_c_z = zeta_coords(d.rho_c)
    out = []
    for j, (word, n) in enumerate(reps):
        el = WeylElement.from_word(word)
        assert zeta_coords(el.act(d.rho)) == tuple(Q(x) for x in n)
        shift_z = tuple(int(a - b) for a, b in zip(n, rho_c_z))
        out.append(CosetRep(j, el, sub(el.act(d.rho), d.rho_c), shift_z))
    assert len(out) == 27 and out[0].element.is_identity()
    return tuple(out)


# ---------------------------------------------------------------- cone projection

@lru_cache(maxsize=None)
def _face_systems() -> tuple[tuple[tuple[int, ...], tuple[tuple[Q, ...], ...]], ...]:
    from .root_datum import invert

    c = build_e6_datum().cartan
    out = []
    for r in range(1, RANK + 1):
        for s in combinations(range(RANK), r):
            out.append((s, invert([[c[i][j] for j in s] for i in s])))
    return tuple(out)


def project_dominant_zeta(n: Sequence) -> tuple[Q, ...]:
    """Nearest point (in B) of the closed dominant cone, zeta coordinates in and out.

    Active-set enumeration: for each set S of simple roots, project onto the face
    {x_i = 0, i in S}; accept if the point is dominant and n - x is a
    nonpositive combination of the alpha_i, i in S (the dual-cone condition).
    Degenerate problems can accept several sets; they must agree on the point.
    """
    c = build_e6_datum().cartan
    n = tuple(Q(x) for x in n)
    found = set()
    if all(x >= 0 for x in n):
        return n
    for s, inv in _face_systems():
        coef = [sum((inv[a][b] * n[s[b]] for b in range(len(s))), Q(0)) for a in range(len(s))]
        if any(x > 0 for x in coef):
            continue
        x = tuple(n[j] - sum((coef[a] * c[s[a]][j] for a in range(len(s))), Q(0)) for j in range(RANK))
        if all(t >= 0 for t in x):
            found.add(x)
    if len(found) != 1:
        raise AssertionError(f"cone projection found {len(found)} candidates")
    return found.pop()


def project_dominant_cone(v: Sequence) -> Vector:
    """Nearest point of the closed dominant cone of the full system (ambient in and out)."""
    return zeta_to_ambient(project_dominant_zeta(zeta_coords(v)))


# ---------------------------------------------------------------- parabolics

@dataclass(frozen=True)
class ParabolicData:
    defining_weight: Vector
    levi_roots: tuple[Vector, ...]
    nilrad_roots: tuple[Vector, ...]
    rho_L: Vector
    rho_u: Vector
    rho_u_cap_p: Vector


def _half_sum(vs: Iterable[Vector]) -> Vector:
    out = zero()
    for v in vs:
        out = add(out, v)
    return scale(Q(1, 2), out)


def build_parabolic(xi: Sequence) -> ParabolicData:
    """q = l + u with Delta(l) = {B(xi, a) = 0} and Delta(u) = {B(xi, a) > 0}.

    rho_L is taken over Delta(l) intersected with Delta+; rho = rho_L + rho_u
    holds when Delta(u) is contained in Delta+, e.g. for dominant xi.
    """
    d = build_e6_datum()
    xi = vec(xi)
    levi = tuple(a for a in d.all_roots if dot(xi, a) == 0)
    nil = tuple(a for a in d.all_roots if dot(xi, a) > 0)
    pos = set(d.positive_roots)
    noncompact = {a for a in d.all_roots if not d.is_compact(a)}
    return ParabolicData(
        defining_weight=xi,
        levi_roots=levi,
        nilrad_roots=nil,
        rho_L=_half_sum(a for a in levi if a in pos),
        rho_u=_half_sum(nil),
        rho_u_cap_p=_half_sum(a for a in nil if a in noncompact),
    )


def classify_range(lambda_L: Sequence, p: ParabolicData) -> Literal["good", "weakly_good", "neither"]:
    shifted = add(vec(lambda_L), p.rho_u)
    pairings = [dot(shifted, a) for a in p.nilrad_roots]
    if all(x > 0 for x in pairings):
        return "good"
    if all(x >= 0 for x in pairings):
        return "weakly_good"
    return "neither"


def hd_shift_dominant(gamma_L: Sequence, p: ParabolicData) -> bool:
    """Whether gamma_L + rho(u cap p) is Delta+(k, t_f)-dominant."""
    return is_dominant(add(vec(gamma_L), p.rho_u_cap_p), "compact")
