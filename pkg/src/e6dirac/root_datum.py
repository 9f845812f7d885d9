"""Exact root datum of E6(-14).

Vectors live in the 8-coordinate realization where the bilinear form B is the
plain dot product and

    alpha1 = 1/2(1,-1,-1,-1,-1,-1,-1,1), alpha2 = e1+e2, alpha_i = e_{i-1}-e_{i-2} (3 <= i <= 6).

Three coordinate systems are used throughout the package:

* ambient: 8 Fractions (``Vector``);
* zeta: 6 coordinates with respect to the fundamental weights zeta_1..zeta_6
  (infinitesimal characters, atlas lambda/nu);
* K-basis: [a, b, c, d, e, f] meaning a*w1 + ... + e*w5 + f/4 * zeta
  (highest weights of K-types).

All arithmetic is exact. The heavy enumerations in other modules work on
integer-scaled zeta coordinates, where a simple reflection is an integer row
operation; the Cartan data needed for that is carried on ``RootDatum``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction as Q
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

Vector = tuple[Q, ...]
KWeight = tuple[Q, ...]
ZetaVector = tuple[Q, ...]

RANK = 6
DIM = 8

# zeta_1-coefficient of w_1..w_5 and of the central coordinate f (K-basis -> zeta-basis)
_K_TO_ZETA1 = (Q(-3, 4), Q(-5, 4), Q(-3, 2), Q(-1), Q(-1, 2), Q(1, 4))


# ---------------------------------------------------------------- vector helpers

def vec(xs: Iterable) -> Vector:
    return tuple(Q(x) for x in xs)


def dot(u: Sequence, v: Sequence) -> Q:
    if len(u) != len(v):
        raise ValueError("dimension mismatch")
    return sum((Q(a) * b for a, b in zip(u, v)), Q(0))


def add(u: Sequence, v: Sequence) -> Vector:
    return tuple(Q(a) + b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(Q(a) - b for a, b in zip(u, v))


def scale(c, v: Sequence) -> Vector:
    c = Q(c)
    return tuple(c * a for a in v)


def zero(n: int = DIM) -> Vector:
    return (Q(0),) * n


def reflect(v: Sequence, alpha: Sequence) -> Vector:
    """Reflection of v in a root alpha (B(alpha, alpha) = 2)."""
    return sub(v, scale(dot(v, alpha), alpha))


def solve(a: Sequence[Sequence], b: Sequence) -> list[Q]:
    """Solve a square system exactly by Gauss-Jordan elimination."""
    n = len(a)
    m = [[Q(x) for x in row] + [Q(y)] for row, y in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular system")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def invert(a: Sequence[Sequence]) -> tuple[tuple[Q, ...], ...]:
    n = len(a)
    cols = [solve(a, [Q(int(i == j)) for i in range(n)]) for j in range(n)]
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


# ---------------------------------------------------------------- serialization

def format_rational(x) -> str:
    x = Q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_vector(v: Sequence) -> str:
    """Comma-separated "p/q" entries, denominator omitted when 1."""
    return ",".join(format_rational(x) for x in v)


def format_weight(v: Sequence) -> str:
    """Bracketed tuple in the notation of the printed tables, e.g. [1, 0, 0, 0, 0, 3]."""
    return "[" + ", ".join(format_rational(x) for x in v) + "]"


_NUM = re.compile(r"^\s*-?\d+(\s*/\s*\d+)?\s*$")


def parse_vector(text: str, length: int | None = None) -> tuple[Q, ...]:
    """Parse "[1, 0, -3/2]", "1,0,-3/2" or "[1,0,-3]/2" (atlas style) into Fractions."""
    s = text.strip()
    denom = Q(1)
    m = re.match(r"^\[(.*)\]\s*/\s*(\d+)$", s)
    if m:
        s, denom = m.group(1), Q(int(m.group(2)))
    s = s.strip().lstrip("[").rstrip("]")
    parts = [p for p in s.split(",")]
    if not all(_NUM.match(p) for p in parts):
        raise ValueError(f"cannot parse vector {text!r}")
    out = tuple(Q(p.replace(" ", "")) / denom for p in parts)
    if length is not None and len(out) != length:
        raise ValueError(f"expected {length} entries, got {len(out)} in {text!r}")
    return out


# ---------------------------------------------------------------- the datum

@dataclass(frozen=True)
class RootDatum:
    simple_roots: tuple[Vector, ...]
    all_roots: tuple[Vector, ...]
    positive_roots: tuple[Vector, ...]
    compact_positive: tuple[Vector, ...]
    noncompact_positive: tuple[Vector, ...]
    fundamental_weights: tuple[Vector, ...]
    k_simple_roots: tuple[Vector, ...]
    k_fundamental_weights: tuple[Vector, ...]
    rho: Vector
    rho_c: Vector
    rho_n: Vector
    zeta: Vector
    beta: Vector
    cartan: tuple[tuple[int, ...], ...]
    cartan_inverse: tuple[tuple[Q, ...], ...]
    # simple-root coefficients of each positive root, same order as positive_roots
    positive_coeffs: tuple[tuple[int, ...], ...]
    _root_index: dict = field(repr=False, compare=False)

    @property
    def compact_indices(self) -> tuple[int, ...]:
        """Indices (0-based) of the simple roots that are compact: alpha2..alpha6."""
        return (1, 2, 3, 4, 5)

    def is_root(self, v: Sequence) -> bool:
        return tuple(Q(x) for x in v) in self._root_index

    def root_index(self, v: Sequence) -> int:
        return self._root_index[tuple(Q(x) for x in v)]

    def is_compact(self, alpha: Sequence) -> bool:
        return dot(alpha, self.zeta) == 0

    @property
    def gram3(self) -> np.ndarray:
        """3 * C^{-1} as an integer matrix: B(u, v) = u^T gram3 v / 3 in zeta coordinates."""
        return _gram3()

    @property
    def cartan_np(self) -> np.ndarray:
        return _cartan_np()


def _closure(simple: Sequence[Vector]) -> list[Vector]:
    roots = set(simple) | {scale(-1, s) for s in simple}
    while True:
        new = set(roots)
        for a, b in combinations(roots, 2):
            if dot(a, b) == -1:
                new.add(add(a, b))
        if len(new) == len(roots):
            return sorted(roots)
        roots = new


def _simple_roots() -> tuple[Vector, ...]:
    h = Q(1, 2)

    def e(i: int) -> Vector:
        return tuple(Q(int(k == i - 1)) for k in range(DIM))

    a1 = (h, -h, -h, -h, -h, -h, -h, h)
    rest = [add(e(1), e(2))] + [sub(e(i - 1), e(i - 2)) for i in range(3, 7)]
    return (a1, *rest)


@lru_cache(maxsize=None)
def build_e6_datum() -> RootDatum:
    """Construct the (cached, immutable) E6(-14) datum and check its invariants."""
    simple = _simple_roots()
    cartan = tuple(tuple(int(dot(a, b)) for b in simple) for a in simple)
    roots = _closure(simple)

    def coeffs(r: Vector) -> tuple[int, ...]:
        sol = solve(cartan, [dot(r, s) for s in simple])
        assert all(x.denominator == 1 for x in sol)
        return tuple(int(x) for x in sol)

    co = {r: coeffs(r) for r in roots}
    pos = sorted((r for r in roots if all(c >= 0 for c in co[r])), key=lambda r: (sum(co[r]), co[r]))
    compact = tuple(r for r in pos if co[r][0] == 0)
    noncompact = tuple(r for r in pos if co[r][0] == 1)

    cinv = invert(cartan)
    fund = tuple(
        tuple(sum((cinv[i][j] * simple[j][k] for j in range(RANK)), Q(0)) for k in range(DIM))
        for i in range(RANK)
    )
    zeta = fund[0]
    kfund = tuple(add(fund[i + 1], scale(_K_TO_ZETA1[i], zeta)) for i in range(5))

    half = lambda vs: scale(Q(1, 2), [sum((v[k] for v in vs), Q(0)) for k in range(DIM)])
    rho, rho_c = half(pos), half(compact)
    rho_n = sub(rho, rho_c)
    beta = max(noncompact, key=lambda r: sum(co[r]))

    d = RootDatum(
        simple_roots=simple,
        all_roots=tuple(roots),
        positive_roots=tuple(pos),
        compact_positive=compact,
        noncompact_positive=noncompact,
        fundamental_weights=fund,
        k_simple_roots=simple[1:],
        k_fundamental_weights=kfund,
        rho=rho,
        rho_c=rho_c,
        rho_n=rho_n,
        zeta=zeta,
        beta=beta,
        cartan=cartan,
        cartan_inverse=cinv,
        positive_coeffs=tuple(co[r] for r in pos),
        _root_index={r: i for i, r in enumerate(roots)},
    )
    _check(d)
    return d


def _check(d: RootDatum) -> None:
    # construction failures are bugs, never runtime conditions
    assert len(d.all_roots) == 72 and len(d.positive_roots) == 36
    assert len(d.compact_positive) == 20 and len(d.noncompact_positive) == 16
    assert all(dot(r, r) == 2 for r in d.all_roots)
    assert d.rho == vec((0, 1, 2, 3, 4, -4, -4, 4))
    assert d.rho_c == vec((0, 1, 2, 3, 4, 0, 0, 0))
    assert d.zeta == vec((0, 0, 0, 0, 0, Q(-2, 3), Q(-2, 3), Q(2, 3)))
    assert d.beta == vec([Q(1, 2)] * 5 + [Q(-1, 2)] * 2 + [Q(1, 2)])
    for i, z in enumerate(d.fundamental_weights):
        for j, a in enumerate(d.simple_roots):
            assert dot(z, a) == int(i == j)
    for r in d.all_roots:
        assert (dot(r, d.zeta) == 0) == (r in d.compact_positive or scale(-1, r) in d.compact_positive)
    assert all(dot(r, d.zeta) > 0 for r in d.noncompact_positive)
    assert all(dot(w, d.zeta) == 0 for w in d.k_fundamental_weights)


@lru_cache(maxsize=None)
def _gram3() -> np.ndarray:
    d = build_e6_datum()
    g = np.array([[int(3 * x) for x in row] for row in d.cartan_inverse], dtype=np.int64)
    g.setflags(write=False)
    return g


@lru_cache(maxsize=None)
def _cartan_np() -> np.ndarray:
    c = np.array(build_e6_datum().cartan, dtype=np.int64)
    c.setflags(write=False)
    return c


# ---------------------------------------------------------------- coordinates

def coroot_pairing(v: Sequence, alpha: Sequence) -> Q:
    """<v, alpha^vee> = 2B(v, alpha)/B(alpha, alpha) = B(v, alpha)."""
    d = build_e6_datum()
    if not d.is_root(alpha):
        raise ValueError(f"{format_vector(alpha)} is not a root")
    return dot(v, alpha)


def zeta_to_ambient(n: Sequence) -> Vector:
    d = build_e6_datum()
    out = zero()
    for c, z in zip(n, d.fundamental_weights):
        if c:
            out = add(out, scale(c, z))
    return out


def zeta_coords(v: Sequence) -> ZetaVector:
    """Coordinates of v in the basis zeta_1..zeta_6; v must lie in the span of the roots."""
    d = build_e6_datum()
    v = vec(v)
    n = tuple(dot(v, a) for a in d.simple_roots)
    if zeta_to_ambient(n) != v:
        raise ValueError("not in weight space")
    return n


def ktype_to_zeta(mu: Sequence) -> ZetaVector:
    a, b, c, dd, e, f = (Q(x) for x in mu)
    first = sum((k * x for k, x in zip(_K_TO_ZETA1, (a, b, c, dd, e, f))), Q(0))
    return (first, a, b, c, dd, e)


def zeta_to_ktype(n: Sequence) -> KWeight:
    n1, a, b, c, dd, e = (Q(x) for x in n)
    f = 4 * n1 + 3 * a + 5 * b + 6 * c + 4 * dd + 2 * e
    return (a, b, c, dd, e, f)


def ktype_to_ambient(mu: Sequence) -> Vector:
    """a*w1 + ... + e*w5 + f/4*zeta, through the zeta-basis identity."""
    return zeta_to_ambient(ktype_to_zeta(mu))


def ambient_to_ktype(v: Sequence) -> KWeight:
    return zeta_to_ktype(zeta_coords(v))


def is_ktype_weight(mu: Sequence) -> bool:
    """True iff [a..f] is the highest weight of a K(R)-type."""
    mu = tuple(Q(x) for x in mu)
    if len(mu) != 6 or any(x.denominator != 1 for x in mu):
        return False
    if any(x < 0 for x in mu[:5]):
        return False
    return ktype_to_zeta(mu)[0].denominator == 1


def dim_ktype(mu: Sequence) -> int:
    """Weyl dimension formula over the compact positive roots."""
    d = build_e6_datum()
    n = ktype_to_zeta(mu)
    if any(x < 0 or x.denominator != 1 for x in n[1:]):
        raise ValueError(f"{format_weight(mu)} is not Delta+(k)-dominant integral")
    num, den = Q(1), Q(1)
    for co in d.positive_coeffs:
        if co[0]:
            continue
        num *= sum((c * (x + 1) for c, x in zip(co[1:], n[1:])), Q(0))
        den *= sum(co[1:])
    out = num / den
    assert out.denominator == 1
    return int(out)


def norm_sq(v: Sequence) -> Q:
    return dot(v, v)


def zeta_norm_sq(n: Sequence) -> Q:
    """B(v, v) for v given in zeta coordinates."""
    cinv = build_e6_datum().cartan_inverse
    return sum((Q(n[i]) * cinv[i][j] * n[j] for i in range(RANK) for j in range(RANK)), Q(0))
