"""Regenerate the derived fixtures: KGB involutions, the failure-case K-types, and the checksum manifest.

The involution matrices are reconstructed from the root system rather than
exported from atlas. E6(-14) has real rank 2, so theta_x is the identity, a
reflection s_b, or a product s_b s_c of two orthogonal reflections. The fibers
over these classes have sizes 27, 6 and 1, which gives 27 + 36*6 + 270 = 513
KGB elements; the fully supported ones are the 7 reflections in full-support
roots (6 elements each) and the 128 orthogonal pairs with full joint support,
170 in all. Those counts are asserted below.

Table rows pin down theta_x for the indices they mention: theta must satisfy
nu = (Lambda - theta Lambda)/2 and 1/2(1 + theta) lambda + nu = Lambda. The
remaining fully supported indices receive the leftover involutions in a fixed
order and are marked "assigned": every set-level count (Omega and its parts)
depends only on the set of distinct matrices, which is exact.

Usage: python scripts/build_fixtures.py [--out fixtures]
"""

from __future__ import annotations

import argparse
import hashlib
import itertools
import json
from fractions import Fraction as Q
from pathlib import Path

import numpy as np

from e6dirac.fixtures import (
    FULLY_SUPPORTED_KGB,
    FailureFixture,
    dump_failure,
    dump_involutions,
    load_integral,
    load_scattered,
)
from e6dirac.norms import ktype_to_zeta4, zeta4_to_ktype
from e6dirac.omega import FULL_SUPPORT, make_record
from e6dirac.root_datum import build_e6_datum, dot, zeta_coords, zeta_to_ambient
from e6dirac.weyl import WeylElement, dominate_batch

# rows printed outside the two tables
EXTRA_PARAMETERS = [
    (429, "-1,-1,5,-2,3,1", "-1/2,-1/2,3,-2,2,0", "0,0,1,0,1,1"),
    (220, "2,-2,-1,3,1,0", "3/2,-2,-1/2,1,1,-3/2", "1,0,0,1,1,1"),
]

# atlas highest_weight printouts of lowest K-types at Lambda = [0,0,1,1,1,7]
FAILURE_ATLAS = [
    (0, 0, -6, 6, -5, 5), (1, 1, -7, 7, -6, 6), (0, 1, -7, 7, -5, 6), (0, 0, -8, 9, -6, 6),
    (0, 0, 0, 0, 5, -3), (1, 0, 1, -1, 5, -3), (0, 0, 3, -2, 5, -3), (0, 0, 5, -5, 7, -3),
    (0, 1, 4, -4, 6, -3), (1, 1, 3, -3, 5, -2), (0, 1, 3, -2, 5, -3), (1, 0, -3, 3, 4, -3),
    (0, 0, 2, -2, 7, -3), (0, 0, -3, 4, 3, -2),
]
FAILURE_INFCHAR = (0, 0, 1, 1, 1, 7)


def reflection(beta) -> WeylElement:
    m = [[4 * ((r == c) - beta[r] * beta[c]) for c in range(8)] for r in range(8)]
    return WeylElement(np.array([[int(x) for x in row] for row in m]))


def involution_classes():
    """(kind, roots, theta, fully_supported) for every non-identity involution class."""
    d = build_e6_datum()
    pos = d.positive_roots
    coeff = dict(zip(pos, d.positive_coeffs))
    out = []
    for b in pos:
        out.append(("reflection", (b,), reflection(b), all(c > 0 for c in coeff[b])))
    for b, c in itertools.combinations(pos, 2):
        if dot(b, c) == 0:
            full = all(x > 0 or y > 0 for x, y in zip(coeff[b], coeff[c]))
            out.append(("pair", (b, c), reflection(b) * reflection(c), full))
    return out


def matches(theta: WeylElement, lam, nu, infchar) -> bool:
    big = zeta_to_ambient(infchar)
    nu_calc = zeta_coords([(x - y) / 2 for x, y in zip(big, theta.act(big))])
    if nu_calc != nu:
        return False
    la = zeta_to_ambient(lam)
    got = [(x + y) / 2 + z for x, y, z in zip(la, theta.act(la), zeta_to_ambient(nu))]
    return tuple(got) == tuple(big)


def parse(s):
    return tuple(Q(x) for x in s.split(","))


def build_involutions(root: Path):
    classes = involution_classes()
    refl = [c for c in classes if c[0] == "reflection"]
    pairs = [c for c in classes if c[0] == "pair"]
    assert len(refl) == 36 and len(pairs) == 270
    assert 27 + 6 * len(refl) + len(pairs) == 513
    fs = [c for c in classes if c[3]]
    fs_refl = [c for c in fs if c[0] == "reflection"]
    fs_pairs = [c for c in fs if c[0] == "pair"]
    assert len(fs_refl) == 7 and len(fs_pairs) == 128
    assert 6 * len(fs_refl) + len(fs_pairs) == len(FULLY_SUPPORTED_KGB) == 170
    for c in fs:
        assert make_record(0, c[2]).support == FULL_SUPPORT

    rows = [(r.x, r.lam, r.nu, r.infchar) for r in load_scattered(root / "scattered.tsv")]
    rows += [(r.x, r.lam, r.nu, r.infchar) for r in load_integral(root / "fs_integral.tsv")]
    rows += [(x, parse(l), parse(n), tuple(int(v) for v in L.split(","))) for x, l, n, L in EXTRA_PARAMETERS]

    # each reflection class has 6 KGB elements above it, each pair class one:
    # assign rows to slots by bipartite matching (augmenting paths)
    slots = [(k, i) for k, c in enumerate(classes) for i in range(6 if c[0] == "reflection" else 1)]
    rows = sorted({r[0]: r for r in rows}.values())
    cands = {}
    for x, lam, nu, infchar in rows:
        ks = [k for k, c in enumerate(classes) if matches(c[2], lam, nu, infchar)]
        if not ks:
            raise SystemExit(f"x={x}: no involution reproduces the printed parameter")
        cands[x] = ks
    slot_of_class = {}
    for s_id, (k, _) in enumerate(slots):
        slot_of_class.setdefault(k, []).append(s_id)
    owner: dict[int, int] = {}

    def augment(x, seen):
        for k in cands[x]:
            for s_id in slot_of_class[k]:
                if s_id in seen:
                    continue
                seen.add(s_id)
                if s_id not in owner or augment(owner[s_id], seen):
                    owner[s_id] = x
                    return True
        return False

    for x in sorted(cands, key=lambda x: (len(cands[x]), x)):
        if not augment(x, set()):
            raise SystemExit(f"x={x}: no consistent assignment of involutions to the printed rows")
    chosen = {x: slots[s_id][0] for s_id, x in owner.items()}
    capacity = {k: len(v) for k, v in slot_of_class.items()}
    assigned: dict[int, tuple] = {}
    notes: dict[int, str] = {}
    auxiliary = []
    for x in sorted(chosen):
        c = classes[chosen[x]]
        capacity[chosen[x]] -= 1
        note = "matched" if len(cands[x]) == 1 else f"matched:{len(cands[x])}-candidates"
        if x in FULLY_SUPPORTED_KGB:
            if not c[3]:
                raise SystemExit(f"x={x}: matched involution is not fully supported")
            assigned[x], notes[x] = c, note
        else:
            auxiliary.append(make_record(x, c[2], provenance=note))

    index = {id(c): k for k, c in enumerate(classes)}
    leftovers = [c for c in fs_refl for _ in range(capacity[index[id(c)]])]
    leftovers += [c for c in fs_pairs if capacity[index[id(c)]] > 0]
    free_x = sorted(FULLY_SUPPORTED_KGB - set(assigned))
    assert len(leftovers) == len(free_x)
    for x, c in zip(free_x, leftovers):
        assigned[x], notes[x] = c, "assigned"
    records = [make_record(x, assigned[x][2], provenance=notes[x]) for x in sorted(assigned)]
    distinct = {r.theta.scaled.tobytes() for r in records}
    assert len(distinct) == 135
    matched = sum(1 for r in records if r.provenance.startswith("matched"))
    print(f"involutions: {len(records)} records, {len(distinct)} distinct, {matched} matched to printed rows")
    return records, auxiliary


def zeta_weyl_group() -> list[np.ndarray]:
    """All of W as integer matrices acting on zeta coordinates (orbit of rho)."""
    c = build_e6_datum().cartan_np
    eye = np.eye(6, dtype=np.int64)
    gens = [eye - np.outer(c[i], eye[i]) for i in range(6)]
    rho = np.ones(6, dtype=np.int64)
    seen = {tuple(rho): eye}
    frontier = [eye]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                w2 = s @ w
                key = tuple(w2 @ rho)
                if key not in seen:
                    seen[key] = w2
                    nxt.append(w2)
        frontier = nxt
    assert len(seen) == 51840
    return list(seen.values())


def build_failure(root: Path) -> tuple[FailureFixture, int]:
    """Convert atlas highest weights to the K-basis.

    The two branch fixtures give eight (atlas weight, K-weight) pairs. Every
    w in W sending all eight atlas vectors (read as zeta coordinates) to the
    K-weights is a candidate conversion; the conversion of the failure
    vectors, followed by Delta+(k)-dominance, must not depend on the choice.
    """
    pairs = []
    for name in ("branch_ex61.json", "branch_ex62.json"):
        data = json.loads((root / name).read_text())
        for (mu, _), printed in zip(data["ktypes"], data["printed"]):
            pairs.append((printed["atlas_highest_weight"], mu))
    src = np.array([[4 * x for x in a] for a, _ in pairs]).T
    dst = np.array([ktype_to_zeta4(mu) for _, mu in pairs]).T
    hits = [w for w in zeta_weyl_group() if (w @ src == dst).all()]
    assert hits, "no Weyl element converts the atlas coordinates"
    images = set()
    for w in hits:
        rows = np.array([w @ (4 * np.array(a)) for a in FAILURE_ATLAS])
        dom, _ = dominate_batch(rows, "compact")
        images.add(tuple(zeta4_to_ktype(r) for r in dom))
    assert len(images) == 1, "conversion depends on the chosen Weyl element"
    lkts = images.pop()
    print(f"failure case: {len(hits)} candidate conversions, all agree")
    return FailureFixture(FAILURE_INFCHAR, lkts), len(hits)


def write_manifest(root: Path) -> None:
    lines = []
    for p in sorted(root.iterdir()):
        if p.is_file() and p.name != "SHA256SUMS":
            lines.append(f"{hashlib.sha256(p.read_bytes()).hexdigest()}  {p.name}")
    (root / "SHA256SUMS").write_text("\n".join(lines) + "\n")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "fixtures")
    args = ap.parse_args()
    root = args.out
    records, auxiliary = build_involutions(root)
    (root / "kgb_involutions.json").write_text(dump_involutions(records))
    (root / "kgb_auxiliary.json").write_text(dump_involutions(auxiliary))
    failure, n_hits = build_failure(root)
    data = json.loads(dump_failure(failure))
    data["atlas_highest_weight"] = [list(a) for a in FAILURE_ATLAS]
    data["conversion_candidates"] = n_hits
    (root / "failure_0011117.json").write_text(json.dumps(data, indent=1) + "\n")
    write_manifest(root)


if __name__ == "__main__":
    main()
