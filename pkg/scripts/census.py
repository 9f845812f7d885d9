"""Print the u-small census and the Omega partition sizes.

Usage: python scripts/census.py [--fixtures DIR]
"""

import argparse
import time

from e6dirac.fixtures import fixture_dir, load_involutions
from e6dirac.norms import enumerate_usmall
from e6dirac.omega import distinct_thetas, omega_partition


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fixtures")
    args = ap.parse_args()

    t0 = time.perf_counter()
    usmall = enumerate_usmall()
    print(f"u-small K-types   {len(usmall):6d}   ({time.perf_counter() - t0:.1f}s)")

    recs = load_involutions(fixture_dir(args.fixtures) / "kgb_involutions.json")
    t0 = time.perf_counter()
    p = omega_partition(recs, usmall)
    print(f"involutions       {len(recs):6d}   ({len(distinct_thetas(recs))} distinct)")
    print(f"Omega             {len(p.omega):6d}")
    print(f"Omega_1           {len(p.omega1):6d}")
    print(f"Omega_2           {len(p.omega2):6d}")
    print(f"Omega_3           {len(p.omega3):6d}")
    print(f"V                 {len(p.V):6d}   ({time.perf_counter() - t0:.1f}s)")
    for v in sorted(p.V):
        print("  [" + ",".join(map(str, v)) + "]")


if __name__ == "__main__":
    main()
