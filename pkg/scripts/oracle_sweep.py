"""Compare the closed-form quiver with the monoid-level computation on every
local ring the oracle can handle, and print a timing table.

    python scripts/oracle_sweep.py [--limit 4096]
"""
import argparse
import sys
import time
from pathlib import Path

from affquiver.local_quiver import local_quiver
from affquiver.oracle import oracle_quiver
from affquiver.quiver import isomorphic
from affquiver.rings import RingSpecError, is_chain_ring, local_data, make_ring, prime_power

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))
import zoo  # noqa: E402


def local_rings(limit):
    """Z/p^k and GF(p^k) with |R|^2 <= limit, then the non-chain zoo."""
    for q in range(2, int(limit ** 0.5) + 1):
        try:
            _, k = prime_power(q)
        except RingSpecError:
            continue
        yield f"Z/{q}", make_ring(f"Z/{q}")
        if k > 1:
            yield f"GF({q})", make_ring(f"GF({q})")
    for name, make in zoo.NON_CHAIN.items():
        yield name, make()


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--limit", type=int, default=4096, help="max monoid order |R|^2")
    args = ap.parse_args()
    print(f"{'ring':<24}{'|R|':>5}{'r':>3}{'chain':>7}{'verts':>7}{'arrows':>8}"
          f"{'max mult':>10}{'resid':>10}{'secs':>8}  agree")
    bad = 0
    for name, R in local_rings(args.limit):
        if R.order ** 2 > args.limit:
            continue
        t0 = time.perf_counter()
        report = {}
        brute = oracle_quiver(R, report)
        closed = local_quiver(R)
        ok = brute == closed and isomorphic(brute, closed)
        bad += not ok
        print(f"{name:<24}{R.order:>5}{local_data(R).r:>3}{str(is_chain_ring(R)):>7}"
              f"{len(closed.vertices):>7}{closed.num_arrows:>8}{closed.max_multiplicity():>10}"
              f"{report['max_residual']:>10.1e}{time.perf_counter() - t0:>8.2f}  {ok}")
    sys.exit(1 if bad else 0)


if __name__ == "__main__":
    main()
