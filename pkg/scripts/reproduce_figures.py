"""Write DOT, JSON and a text summary for the worked examples Z/4, Z/8, Z/9, Z/6.

    python scripts/reproduce_figures.py --out figures/
"""
import argparse
from pathlib import Path

from affquiver.local_quiver import affine_quiver
from affquiver.rings import make_ring

RINGS = ["Z/4", "Z/8", "Z/9", "Z/6", "Z/2", "Z/3"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="figures")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for spec in RINGS:
        q = affine_quiver(make_ring(spec))
        stem = spec.replace("/", "")
        (out / f"{stem}.dot").write_text(q.to_dot())
        (out / f"{stem}.json").write_text(q.to_json() + "\n")
        print(f"== {spec}")
        print(q.to_text())


if __name__ == "__main__":
    main()
