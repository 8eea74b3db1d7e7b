"""Run the dissection pipeline over the fixed corpus and random dissections.

    python scripts/stein_corpus.py --random 200 --svg-dir out/
"""
import argparse
import pathlib
import random
import sys
from collections import Counter

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "tests"))

import factories  # noqa: E402
from steinparity.dissection import dual_of, render_svg, stein_check  # noqa: E402

CORPUS = {
    "square, 2 triangles": factories.square_two_triangles,
    "square, 4 triangles": factories.square_four_triangles,
    "square, 6 strips": factories.square_six_strips,
    "square, T-vertex": factories.square_t_vertex,
    "hexagon fan": factories.hexagon_fan,
}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--random", type=int, default=100, help="number of random dissections")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--svg-dir", type=pathlib.Path)
    args = ap.parse_args()

    for name, make in CORPUS.items():
        D = make()
        r = stein_check(D)
        mult = " ".join(f"{k}={v}" for k, v in r.census.items())
        print(f"{name:22s} triangles={r.triangle_count} inserted={r.inserted_degenerate} {mult}: "
              f"{r.conclusion}")
        if args.svg_dir:
            args.svg_dir.mkdir(parents=True, exist_ok=True)
            T, _, _ = dual_of(D)
            slug = name.replace(", ", "_").replace(" ", "-")
            (args.svg_dir / f"{slug}.svg").write_text(render_svg(T, r.multiplicities))

    rng = random.Random(args.seed)
    minima, inserted = Counter(), 0
    for _ in range(args.random):
        r = stein_check(factories.random_dissection(rng))
        minima[r.census["M"]] += 1
        inserted += r.inserted_degenerate
    print(f"{args.random} random dissections: all parity checks passed; "
          f"{inserted} degenerate faces inserted; M histogram {dict(sorted(minima.items(), key=str))}")


if __name__ == "__main__":
    main()
