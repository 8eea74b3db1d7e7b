"""Seeded sweep over random balanced graphs: census parity plus certificates.

    python scripts/parity_sweep.py --count 10000 --max-vertices 60
"""
import argparse
import json
import random
import time
from collections import Counter

from steinparity.certificate import verify_certificate
from steinparity.gen import GenConfig, generate
from steinparity.graph import census, lemma1_audit, edge_nesting_audit
from steinparity.reduction import reduce_and_certify


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=2000)
    ap.add_argument("--max-vertices", type=int, default=60)
    ap.add_argument("--bound", type=int, default=4096)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--max-depth", type=int, default=5,
                    help="congruence depths 0..D are mixed in to reach odd M")
    ap.add_argument("--certify", action="store_true", help="also reduce and verify each instance")
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    minima, branches = Counter(), Counter()
    odd = 0
    t0 = time.perf_counter()
    for i in range(args.count):
        cfg = GenConfig(vertices=2 * rng.randint(1, args.max_vertices // 2), seed=rng.getrandbits(32),
                        bound=args.bound, scale_exp=i % 4,
                        congruence_depth=rng.randint(0, args.max_depth))
        G = generate(cfg)
        lemma1_audit(G)
        edge_nesting_audit(G)
        c = census(G)
        odd += not c.even
        minima[c.summary()["M"]] += 1
        if args.certify:
            cert = reduce_and_certify(G)
            verify_certificate(G, cert)
            branches[">".join(cert.branches)] += 1
    elapsed = time.perf_counter() - t0

    summary = {"instances": args.count, "odd_parity": odd, "seconds": round(elapsed, 2),
               "minimum_histogram": {str(k): v for k, v in sorted(minima.items(), key=lambda kv: (kv[0] == "inf", kv[0] if kv[0] != "inf" else 0))},
               "reduction_paths": dict(branches.most_common())}
    if args.json:
        print(json.dumps(summary, indent=2))
        return
    print(f"{args.count} graphs, {odd} with odd census parity, {elapsed:.1f}s")
    print("M histogram:", summary["minimum_histogram"])
    for path, n in branches.most_common(8):
        print(f"  {n:6d}  {path}")


if __name__ == "__main__":
    main()
