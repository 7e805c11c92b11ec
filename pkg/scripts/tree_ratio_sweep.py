#!/usr/bin/env python3
"""Sweep random tree instances and watch the cost ratio against log2 n.

Example:
    python3 scripts/tree_ratio_sweep.py --n 5..10 --seeds 50 --links 18
"""

import argparse
import math
import sys

from wtap.generators import gen_random
from wtap.oracles import opt_tree_enum
from wtap.tree_online import TreeSolver


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", default="5..10")
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--links", type=int, default=18, help="total link budget")
    ap.add_argument("--requests", type=int, default=10)
    ap.add_argument("--cost-spread", type=float, default=16.0)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    lo, _, hi = args.n.partition("..")
    sizes = range(int(lo), int(hi or lo) + 1)

    points = []
    print("n,seed,cost,opt,ratio")
    for n in sizes:
        worst = 0.0
        extras = max(0, args.links - (n - 1))
        for s in range(args.seeds):
            seed = args.seed + 10007 * n + s
            inst, _ = gen_random("tree", n, extras, args.cost_spread, seed,
                                 request_count=args.requests)
            solver = TreeSolver(inst)
            solver.run([(r.s, r.t) for r in inst.requests])
            opt = opt_tree_enum(inst).opt_cost
            ratio = solver.cost_total / opt if opt else float("nan")
            print(f"{n},{seed},{solver.cost_total},{opt},{ratio:.4f}")
            if opt:
                points.append((math.log2(n), ratio))
                worst = max(worst, ratio)
        print(f"# n={n} max ratio {worst:.4f}", file=sys.stderr)

    if points:
        slope = sum(x * r for x, r in points) / sum(x * x for x, _ in points)
        print(f"# ratio/log2(n) slope through origin: {slope:.4f}",
              file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
