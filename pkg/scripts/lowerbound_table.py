#!/usr/bin/env python3
"""Drive contestants through the adaptive adversary and tabulate ratios.

The greedy contestant's ratio doubles with every extra level; the
primal-dual contestant grows roughly linearly in k, matching its
O(log n) guarantee.
"""

import argparse
import sys

from wtap.adversary import CONTESTANTS, HierarchicalInstance, adversary_drive


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--B", type=int, default=2)
    ap.add_argument("--k-max", type=int, default=5)
    ap.add_argument("--algos", default="greedy,alg1,top")
    args = ap.parse_args()

    print("algo,B,k,n,requests,alg_cost,opt,ratio,cert_ok")
    for name in args.algos.split(","):
        name = name.strip()
        if name not in CONTESTANTS:
            print(f"# skipping unknown contestant {name!r}", file=sys.stderr)
            continue
        for k in range(1, args.k_max + 1):
            inst = HierarchicalInstance(args.B, k)
            rep = adversary_drive(inst, name)
            print(f"{name},{rep.B},{rep.k},{rep.n},{rep.request_count},"
                  f"{rep.alg_cost},{rep.opt},{rep.ratio:.4f},{rep.cert_ok}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
