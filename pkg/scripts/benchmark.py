"""Time fold (inside pass plus 1000 samples) on homolog-style alignments.

usage: python3 scripts/benchmark.py [N ...] [--rows 4] [--seed 9] [--full-masks]
"""
import argparse
import time

from jointfold.compat import CompatibilityMasks
from jointfold.energy import EnergyModel
from jointfold.engine import pair_probabilities, partition_function, sample, warmup
from jointfold.instances import benchmark_case


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("sizes", nargs="*", type=int, default=[10, 20, 30])
    ap.add_argument("--rows", type=int, default=4)
    ap.add_argument("--seed", type=int, default=9)
    ap.add_argument("--full-masks", action="store_true", help="allow every arc (worst case)")
    ap.add_argument("--outside", action="store_true", help="also time pair probabilities")
    args = ap.parse_args()

    t0 = time.perf_counter()
    warmup()
    print(f"compile/warm-up {time.perf_counter() - t0:.1f}s")
    prev = None
    for n in args.sizes:
        pa, masks = benchmark_case(args.seed, n, n, args.rows)
        if args.full_masks:
            masks = CompatibilityMasks.full(n, n)
        dens = masks.exterior.mean()
        t0 = time.perf_counter()
        t = partition_function(pa, masks, EnergyModel())
        t_in = time.perf_counter() - t0
        sample(t, 1000, seed=0)
        t_fold = time.perf_counter() - t0
        line = f"N=M={n:3d} m={args.rows} ext-density {dens:.2f}  inside {t_in:7.2f}s  fold {t_fold:7.2f}s"
        if args.outside:
            t1 = time.perf_counter()
            pair_probabilities(t)
            line += f"  probs {time.perf_counter() - t1:7.2f}s"
        if prev:
            line += f"  growth {t_fold / prev[1]:.2f} (n^6 ratio {(n / prev[0]) ** 6:.2f})"
        print(line, flush=True)
        prev = (n, t_fold)


if __name__ == "__main__":
    main()
