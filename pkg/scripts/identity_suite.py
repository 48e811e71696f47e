"""Run the identity suite and print per-check timings."""
import argparse
import time

from fricke.numcheck import lemma_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=3)
    args = ap.parse_args()
    t0 = time.perf_counter()
    rep = lemma_suite(args.seed, args.trials, 1, args.n)
    for c in rep.checks:
        print(f"{'PASS' if c.ok else 'FAIL'} {c.name:<36} {c.trials:>5} trials")
    print(f"total {time.perf_counter() - t0:.1f}s, all ok: {rep.ok}")


if __name__ == "__main__":
    main()
