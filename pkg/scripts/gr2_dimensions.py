"""Table of |T|, |S|, relation counts and elimination ranks for small n."""
import argparse
import time

from fricke.graded import basis_S, basis_T, degree2_monomials, independence_check, relations_deg2


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    args = ap.parse_args()
    print(f"{'n':>2} {'|T|':>4} {'deg2':>6} {'|S|':>5} {'rels':>5} {'rank':>5} {'sec':>6}")
    for n in range(2, args.max_n + 1):
        t0 = time.perf_counter()
        rels = relations_deg2(n)
        info = independence_check(n)
        dt = time.perf_counter() - t0
        print(f"{n:>2} {len(basis_T(n)):>4} {len(degree2_monomials(n)):>6} {len(basis_S(n)):>5} "
              f"{len(rels):>5} {info['rank']:>5} {dt:>6.2f}   tags {rels.tags()}")


if __name__ == "__main__":
    main()
