"""Sample automorphisms and report A-depth, E-depth, decomposition and eta_1 rank."""
import argparse
import random

from fricke.autaction import decompose_inn_a2, e_depth, eta1
from fricke.freegroup import aut_depth
from fricke.samples import sample_a2, sample_a4, sample_e1, sample_ia, sample_inner, sample_non_ia


def rank(m) -> int:
    rows = [list(r) for r in m.entries]
    r = 0
    for c in range(len(m.cols)):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--per-kind", type=int, default=3)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    kinds = [("inner", sample_inner), ("IA", sample_ia), ("A(2)", sample_a2), ("A(4)", sample_a4),
             ("Inn.A(2)", sample_e1), ("Nielsen", sample_non_ia)]
    print(f"{'kind':<9} {'A-depth':>7} {'E-depth':>7} {'decomp':>7} {'rank eta1':>9}")
    for name, make in kinds:
        for _ in range(args.per_kind):
            a = make(rng, args.n)
            e = e_depth(a)
            d = decompose_inn_a2(a)
            r = rank(eta1(a)) if e >= 1 else "-"
            print(f"{name:<9} {aut_depth(a, 4):>7} {e:>7} {'yes' if d else 'no':>7} {r:>9}")


if __name__ == "__main__":
    main()
