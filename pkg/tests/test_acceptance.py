"""One test per acceptance criterion; each records a single PASS/FAIL line."""
import random
import subprocess
import sys
import time
from math import comb

from fricke import reduce as R
from fricke.autaction import filtration_check
from fricke.charpoly import CharPolynomial
from fricke.freegroup import Word
from fricke.graded import (basis_S, basis_T, degree2_monomials, horowitz_quadratic,
                           independence_check, jet3, reduction, relations_deg2)
from fricke.numcheck import _jet_check, char_values, eval_word, lemma_suite, random_representation

TIME_LIMIT = 60.0  # seconds, criteria 1 and 2


def test_reducer_oracle(acceptance):
    R.clear_cache()
    rng = random.Random(20240601)
    start, failures, pairs = time.perf_counter(), 0, 1000
    for k in range(pairs):
        n = 2 + k % 3
        w = Word.from_units(n, [rng.choice((1, -1)) * rng.randint(1, n) for _ in range(rng.randint(0, 8))])
        r = random_representation(n, rng)
        if R.trace_reduce(w).evaluate(char_values(r)) != eval_word(r, w).trace():
            failures += 1
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < TIME_LIMIT
    acceptance("1 reducer oracle", ok, f"{pairs} pairs, {failures} failures, {elapsed:.1f}s (< {TIME_LIMIT:.0f}s)")
    assert ok


def test_identity_suite(acceptance):
    start = time.perf_counter()
    rep = lemma_suite(seed=0, trials=100)
    elapsed = time.perf_counter() - start
    bad = [c.name for c in rep.checks if not c.ok]
    ok = rep.ok and all(c.trials >= 100 for c in rep.checks) and elapsed < TIME_LIMIT
    acceptance("2 identity suite", ok, f"{len(rep.checks)} checks x 100 instances, failing: {bad or 'none'}, "
                                       f"{elapsed:.1f}s (< {TIME_LIMIT:.0f}s)")
    assert ok


def test_gr1_dimension(acceptance):
    with_linear = [r.label for n in range(2, 7) for r in relations_deg2(n)
                   if not r.primed.graded_part(1).is_zero()]
    sizes = [len(basis_T(n)) for n in range(2, 7)]
    formula = [n + comb(n, 2) + comb(n, 3) for n in range(2, 7)]
    ok = not with_linear and sizes == formula == [3, 7, 14, 25, 41]
    acceptance("3 gr1 dimension", ok, f"relations with degree-1 part (n=2..6): {len(with_linear)}; "
                                      f"|T| at n=2..6 = {sizes} = n + C(n,2) + C(n,3)")
    assert ok


def test_gr2_dimension(acceptance):
    info = [independence_check(n) for n in (2, 3, 4)]
    ranks = [i["rank"] for i in info]
    sizes = [len(basis_S(n)) for n in (2, 3, 4)]
    empty = len(relations_deg2(2)) == 0
    (rel,) = relations_deg2(3)
    horowitz = rel.poly == 4 * horowitz_quadratic(3)
    ok = (ranks == [0, 1, 14] and all(i["rank"] == i["expected"] for i in info)
          and sizes == [6, 27, 91] and empty and horowitz)
    acceptance("4 gr2 dimension", ok, f"ranks {ranks}, |S| {sizes}, n=2 empty: {empty}, "
                                      f"n=3 relation = 4 x Horowitz quadratic: {horowitz}")
    assert ok


def test_jet3_completeness(acceptance):
    checked, mismatches, outside = 0, 0, 0
    for n in range(2, 6):
        S = set(basis_S(n))
        reduction(n)
        for seed in (1, 2):
            reduction(n, order_seed=seed)
        for u, v in degree2_monomials(n):
            p = CharPolynomial.var(n, *u, primed=True) * CharPolynomial.var(n, *v, primed=True)
            j = jet3(p)
            outside += any(k not in S for k in j.quadratic)
            mismatches += any(jet3(p, order_seed=s) != j for s in (1, 2))
            checked += 1
    ok = mismatches == 0 and outside == 0
    acceptance("5 jet3 completeness", ok, f"{checked} degree-2 monomials (n=2..5) in span(S); "
                                          f"shuffled-order mismatches: {mismatches}")
    assert ok


def test_commutator_jets(acceptance):
    kinds = ("lcs_trace", "lcs_trace_inverse", "lcs_shift", "lcs_shift_inverse")
    results = {k: _jet_check(k, 60, 7, 1) for k in kinds}
    ok = all(r.ok and r.trials >= 50 for r in results.values())
    detail = ", ".join(f"{k}: {len(r.failures)}/{r.trials} failures" for k, r in results.items())
    acceptance("6 commutator jets", ok, detail)
    assert ok


def _claims(counts):
    return {name: filtration_check(name, 3, count, seed=11) for name, count in counts}


def test_filtration_suite(acceptance):
    res = _claims([("inner_identity", 20), ("a2_in_e1", 20), ("a4_in_e2", 10),
                   ("e1_commutator_in_e2", 10), ("non_ia_not_in_e1", 10)])
    ok = all(r.ok for r in res.values())
    acceptance("7 filtration", ok, ", ".join(f"{k} {r.trials - len(r.failures)}/{r.trials}" for k, r in res.items()))
    assert ok


def test_inn_a2_decomposition(acceptance):
    r = filtration_check("decompose_iff_e1", 3, 30, seed=13)
    acceptance("8 Inn.A(2) decomposition", r.ok,
               f"{r.trials - len(r.failures)}/{r.trials} samples: decomposes iff in E(1), residuals in A(2)")
    assert r.ok


def test_eta1_algebra(acceptance):
    res = _claims([("eta1_additive", 20), ("eta1_inner_zero", 20), ("eta1_equivariant", 10)])
    ok = all(r.ok for r in res.values())
    acceptance("9 eta1 algebra", ok, ", ".join(f"{k} {r.trials - len(r.failures)}/{r.trials}" for k, r in res.items()))
    assert ok


INVOCATIONS = [
    ["reduce", "x1 x2^-1 x3 x1^2", "--n", "3", "--json"],
    ["basis", "--n", "4", "--grade", "2", "--json"],
    ["relations", "--n", "4", "--verify", "5", "--seed", "3", "--json"],
    ["jet", "x1 x2 x3^-1 x1", "--n", "3", "--json"],
    ["act", "--map", "x1 -> x1 x2 x3 x2^-1 x3^-1", "--inv", "x1 -> x1 x3 x2 x3^-1 x2^-1", "--n", "3",
     "--jet", "--json"],
    ["act", "--map", "nielsen:M12", "--n", "3", "--check-e", "1", "--json"],
    ["depth", "--map", "inner:x1", "--n", "3", "--max-k", "3", "--json"],
    ["verify", "--suite", "all", "--n", "3", "--trials", "2", "--seed", "5", "--json", "--threads", "2"],
]


def test_cli_determinism(acceptance):
    def run(argv):
        p = subprocess.run([sys.executable, "-m", "fricke", *argv], capture_output=True)
        return p.returncode, p.stdout
    same = 0
    for argv in INVOCATIONS:
        a, b = run(argv), run(argv)
        same += a == b and a[0] == 0
    ok = same == len(INVOCATIONS)
    acceptance("10 CLI determinism", ok, f"{same}/{len(INVOCATIONS)} invocations byte-identical across two runs")
    assert ok
