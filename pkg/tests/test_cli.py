import json

import pytest

from fricke.charpoly import CharPolynomial
from fricke.cli import main
from fricke.graded import JetJ3

IA = ["--map", "x1 -> x1 x2 x3 x2^-1 x3^-1", "--inv", "x1 -> x1 x3 x2 x3^-1 x2^-1"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_reduce(capsys):
    assert run(capsys, "reduce", "x1 x2^-1", "--n", "2")[:2] == (0, "t1*t2 - t12\n")
    code, out, _ = run(capsys, "reduce", "x1 x2^-1", "--n", "2", "--primed", "--json")
    p = CharPolynomial.from_json(out)
    assert code == 0 and p.primed and str(p) == "t1'*t2' + 2*t1' + 2*t2' - t12'"


def test_basis(capsys):
    code, out, _ = run(capsys, "basis", "--n", "3", "--grade", "2")
    assert code == 0 and len(out.splitlines()) == 1 + 27
    code, out, _ = run(capsys, "basis", "--n", "4", "--grade", "1", "--json")
    assert json.loads(out)["size"] == 14


def test_relations(capsys):
    code, out, _ = run(capsys, "relations", "--n", "3")
    assert code == 0 and out.startswith("# 1 relations")
    code, out, _ = run(capsys, "relations", "--n", "4", "--verify", "5", "--seed", "2", "--json")
    assert code == 0 and json.loads(out)["ok"]


def test_jet_round_trip(capsys):
    code, out, _ = run(capsys, "jet", "x1 x2^-1", "--n", "2", "--json")
    obj = json.loads(out)
    assert obj == {"linear": {"t_1": "2", "t_12": "-1", "t_2": "2"}, "quadratic": {"t_1.t_2": "1"}}
    assert JetJ3.from_json_obj(2, obj).to_json_obj() == obj


def test_act(capsys):
    assert run(capsys, "act", *IA, "--n", "3", "--check-e", "1")[:2] == (0, "in E(1): false\n")
    code, out, _ = run(capsys, "act", "--map", "inner:x1 x2", "--n", "3", "--check-e", "2", "--json")
    assert json.loads(out) == {"k": 2, "member": True}
    code, out, _ = run(capsys, "act", "--map", "inner:x2", "--n", "3", "--decompose", "--json")
    assert json.loads(out)["exponents"] == [0, 1, 0]
    code, out, _ = run(capsys, "act", "--map", "nielsen:P12", "--n", "3", "--jet", "--json")
    assert code == 0 and len(json.loads(out)["rows"]) == 7 + 27
    code, out, _ = run(capsys, "act", "--map", "inner:x3", "--n", "3", "--eta1", "--json")
    assert code == 0 and json.loads(out)["entries"] == []


def test_depth(capsys):
    code, out, _ = run(capsys, "depth", *IA, "--n", "3", "--max-k", "3", "--json")
    assert code == 0 and json.loads(out) == {"andreadakis_depth": 1, "e_depth": 0, "max_k": 3}


@pytest.mark.parametrize("argv", [
    ["reduce", "x5", "--n", "2"],
    ["reduce", "x1 y", "--n", "2"],
    ["basis", "--n", "3", "--grade", "3"],
    ["basis", "--n", "1", "--grade", "1"],
    ["act", "--map", "x1 -> x1 x2", "--n", "2", "--check-e", "1"],
    ["act", "--map", "x1 -> x1 x2", "--inv", "x1 -> x1 x2", "--n", "2", "--jet"],
    ["act", *IA, "--n", "3", "--eta1"],
    ["verify", "--suite", "filtration", "--n", "2", "--trials", "1"],
    ["frobnicate"],
])
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(main(argv))
    assert exc.value.code == 1


def test_verify_seed_fallback(capsys, monkeypatch):
    monkeypatch.setenv("FRICKE_SEED", "9")
    code, out, _ = run(capsys, "verify", "--suite", "relations", "--n", "3", "--trials", "3")
    assert code == 0 and "seed=9" in out
    monkeypatch.setenv("FRICKE_SEED", "nine")
    assert run(capsys, "verify", "--suite", "relations", "--n", "3", "--trials", "3")[0] == 1


def test_verify_witness_exit_2(capsys, monkeypatch):
    from fricke import numcheck
    monkeypatch.setattr(numcheck, "_commutator_table",
                        lambda: {("b", "a"): lambda e, s, t, u: (1, 0, 0, 1)})
    code, out, _ = run(capsys, "verify", "--suite", "identities", "--n", "3", "--trials", "2",
                       "--json", "--threads", "1")
    obj = json.loads(out)
    assert code == 2 and not obj["ok"] and obj["checks"]["commutator_table"]["failures"]
