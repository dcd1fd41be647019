import csv
import io
import json
import subprocess
import sys

import pytest

from robinlab import cli, theorems
from robinlab.factored import parse
from robinlab.numerics import Real


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.dispatch(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    assert code == 0, err
    return json.loads(out)


def test_robin_check():
    d = run_json("robin", "check", "5040")
    assert d["n"] == 5040 and d["state"] == "FAILS"
    assert d["G"] == pytest.approx(1.790973366534881, abs=1e-12)
    d = run_json("robin", "check", "2^4*3^2*5*7")
    assert d["factored"] == "2^4*3^2*5*7" and d["state"] == "FAILS"
    assert run_json("robin", "check", "1")["state"] == "DEGENERATE"


def test_ca_chain():
    rows = run_json("ca", "chain", "--steps", "8")
    assert rows[-1]["factored"] == "2^4*3^2*5*7"
    assert [r["added_prime"] for r in rows] == [2, 3, 2, 5, 2, 3, 7, 2]
    assert set(rows[0]) >= {"index", "factored", "added_prime", "critical_eps", "logN", "G"}
    for r in rows:
        assert str(parse(r["factored"])) == r["factored"]


def test_robin_verify():
    d = run_json("robin", "verify", "--limit", "100000", "--oracle-check", "20000")
    assert d["max_violation"] == 5040
    assert d["oracle_check"]["agrees"]
    assert d["violations"][:5] == [3, 4, 5, 6, 8]


def test_sieve_outputs():
    code, out, _ = run("sieve", "--lo", "1", "--hi", "10")
    assert code == 0 and out.split() == ["2", "3", "5", "7"]
    d = run_json("sieve", "--lo", "3290", "--hi", "3310", "--json")
    assert d == {"lo": 3290, "hi": 3310, "count": 3, "first": 3299, "last": 3307}
    d = run_json("sieve", "--lo", "1", "--hi", "10^6", "--count-only")
    assert d["count"] == 78498


def test_mertens():
    d = run_json("mertens", "--n", "10")
    assert d["sum_logs"] == pytest.approx(1.4759065198, abs=1e-10)
    assert set(d) >= {"n", "sum_logs", "predicted", "remainder", "bound"}
    code, _, err = run("mertens", "--n", "8e9")
    assert code == 3 and "--slow" in err


def test_ca_xk_and_thm4():
    d = run_json("ca", "xk", "--eps", "0.5849625007211561814537389439478165087598144076924810604557526545410982277943585625222804749180882420909806624750591673437175524410609248221420839506216982994936575922385852344415825363027476853069780516875995544737266834624612364248850047581810676961316404807130823233281262445248670633898014837234235783662478390118977006466312634223363341821270106098049177472541357330110499026268818251703576994712157113638912494135752192998699040767081539505404488360", "--k", "1")
    assert d["x_k"] == pytest.approx(2.0, abs=1e-12)
    d = run_json("ca", "thm4", "--eps", "3e-5", "--kmax", "40")
    assert d["holds"] and d["p"] >= 3299 and len(d["margins"]) == 39
    code, _, err = run("ca", "thm4", "--eps", "0.01", "--kmax", "5")
    assert code == 2 and "3299" in err
    d = run_json("ca", "thm4", "--eps", "0.01", "--kmax", "5", "--exploratory")
    assert d["exploratory"]


def test_theorems_audit_and_sweep():
    d = run_json("theorems", "audit", "--n", "2^4*3^2*5*7")
    ids = [r["theorem"] for r in d["reports"]]
    assert ids[:3] == ["thm2", "thm3", "thm5_exponents"]
    assert d["N"] == "2^4*3^2*5*7"
    entries = run_json("theorems", "sweep", "--chain-steps", "30", "--json")
    assert [e["index"] for e in entries] == list(range(2, 31))
    assert all(isinstance(e["reports"], list) for e in entries)


def test_audit_failure_exit_code(monkeypatch):
    def fake(n, prec):
        return [theorems.TheoremReport("thm10", theorems.Outcome.FAILS, Real.exact(-1))]

    monkeypatch.setattr(theorems, "audit", fake)
    code, out, _ = run("theorems", "audit", "--n", "5040")
    assert code == 1 and json.loads(out)["reports"][0]["verdict"] == "FAILS"


def test_csv_output():
    code, out, _ = run("ca", "chain", "--steps", "8", "--csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[-1]["factored"] == "2^4*3^2*5*7"
    code, out, _ = run("theorems", "audit", "--n", "5040", "--csv")
    assert code == 0 and len(list(csv.DictReader(io.StringIO(out)))) == len(theorems.audit(5040))


def test_usage_errors():
    assert run()[0] == 2
    assert run("frobnicate")[0] == 2
    assert run("robin")[0] == 2
    assert run("robin", "verify")[0] == 2
    assert run("sieve", "--lo", "1", "--hi", "10", "--segment-size", "1000")[0] == 2
    assert run("robin", "check", "5040", "--digits", "100", "--max-digits", "50")[0] == 2
    assert run("robin", "check", "5040", "--digits", "10")[0] == 2
    assert run("robin", "check", "4^2")[0] == 2
    code, _, err = run("frobnicate")
    assert "usage" in err


def test_capacity_errors():
    assert run("robin", "verify", "--limit", "10^11")[0] == 3
    assert run("sieve", "--lo", str(2**63), "--hi", str(2**63 + 10))[0] in (0, 3)


def test_digits_env(monkeypatch):
    monkeypatch.setenv("ROBINLAB_DIGITS", "80")
    args = cli.build_parser().parse_args(["robin", "check", "5040"])
    assert cli._config(args).digits == 80
    args = cli.build_parser().parse_args(["robin", "check", "5040", "--digits", "40"])
    assert cli._config(args).digits == 40


def test_run_config_invariants():
    with pytest.raises(ValueError):
        cli.RunConfig(60, 50, 1024, "json")
    with pytest.raises(ValueError):
        cli.RunConfig(50, 60, 1000, "json")
    with pytest.raises(ValueError):
        cli.RunConfig(50, 60, 1024, "xml")


@pytest.mark.parametrize(
    "argv",
    [
        ("robin", "verify", "--limit", "300000", "--segment-size", "4096"),
        ("ca", "chain", "--steps", "50"),
        ("theorems", "sweep", "--chain-steps", "20"),
        ("mertens", "--n", "10^6"),
    ],
)
def test_deterministic_output(argv):
    a = run(*argv, "--threads", "1")
    b = run(*argv, "--threads", "4")
    c = run(*argv, "--threads", "4")
    assert a == b == c


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "robinlab", "robin", "check", "5041"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["state"] == "HOLDS"
