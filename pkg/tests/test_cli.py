import io
import json
import subprocess
import sys

import pytest

from graphgames.cli import main
from graphgames.families import build_g2, in_u3
from graphgames.io import data_path, load_game, load_payoff

G1, G2, G3 = (str(data_path(f"{n}.game")) for n in ("g1", "g2", "g3"))
G3_NOMIXED, G3_SOLVABLE = str(data_path("g3_nomixed.game")), str(data_path("g3_solvable.game"))


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


def test_validate_ok():
    assert run("validate", G2) == (0, f"{G2}: ok\n")


def test_validate_bad_chance(tmp_path):
    data = json.loads(data_path("g1.game").read_text())
    for m in data["moves"]:
        if m["from"] == "v0":
            m["prob"] = "1/3"
    path = tmp_path / "bad.game"
    path.write_text(json.dumps(data))
    code, text = run("validate", str(path))
    assert code == 1 and "v0" in text and "chance mass" in text


def test_validate_parse_error(tmp_path, capsys):
    data = json.loads(data_path("g1.game").read_text())
    data["moves"][0]["prob"] = "1/0"
    path = tmp_path / "bad.game"
    path.write_text(json.dumps(data))
    code, _ = run("validate", str(path))
    assert code == 2
    assert "zero denominator" in capsys.readouterr().err


def test_limit_markov():
    code, text = run("limit", G2, "--p", "1/2,1/2", "--start", "v1", "--csv")
    assert code == 0
    assert text.splitlines() == ["start,outcome,exact,decimal", "v1,a1,2/3,0.666667", "v1,a2,1/3,0.333333", "v1,c,0/1,0.000000"]


def test_limit_apriori_and_cycle():
    code, text = run("limit", G2, "--realization", "apriori", "--p", "1/2,1/2", "--start", "v1", "--csv")
    assert code == 0 and "v1,a1,1/2" in text and "v1,a2,1/4" in text and "v1,c,1/4" in text
    code, text = run("limit", G2, "--p", "1,1", "--start", "v1", "--csv")
    assert "v1,c,1/1" in text


def test_limit_all_starts_and_profile_file(tmp_path):
    prof = tmp_path / "y.json"
    prof.write_text(json.dumps({"v1": {"v2": "1/2", "a1": "1/2"}, "v2": {"v1": "1/2", "a2": "1/2"}}))
    code, text = run("limit", G2, "--profile", str(prof), "--all-starts")
    assert code == 0 and "start v1" in text and "start v2" in text


def test_limit_budget(monkeypatch):
    monkeypatch.setenv("GG_BUDGET", "2")
    code, _ = run("limit", G3, "--realization", "apriori", "--p", "1/2,1/2,1/2", "--start", "v1")
    assert code == 3


def test_pure_cycles():
    code, text = run("pure", G2)
    assert code == 1 and "no UNE; improvement cycle of length 4" in text
    code, text = run("pure", G3_NOMIXED)
    assert code == 1 and "no UNE; improvement cycle of length 6" in text


def test_pure_solvable():
    code, text = run("pure", G3_SOLVABLE)
    assert code == 0 and "1 pure UNE found" in text


def test_pure_ne_mode():
    code, text = run("pure", G3_NOMIXED, "--mode", "ne", "--start", "v1")
    assert code == 0 and "v1->a1 v2->v3 v3->v1" in text


def test_mixed_closed_form():
    code, text = run("mixed", G3, "--closed-form")
    assert code == 0
    assert "p = (3/4, 5/6, 4/5)" in text and "UNE (markov): yes" in text
    code, text = run("mixed", G3_NOMIXED, "--closed-form")
    assert "none" in text


def test_mixed_closed_form_wrong_shape():
    code, _ = run("mixed", G2, "--closed-form")
    assert code == 2


def test_mixed_check_apriori():
    code, text = run("mixed", G3, "--check", "--p", "3/4,5/6,4/5", "--realization", "apriori")
    assert code == 1 and "UNE (apriori): no" in text


def test_mixed_sweep():
    code, text = run("mixed", G2, "--sweep", "1/10", "--csv")
    assert code == 0
    rows = text.strip().splitlines()[1:]
    assert len(rows) == 81 + 4
    assert all(r.split(",")[-1] != "" for r in rows)


def test_simulate():
    code, text = run("simulate", G2, "--realization", "apriori", "--p", "1/2,1/2", "--n", "100000", "--seed", "1")
    assert code == 0
    dev = float(text.split("max |empirical - exact| = ")[1].split()[0])
    assert dev < 0.01
    assert run("simulate", G2, "--p", "1/2,1/2", "--n", "2000", "--seed", "4") == run(
        "simulate", G2, "--p", "1/2,1/2", "--n", "2000", "--seed", "4"
    )
    code, text = run("simulate", G2, "--p", "1,1", "--n", "100", "--csv")
    assert "c,100," in text


def test_gen(tmp_path):
    code, text = run("gen", "--n", "4", "--verify", "--out", str(tmp_path / "g4"))
    assert code == 0 and "16/16 profiles improved; UNE-free confirmed" in text
    run("gen", "--n", "3", "--seed", "9", "--out", str(tmp_path / "g3"))
    assert in_u3(load_payoff(tmp_path / "g3.payoff.json"))
    run("gen", "--n", "2", "--out", str(tmp_path / "g2"))
    g, _ = load_game(tmp_path / "g2.game")
    assert g == build_g2() == load_game(G2)[0]
    a = (tmp_path / "g3.game").read_text()
    run("gen", "--n", "3", "--seed", "9", "--out", str(tmp_path / "g3"))
    assert (tmp_path / "g3.game").read_text() == a


def test_gen_small():
    assert run("gen", "--n", "1", "--out", "/tmp/never")[0] == 2


def test_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["limit"])
    assert e.value.code == 2


def test_entry_point_subprocess():
    res = subprocess.run([sys.executable, "-m", "graphgames.cli", "validate", G1], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip().endswith("ok")
