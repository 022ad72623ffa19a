import io
import json

import pytest

from twistsha import __version__, cli
from twistsha.mkt import MktError


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--json")
    assert code == 0, err
    return json.loads(out)


def test_mkt_structured():
    doc = run_json("mkt", "--curve", "-1,0", "--d", "17")
    assert set(doc) == {"input", "result", "assumptions", "diagnostics", "version"}
    assert doc["result"]["delta"] == "2"
    assert doc["result"]["places"] == {"17": "S_g"}
    assert doc["diagnostics"]["paths_agree"] is True
    assert doc["version"] == __version__


def test_general_form_curve():
    doc = run_json("mkt", "--curve", "0,0,1,-1,0", "--d", "-7")
    assert doc["result"]["delta_inf"] == "1"
    assert doc["result"]["delta_g"] == "0"


def test_tunnell_single():
    doc = run_json("tunnell", "--n", "17")
    r = doc["result"]
    assert (r["coefficient"], r["r"], r["verdict"]) == ("-4", "4", "not congruent")


def test_tunnell_range_streams_in_order():
    code, out, _ = run("tunnell", "--range", "1..30", "--json")
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    ns = [int(d["result"]["n"]) for d in lines]
    assert ns == sorted(ns) and 1 not in ns and 4 not in ns
    by_n = {int(d["result"]["n"]): d["result"] for d in lines}
    assert by_n[17]["coefficient"] == "-4"
    assert by_n[10]["coefficient"] == "2"
    assert by_n[5]["verdict"] == "congruent under Sha-finiteness"


def test_heegner_default_curve():
    doc = run_json("heegner", "--d", "-7")
    assert doc["result"]["value"] == "1"
    assert "Sha(E/K) trivial" in doc["result"]["notes"]
    assert doc["diagnostics"]["perfect_square"] is True


def test_predict_sha_order_and_ratio():
    doc = run_json("predict-sha", "--n", "2")
    assert doc["result"]["value"] == "1/4"
    assert doc["diagnostics"] == {"integral": False, "perfect_square": False}
    assert doc["result"]["index_corrected_value"] == "1"
    doc = run_json("predict-sha", "--curve", "-1,0", "--d", "17", "--index", "4")
    assert doc["result"]["value"] == "4"


def test_congruent_and_bsd_check():
    doc = run_json("congruent", "--n", "6")
    assert doc["result"]["verdict"] == "congruent under Sha-finiteness"
    assert doc["result"]["rank_parity"] == "odd"
    doc = run_json("bsd-check", "--n", "17")
    assert doc["diagnostics"] == {"E_n/Q equal": True, "E/K equal": True}


def test_local_and_twist():
    doc = run_json("local", "--curve", "-1,0", "--d", "7", "--p", "2")
    assert doc["result"]["E/K_w"]["tamagawa"] == "4"
    assert doc["result"]["local_field"] == "Q2(sqrt(-1))"
    doc = run_json("twist", "--curve", "-1,0", "--d", "5")
    assert doc["result"]["twist"] == ["0", "0", "0", "-25", "0"]


def test_verify_h1_from_file(tmp_path):
    f = tmp_path / "gens.txt"
    f.write_text("# congruent curve over Q(i)\ncurve -1 0 -1\n0 0 0 0\n1 0 0 0\n0 1 1 -1  # (i, 1 - i)\n")
    doc = run_json("verify-h1", "--gens", str(f))
    assert doc["result"]["equal"] is True
    assert doc["diagnostics"] == {"h1_equal": True, "identities_hold": True}


@pytest.mark.parametrize(
    "text",
    ["", "curve -1 0\n", "curve -1 0 -1\n1 2 3\n", "curve -1 0 -1\n5 0 0 0\n", "curve -1 0 4\n"],
)
def test_verify_h1_bad_files(tmp_path, text):
    f = tmp_path / "gens.txt"
    f.write_text(text)
    code, _, err = run("verify-h1", "--gens", str(f))
    assert code == 2 and "input error" in err


def test_tables_match_goldens():
    doc = run_json("table", "lemma-4.1")
    assert doc["diagnostics"]["matches_golden"] is True
    assert len(doc["result"]["rows"]) == 36
    doc = run_json("table", "lemma-4.2", "--bound", "60")
    assert doc["result"]["mismatches"] == []


def test_input_errors_exit_2():
    assert run("mkt", "--curve", "1,2,3", "--d", "5")[0] == 2
    assert run("mkt", "--curve", "0,0", "--d", "5")[0] == 2
    assert run("mkt", "--curve", "-1,0", "--d", "4")[0] == 2
    assert run("mkt", "--curve", "0,0,1,-1,0", "--d", "-84")[0] == 2  # --d is the squarefree radicand
    assert run("mkt", "--curve", "a,b", "--d", "5")[0] == 2
    assert run("tunnell", "--range", "9..3")[0] == 2
    assert run("tunnell")[0] == 2
    assert run("predict-sha", "--n", "5")[0] == 2
    assert run("heegner", "--d", "-5")[0] == 2
    assert run("local", "--curve", "-1,0", "--d", "3", "--p", "4")[0] == 2
    assert run("nonsense")[0] == 2
    assert run()[0] == 2


def test_cross_check_failure_exit_3(monkeypatch):
    def broken(E, D):
        raise MktError("local term 3 is not a power of 2")

    monkeypatch.setattr(cli, "mkt_index", broken)
    code, _, err = run("mkt", "--curve", "-1,0", "--d", "17")
    assert code == 3 and "cross-check" in err


def test_golden_mismatch_exit_3(monkeypatch):
    monkeypatch.setitem(cli.LEMMA_41_CW, 7, 2)
    assert run("table", "lemma-4.1")[0] == 3


def test_determinism():
    a = run("bsd-check", "--n", "2", "--json")[1]
    b = run("bsd-check", "--n", "2", "--json")[1]
    assert a == b


def test_text_mode():
    code, out, _ = run("tunnell", "--n", "3")
    assert code == 0
    assert "coefficient: 2" in out
