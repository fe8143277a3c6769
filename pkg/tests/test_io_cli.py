import json
import subprocess
import sys
from fractions import Fraction

import pytest

from causal_multiteams import io
from causal_multiteams.cli import main
from causal_multiteams.core import Multiteam
from causal_multiteams.errors import CyclicGraph, ValidationError


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


# -- file formats -------------------------------------------------------------


def test_load_model(data_dir, inc):
    assert io.load_model(data_dir / "inc.json") == inc


def test_model_json_round_trip(data_dir, tmp_path, coin):
    path = tmp_path / "coin.json"
    io.save_model(coin, path)
    assert io.load_model(path) == coin


def test_cyclic_model_rejected(data_dir):
    with pytest.raises(CyclicGraph):
        io.load_model(data_dir / "cyclic.json")


def test_bad_table_key(data_dir):
    data = json.loads((data_dir / "inc.json").read_text())
    data["functions"]["Y"]["table"] = {"0": "1", "1": "2"}
    with pytest.raises(ValidationError):
        io.model_from_json(data)


def test_csv_with_sidecar(tmp_path, inc):
    (tmp_path / "inc.csv").write_text("X,Y\n0,1\n1,2\n1,2\n2,3\n2,3\n2,3\n")
    sidecar = json.loads(json.dumps(io.model_to_json(inc)))
    del sidecar["rows"]
    (tmp_path / "inc.json").write_text(json.dumps(sidecar))
    assert io.load_model(tmp_path / "inc.csv") == inc


def test_csv_without_signature(tmp_path):
    (tmp_path / "t.csv").write_text("A,B\nx,1\ny,1\nx,2\n")
    (tmp_path / "t.json").write_text(json.dumps({"functions": {}}))
    m = io.load_model(tmp_path / "t.csv")
    assert m.sig.dom == ("A", "B") and m.sig.ranges == (("x", "y"), ("1", "2"))
    assert m.team == Multiteam.from_rows([("x", "1"), ("y", "1"), ("x", "2")])


def test_sem_file(data_dir):
    sem = io.load_sem(data_dir / "inc_sem.json")
    assert sem.exo_dist[("2",)] == Fraction(1, 2)
    assert io.sem_from_json(io.sem_to_json(sem)) == sem


def test_class_file(data_dir):
    k = io.load_class(data_dir / "class.json")
    assert len(k) == 2


# -- command line -----------------------------------------------------------


def test_prob_s3(capsys, data_dir):
    assert run(capsys, "prob", data_dir / "s3.json", "Y=0")[:2] == (0, "2/3\n")


def test_check_tensor_event_in_probability(capsys, data_dir):
    code, out, _ = run(capsys, "check", data_dir / "coin.json", "Pr((X=heads | Y=tails)) >= 3/4")
    assert (code, out) == (0, "true\n")


def test_check_conditioning_reading(capsys, data_dir):
    # a bare | inside Pr(...) conditions: P(X=heads | Y=tails) = 1/2
    code, out, _ = run(capsys, "check", data_dir / "coin.json", "Pr(X=heads | Y=tails) >= 3/4")
    assert (code, out) == (1, "false\n")


def test_check_empty_bot(capsys, data_dir):
    assert run(capsys, "check", data_dir / "empty.json", "bot")[:2] == (0, "true\n")


def test_parse_error_exit_and_pointer(capsys, data_dir):
    code, out, err = run(capsys, "check", data_dir / "coin.json", "X=heads &")
    assert code == 2 and out == ""
    assert err.splitlines()[-1].endswith("^")


def test_range_error_exit(capsys, data_dir):
    code, _, err = run(capsys, "prob", data_dir / "coin.json", "X=1")
    assert code == 2 and "range" in err


def test_validation_error_exit(capsys, data_dir):
    assert run(capsys, "check", data_dir / "cyclic.json", "X=0")[0] == 3


def test_missing_file_exit(capsys, tmp_path):
    assert run(capsys, "check", tmp_path / "nope.json", "X=0")[0] == 2


def test_usage_error_exit(capsys, data_dir):
    assert run(capsys, "check", data_dir / "coin.json")[0] == 2


def test_check_json(capsys, data_dir):
    code, out, _ = run(capsys, "check", data_dir / "coin.json", "Pr(X=heads) >= 1/2", "--json")
    assert code == 0 and json.loads(out) == {"formula": "Pr(X=heads) >= 1/2", "verdict": True}


def test_check_trace(capsys, data_dir):
    code, out, _ = run(capsys, "check", data_dir / "s3.json", "Pr(Y=0) >= 1/2 & X=0", "--trace")
    assert code == 0 and out.startswith("true\n") and "Pr" in out


def test_check_batch_file(capsys, data_dir, tmp_path):
    batch = tmp_path / "f.txt"
    batch.write_text("# comment\nY=0\nPr(Y=0) == 2/3\n")
    code, out, _ = run(capsys, "check", data_dir / "s3.json", "--file", batch)
    assert code == 1
    assert out.splitlines() == ["false\tY=0", "true\tPr(Y=0) == 2/3"]


def test_prob_given(capsys, data_dir):
    assert run(capsys, "prob", data_dir / "coin.json", "Y=tails", "--given", "X=tails")[1] == "1/2\n"
    assert run(capsys, "prob", data_dir / "s3.json", "Y=0", "--given", "X=1")[1] == "undefined\n"


def test_intervene_and_restrict(capsys, data_dir):
    code, out, _ = run(capsys, "intervene", data_dir / "inc.json", "X=0")
    rows = json.loads(out)["rows"]
    assert code == 0 and rows == [{"assignment": {"X": "0", "Y": "1"}, "count": 6}]
    code, out, _ = run(capsys, "restrict", data_dir / "inc.json", "Y=2")
    assert json.loads(out)["rows"] == [{"assignment": {"X": "1", "Y": "2"}, "count": 2}]


def test_nf_and_classify(capsys, data_dir):
    code, out, _ = run(capsys, "nf", "X=1 ~> (Z=0 => Pr(Y=1) >= 1/2)", "--sig", data_dir / "sig.json")
    assert code == 0
    assert out.splitlines()[:2] == ["(X=1 ~> Z=0) => X=1 ~> Pr(Y=1) >= 1/2", "rung: 3"]
    assert run(capsys, "classify", "Pr(Y=1 | X=1) >= 1/2")[1].splitlines()[0] == "rung 1"


def test_cneg(capsys, data_dir):
    code, out, _ = run(capsys, "cneg", "X=1", "--sig", data_dir / "sig.json")
    assert (code, out) == (0, "Pr(X=1 => X=0 ~> X!=0) > 0\n")


def test_sem_commands(capsys, data_dir, tmp_path, inc):
    out_path = tmp_path / "m.json"
    assert run(capsys, "from-sem", data_dir / "inc_sem.json", "-o", out_path)[0] == 0
    assert io.load_model(out_path) == inc
    code, out, _ = run(capsys, "to-sem", data_dir / "inc.json")
    assert io.sem_from_json(json.loads(out)) == io.load_sem(data_dir / "inc_sem.json")


def test_markov(capsys, data_dir):
    assert run(capsys, "markov", data_dir / "coin.json")[:2] == (0, "true\n")


def test_rescale_canon(capsys, data_dir, tmp_path, inc):
    doubled = inc.with_team(inc.team.scaled(2))
    io.save_model(doubled, tmp_path / "d.json")
    code, out, _ = run(capsys, "rescale-canon", tmp_path / "d.json")
    assert io.model_from_json(json.loads(out)) == inc


def test_graph(capsys, data_dir):
    assert run(capsys, "graph", data_dir / "inc.json")[1] == "X -> Y\n"


def test_psi_and_define_check(capsys, data_dir):
    code, out, _ = run(capsys, "psi", data_dir / "class.json")
    assert code == 0 and "\\/" in out
    code, out, _ = run(capsys, "define-check", data_dir / "class.json", "--bound", 4)
    assert code == 0 and out.startswith("agree: 130 models")
    assert run(capsys, "define-check", data_dir / "class.json", "--bound", 6, "--cap", 10)[0] == 3


def test_suite_subset(capsys):
    code, out, _ = run(capsys, "suite", "--only", "flatness,empty", "--seed", 3)
    assert code == 0
    assert [ln.split()[0] for ln in out.splitlines()] == ["PASS", "PASS"]


def test_module_entry_point(data_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "causal_multiteams", "prob", str(data_dir / "s3.json"), "Y=0"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "2/3\n"
