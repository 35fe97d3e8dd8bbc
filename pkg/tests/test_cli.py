import io
import json
from pathlib import Path

import pytest

from quivinv.cli import EXIT_OK, EXIT_PRECONDITION, EXIT_SCHEMA, run

DATA = Path(__file__).resolve().parent.parent / "data"


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, (json.loads(buf.getvalue()) if code == EXIT_OK else None), buf.getvalue()


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def test_validate_five_vertex():
    code, out, _ = call("validate", "--setting", str(DATA / "five_vertex_setting.json"))
    assert code == EXIT_OK and out["valid"] is True and out["violation"] is None
    assert out["eq_condition"] is True


def test_validate_reports_violation(tmp_path):
    f = write(tmp_path, "s.json", {"vertices": [{"id": 1, "dim": 3, "group": "Sp"}], "arrows": []})
    code, out, _ = call("validate", "--setting", f)
    assert code == EXIT_OK and out["valid"] is False and out["violation"]["condition"] == "a"


def test_enumerate_gl2():
    code, out, _ = call("enumerate", "--setting", str(DATA / "gl2_two_loops.json"), "--max-path-len", "3")
    assert code == EXIT_OK and out["family"] == "plain" and out["caps"] == {"max_path_len": 3}
    words = {(d["t"], tuple(d["word"])) for d in out["descriptors"]}
    for want in [(1, ("X1",)), (1, ("X2",)), (1, ("X1", "X2")), (2, ("X1",)), (2, ("X2",))]:
        assert want in words
    assert out["count"] == len(out["descriptors"])


def test_enumerate_needs_caps():
    code, _, _ = call("enumerate", "--setting", str(DATA / "gl2_two_loops.json"))
    assert code == EXIT_SCHEMA
    code, _, _ = call("enumerate", "--setting", str(DATA / "five_vertex_setting.json"), "--max-path-len", "2")
    assert code == EXIT_PRECONDITION


def test_enumerate_general_with_weight():
    code, out, _ = call("enumerate", "--setting", str(DATA / "five_vertex_setting.json"),
                        "--max-path-len", "2", "--max-weight", "2")
    assert code == EXIT_OK and out["family"] == "general" and out["caps"]["max_weight"] == 2
    assert any(d["kind"] == "bpf" for d in out["descriptors"])


def test_eval_and_compare():
    args = ["--setting", str(DATA / "gl2_two_loops.json"), "--max-path-len", "2"]
    code, out, _ = call("eval", *args, "--rep", str(DATA / "gl2_rep.json"))
    assert code == EXIT_OK
    fp = {d["id"]: d["value"] for d in out["fingerprint"]}
    assert fp["sigma1(X1)"] == "5" and fp["sigma2(X1)"] == "-2"
    code, out, _ = call("compare", *args, "--rep", str(DATA / "gl2_rep.json"),
                        "--rep2", str(DATA / "gl2_rep_conjugate.json"))
    assert code == EXIT_OK and out["verdict"] == "equal" and out["caveats"]


def test_compare_distinguishes(tmp_path):
    other = write(tmp_path, "r.json", {"X1": [[1, 0], [0, 4]], "X2": [[0, 1], [-1, "1/2"]]})
    code, out, _ = call("compare", "--setting", str(DATA / "gl2_two_loops.json"), "--max-path-len", "2",
                        "--rep", str(DATA / "gl2_rep.json"), "--rep2", other)
    assert code == EXIT_OK and out["verdict"] == "distinguished"
    assert out["descriptor"] == "sigma2(X1)" and out["values"] == ["-2", "4"]


def test_check_identities_sigma_tr():
    code, out, _ = call("check-identities", "--family", "sigma-tr", "--n", "2", "--trials", "100", "--seed", "7")
    assert code == EXIT_OK and out["ok"]
    zero = [c for c in out["checks"] if c["check"] == "sigma_(1,1) = 0"]
    assert zero and zero[0]["passed"] == 100 and zero[0]["failed"] == 0


def test_check_identities_odd_pfaffian():
    code, _, _ = call("check-identities", "--family", "pf-square", "--n", "3", "--trials", "1")
    assert code == EXIT_PRECONDITION


def test_check_identities_unknown_family():
    code, _, _ = call("check-identities", "--family", "nope", "--n", "3", "--trials", "1")
    assert code == EXIT_SCHEMA


def test_bpf_eval():
    args = ["bpf-eval", "--tableau", str(DATA / "pfaffian_tableau.json"),
            "--matrices", str(DATA / "pfaffian_matrices.json")]
    code, out, _ = call(*args)
    assert code == EXIT_OK and out["bpf"] == "8" and out["c_T"] == 2
    code, out, _ = call(*args, "--field", "fp:5")
    assert code == EXIT_OK and out["bpf"] == "3"


def test_bpf_eval_bad_tableau(tmp_path):
    bad = write(tmp_path, "t.json", {"columns": [3], "arrows": [{"head": [1, 2], "tail": [1, 1], "slot": 1}]})
    code, _, _ = call("bpf-eval", "--tableau", bad, "--matrices", str(DATA / "pfaffian_matrices.json"))
    assert code == EXIT_PRECONDITION
    junk = write(tmp_path, "j.json", "{not json")
    code, _, _ = call("bpf-eval", "--tableau", junk, "--matrices", str(DATA / "pfaffian_matrices.json"))
    assert code == EXIT_SCHEMA


@pytest.mark.parametrize("field", ["fp:4", "fp:2", "reals"])
def test_bad_field(field):
    code, _, _ = call("validate", "--setting", str(DATA / "five_vertex_setting.json"), "--field", field)
    assert code == EXIT_SCHEMA


def test_missing_file():
    code, _, _ = call("validate", "--setting", "/nonexistent.json")
    assert code == EXIT_SCHEMA


def test_schema_errors(tmp_path):
    s = write(tmp_path, "s.json", {"vertices": [{"id": 1, "dim": 2, "group": "XX"}], "arrows": []})
    assert call("validate", "--setting", s)[0] == EXIT_SCHEMA
    r = write(tmp_path, "r.json", {"X1": [[1, 0], [0, 1]]})
    code, _, _ = call("eval", "--setting", str(DATA / "gl2_two_loops.json"), "--max-path-len", "1", "--rep", r)
    assert code == EXIT_SCHEMA


def test_shape_error_is_precondition(tmp_path):
    r = write(tmp_path, "r.json", {"X1": [[1, 0, 0], [0, 1, 0], [0, 0, 1]], "X2": [[1, 0], [0, 1]]})
    code, _, _ = call("eval", "--setting", str(DATA / "gl2_two_loops.json"), "--max-path-len", "1", "--rep", r)
    assert code == EXIT_PRECONDITION


def test_threads_env(monkeypatch):
    monkeypatch.setenv("QI_THREADS", "zero")
    assert call("validate", "--setting", str(DATA / "five_vertex_setting.json"))[0] == EXIT_SCHEMA
    monkeypatch.setenv("QI_THREADS", "4")
    assert call("validate", "--setting", str(DATA / "five_vertex_setting.json"))[0] == EXIT_OK


def test_deterministic_output():
    argv = ["check-identities", "--family", "amitsur", "--n", "3", "--trials", "5", "--seed", "11"]
    assert call(*argv)[2] == call(*argv)[2]
    argv = ["enumerate", "--setting", str(DATA / "five_vertex_setting.json"), "--max-path-len", "2", "--max-weight", "2"]
    assert call(*argv)[2] == call(*argv)[2]


def test_verbose_goes_to_stderr(capsys):
    buf = io.StringIO()
    run(["validate", "--setting", str(DATA / "five_vertex_setting.json"), "--verbose"], buf)
    assert "ok" in capsys.readouterr().err
    json.loads(buf.getvalue())
