import json

import pytest

from betti_tate.cli import golden_snapshot, main, run_suite
from betti_tate.mirror import apply_F
from betti_tate.nodal_graded import GeneratorId, structure_generator
from betti_tate.strat_quiver import ProjectiveId, QuiverRep, rep_of_projective
from betti_tate.modules import FPModule
from betti_tate.strat_quiver import quiver_presentation


@pytest.fixture
def rep_file(tmp_path):
    p = tmp_path / "p0.json"
    p.write_text(json.dumps(rep_of_projective(ProjectiveId(0, 2, 0)).to_json()))
    return p


@pytest.fixture
def bad_rep_file(tmp_path):
    R = FPModule.free(1)
    V = QuiverRep(quiver_presentation(0, 1), (R, R), (R.identity(),))
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(V.to_json()))
    return p


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_quiver_json(capsys):
    code, out, _ = run(capsys, "quiver", "--k", "0", "--l", "2", "--json")
    assert code == 0
    assert len(json.loads(out)["relations"]) == 3


def test_check_ff(capsys):
    code, out, _ = run(capsys, "check-ff", "--k", "0", "--l", "3", "--depth", "4")
    assert code == 0 and out.startswith("PASS")


def test_missing_input_file(capsys):
    code, _, err = run(capsys, "apply-f", "--input", "nonexistent.json")
    assert code == 2 and "cannot read" in err


def test_malformed_json(capsys, tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert run(capsys, "check-rep", "--input", str(p))[0] == 2
    p.write_text(json.dumps({"k": 0}))
    assert run(capsys, "check-rep", "--input", str(p))[0] == 2


def test_unknown_command_and_bad_params(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "quiver", "--l", "-1")[0] == 2
    assert run(capsys, "gcft", "--a", "0")[0] == 2
    assert run(capsys, "gcft", "--a", "abc")[0] == 2
    assert run(capsys, "check-ff", "--depth", "0")[0] == 2
    assert run(capsys, "suite", "--l-max", "7")[0] == 2


def test_check_rep_pass_and_fail(capsys, rep_file, bad_rep_file):
    assert run(capsys, "check-rep", "--input", str(rep_file))[0] == 0
    code, out, _ = run(capsys, "check-rep", "--input", str(bad_rep_file))
    assert code == 1 and "FAIL" in out


def test_apply_f_and_g(capsys, rep_file, tmp_path):
    out_path = tmp_path / "d.json"
    code, _, _ = run(capsys, "apply-f", "--input", str(rep_file), "--out", str(out_path))
    assert code == 0
    data = json.loads(out_path.read_text())
    assert data == structure_generator(GeneratorId("O", 0)).to_json()
    code, out, _ = run(capsys, "apply-g", "--input", str(out_path), "--json")
    assert code == 0
    back = QuiverRep.from_json(json.loads(out))
    assert apply_F(back).to_json() == data


def test_apply_f_rejects_invalid_rep(capsys, bad_rep_file):
    assert run(capsys, "apply-f", "--input", str(bad_rep_file))[0] == 2


@pytest.mark.parametrize("argv", [
    ["homtable", "--k", "-1", "--l", "3"],
    ["roundtrip", "--k", "0", "--l", "2"],
    ["check-compat", "--k", "-1", "--l", "2"],
    ["generation-witness"],
    ["end-example"],
    ["gcft", "--k", "0", "--l", "2", "--a", "-1", "--n", "-2"],
    ["gcft", "--k", "0", "--l", "1", "--a", "1/2", "--n", "1"],
])
def test_passing_commands(capsys, argv):
    assert run(capsys, *argv)[0] == 0


def test_roundtrip_and_gcft_on_file(capsys, rep_file):
    assert run(capsys, "roundtrip", "--input", str(rep_file))[0] == 0
    assert run(capsys, "gcft", "--input", str(rep_file), "--a", "3", "--n", "2")[0] == 0


def test_json_report_shape(capsys):
    code, out, _ = run(capsys, "check-compat", "--k", "0", "--l", "1", "--json")
    data = json.loads(out)
    assert code == 0
    assert {"check", "window", "pass", "witnesses", "tables"} <= set(data)
    assert data["window"] == [0, 1]


def test_suite_default_and_determinism():
    m1, f1 = run_suite()
    m2, _ = run_suite()
    assert not f1 and m1.passed
    assert len(m1.results) >= 40
    d1, d2 = m1.to_json(), m2.to_json()
    d1.pop("timing"), d2.pop("timing")
    assert json.dumps(d1, sort_keys=True) == json.dumps(d2, sort_keys=True)
    names = [c["name"] for c in d1["checks"]]
    assert names == sorted(names)


def test_suite_degenerate(capsys):
    code, out, _ = run(capsys, "suite", "--l-max", "0", "--samples", "0", "--json")
    assert code == 0 and json.loads(out)["pass"]


def test_suite_detects_corrupted_golden(capsys, tmp_path):
    gold = golden_snapshot()
    gold["homtables"]["2"]["0,2"] = "R"
    p = tmp_path / "golden.json"
    p.write_text(json.dumps(gold))
    code, out, _ = run(capsys, "suite", "--l-max", "2", "--samples", "0", "--golden", str(p))
    assert code == 1
    assert "homtables/2/0,2" in out


def test_suite_missing_golden_is_usage_error(capsys, tmp_path):
    assert run(capsys, "suite", "--l-max", "0", "--samples", "0", "--golden", str(tmp_path / "none.json"))[0] == 2


def test_stored_golden_matches(capsys):
    from betti_tate.cli import _golden_path, golden_check
    assert golden_check(_golden_path(None), 4, 4).passed
