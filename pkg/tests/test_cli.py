import json
from pathlib import Path

import pytest

from src.hgspec.controller import worst_exit
from src.main import build_parser, main


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


# ---------- algebra commands ----------

def test_product_csv(in_tmp, capsys):
    code, out = run(capsys, "product", "-m", "2", "-n", "3", "-r", "1/4")
    assert code == 0
    assert out == "k,coefficient\n1,1/12\n3,1/6\n5,3/4\n"


def test_product_check_agrees(in_tmp, capsys):
    code, out = run(capsys, "product", "-m", "2", "-n", "3", "-r", "1/4", "--check", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "hypergroup-spectra/1"
    assert doc["product"] == {"1": "1/12", "3": "1/6", "5": "3/4"}
    assert doc["checks"] == {"recursive": "agree", "closed_form": "agree", "free_group": "agree"}


def test_negative_degree_is_a_domain_error(in_tmp, capsys):
    code, out = run(capsys, "product", "-m", "-1", "-n", "2")
    assert code == 2
    rec = json.loads(out)
    assert rec["kind"] == "degree"
    assert rec["exit_code"] == 2
    assert rec["command"] == "product"


def test_bad_r_is_a_domain_error(in_tmp, capsys):
    code, out = run(capsys, "product", "-m", "1", "-n", "1", "-r", "banana")
    assert code == 2
    assert json.loads(out)["kind"] == "parameter_domain"


def test_table_csv(in_tmp, capsys):
    code, out = run(capsys, "table", "-r", "1/4", "-N", "2")
    assert code == 0
    assert out == "n,c_0,c_1,c_2\n0,1,,\n1,0,1,\n2,-1/3,0,4/3\n"


# ---------- spectral commands ----------

def test_measure_with_atom(in_tmp, capsys):
    code, out = run(capsys, "measure", "--lambda", "3/2", "-r", "1/4")
    assert code == 0
    doc = json.loads(out)
    assert doc["atoms"] == [{"t": "7/8", "w": "4/9"}]
    assert doc["regime"] == "ContinuousPlusAtom"


def test_measure_rejects_functional_outside_astar(in_tmp, capsys):
    code, out = run(capsys, "measure", "--lambda", "1.0+1.0i", "-r", "1/4")
    assert code == 2
    rec = json.loads(out)
    assert rec["kind"] == "regime"
    assert rec["details"]["regime"]["case"] == "NotInAstar"


def test_classify(in_tmp, capsys):
    code, out = run(capsys, "classify", "--lambda", "2")
    assert code == 0
    assert json.loads(out)["case"] == "ContinuousOnly"


def test_classify_csv_row(in_tmp, capsys):
    code, out = run(capsys, "classify", "--lambda", "3/2", "--format", "csv")
    assert code == 0
    header, row = out.splitlines()
    assert header.startswith("lambda,r,case")
    assert "ContinuousPlusAtom" in row


def test_moments_report(in_tmp, capsys):
    code, out = run(capsys, "moments", "--lambda", "sqrt(3)", "-N", "10")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,expected_re,expected_im,computed_re,computed_im,abs_error"
    assert len(lines) == 12


def test_invert_agrees_with_closed_form(in_tmp, capsys):
    code, out = run(capsys, "invert", "--lambda", "2", "--grid", "20", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["comparison"]["closed_form"] is True
    assert doc["comparison"]["agrees"] is True
    assert doc["regime"]["case"] == "ContinuousOnly"


def test_invert_csv_has_the_density_columns(in_tmp, capsys):
    code, out = run(capsys, "invert", "--lambda", "2", "--grid", "10")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "t,re_density,im_density,residual"
    assert len(lines) == 11


def test_invert_compare_adds_closed_form_columns(in_tmp, capsys):
    code, out = run(capsys, "invert", "--lambda", "2", "--grid", "10", "--compare")
    assert code == 0
    assert out.splitlines()[0] == "t,re_density,im_density,residual,converged,closed_re,closed_im,abs_diff"


def test_plot_svg_at_half(in_tmp, capsys):
    code, out = run(capsys, "plot", "-r", "1/2", "--grid", "50")
    assert code == 0
    assert out.startswith("<svg")
    assert "<polyline" in out


def test_svg_not_available_for_tables(in_tmp, capsys):
    code, out = run(capsys, "table", "--format", "svg")
    assert code == 2
    assert json.loads(out)["kind"] == "parameter_domain"


# ---------- free group commands ----------

def test_oracle_small(in_tmp, capsys):
    code, out = run(capsys, "oracle", "--l", "2", "--maxlen", "4")
    assert code == 0
    doc = json.loads(out)
    assert doc["all_match"] is True
    assert doc["r"] == "1/4"
    assert [c["expected"] for c in doc["sphere_counts"]] == [1, 4, 12, 36, 108]


def test_gram_with_twist(in_tmp, capsys):
    code, out = run(capsys, "gram", "--lambda", "2", "--twist")
    assert code == 0
    doc = json.loads(out)
    assert doc["psd"] is True
    assert doc["sign_twist"] is True
    assert doc["dimension"] == 17


def test_gram_inside_unit_disc_reports_not_psd(in_tmp, capsys):
    code, out = run(capsys, "gram", "--lambda", "1/2")
    assert code == 0
    assert json.loads(out)["psd"] is False


# ---------- output handling ----------

def test_out_file(in_tmp, capsys):
    code, out = run(capsys, "product", "-m", "1", "-n", "1", "-r", "1/2", "--out", "res/p.csv")
    assert code == 0
    assert out == ""
    assert (in_tmp / "res" / "p.csv").read_text(encoding="utf-8") == "k,coefficient\n0,1/2\n2,1/2\n"


def test_outputs_are_deterministic(in_tmp, capsys):
    _, first = run(capsys, "measure", "--lambda", "3/2", "--grid", "30")
    _, second = run(capsys, "measure", "--lambda", "3/2", "--grid", "30")
    assert first == second


def test_lambda_and_functional_are_exclusive():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["invert", "--lambda", "2", "--functional", "delta0"])


# ---------- batch ----------

def test_batch_writes_outputs_and_worst_exit(in_tmp, capsys):
    spec = in_tmp / "runs.yml"
    spec.write_text(
        "defaults:\n"
        "  r: \"1/4\"\n"
        "runs:\n"
        "  - command: product\n"
        "    label: p23\n"
        "    m: 2\n"
        "    n: 3\n"
        "  - command: measure\n"
        "    label: bad\n"
        "    lambda: \"1.0+1.0i\"\n"
        "  - command: table\n"
        "    max_degree: 2\n",
        encoding="utf-8",
    )
    code, out = run(capsys, "batch", str(spec))
    assert code == 2
    summary = json.loads(out)
    run_dir = Path(summary["run_dir"])
    outputs = run_dir / "outputs"
    assert (outputs / "p23.csv").exists()
    assert json.loads((outputs / "bad.error.json").read_text(encoding="utf-8"))["kind"] == "regime"
    assert (outputs / "runs_03_table.csv").read_text(encoding="utf-8").startswith("n,c_0,c_1,c_2")
    meta = json.loads((run_dir / "run_meta.json").read_text(encoding="utf-8"))
    assert meta["run_count"] == 3
    assert meta["run_id"] == run_dir.name
    assert meta["notes"] == ""
    assert meta["exit_code"] == 2
    assert [r["status"] for r in meta["results"]] == ["ok", "failed", "ok"]
    assert any(run_dir.joinpath("logs").iterdir())


def test_batch_missing_path(in_tmp, capsys):
    code, out = run(capsys, "batch", "does_not_exist.yml")
    assert code == 2
    assert json.loads(out)["kind"] == "file_not_found"


def test_worst_exit_ranking():
    assert worst_exit([]) == 0
    assert worst_exit([0, 4, 3]) == 3
    assert worst_exit([4, 2, 3]) == 2
    assert worst_exit([2, 1]) == 1
