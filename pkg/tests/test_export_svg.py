from fractions import Fraction as F
import json

from src.hgspec.export import render_csv, render_json, write_output
from src.hgspec.svg import render_measure_svg


def test_render_json_is_sorted_and_exact():
    text = render_json({"b": F(4, 9), "a": [1, 2.5], "c": 1 + 2j})
    assert text.endswith("\n")
    doc = json.loads(text)
    assert list(doc) == ["a", "b", "c"]
    assert doc["b"] == "4/9"
    assert doc["c"] == [1.0, 2.0]


def test_render_json_is_deterministic():
    payload = {"x": F(1, 3), "y": {"k": [F(1, 2), None]}}
    assert render_json(payload) == render_json(dict(reversed(list(payload.items()))))


def test_render_csv_rows():
    text = render_csv(["k", "coefficient"], [{"k": 1, "coefficient": F(1, 12)}, [3, F(1, 6)]])
    assert text == "k,coefficient\n1,1/12\n3,1/6\n"


def test_render_csv_cells():
    text = render_csv(["a", "b", "c"], [[True, None, 0.5]])
    assert text.splitlines()[1] == "true,,0.5"


def test_write_output_to_file(tmp_path, session):
    target = tmp_path / "nested" / "out.csv"
    write_output("a,b\n", target, session=session)
    assert target.read_text(encoding="utf-8") == "a,b\n"


def test_write_output_to_stdout(capsys):
    write_output("hello\n", "-")
    assert capsys.readouterr().out == "hello\n"


def test_measure_svg_has_curve_and_atoms():
    ts = [-0.5, 0.0, 0.5]
    svg = render_measure_svg(ts, [0.2, 0.4, 0.2], None, [(0.875, 4 / 9, "w=4/9")], title="lambda<2> & r=1/4")
    assert svg.startswith("<svg")
    assert svg.rstrip().endswith("</svg>")
    assert svg.count("<polyline") == 1
    assert svg.count("<circle") == 1
    assert "lambda&lt;2&gt; &amp; r=1/4" in svg


def test_measure_svg_draws_imaginary_part_dashed():
    svg = render_measure_svg([-0.5, 0.5], [0.1, 0.1], [0.05, -0.05], [], title="complex")
    assert svg.count("<polyline") == 2
    assert "stroke-dasharray" in svg
    assert "<circle" not in svg


def test_measure_svg_atoms_only():
    svg = render_measure_svg([], [], None, [(1.0, 1.0, "w=1"), (-1.0, 1.0, "w=1")], title="dirac")
    assert "<polyline" not in svg
    assert svg.count("<circle") == 2
