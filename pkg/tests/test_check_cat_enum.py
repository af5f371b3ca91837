import importlib.util
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]


def _load_script():
    spec = importlib.util.spec_from_file_location("check_cat_enum", ROOT / "scripts" / "check_cat_enum.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def test_every_category_is_defined_and_used():
    missing, unused = _load_script().check(ROOT)
    assert missing == []
    assert unused == []


def test_missing_member_is_reported(tmp_path):
    pkg = tmp_path / "src" / "hgspec"
    pkg.mkdir(parents=True)
    (pkg / "instrumentation.py").write_text("class Cat:\n    ALGEBRA = 'ALGEBRA'\n    SPARE = 'SPARE'\n", encoding="utf-8")
    (pkg / "mod.py").write_text("x = Cat.ALGEBRA\ny = Cat.NOPE\n", encoding="utf-8")
    missing, unused = _load_script().check(tmp_path)
    assert missing == ["NOPE"]
    assert unused == ["SPARE"]
