"""
Lint the log category enum.

Fails when code references Cat.<NAME> that the enum lacks; lists members
nothing references as a warning. Run from the repo root.
"""
from __future__ import annotations

import ast
import sys
from pathlib import Path

PACKAGE = Path("src/hgspec")
EXTRA_SOURCES = [Path("src/main.py")]


def load_cat_members(inst_path: Path) -> set[str]:
    mod = ast.parse(inst_path.read_text(encoding="utf-8"))
    for node in mod.body:
        if isinstance(node, ast.ClassDef) and node.name == "Cat":
            return {
                stmt.targets[0].id
                for stmt in node.body
                if isinstance(stmt, ast.Assign) and len(stmt.targets) == 1 and isinstance(stmt.targets[0], ast.Name)
            }
    return set()


def find_cat_usage(paths: list[Path]) -> dict[str, list[tuple[Path, int]]]:
    used: dict[str, list[tuple[Path, int]]] = {}
    for path in paths:
        mod = ast.parse(path.read_text(encoding="utf-8"))
        for node in ast.walk(mod):
            if isinstance(node, ast.Attribute) and isinstance(node.value, ast.Name) and node.value.id == "Cat":
                used.setdefault(node.attr, []).append((path, node.lineno))
    return used


def check(root: Path = Path(".")) -> tuple[list[str], list[str]]:
    """(missing members, unused members)."""
    pkg = root / PACKAGE
    members = load_cat_members(pkg / "instrumentation.py")
    sources = sorted(pkg.rglob("*.py")) + [root / p for p in EXTRA_SOURCES if (root / p).exists()]
    used = find_cat_usage(sources)
    missing = sorted(name for name in used if name not in members)
    unused = sorted(name for name in members if name not in used)
    for name in missing:
        for path, line in used[name]:
            print(f"  missing {name}: {path}:{line}")
    return missing, unused


def main() -> int:
    inst_path = PACKAGE / "instrumentation.py"
    if not inst_path.exists():
        print(f"ERROR: {inst_path} not found (run from the repo root)")
        return 2

    missing, unused = check()
    if unused:
        print(f"WARN: Cat members never referenced: {', '.join(unused)}")
    if missing:
        print("ERROR: Missing Cat enum entries (see above)")
        return 1
    print("OK: All Cat.* references are present in the Cat enum.")
    return 0


if __name__ == "__main__":
    sys.exit(main())
