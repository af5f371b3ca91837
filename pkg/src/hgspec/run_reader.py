# src/hgspec/run_reader.py

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from .commands import COMMANDS
from .config_builder import split_known
from .errors import ParameterDomainError
from .instrumentation import Cat
from .session import HGSession


@dataclass
class RunInstruction:
    """
    One command to execute in a batch.

    raw_args holds the run's arguments after defaults were merged; the typed
    config is built from it by config_builder.build_run_config().
    """
    source_path: Path
    command: str
    label: str
    raw_args: Dict[str, Any] = field(default_factory=dict)


# Per-command defaults injected (setdefault) before the typed config is built.
COMMAND_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "product": {"check": True},
    "table": {"max_degree": 10},
    "classify": {},
    "measure": {"format": "json"},
    "invert": {"format": "csv"},
    "moments": {"max_n": 15, "tol": 1e-7},
    "plot": {"format": "svg"},
    "oracle": {"l": 2, "maxlen": 8},
    "gram": {"twist": True},
}


class RunReader:
    """
    Read YAML/JSON run files (or folders of them) into RunInstruction objects.

    A file holds one run (a mapping with "command") or "runs: [...]"; an
    optional top-level "defaults" mapping is merged into every run.
    """

    def __init__(self, logger=None, *, session: HGSession | None = None):
        self.logger = logger
        self.session = session

    def _ctx(self, *, kind: str | None = None, source_path: Path | None = None, **extra: Any) -> dict[str, Any]:
        ctx: dict[str, Any] = {}
        if kind:
            ctx["kind"] = kind
        if source_path is not None:
            ctx["path"] = str(source_path)
        if extra:
            ctx.update(extra)
        return ctx

    def _emit_signal(self, msg: str, *, level: str | int = "info", **ctx: Any) -> None:
        if self.session:
            self.session.emit_signal(Cat.BATCH, msg, level=level, **ctx)
        elif self.logger:
            self.logger.info(msg)

    def _emit_diag(self, msg: str, **ctx: Any) -> None:
        if self.session:
            self.session.emit_diag(Cat.BATCH, msg, **ctx)
        elif self.logger:
            self.logger.debug(msg)

    # ---------- public API ----------

    def read_path(self, path: Union[str, Path]) -> List[RunInstruction]:
        """
        Read a single file OR a directory.

        - If it's a file: parse YAML/JSON and return its runs.
        - If it's a directory: read all *.yml/*.yaml/*.json in it (non-recursive, sorted by name).
        """
        p = Path(path)
        if p.is_dir():
            return self._read_directory(p)
        if p.is_file():
            return self._read_file(p)
        raise FileNotFoundError(f"Run file path not found: {p}")

    # ---------- internal helpers ----------

    def _read_directory(self, dir_path: Path) -> List[RunInstruction]:
        runs: List[RunInstruction] = []
        files = sorted(
            (f for ext in ("*.yml", "*.yaml", "*.json") for f in dir_path.glob(ext)),
            key=lambda f: f.name.lower(),
        )
        for file in files:
            self._emit_diag(f"Reading run file: {file}", **self._ctx(kind="read_file", source_path=file))
            runs.extend(self._read_file(file))

        self._emit_signal(
            f"Loaded {len(runs)} run(s) from directory {dir_path}",
            **self._ctx(kind="read_directory", source_path=dir_path),
        )
        return runs

    def _read_file(self, file_path: Path) -> List[RunInstruction]:
        data = self._load_raw(file_path)
        if not isinstance(data, dict):
            raise ParameterDomainError(f"{file_path}: expected a mapping at the top level")

        defaults = data.get("defaults") or {}
        if "runs" in data:
            entries = data["runs"] or []
        else:
            entries = [{k: v for k, v in data.items() if k != "defaults"}]

        runs = [
            self._run_from_dict(entry, defaults, source_path=file_path, index=i)
            for i, entry in enumerate(entries, start=1)
        ]
        self._emit_signal(
            f"Read {len(runs)} run(s) from {file_path}",
            **self._ctx(kind="read_file", source_path=file_path),
        )
        return runs

    def _load_raw(self, file_path: Path) -> Any:
        suffix = file_path.suffix.lower()
        with file_path.open("r", encoding="utf-8") as f:
            try:
                if suffix in (".yml", ".yaml"):
                    return yaml.safe_load(f)
                elif suffix == ".json":
                    return json.load(f)
            except (yaml.YAMLError, json.JSONDecodeError) as e:
                raise ParameterDomainError(f"{file_path}: cannot parse run file: {e}") from e
        raise ParameterDomainError(f"Unsupported run file extension: {suffix}")

    def _run_from_dict(
        self,
        entry: Dict[str, Any],
        defaults: Dict[str, Any],
        *,
        source_path: Path,
        index: int,
    ) -> RunInstruction:
        if not isinstance(entry, dict):
            raise ParameterDomainError(f"{source_path}: run #{index} is not a mapping")
        command = str(entry.get("command") or "").strip().lower()
        if command not in COMMANDS:
            raise ParameterDomainError(f"{source_path}: run #{index} has unknown command {command!r}")

        args: Dict[str, Any] = {k: v for k, v in entry.items() if k not in ("command", "label")}
        for key, value in (defaults or {}).items():
            args.setdefault(key, value)
        for key, value in COMMAND_DEFAULTS.get(command, {}).items():
            args.setdefault(key, value)

        label: Optional[str] = entry.get("label")
        if not label:
            label = f"{source_path.stem}_{index:02d}_{command}"

        _, ignored = split_known(command, args)
        if ignored:
            self._emit_signal(
                "Ignoring keys not understood by the command",
                level="warning",
                **self._ctx(kind="run", source_path=source_path, cmd=command, keys=",".join(sorted(ignored))),
            )
        return RunInstruction(source_path=source_path, command=command, label=str(label), raw_args=args)
