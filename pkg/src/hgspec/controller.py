# src/hgspec/controller.py
from __future__ import annotations

import json
import logging
from datetime import datetime
from pathlib import Path
from time import perf_counter
from typing import Any

from .commands import CommandResult, get_command, resolve_format
from .config_builder import build_run_config
from .context import AppContext
from .errors import EXIT_OK, HypergroupError
from .export import render_json, write_output
from .failures import error_record_from_exception, make_error_record
from .instrumentation import Cat, format_counter_summary
from .run_configs import BaseRunConfig
from .run_reader import RunInstruction
from .timing import phase_timer
from .types import RunMeta, RunStatus
from .. import config

EXIT_INTERNAL = 1

# Exit codes ranked from best to worst for the batch summary.
_EXIT_RANK = {EXIT_OK: 0, 4: 1, 3: 2, 2: 3, EXIT_INTERNAL: 4}


def worst_exit(codes: list[int]) -> int:
    return max(codes, key=lambda c: _EXIT_RANK.get(c, 5), default=EXIT_OK)


class RunController:
    """
    Executes commands for the CLI: a single command to stdout/--out, or a
    batch of runs into runs/<timestamp>/.
    """

    def __init__(self, ctx: AppContext):
        self.ctx = ctx
        self.logger = ctx.logger
        self.session = ctx.session
        self.reader = ctx.reader

    def _ctx(self, *, step: str | None = None, cmd: str | None = None, **extra: Any) -> dict[str, Any]:
        ctx: dict[str, Any] = {}
        if cmd:
            ctx["cmd"] = cmd
        if step:
            ctx["step"] = step
        ctx.update({k: v for k, v in extra.items() if v is not None})
        return ctx

    # ---------- single command ----------

    def execute(self, command: str, cfg: BaseRunConfig) -> tuple[CommandResult, str]:
        """Run one command and render it; errors propagate."""
        spec = get_command(command)
        fmt = resolve_format(spec, cfg)
        with phase_timer(self.session, f"{command}", cat=Cat.CLI, ctx=self._ctx(cmd=command)):
            result = spec.runner(cfg, self.session)
        return result, result.render(fmt)

    def run_command(self, command: str, cfg: BaseRunConfig) -> int:
        """
        landing point for a single CLI subcommand

        Errors become a JSON error record on stdout; the exit code follows the error class.
        """
        try:
            result, text = self.execute(command, cfg)
            write_output(text, cfg.out, session=self.session)
            return result.exit_code
        except HypergroupError as e:
            return self.run_command_error(command, e)
        except Exception as e:
            self.logger.exception("Unexpected failure in %s", command)
            rec = make_error_record(kind="internal", message=repr(e), exit_code=EXIT_INTERNAL, command=command)
            write_output(render_json(rec), None, session=self.session)
            return EXIT_INTERNAL

    def run_command_error(self, command: str, e: HypergroupError) -> int:
        """Print the machine-readable error record for `e` and return its exit code."""
        self.session.emit_signal(
            Cat.CLI,
            f"{command} failed: {e}",
            level="error",
            **self._ctx(cmd=command, kind=e.kind, exit_code=e.exit_code),
        )
        write_output(render_json(error_record_from_exception(e, command=command)), None, session=self.session)
        return e.exit_code

    # ---------- batch ----------

    def run_batch(self, path: str | Path) -> int:
        """
        Read run files from `path` and execute each run, writing
        runs/<timestamp>/outputs/<label>.<ext> and a run_meta.json summary.
        """
        run_dir = self._init_run_dir()
        self._attach_run_file_logger(run_dir)
        self.session.emit_signal(Cat.BATCH, "Run output dir", path=run_dir.as_posix(), **self._ctx(step="run_dir"))

        codes: list[int] = []
        try:
            with phase_timer(self.session, "Run file parse", cat=Cat.BATCH):
                try:
                    runs = self.reader.read_path(path)
                except (HypergroupError, FileNotFoundError) as e:
                    self.session.emit_signal(Cat.BATCH, f"Cannot read runs: {e}", level="error", **self._ctx(step="read"))
                    exc = e if isinstance(e, HypergroupError) else None
                    rec = (
                        error_record_from_exception(exc, source=str(path))
                        if exc is not None
                        else make_error_record(kind="file_not_found", message=str(e), source=str(path))
                    )
                    self._dump_json(run_dir / "error.json", rec)
                    write_output(render_json(rec), None, session=self.session)
                    return rec["exit_code"]

            self._update_run_meta(run_dir, spec_paths=[str(path)], run_count=len(runs))
            if not runs:
                self.session.emit_signal(Cat.BATCH, "No runs found", level="warning", **self._ctx(step="read_empty"))
                return EXIT_OK

            results: list[dict[str, Any]] = []
            for run in runs:
                outcome = self._execute_run(run, run_dir)
                results.append(outcome)
                codes.append(outcome["exit_code"])

            overall = worst_exit(codes)
            self._update_run_meta(
                run_dir,
                results=results,
                exit_code=overall,
                finished_at=datetime.now().isoformat(timespec="seconds"),
            )
            self.session.emit_signal(
                Cat.BATCH,
                f"Batch done runs={len(runs)} ok={codes.count(EXIT_OK)} exit={overall}",
                **self._ctx(step="done", path=run_dir.as_posix()),
            )
            write_output(render_json({"run_dir": run_dir.as_posix(), "exit_code": overall, "results": results}), None, session=self.session)
            return overall
        finally:
            self._detach_run_file_logger()

    def _execute_run(self, run: RunInstruction, run_dir: Path) -> dict[str, Any]:
        status = RunStatus.ABORTED
        exit_code = EXIT_INTERNAL
        out_path: Path | None = None
        t0 = perf_counter()
        start_counters = self.session.counters.snapshot()
        try:
            self.session.emit_signal(Cat.BATCH, "Run start", **self._ctx(cmd=run.command, step="start", label=run.label))
            cfg = build_run_config(run.command, run.raw_args)
            result, text = self.execute(run.command, cfg)
            ext = resolve_format(get_command(run.command), cfg).value
            out_path = run_dir / "outputs" / f"{run.label}.{ext}"
            write_output(text, str(out_path), session=self.session)
            exit_code = result.exit_code
            status = result.status
        except HypergroupError as e:
            exit_code = e.exit_code
            status = RunStatus.FAILED
            out_path = run_dir / "outputs" / f"{run.label}.error.json"
            rec = error_record_from_exception(e, command=run.command, label=run.label, source=str(run.source_path))
            self._dump_json(out_path, rec)
            self.session.emit_signal(
                Cat.BATCH, f"Run failed: {e}", level="error", **self._ctx(cmd=run.command, label=run.label, kind=e.kind)
            )
        except Exception as e:
            self.logger.exception("Unexpected failure in run %s", run.label)
            status = RunStatus.FAILED
            out_path = run_dir / "outputs" / f"{run.label}.error.json"
            self._dump_json(
                out_path,
                make_error_record(
                    kind="internal",
                    message=repr(e),
                    exit_code=EXIT_INTERNAL,
                    command=run.command,
                    label=run.label,
                    source=str(run.source_path),
                ),
            )
        finally:
            elapsed = perf_counter() - t0
            delta = self.session.counters.delta_since(start_counters)
            try:
                self.session.emit_signal(
                    Cat.BATCH,
                    f"Run end status={status.value} exit={exit_code} elapsed={elapsed:.2f}s "
                    f"{format_counter_summary(delta)}",
                    **self._ctx(cmd=run.command, step="end", label=run.label),
                )
            except Exception:
                pass

        return {
            "label": run.label,
            "command": run.command,
            "status": status.value,
            "exit_code": exit_code,
            "output": out_path.as_posix() if out_path else None,
            "elapsed_s": round(perf_counter() - t0, 3),
        }

    # ---------- run directory ----------

    def _init_run_dir(self) -> Path:
        """
        Create a per-run output folder under <RUNS_DIR>/<timestamp>/ with subfolders.
        Returns the run_dir Path.
        """
        run_id = datetime.now().strftime("%Y%m%d_%H%M%S")
        base = Path(config.RUNS_DIR)
        run_dir = base / run_id
        suffix = 1
        while run_dir.exists():
            suffix += 1
            run_dir = base / f"{run_id}_{suffix}"
        (run_dir / "outputs").mkdir(parents=True, exist_ok=True)
        (run_dir / "logs").mkdir(parents=True, exist_ok=True)

        meta = RunMeta(
            run_id=run_dir.name,
            started_at=datetime.now().isoformat(timespec="seconds"),
            spec_paths=[],
            run_count=0,
            results=[],
            notes="",
        )
        self._dump_json(run_dir / "run_meta.json", meta)
        return run_dir

    def _update_run_meta(self, run_dir: Path, **updates) -> None:
        meta_path = run_dir / "run_meta.json"
        try:
            meta = json.loads(meta_path.read_text(encoding="utf-8"))
        except Exception:
            meta = {}

        meta.update(updates)
        self._dump_json(meta_path, meta)

    def _dump_json(self, path: Path, payload) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, default=str), encoding="utf-8")

    def _attach_run_file_logger(self, run_dir: Path) -> None:
        logger = self.logger
        log_path = run_dir / "logs" / f"{run_dir.name}.log"

        # Remove the default file handler if present (prevents double logging)
        for h in list(logger.handlers):
            if getattr(h, "name", "") == "default_file":
                try:
                    h.flush()
                    h.close()
                except Exception:
                    pass
                logger.removeHandler(h)

        fmt = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
        formatter = logging.Formatter(fmt)

        run_fh = logging.FileHandler(log_path, mode="w", encoding="utf-8")
        run_fh.setLevel(logging.DEBUG)
        run_fh.setFormatter(formatter)
        run_fh.name = "run_file"

        logger.addHandler(run_fh)
        self.session.emit_signal(
            Cat.STARTUP,
            "File logging redirected",
            path=log_path.as_posix(),
            **self._ctx(step="run_logger"),
        )

    def _detach_run_file_logger(self) -> None:
        for h in list(self.logger.handlers):
            if getattr(h, "name", "") == "run_file":
                try:
                    h.flush()
                    h.close()
                except Exception:
                    pass
                self.logger.removeHandler(h)
