from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator, Sequence
import time

from .instrumentation import Cat
from .session import HGSession
from .. import config


@dataclass
class PhaseStats:
    """Work done inside a timed phase: grid points, eigen-solves, words."""
    label: str
    unit: str = "items"
    done: int = 0
    extra: dict[str, Any] = field(default_factory=dict)

    def tick(self, n: int = 1) -> None:
        self.done += n

    def note(self, **kv: Any) -> None:
        self.extra.update(kv)


def _emit_phase(
    session: HGSession,
    *,
    level: str,
    msg: str,
    cat: Cat,
    ctx: dict[str, Any],
) -> None:
    session.emit_signal(cat, msg, level=level, **ctx)


@contextmanager
def phase_timer(
    session: HGSession | None,
    label: str,
    *,
    cat: Cat = Cat.CLI,
    ctx: dict[str, Any] | None = None,
    unit: str = "items",
    counters: Sequence[str] = (),
) -> Iterator[PhaseStats]:
    """
    START/END brackets around a phase.

    The END line carries elapsed seconds, the number of units ticked with
    their rate, and the change of each named session counter.
    """
    if session is None:
        raise RuntimeError("phase_timer requires an active HGSession")
    stats = PhaseStats(label, unit)
    before = {k: session.counters.get(k) for k in counters}
    start = time.perf_counter()
    merged_ctx: dict[str, Any] = {"a": label}
    if ctx:
        merged_ctx.update(ctx)
    _emit_phase(session, level="info", msg=f"START phase: {label}", cat=cat, ctx=merged_ctx)
    try:
        yield stats
    finally:
        elapsed = time.perf_counter() - start
        merged_ctx["elapsed_s"] = f"{elapsed:.3f}"
        if stats.done:
            merged_ctx[unit] = stats.done
            if elapsed > 0:
                merged_ctx[f"{unit}_per_s"] = f"{stats.done / elapsed:.1f}"
        for key in counters:
            # "cauchy.evals" -> "cauchy_evals"
            merged_ctx[key.replace(".", "_")] = session.counters.get(key) - before[key]
        merged_ctx.update(stats.extra)
        slow = elapsed >= config.SLOW_PHASE_S
        _emit_phase(
            session,
            level="warning" if slow else "info",
            msg=f"END phase: {label} ({elapsed:.2f}s{', slow' if slow else ''})",
            cat=cat,
            ctx=merged_ctx,
        )
