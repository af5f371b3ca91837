from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from collections import defaultdict
from threading import Lock
from time import perf_counter
from typing import Any


class LogMode(str, Enum):
    LIVE = "live"
    DEBUG = "debug"
    TRACE = "trace"


class Cat(str, Enum):
    STARTUP = "STARTUP"
    ALGEBRA = "ALGEBRA"
    CACHE = "CACHE"
    POLY = "POLY"
    BRANCH = "BRANCH"
    CAUCHY = "CAUCHY"
    INVERT = "INVERT"
    ATOM = "ATOM"
    MEASURE = "MEASURE"
    QUAD = "QUAD"
    REGIME = "REGIME"
    FREEGROUP = "FREEGROUP"
    GRAM = "GRAM"
    CLI = "CLI"
    EXPORT = "EXPORT"
    BATCH = "BATCH"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class InstrumentPolicy:
    mode: LogMode = LogMode.LIVE

    # If True, include ctx keys in all emitted lines.
    include_ctx: bool = True

    # Rate limits for noisy events (key -> seconds).
    rate_limits_s: dict[str, float] = field(default_factory=dict)


@dataclass
class Counters:
    _c: dict[str, int] = field(default_factory=lambda: defaultdict(int))
    _lock: Lock = field(default_factory=Lock, repr=False)

    def inc(self, key: str, n: int = 1) -> None:
        with self._lock:
            self._c[key] += n

    def get(self, key: str) -> int:
        return self._c.get(key, 0)

    def snapshot(self) -> dict[str, int]:
        with self._lock:
            return dict(self._c)

    def delta_since(self, before: dict[str, int]) -> dict[str, int]:
        now = self.snapshot()
        return {k: now.get(k, 0) - before.get(k, 0) for k in set(now) | set(before)}


@dataclass
class RateLimiter:
    _last: dict[str, float] = field(default_factory=dict)

    def allow(self, key: str, every_s: float) -> bool:
        now = perf_counter()
        last = self._last.get(key)
        if last is None or (now - last) >= every_s:
            self._last[key] = now
            return True
        return False


def format_ctx(**ctx: Any) -> str:
    # Stable ordering makes grep life easier
    order = ["cmd", "r", "lam", "l", "n", "m", "t", "a"]
    parts = []
    for k in order:
        v = ctx.get(k)
        if v is None:
            continue
        parts.append(f"{k}={v}")
    # include any extras in alpha order
    extras = sorted((k, v) for k, v in ctx.items() if k not in order and v is not None)
    parts.extend([f"{k}={v}" for k, v in extras])
    return " ".join(parts)


# Counter key -> label in the per-run summary line, in print order.
RUN_SUMMARY_COUNTERS: tuple[tuple[str, str], ...] = (
    ("algebra.cache_misses", "cache_misses"),
    ("algebra.cache_hits", "cache_hits"),
    ("cauchy.evals", "cauchy_evals"),
    ("quad.panels", "quad_panels"),
    ("invert.divergent", "divergent"),
    ("freegroup.words_enumerated", "words"),
    ("gram.builds", "gram_builds"),
)


def format_counter_summary(delta: dict[str, int]) -> str:
    return " ".join(f"{label}={delta.get(key, 0)}" for key, label in RUN_SUMMARY_COUNTERS)
