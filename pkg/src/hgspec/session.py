# src/hgspec/session.py
import logging
from typing import Any

from .instrumentation import Cat, Counters, InstrumentPolicy, LogMode, RateLimiter, format_ctx
from .. import config  # src/config.py


class HGSession:
    """
    Instrumentation hub shared by every computation in a process.

    Holds the log policy, the always-on counters and the rate limiter. No
    numerical logic belongs here.
    """

    def __init__(self, logger: logging.Logger | None = None, *, mode: str | LogMode | None = None):
        self.logger = logger or logging.getLogger("hgspec")

        raw_mode = mode.value if isinstance(mode, LogMode) else (mode or config.LOG_MODE)
        raw_mode = raw_mode.lower()
        resolved = LogMode(raw_mode) if raw_mode in ("live", "debug", "trace") else LogMode.LIVE

        self.instr_policy = InstrumentPolicy(
            mode=resolved,
            include_ctx=True,
            rate_limits_s=getattr(config, "LOG_RATE_LIMITS_S", {}) or {},
        )
        self.counters = Counters()
        self._rate = RateLimiter()
        self.emit_diag(
            Cat.STARTUP,
            "Session initialized",
            kind="startup",
            log_mode=resolved.value,
        )

    @property
    def mode(self) -> LogMode:
        return self.instr_policy.mode

    def _format(self, cat: Cat, msg: str, ctx: dict[str, Any]) -> str:
        prefix = f"[{cat}]"
        if self.instr_policy.include_ctx:
            c = format_ctx(**ctx)
            if c:
                msg = f"{msg} :: {c}"
        return f"{prefix} {msg}"

    def emit_signal(self, cat: Cat, msg: str, *, level: str | int = "info", **ctx: Any) -> None:
        # always allowed
        line = self._format(cat, msg, ctx)
        if isinstance(level, int):
            self.logger.log(level, line)
            return
        lvl = (level or "info").lower()
        if lvl in ("warn", "warning"):
            self.logger.warning(line)
        elif lvl in ("error", "err", "critical", "fatal"):
            self.logger.error(line)
        elif lvl in ("debug", "trace"):
            self.logger.debug(line)
        else:
            self.logger.info(line)

    def emit_diag(self, cat: Cat, msg: str, *, key: str | None = None, every_s: float | None = None, **ctx: Any) -> None:
        # gated by mode; DEBUG+ only
        if self.instr_policy.mode == LogMode.LIVE:
            return
        if key:
            every_s = every_s if every_s is not None else self.instr_policy.rate_limits_s.get(key)
            if every_s and not self._rate.allow(key, every_s):
                return
        self.logger.debug(self._format(cat, msg, ctx))

    def emit_trace(self, cat: Cat, msg: str, *, key: str | None = None, every_s: float | None = None, **ctx: Any) -> None:
        if self.instr_policy.mode != LogMode.TRACE:
            return
        if key:
            every_s = every_s if every_s is not None else self.instr_policy.rate_limits_s.get(key)
            if every_s and not self._rate.allow(key, every_s):
                return
        self.logger.debug(self._format(cat, msg, ctx))


_DEFAULT_SESSION: HGSession | None = None


def default_session() -> HGSession:
    """Process-wide session used when a caller does not pass one explicitly."""
    global _DEFAULT_SESSION
    if _DEFAULT_SESSION is None:
        _DEFAULT_SESSION = HGSession()
    return _DEFAULT_SESSION


def set_default_session(session: HGSession) -> None:
    global _DEFAULT_SESSION
    _DEFAULT_SESSION = session
