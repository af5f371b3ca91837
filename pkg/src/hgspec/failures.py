from __future__ import annotations
import sys
from typing import Any

if sys.version_info >= (3, 11):
    from typing import NotRequired, TypedDict
else:
    from typing_extensions import NotRequired, TypedDict

from .errors import HypergroupError, EXIT_DOMAIN
from .. import config


# --- TypedDicts ---
class ErrorRecord(TypedDict):
    schema: str
    kind: str
    message: str
    exit_code: int
    command: str | None
    details: dict[str, Any]
    label: NotRequired[str]
    source: NotRequired[str]


# --- functions and defs ---
def make_error_record(
    *,
    kind: str,
    message: str,
    exit_code: int = EXIT_DOMAIN,
    command: str | None = None,
    details: dict[str, Any] | None = None,
    label: str | None = None,
    source: str | None = None,
) -> ErrorRecord:
    rec: ErrorRecord = {
        "schema": config.SCHEMA_TAG,
        "kind": kind,
        "message": message,
        "exit_code": exit_code,
        "command": command,
        "details": details or {},
    }
    if label is not None:
        rec["label"] = label
    if source is not None:
        rec["source"] = source
    return rec


def error_record_from_exception(
    exc: HypergroupError,
    *,
    command: str | None = None,
    label: str | None = None,
    source: str | None = None,
) -> ErrorRecord:
    return make_error_record(
        kind=exc.kind,
        message=str(exc),
        exit_code=exc.exit_code,
        command=command,
        details=exc.details(),
        label=label,
        source=source,
    )
