from __future__ import annotations
import sys
from typing import Any

if sys.version_info >= (3, 11):
    from typing import NotRequired, TypedDict
else:
    from typing_extensions import NotRequired, TypedDict
from enum import Enum


class Side(str, Enum):
    """Where the branch square root is evaluated relative to the cut I_r."""
    OFF_CUT = "off-cut"
    INTERIOR_ABOVE = "interior-above"
    INTERIOR_BELOW = "interior-below"


class Branch(str, Enum):
    INNER = "inner"
    OUTER = "outer"


class RegimeCase(str, Enum):
    NOT_IN_ASTAR = "NotInAstar"
    CONTINUOUS_ONLY = "ContinuousOnly"
    CONTINUOUS_PLUS_ATOM = "ContinuousPlusAtom"
    DIRAC_AT_EDGE = "DiracAtEdge"


class MeasureFamily(str, Enum):
    PLANCHEREL = "plancherel"
    GEOMETRIC = "geometric"
    DIRAC = "dirac"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    SVG = "svg"


class RunStatus(str, Enum):
    OK = "ok"
    FAILED = "failed"
    VERIFICATION_FAILED = "verification_failed"
    ABORTED = "aborted"


class BoundaryProximity(TypedDict):
    abs_lambda: float
    critical_modulus: float
    modulus_gap: float        # (|lambda|^2 r - (1-r)) / (1-r); 0 on the critical circle
    unit_gap: float           # |lambda| - 1
    imag_ratio: float         # |Im lambda| / |lambda|
    exact: bool
    near_boundary: bool
    note: NotRequired[str]


class DensityRow(TypedDict):
    t: float
    re_density: float
    im_density: float
    residual: float


class MomentRow(TypedDict):
    n: int
    expected_re: float
    expected_im: float
    computed_re: float
    computed_im: float
    abs_error: float


class MassBalanceRow(TypedDict):
    lam: float
    continuous_mass: float
    atom_weight: float
    total: float


class RunMeta(TypedDict):
    run_id: str
    started_at: str
    spec_paths: list[str]
    run_count: int
    results: list[dict[str, Any]]
    notes: str
    exit_code: NotRequired[int]
    finished_at: NotRequired[str]
