# src/hgspec/run_configs.py

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .. import config

# r and lambda stay strings until the command parses them, so "1/4" and
# "sqrt(3)" keep their exact meaning.
RText = str
LambdaText = str


# ---------------------------------------------------------------------------
# Base config (shared knobs)
# ---------------------------------------------------------------------------

@dataclass
class BaseRunConfig:
    """
    Knobs every command understands.

    format None means the command's default format; out None means stdout.
    """
    format: Optional[str] = None
    out: Optional[str] = None
    label: Optional[str] = None


# ---------------------------------------------------------------------------
# Algebra / polynomial commands
# ---------------------------------------------------------------------------

@dataclass
class ProductConfig(BaseRunConfig):
    m: int = 0
    n: int = 0
    r: RText = "1/4"
    check: bool = False


@dataclass
class TableConfig(BaseRunConfig):
    """Coefficient table of P_0..P_max_degree."""
    r: RText = "1/4"
    max_degree: int = 10


# ---------------------------------------------------------------------------
# Spectral commands
# ---------------------------------------------------------------------------

@dataclass
class ClassifyConfig(BaseRunConfig):
    lam: LambdaText = "2"
    r: RText = "1/4"


@dataclass
class MeasureConfig(BaseRunConfig):
    lam: LambdaText = "2"
    r: RText = "1/4"
    grid: int = config.GRID_SIZE


@dataclass
class InvertConfig(BaseRunConfig):
    """
    functional: "delta0", "geometric:<lambda>", "point:<c>", "finite:..." or a bare lambda.
    """
    functional: str = "delta0"
    r: RText = "1/4"
    grid: int = config.GRID_SIZE
    end_band: float = config.END_BAND
    eps_base: float = config.EPS_BASE
    eps_steps: int = config.EPS_STEPS
    levels: int = config.RICHARDSON_LEVELS
    strict: bool = False
    compare: bool = False


@dataclass
class MomentsConfig(BaseRunConfig):
    functional: str = "2"
    r: RText = "1/4"
    max_n: int = 15
    tol: float = 1e-7


@dataclass
class PlotConfig(BaseRunConfig):
    functional: str = "plancherel"
    r: RText = "1/4"
    grid: int = config.GRID_SIZE


# ---------------------------------------------------------------------------
# Free group oracle commands
# ---------------------------------------------------------------------------

@dataclass
class OracleConfig(BaseRunConfig):
    l: int = 2
    maxlen: int = 8


@dataclass
class GramConfig(BaseRunConfig):
    lam: LambdaText = "2"
    l: int = 2
    radius: int = 2
    twist: bool = False
