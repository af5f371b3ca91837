# src/hgspec/quadrature.py
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable
import math

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import QuadratureAccuracyError
from .instrumentation import Cat
from .session import HGSession, default_session
from .. import config

Integrand = Callable[[np.ndarray], np.ndarray]

_MACHINE_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    panels: int
    converged: bool


@lru_cache(maxsize=16)
def _rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = leggauss(order)
    return nodes, weights


def gauss_panel(f: Integrand, x0: float, x1: float, order: int = config.QUAD_ORDER) -> complex:
    nodes, weights = _rule(order)
    half = 0.5 * (x1 - x0)
    mid = 0.5 * (x1 + x0)
    vals = np.asarray(f(mid + half * nodes))
    return complex(half * np.dot(weights, vals))


def graded_points(
    center: float,
    scale: float,
    lo: float,
    hi: float,
    *,
    ratio: float = 2.0,
    max_points: int = 60,
) -> list[float]:
    """Breakpoints center +- scale * ratio^k that fall inside (lo, hi)."""
    out: list[float] = []
    if not (scale > 0 and math.isfinite(scale)):
        return out
    if lo < center < hi:
        out.append(center)
    step = scale
    for _ in range(max_points):
        moved = False
        for x in (center - step, center + step):
            if lo < x < hi:
                out.append(x)
                moved = True
        if not moved:
            break
        step *= ratio
    return out


def integrate(
    f: Integrand,
    lo: float,
    hi: float,
    *,
    breakpoints: Iterable[float] = (),
    tol: float = config.QUAD_TOL,
    order: int = config.QUAD_ORDER,
    max_depth: int = config.QUAD_MAX_DEPTH,
    strict: bool = True,
    session: HGSession | None = None,
) -> QuadResult:
    """
    Adaptive Gauss-Legendre panel quadrature of a vectorized integrand.

    A panel is accepted when the whole-panel rule and the sum over its two
    halves agree to the panel's share of tol. Panels that hit max_depth are
    accepted with their error counted; if the summed error exceeds tol the
    result is unconverged (QuadratureAccuracyError when strict).
    """
    s_ = session or default_session()
    cuts = sorted({lo, hi, *(b for b in breakpoints if lo < b < hi)})
    span = hi - lo
    total = 0j
    err = 0.0
    panels = 0
    hit_depth = False

    stack: list[tuple[float, float, complex, int]] = []
    for x0, x1 in zip(cuts, cuts[1:]):
        stack.append((x0, x1, gauss_panel(f, x0, x1, order), 0))

    while stack:
        x0, x1, whole, depth = stack.pop()
        mid = 0.5 * (x0 + x1)
        left = gauss_panel(f, x0, mid, order)
        right = gauss_panel(f, mid, x1, order)
        refined = left + right
        diff = abs(refined - whole)
        local_tol = max(tol * (x1 - x0) / span, 50.0 * _MACHINE_EPS * abs(refined))
        if diff <= local_tol or depth >= max_depth:
            if diff > local_tol:
                hit_depth = True
            total += refined
            err += diff
            panels += 1
            continue
        s_.emit_trace(Cat.QUAD, "panel split", key="QUAD.panel_split", a=f"[{x0:.3g},{x1:.3g}]", depth=depth)
        stack.append((x0, mid, left, depth + 1))
        stack.append((mid, x1, right, depth + 1))

    s_.counters.inc("quad.panels", panels)
    converged = err <= tol
    result = QuadResult(total, err, panels, converged)
    if not converged:
        s_.counters.inc("quad.unconverged")
        s_.emit_signal(
            Cat.QUAD,
            "quadrature missed its target",
            level="warning",
            achieved=f"{err:.3g}",
            target=f"{tol:.3g}",
            depth_limited=hit_depth,
        )
        if strict:
            raise QuadratureAccuracyError(
                f"quadrature error estimate {err:.3g} exceeds target {tol:.3g}",
                achieved=err,
                target=tol,
            )
    return result
