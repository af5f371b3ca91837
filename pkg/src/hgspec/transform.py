# src/hgspec/transform.py
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence
import cmath
import math
import numbers

import numpy as np

from .errors import (
    BranchAmbiguityError,
    DivergenceError,
    OnCutError,
    ParameterDomainError,
    PoleError,
    SeriesDomainError,
)
from .functionals import FunctionalSpec, Geometric, PointEval
from .instrumentation import Cat
from .params import Param
from .session import HGSession, default_session
from .spectra import outside_critical_circle
from .timing import phase_timer
from .types import Branch, DensityRow, Side
from .. import config

ParamLike = Param | Fraction | float | str
REAL_SLACK = 1e-12


def _hyper_param(r: ParamLike, *, open_left: bool = False) -> Param:
    p = Param.of(r)
    p.require_hypergroup(open_left=open_left)
    return p


def cut_halfwidth(r: ParamLike) -> float:
    """a = 2 sqrt(r(1-r)); the cut is I_r = [-a, a]."""
    return _hyper_param(r).halfwidth


def default_schedule(base: float = config.EPS_BASE, steps: int = config.EPS_STEPS) -> tuple[float, ...]:
    """eps_k = base * 2^-k, k = 0..steps-1."""
    if base <= 0 or steps < 1:
        raise ParameterDomainError(f"bad epsilon schedule: base={base}, steps={steps}")
    return tuple(base * 2.0 ** -k for k in range(steps))


def _check_schedule(schedule: Sequence[float] | None) -> tuple[float, ...]:
    eps = tuple(float(e) for e in (schedule or default_schedule()))
    if any(e <= 0 for e in eps):
        raise ParameterDomainError("epsilon schedule must be positive")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ParameterDomainError("epsilon schedule must be strictly decreasing")
    return eps


# ---------------------------------------------------------------------------
# Branch square root and the variable change
# ---------------------------------------------------------------------------

def sqrt_branch(w: complex, r: ParamLike, side: Side | str = Side.OFF_CUT) -> complex:
    """
    sqrt(w^2 - 4r(1-r)) continuous off I_r with value ~ w at infinity.

    Realized as sqrt(w - a) * sqrt(w + a) with principal factors. On the cut
    the side selects the boundary value from above or below.
    """
    p = _hyper_param(r)
    a = p.halfwidth
    side = Side(side)
    w = complex(w)

    if side is Side.OFF_CUT:
        if w.imag == 0 and -a < w.real < a:
            raise BranchAmbiguityError(f"w={w.real} lies inside the cut [-{a:.6g}, {a:.6g}]; pass a side")
        return cmath.sqrt(w - a) * cmath.sqrt(w + a)

    t = w.real
    if w.imag != 0:
        raise ParameterDomainError(f"side={side.value} needs a real point, got w={w}")
    if t >= a:
        return complex(math.sqrt(t * t - a * a), 0.0)
    if t <= -a:
        return complex(-math.sqrt(t * t - a * a), 0.0)
    root = math.sqrt(a * a - t * t)
    return complex(0.0, root if side is Side.INTERIOR_ABOVE else -root)


def w_of_z(z: complex | Fraction, r: ParamLike) -> complex | Fraction:
    """w = r z + (1-r)/z; exact for rational z and r."""
    p = Param.of(r)
    if z == 0:
        raise PoleError("w(z) has a pole at z = 0")
    if p.exact and isinstance(z, (Fraction, numbers.Integral)) and not isinstance(z, bool):
        z = Fraction(z)
        return p.r * z + (1 - p.r) / z
    z = complex(z)
    rf = p.as_float()
    return rf * z + (1.0 - rf) / z


def on_cut(w: complex, r: ParamLike) -> bool:
    """True when w lies on the closed cut I_r."""
    a = Param.of(r).halfwidth
    w = complex(w)
    return w.imag == 0 and -a <= w.real <= a


def z_of_w(w: complex, r: ParamLike, branch: Branch | str = Branch.INNER) -> complex:
    """
    Inverse of w(z) off the cut.

    inner: the root with |z| < sqrt((1-r)/r), computed as 2(1-r)/(w + s) to
    avoid cancellation at large |w|; outer: (w + s)/(2r).
    """
    p = _hyper_param(r)
    if p.r == 0:
        raise ParameterDomainError("z_of_w needs r > 0; the r = 0 transform is -phi(1/w)/w")
    branch = Branch(branch)
    w = complex(w)
    if on_cut(w, p):
        raise OnCutError(f"w={w.real} lies on the cut I_r")
    rf = p.as_float()
    s = sqrt_branch(w, p)
    if branch is Branch.INNER:
        return 2.0 * (1.0 - rf) / (w + s)
    return (w + s) / (2.0 * rf)


def in_region_Dr(z: complex, r: ParamLike) -> bool:
    """z in the slit disc {|z| < R} minus [1, R) and (-R, -1], R = sqrt((1-r)/r)."""
    p = _hyper_param(r, open_left=True)
    big_r = p.critical_modulus
    z = complex(z)
    if not abs(z) < big_r:
        return False
    if z.imag == 0 and (1.0 <= z.real < big_r or -big_r < z.real <= -1.0):
        return False
    return True


def in_region_outer(z: complex, r: ParamLike) -> bool:
    """z in {|z| > R} minus (R, (1-r)/r] and [-(1-r)/r, -R); the outer image of C minus [-1, 1]."""
    p = _hyper_param(r, open_left=True)
    big_r = p.critical_modulus
    far = (1.0 - p.as_float()) / p.as_float()
    z = complex(z)
    if not abs(z) > big_r:
        return False
    if z.imag == 0 and (big_r < z.real <= far or -far <= z.real < -big_r):
        return False
    return True


# ---------------------------------------------------------------------------
# Cauchy transform
# ---------------------------------------------------------------------------

def cauchy_C(
    w: complex,
    phi: FunctionalSpec,
    r: ParamLike,
    *,
    continuation: bool = True,
    session: HGSession | None = None,
) -> complex:
    """
    C(w) = integral of (t - w)^-1 against the measure representing phi.

    For r > 0 this is K(w) (phi(z) - r phi_0) with z the inner preimage of w
    and K(w) = -2 / (s + (1-2r) w), s = sqrt_branch(w). K equals
    ((2r-1)w + s) / (2r(1-r)(1-w^2)) with the removable zeros at w = +-1
    cancelled. For r = 0, C(w) = -phi(1/w)/w.
    """
    p = _hyper_param(r)
    w = complex(w)
    s_ = session or default_session()
    s_.counters.inc("cauchy.evals")

    if p.r == 0:
        if w == 0:
            raise PoleError("C(w) at r = 0 has a pole at w = 0")
        return -phi.phi(1.0 / w, continuation=continuation) / w

    z = z_of_w(w, p, Branch.INNER)
    s = sqrt_branch(w, p)
    s_.emit_trace(Cat.BRANCH, "inner preimage", key="BRANCH.inner", w=w, z=z)
    rf = p.as_float()
    k = -2.0 / (s + (1.0 - 2.0 * rf) * w)
    value = k * (phi.phi(z, continuation=continuation) - rf * phi.phi0)
    s_.emit_trace(Cat.CAUCHY, "C(w)", key="CAUCHY.eval", w=w, value=value)
    return value


# ---------------------------------------------------------------------------
# Extrapolation
# ---------------------------------------------------------------------------

def extrapolate_to_zero(eps: Sequence[float], values: Sequence[complex], levels: int) -> tuple[complex, float]:
    """
    Neville/Richardson table in eps evaluated at eps = 0.

    Returns (estimate, residual) where residual is the magnitude of the last
    correction at the highest level used.
    """
    levels = max(0, min(int(levels), len(values) - 2))
    row = [complex(v) for v in values]
    for j in range(1, levels + 1):
        row = [
            (eps[k - j] * row[k - j + 1] - eps[k] * row[k - j]) / (eps[k - j] - eps[k])
            for k in range(j, len(values))
        ]
    if len(row) < 2:
        return row[-1], math.inf
    return row[-1], abs(row[-1] - row[-2])


def _vanishing_rate(eps: Sequence[float], samples: Sequence[complex]) -> float | None:
    """Exponent p when the last three |samples| decay consistently like eps^p, else None."""
    if len(samples) < 3:
        return None
    mags = [abs(v) for v in samples[-3:]]
    if any(m == 0 or not math.isfinite(m) for m in mags):
        return None
    p1 = math.log(mags[2] / mags[1]) / math.log(eps[-1] / eps[-2])
    p2 = math.log(mags[1] / mags[0]) / math.log(eps[-2] / eps[-3])
    if p1 > 0.1 and abs(p1 - p2) <= 0.1 * p1:
        return p1
    return None


@dataclass(frozen=True)
class DensityEstimate:
    t: float
    value: complex
    residual: float
    converged: bool
    note: str = ""

    def to_row(self) -> DensityRow:
        return {
            "t": self.t,
            "re_density": self.value.real,
            "im_density": self.value.imag,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class AtomEstimate:
    t: float
    weight: complex
    residual: float
    converged: bool
    raw_weight: complex = 0j
    note: str = ""

    def to_json(self) -> dict[str, Any]:
        return {
            "t": self.t,
            "weight": [self.weight.real, self.weight.imag],
            "residual": self.residual,
            "converged": self.converged,
            "note": self.note,
        }


def stieltjes_density(
    phi: FunctionalSpec,
    r: ParamLike,
    t: float,
    schedule: Sequence[float] | None = None,
    *,
    levels: int = config.RICHARDSON_LEVELS,
    tol: float = config.DENSITY_RESIDUAL_TOL,
    strict: bool = False,
    session: HGSession | None = None,
) -> DensityEstimate:
    """
    Extrapolated limit of (C(t+ie) - C(t-ie)) / (2 pi i) as e -> 0.

    A residual above tol is reported as non-convergence; this is how a
    functional outside A* shows up numerically.
    """
    s_ = session or default_session()
    eps = _check_schedule(schedule)
    t = float(t)
    samples: list[complex] = []
    try:
        for e in eps:
            up = cauchy_C(complex(t, e), phi, r, session=s_)
            down = cauchy_C(complex(t, -e), phi, r, session=s_)
            samples.append((up - down) / (2j * math.pi))
    except (PoleError, SeriesDomainError) as e:
        est = DensityEstimate(t, complex(math.nan, math.nan), math.inf, False, note=str(e))
    else:
        value, residual = extrapolate_to_zero(eps, samples, levels)
        finite = math.isfinite(residual) and cmath.isfinite(value)
        est = DensityEstimate(t, value, residual, finite and residual <= tol)

    if not est.converged:
        s_.counters.inc("invert.divergent")
        s_.emit_diag(
            Cat.INVERT,
            "density extrapolation did not converge",
            key="INVERT.grid_point",
            t=t,
            residual=est.residual,
        )
        if strict:
            raise DivergenceError(
                f"Stieltjes extrapolation diverged at t={t} (residual {est.residual:.3g} > {tol:.3g})",
                residual=est.residual,
            )
    return est


def detect_atom(
    phi: FunctionalSpec,
    r: ParamLike,
    t0: float,
    schedule: Sequence[float] | None = None,
    *,
    levels: int = config.RICHARDSON_LEVELS,
    tol: float = config.ATOM_TOL,
    residual_tol: float = config.ATOM_RESIDUAL_TOL,
    strict: bool = False,
    session: HGSession | None = None,
) -> AtomEstimate:
    """Extrapolated limit of -i e C(t0 + i e); weights below max(tol, 10 * residual) are reported as 0."""
    s_ = session or default_session()
    eps = _check_schedule(schedule)
    t0 = float(t0)
    if not -1.0 <= t0 <= 1.0:
        raise ParameterDomainError(f"atom location must lie in [-1, 1], got {t0}")
    try:
        samples = [-1j * e * cauchy_C(complex(t0, e), phi, r, session=s_) for e in eps]
    except (PoleError, SeriesDomainError) as e:
        est = AtomEstimate(t0, complex(math.nan, math.nan), math.inf, False, note=str(e))
    else:
        raw, residual = extrapolate_to_zero(eps, samples, levels)
        # below the extrapolation noise the weight is indistinguishable from 0
        floor = max(tol, 10.0 * residual) if math.isfinite(residual) else tol
        weight = 0j if abs(raw) < floor else raw
        ok = math.isfinite(residual) and residual <= residual_tol
        rate = None if ok else _vanishing_rate(eps, samples)
        if rate is not None:
            # algebraic decay eps^p (edge singularities): the limit is 0
            est = AtomEstimate(t0, 0j, abs(samples[-1]), True, raw_weight=raw, note=f"vanishes like eps^{rate:.2f}")
        else:
            est = AtomEstimate(t0, weight, residual, ok, raw_weight=raw)

    s_.emit_diag(Cat.ATOM, "atom extrapolated", t=t0, weight=est.weight, residual=est.residual)
    if not est.converged:
        s_.counters.inc("atom.unconverged")
        if strict:
            raise DivergenceError(
                f"atom extrapolation at t0={t0} did not settle (residual {est.residual:.3g})",
                residual=est.residual,
            )
    return est


# ---------------------------------------------------------------------------
# Full inversion sweep
# ---------------------------------------------------------------------------

@dataclass
class InversionResult:
    r: Param
    phi: FunctionalSpec
    grid: list[DensityEstimate] = field(default_factory=list)
    atoms: list[AtomEstimate] = field(default_factory=list)
    epsilon_schedule: tuple[float, ...] = ()
    excluded: list[float] = field(default_factory=list)

    @property
    def converged(self) -> bool:
        return all(d.converged for d in self.grid) and all(a.converged for a in self.atoms)

    @property
    def max_residual(self) -> float:
        vals = [d.residual for d in self.grid]
        return max(vals) if vals else 0.0

    @property
    def divergent_points(self) -> list[float]:
        return [d.t for d in self.grid if not d.converged]

    def rows(self) -> list[DensityRow]:
        return [d.to_row() for d in self.grid]

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": config.SCHEMA_TAG,
            "r": self.r.label(),
            "functional": self.phi.to_json(),
            "epsilon_schedule": list(self.epsilon_schedule),
            "converged": self.converged,
            "max_residual": self.max_residual,
            "atoms": [a.to_json() for a in self.atoms],
            "excluded": self.excluded,
            "grid": [dict(d.to_row(), converged=d.converged) for d in self.grid],
        }


def interior_grid(
    r: ParamLike,
    size: int = config.GRID_SIZE,
    end_band: float = config.END_BAND,
) -> np.ndarray:
    """size points on I_r with end_band of its length removed at each end ([-1, 1] when r = 0)."""
    p = _hyper_param(r)
    a = p.halfwidth if p.r > 0 else 1.0
    lo = -a + 2.0 * a * end_band
    hi = a - 2.0 * a * end_band
    if size < 1 or lo > hi:
        raise ParameterDomainError(f"empty grid: size={size}, end_band={end_band}")
    return np.linspace(lo, hi, size)


def candidate_atoms(phi: FunctionalSpec, r: ParamLike) -> list[float]:
    """Locations where an atom can sit for this family: c_r(lambda) or c when real in [-1, 1], plus the ends +-1."""
    p = _hyper_param(r)
    out: list[float] = [-1.0, 1.0]
    loc: complex | None = None
    if isinstance(phi, Geometric):
        # outside the critical circle c_r(lambda) is a regular point of C
        if p.r == 0 or not outside_critical_circle(phi.lam, p):
            loc = complex(w_of_z(phi.lam.complex_value, p))
    elif isinstance(phi, PointEval):
        loc = phi.c
    elif p.r == 0:
        loc = 0j
    if loc is not None and abs(loc.imag) <= REAL_SLACK and -1.0 <= loc.real <= 1.0:
        out.append(float(loc.real))
    if p.r == 0 and 0.0 not in out:
        out.append(0.0)
    return sorted(set(out))


def invert(
    phi: FunctionalSpec,
    r: ParamLike,
    *,
    grid: Sequence[float] | None = None,
    schedule: Sequence[float] | None = None,
    candidates: Sequence[float] | None = None,
    levels: int = config.RICHARDSON_LEVELS,
    strict: bool = False,
    session: HGSession | None = None,
) -> InversionResult:
    """
    Numeric inversion: extrapolate atom weights at the candidate locations, then sample the
    density on the grid, skipping points within the exclusion radius of a
    detected atom.
    """
    p = _hyper_param(r)
    s_ = session or default_session()
    eps = _check_schedule(schedule)
    ts = np.asarray(grid if grid is not None else interior_grid(p), dtype=float)
    result = InversionResult(r=p, phi=phi, epsilon_schedule=eps)

    with phase_timer(
        s_,
        "stieltjes inversion",
        cat=Cat.INVERT,
        ctx={"r": p.label(), "n": len(ts)},
        unit="points",
        counters=("cauchy.evals", "invert.divergent"),
    ) as phase:
        for t0 in candidates if candidates is not None else candidate_atoms(phi, p):
            est = detect_atom(phi, p, t0, eps, levels=levels, session=s_)
            if est.weight != 0 or not est.converged:
                result.atoms.append(est)

        radius = config.ATOM_EXCLUSION_FACTOR * max(eps)
        blocked = [a.t for a in result.atoms if a.weight != 0 and a.converged]
        for t in ts:
            if any(abs(t - b) <= radius for b in blocked):
                result.excluded.append(float(t))
                continue
            result.grid.append(stieltjes_density(phi, p, float(t), eps, levels=levels, session=s_))
            phase.tick()
        phase.note(excluded=len(result.excluded))

    s_.emit_signal(
        Cat.INVERT,
        "inversion finished",
        r=p.label(),
        points=len(result.grid),
        atoms=len([a for a in result.atoms if a.weight != 0]),
        divergent=len(result.divergent_points),
        max_residual=f"{result.max_residual:.3g}",
    )
    if strict and not result.converged:
        raise DivergenceError(
            f"inversion did not converge at {len(result.divergent_points)} grid point(s)",
            residual=result.max_residual,
        )
    return result
