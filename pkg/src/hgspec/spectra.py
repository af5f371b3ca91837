# src/hgspec/spectra.py
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Sequence
import math

import numpy as np

from .errors import BranchAmbiguityError, ParameterDomainError, RegimeError
from .functionals import DeltaAt0, FunctionalSpec, Geometric, Lambda, PointEval
from .instrumentation import Cat
from .orthopoly import eval_P
from .params import Param
from .quadrature import graded_points, integrate
from .session import HGSession, default_session
from .types import BoundaryProximity, MassBalanceRow, MeasureFamily, MomentRow, RegimeCase
from .. import config

ParamLike = Param | Fraction | float | str
LambdaLike = Lambda | Fraction | float | complex | int | str

NEAR_BOUNDARY = 1e-9


def _spectral_param(r: ParamLike) -> Param:
    p = Param.of(r)
    p.require_hypergroup(open_left=True)
    return p


def _exact_pair(lam: Lambda, p: Param) -> bool:
    return p.exact and isinstance(lam.value, Fraction)


def c_r(lam: LambdaLike, r: ParamLike) -> Fraction | complex:
    """c_r(lambda) = r lambda + (1-r)/lambda; exact for rational lambda and r."""
    lam = Lambda.of(lam)
    p = Param.of(r)
    if _exact_pair(lam, p):
        return p.r * lam.value + (1 - p.r) / lam.value
    rf = p.as_float()
    z = lam.complex_value
    return rf * z + (1.0 - rf) / z


def _c_r_of_square(lam: Lambda, p: Param) -> Fraction | complex:
    if _exact_pair(lam, p):
        return c_r(lam.value * lam.value, p)
    z = lam.complex_value
    return c_r(z * z, p)


# ---------------------------------------------------------------------------
# Regime classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Regime:
    case: RegimeCase
    reduced_continuous: bool
    boundary_proximity: BoundaryProximity
    lam: Lambda
    r: Param
    flags: tuple[str, ...] = ()

    @property
    def admissible(self) -> bool:
        return self.case is not RegimeCase.NOT_IN_ASTAR

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": config.SCHEMA_TAG,
            "case": self.case.value,
            "reduced_continuous": self.reduced_continuous,
            "lambda": self.lam.to_json(),
            "r": self.r.label(),
            "boundary_proximity": dict(self.boundary_proximity),
            "flags": list(self.flags),
        }


def _sign(x: Fraction | float, tol: float = 0.0) -> int:
    if abs(x) <= tol:
        return 0
    return 1 if x > 0 else -1


def classify(lam: LambdaLike, r: ParamLike, *, session: HGSession | None = None) -> Regime:
    """
    Spectral regime of the geometric functional phi_n = lambda^-n.

    Exact comparisons are used when |lambda|^2, the realness of lambda and r
    are known exactly; otherwise comparisons carry a relative tolerance and the
    proximity diagnostics say how close the call was.
    """
    lam = Lambda.of(lam)
    p = _spectral_param(r)
    s_ = session or default_session()
    rf = p.as_float()
    one_minus = 1 - p.r

    exact = lam.abs_sq is not None and lam.real_exact is not None and p.exact
    if exact:
        crit = _sign(lam.abs_sq * p.r - one_minus)
        unit = _sign(lam.abs_sq - 1)
        real = bool(lam.real_exact)
    else:
        tol = config.REGIME_REL_TOL
        abs_sq = abs(lam) ** 2
        crit = _sign((abs_sq * rf - (1.0 - rf)) / (1.0 - rf), tol)
        unit = _sign(abs_sq - 1.0, tol * max(1.0, abs_sq))
        real = abs(lam.complex_value.imag) <= tol * abs(lam)

    modulus = abs(lam)
    if exact:
        gap = float((lam.abs_sq * p.r - one_minus) / one_minus)
        unit_gap = 0.0 if unit == 0 else modulus - 1.0
    else:
        gap = (modulus ** 2 * rf - (1.0 - rf)) / (1.0 - rf)
        unit_gap = modulus - 1.0
    imag_ratio = abs(lam.complex_value.imag) / modulus
    prox: BoundaryProximity = {
        "abs_lambda": modulus,
        "critical_modulus": p.critical_modulus,
        "modulus_gap": gap,
        "unit_gap": unit_gap,
        "imag_ratio": imag_ratio,
        "exact": exact,
        "near_boundary": (0 < abs(gap) < NEAR_BOUNDARY) or (0 < abs(unit_gap) < NEAR_BOUNDARY),
    }

    flags: list[str] = []
    if real and unit == 0:
        case = RegimeCase.DIRAC_AT_EDGE
    elif crit > 0:
        case = RegimeCase.CONTINUOUS_ONLY
    elif crit == 0:
        case = RegimeCase.CONTINUOUS_ONLY if real else RegimeCase.NOT_IN_ASTAR
        if not real:
            flags.append("critical_circle_nonreal")
    elif real and unit > 0:
        case = RegimeCase.CONTINUOUS_PLUS_ATOM
    else:
        case = RegimeCase.NOT_IN_ASTAR
        if not real and unit >= 0:
            flags.append("nonreal_subcritical")
        if unit < 0:
            flags.append("inside_unit_disc")
    if crit == 0 and not exact:
        prox["note"] = "critical modulus matched within tolerance"
    if unit == 0 and not exact:
        prox["note"] = "unit modulus matched within tolerance"

    regime = Regime(
        case=case,
        reduced_continuous=crit >= 0,
        boundary_proximity=prox,
        lam=lam,
        r=p,
        flags=tuple(flags),
    )
    s_.emit_diag(Cat.REGIME, "classified", lam=lam.text, r=p.label(), case=case.value, exact=exact)
    if prox["near_boundary"]:
        s_.emit_signal(
            Cat.REGIME,
            "lambda is near a regime boundary",
            level="warning",
            lam=lam.text,
            r=p.label(),
            modulus_gap=f"{gap:.3g}",
            unit_gap=f"{unit_gap:.3g}",
        )
    return regime


# ---------------------------------------------------------------------------
# Measures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Atom:
    location: Fraction | float
    weight: Fraction | float | complex

    def to_json(self) -> dict[str, str]:
        return {"t": _num_str(self.location), "w": _num_str(self.weight)}


def _num_str(x: Fraction | float | complex) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        if x.imag == 0:
            return repr(x.real)
        return f"{x.real!r}{x.imag:+}i"
    return repr(float(x))


@dataclass
class SpectralMeasure:
    """
    Continuous part K sqrt(a^2 - t^2) / ((1 - t^2)(pole - t)) on I_r (no pole
    factor for Plancherel) plus finitely many atoms.
    """
    family: MeasureFamily
    r: Param
    support: tuple[float, float]
    atoms: list[Atom] = field(default_factory=list)
    total_mass_expected: complex = 1 + 0j
    prefactor: complex = 0j
    pole: complex | None = None
    lam: Lambda | None = None
    regime: Regime | None = None

    @property
    def has_continuous(self) -> bool:
        return self.prefactor != 0

    @property
    def halfwidth(self) -> float:
        return self.r.halfwidth

    def density(self, t: Any) -> Any:
        """Continuous density at t (scalar or array); zero outside I_r."""
        arr = np.asarray(t, dtype=float)
        out = np.zeros(arr.shape, dtype=complex)
        if not self.has_continuous:
            return out if arr.ndim else complex(out)
        a = self.halfwidth
        inside = np.abs(arr) < a
        ti = arr[inside]
        vals = self.prefactor * np.sqrt(a * a - ti * ti) / (1.0 - ti * ti)
        if self.pole is not None:
            vals = vals / (self.pole - ti)
        out[inside] = vals
        return out if arr.ndim else complex(out)

    def weighted_density(self, theta: np.ndarray) -> np.ndarray:
        """
        density(a cos th) * a sin th, written without cancellation:
        1 - a^2 cos^2 th = (1-2r)^2 + a^2 sin^2 th, and the pole factor via
        half-angle forms.
        """
        a = self.halfwidth
        rf = self.r.as_float()
        s = np.sin(theta)
        s2 = s * s
        base = (1.0 - 2.0 * rf) ** 2 + a * a * s2
        vals = self.prefactor * (a * a * s2) / base
        if self.pole is not None:
            c = self.pole
            if c.real >= 0:
                dist = (c - a) + 2.0 * a * np.sin(0.5 * theta) ** 2
            else:
                dist = (c + a) - 2.0 * a * np.cos(0.5 * theta) ** 2
            vals = vals / dist
        return vals

    def breakpoints(self) -> list[float]:
        """Panel breakpoints in theta graded toward near-singular spots of the integrand."""
        a = self.halfwidth
        pts: list[float] = []
        rf = self.r.as_float()
        edge = (1.0 - 2.0 * rf) / a
        if 0 < edge < 0.5:
            pts += graded_points(0.0, edge, 0.0, math.pi)
            pts += graded_points(math.pi, edge, 0.0, math.pi)
        c = self.pole
        if c is not None:
            if c.imag != 0 and abs(c.real) < a:
                center = math.acos(c.real / a)
                scale = abs(c.imag) / (a * max(math.sin(center), 1e-3))
                pts += graded_points(center, scale, 0.0, math.pi)
            else:
                center = 0.0 if c.real > 0 else math.pi
                dist = abs(abs(c.real) - a) + abs(c.imag)
                pts += graded_points(center, math.sqrt(dist / a), 0.0, math.pi)
        return sorted(set(pts))

    def reflected(self) -> "SpectralMeasure":
        """Pushforward under t -> -t (the measure of -lambda)."""
        return SpectralMeasure(
            family=self.family,
            r=self.r,
            support=(-self.support[1], -self.support[0]),
            atoms=[Atom(-a.location, a.weight) for a in self.atoms],
            total_mass_expected=self.total_mass_expected,
            prefactor=-self.prefactor if self.pole is not None else self.prefactor,
            pole=-self.pole if self.pole is not None else None,
            lam=-self.lam if self.lam is not None else None,
            regime=self.regime,
        )

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "schema": config.SCHEMA_TAG,
            "family": self.family.value,
            "r": self.r.label(),
            "lambda": self.lam.to_json() if self.lam is not None else None,
            "atoms": [a.to_json() for a in self.atoms],
            "support": list(self.support),
            "continuous": self.has_continuous,
        }
        if self.regime is not None:
            out["regime"] = self.regime.case.value
            out["reduced_continuous"] = self.regime.reduced_continuous
        return out


def dirac_measure(t: Fraction | float, r: ParamLike) -> SpectralMeasure:
    p = Param.of(r)
    loc = t if isinstance(t, Fraction) else float(t)
    return SpectralMeasure(
        family=MeasureFamily.DIRAC,
        r=p,
        support=(float(loc), float(loc)),
        atoms=[Atom(loc, Fraction(1))],
    )


def plancherel_measure(r: ParamLike) -> SpectralMeasure:
    """(1/(2 pi r)) sqrt(4r(1-r) - t^2) / (1 - t^2) on I_r; no atoms."""
    p = _spectral_param(r)
    a = p.halfwidth
    return SpectralMeasure(
        family=MeasureFamily.PLANCHEREL,
        r=p,
        support=(-a, a),
        prefactor=complex(1.0 / (2.0 * math.pi * p.as_float())),
    )


def atom_weight(lam: LambdaLike, r: ParamLike) -> Fraction | complex:
    """(1 - c_r(lambda^2)) / (1 - c_r(lambda)^2), read as 1 at lambda = +-1."""
    lam = Lambda.of(lam)
    p = Param.of(r)
    c = c_r(lam, p)
    den = 1 - c * c
    if den == 0:
        return Fraction(1) if isinstance(c, Fraction) else 1 + 0j
    return (1 - _c_r_of_square(lam, p)) / den


def geometric_measure(
    lam: LambdaLike,
    r: ParamLike,
    *,
    session: HGSession | None = None,
) -> SpectralMeasure:
    """Closed-form measure of phi_n = lambda^-n (continuous part plus the atom at c_r(lambda) when it exists)."""
    lam = Lambda.of(lam)
    p = _spectral_param(r)
    s_ = session or default_session()
    regime = classify(lam, p, session=s_)
    if not regime.admissible:
        raise RegimeError(
            f"lambda={lam.text} at r={p.label()} is not in A* ({', '.join(regime.flags) or 'no measure'})",
            regime=regime,
        )

    if regime.case is RegimeCase.DIRAC_AT_EDGE:
        edge = Fraction(1) if lam.real_value > 0 else Fraction(-1)
        m = dirac_measure(edge, p)
        m.lam = lam
        m.regime = regime
        s_.emit_diag(Cat.MEASURE, "dirac at edge", lam=lam.text, r=p.label(), t=str(edge))
        return m

    z = lam.complex_value
    a = p.halfwidth
    pole = complex(c_r(lam, p))
    if abs(pole.imag) <= config.REGIME_REL_TOL and abs(abs(pole.real) - a) <= config.REGIME_REL_TOL * a:
        # pole on an endpoint of I_r (|lambda| on the critical circle, lambda real)
        pole = complex(math.copysign(a, pole.real))
    measure = SpectralMeasure(
        family=MeasureFamily.GEOMETRIC,
        r=p,
        support=(-a, a),
        prefactor=(z - 1.0 / z) / (2.0 * math.pi),
        pole=pole,
        lam=lam,
        regime=regime,
    )
    if regime.case is RegimeCase.CONTINUOUS_PLUS_ATOM:
        loc = c_r(lam, p)
        weight = atom_weight(lam, p)
        if not isinstance(loc, Fraction):
            loc = float(complex(loc).real)
            weight = float(complex(weight).real)
        measure.atoms.append(Atom(loc, weight))
    s_.emit_diag(
        Cat.MEASURE,
        "geometric measure",
        lam=lam.text,
        r=p.label(),
        case=regime.case.value,
        atoms=len(measure.atoms),
    )
    return measure


def measure_for(spec: FunctionalSpec, r: ParamLike, *, session: HGSession | None = None) -> SpectralMeasure:
    """Closed-form measure for the families that have one."""
    p = Param.of(r)
    if isinstance(spec, DeltaAt0):
        return plancherel_measure(p)
    if isinstance(spec, Geometric):
        return geometric_measure(spec.lam, p, session=session)
    if isinstance(spec, PointEval):
        c = complex(spec.c)
        if c.imag == 0 and -1.0 <= c.real <= 1.0:
            return dirac_measure(c.real, spec.r)
        raise RegimeError(f"point functional at c={c} is not a bounded *-character")
    raise RegimeError(f"{spec.family} functionals have no closed-form measure")


# ---------------------------------------------------------------------------
# Moments
# ---------------------------------------------------------------------------

def continuous_moment(
    measure: SpectralMeasure,
    n: int,
    *,
    tol: float = config.QUAD_TOL,
    session: HGSession | None = None,
) -> complex:
    """integral of P_n against the continuous part, over theta in [0, pi] with t = a cos theta."""
    if not measure.has_continuous:
        return 0j
    a = measure.halfwidth
    r = measure.r

    def integrand(theta: np.ndarray) -> np.ndarray:
        return eval_P(n, a * np.cos(theta), r) * measure.weighted_density(theta)

    res = integrate(integrand, 0.0, math.pi, breakpoints=measure.breakpoints(), tol=tol, session=session)
    return res.value


def moment(
    measure: SpectralMeasure,
    n: int,
    r: ParamLike | None = None,
    *,
    tol: float = config.QUAD_TOL,
    session: HGSession | None = None,
) -> complex | Fraction:
    """
    integral of P_n d(measure): quadrature for the continuous part plus
    sum_j w_j P_n(t_j). Exact when the measure is atoms only with exact data.
    """
    if r is not None and Param.of(r).r != measure.r.r:
        raise ParameterDomainError(f"measure was built for r={measure.r.label()}, not r={Param.of(r).label()}")
    p = measure.r
    atom_sum: Any = 0
    for atom in measure.atoms:
        atom_sum = atom_sum + atom.weight * eval_P(n, atom.location, p)
    if not measure.has_continuous:
        if isinstance(atom_sum, (Fraction, int)):
            return Fraction(atom_sum)
        return complex(atom_sum)
    return continuous_moment(measure, n, tol=tol, session=session) + complex(atom_sum)


@dataclass
class VerificationReport:
    label: str
    r: Param
    rows: list[MomentRow]
    tol: float
    measure: SpectralMeasure

    @property
    def passed(self) -> bool:
        return all(row["abs_error"] <= self.tol for row in self.rows)

    @property
    def max_error(self) -> float:
        return max((row["abs_error"] for row in self.rows), default=0.0)

    def to_json(self) -> dict[str, Any]:
        return {
            "schema": config.SCHEMA_TAG,
            "functional": self.label,
            "r": self.r.label(),
            "tol": self.tol,
            "passed": self.passed,
            "max_error": self.max_error,
            "measure": self.measure.to_json(),
            "rows": list(self.rows),
        }


def verify_functional(
    target: FunctionalSpec | LambdaLike,
    r: ParamLike,
    N: int,
    tol: float,
    *,
    session: HGSession | None = None,
) -> VerificationReport:
    """Moments of the closed-form measure against phi_n for n <= N."""
    s_ = session or default_session()
    spec = target if isinstance(target, FunctionalSpec) else Geometric(Lambda.of(target))
    p = Param.of(r)
    measure = measure_for(spec, p, session=s_)
    rows: list[MomentRow] = []
    for n in range(N + 1):
        expected = complex(spec.phi_n(n))
        computed = complex(moment(measure, n, session=s_))
        rows.append(
            {
                "n": n,
                "expected_re": expected.real,
                "expected_im": expected.imag,
                "computed_re": computed.real,
                "computed_im": computed.imag,
                "abs_error": abs(computed - expected),
            }
        )
    report = VerificationReport(spec.label(), p, rows, tol, measure)
    s_.emit_signal(
        Cat.MEASURE,
        "moment verification",
        lam=spec.label(),
        r=p.label(),
        n=N,
        passed=report.passed,
        max_error=f"{report.max_error:.3g}",
    )
    return report


# ---------------------------------------------------------------------------
# Positivity and geometry of c_r
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PositivityReport:
    real: bool
    positive: bool
    scan_positive: bool
    min_density: float
    max_imag: float

    @property
    def consistent(self) -> bool:
        return self.positive == self.scan_positive

    def to_json(self) -> dict[str, Any]:
        return {
            "real": self.real,
            "positive": self.positive,
            "scan_positive": self.scan_positive,
            "consistent": self.consistent,
            "min_density": self.min_density,
            "max_imag": self.max_imag,
        }


def positivity_report(
    lam: LambdaLike,
    r: ParamLike,
    *,
    samples: int = config.GRID_SIZE,
    session: HGSession | None = None,
) -> PositivityReport:
    """real iff lambda is real; positive iff real with |lambda| >= 1, checked against a density scan."""
    lam = Lambda.of(lam)
    measure = geometric_measure(lam, r, session=session)
    regime = measure.regime
    real = lam.is_real
    positive = real and (regime is not None and regime.case is not RegimeCase.NOT_IN_ASTAR) and abs(lam) >= 1.0 - 1e-12

    slack = 1e-12
    if measure.has_continuous:
        a = measure.halfwidth
        ts = np.linspace(-a, a, samples + 2)[1:-1]
        vals = measure.density(ts)
        min_re = float(np.min(vals.real))
        max_im = float(np.max(np.abs(vals.imag)))
    else:
        min_re, max_im = 0.0, 0.0
    weights = [complex(atom.weight) for atom in measure.atoms]
    atoms_ok = all(w.real > 0 and abs(w.imag) <= slack for w in weights)
    max_im = max([max_im] + [abs(w.imag) for w in weights])
    scan_positive = min_re >= -slack and max_im <= slack and atoms_ok
    return PositivityReport(real, positive, scan_positive, min_re, max_im)


def atom_residue(lam: LambdaLike, r: ParamLike) -> Fraction | complex:
    """
    lim (c_r(lambda) - w) C(w) as w -> c_r(lambda), from the closed form:
    0 outside the critical circle, the atom weight inside (1 at lambda = +-1).
    """
    lam = Lambda.of(lam)
    p = _spectral_param(r)
    if outside_critical_circle(lam, p):
        return Fraction(0) if _exact_pair(lam, p) else 0j
    return atom_weight(lam, p)


def outside_critical_circle(lam: Lambda, p: Param) -> bool:
    """|lambda| > sqrt((1-r)/r), exactly when |lambda|^2 and r are exact."""
    if lam.abs_sq is not None and p.exact:
        return lam.abs_sq * p.r > 1 - p.r
    rf = p.as_float()
    return abs(lam) ** 2 * rf > (1.0 - rf) * (1.0 + config.REGIME_REL_TOL)


def _on_critical_circle(lam: Lambda, p: Param) -> bool:
    if lam.abs_sq is not None and p.exact:
        return lam.abs_sq * p.r == 1 - p.r
    big_r = p.critical_modulus
    return abs(abs(lam) - big_r) <= config.REGIME_REL_TOL * big_r


def sqrt_at_c_r(lam: LambdaLike, r: ParamLike) -> Fraction | complex:
    """
    Branch value of sqrt(w^2 - 4r(1-r)) at w = c_r(lambda):
    r lambda - (1-r)/lambda outside the critical circle, (1-r)/lambda - r lambda inside.
    """
    lam = Lambda.of(lam)
    p = _spectral_param(r)
    if _exact_pair(lam, p):
        v, rv = lam.value, p.r
        outer, inner = rv * v - (1 - rv) / v, (1 - rv) / v - rv * v
    else:
        z, rf = lam.complex_value, p.as_float()
        outer, inner = rf * z - (1.0 - rf) / z, (1.0 - rf) / z - rf * z
    if _on_critical_circle(lam, p):
        if lam.is_real:
            return outer
        raise BranchAmbiguityError(f"c_r({lam.text}) lies inside the cut; the branch value needs a side")
    return outer if outside_critical_circle(lam, p) else inner


@dataclass(frozen=True)
class EllipseTrace:
    modulus: float
    semi_major: float
    semi_minor: float
    orientation: str
    points: np.ndarray

    def to_json(self) -> dict[str, Any]:
        return {
            "modulus": self.modulus,
            "semi_major": self.semi_major,
            "semi_minor": self.semi_minor,
            "orientation": self.orientation,
        }


def ellipse_trace(modulus: float, r: ParamLike, samples: int = 360) -> EllipseTrace:
    """Image of the circle |lambda| = modulus under c_r."""
    p = _spectral_param(r)
    if modulus <= 0:
        raise ParameterDomainError(f"modulus must be positive, got {modulus}")
    rf = p.as_float()
    theta = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    lam = modulus * np.exp(1j * theta)
    pts = rf * lam + (1.0 - rf) / lam
    major = rf * modulus + (1.0 - rf) / modulus
    signed_minor = rf * modulus - (1.0 - rf) / modulus
    if abs(signed_minor) <= config.REGIME_REL_TOL * major:
        orientation = "degenerate"
    elif signed_minor > 0:
        orientation = "counterclockwise"
    else:
        orientation = "clockwise"
    return EllipseTrace(float(modulus), major, abs(signed_minor), orientation, pts)


def atom_in_unit_interval(lam: LambdaLike, r: ParamLike) -> bool:
    """True iff c_r(lambda) is a real point of [-1, 1]."""
    lam = Lambda.of(lam)
    p = _spectral_param(r)
    c = c_r(lam, p)
    if isinstance(c, Fraction):
        return -1 <= c <= 1
    c = complex(c)
    tol = config.REGIME_REL_TOL
    on_circle = lam.abs_sq is not None and p.exact and lam.abs_sq * p.r == 1 - p.r
    if not (on_circle or lam.is_real or abs(c.imag) <= tol):
        return False
    return abs(c.real) <= 1.0 + tol


def edge_density(sigma: int, t: Any, r: ParamLike) -> Any:
    """
    Density at lambda = sigma sqrt((1-r)/r) in endpoint form
    ((R - 1/R)/(2 pi)) sqrt((a + sigma t)/(a - sigma t)) / (1 - t^2).
    """
    if sigma not in (1, -1):
        raise ParameterDomainError(f"sigma must be +1 or -1, got {sigma}")
    p = _spectral_param(r)
    a = p.halfwidth
    big_r = p.critical_modulus
    t = np.asarray(t, dtype=float)
    vals = np.zeros(t.shape, dtype=float)
    inside = np.abs(t) < a
    ti = t[inside]
    vals[inside] = (
        ((big_r - 1.0 / big_r) / (2.0 * math.pi)) * np.sqrt((a + sigma * ti) / (a - sigma * ti)) / (1.0 - ti * ti)
    )
    return vals if vals.ndim else float(vals)


def mass_balance_sweep(
    r: ParamLike,
    lambdas: Iterable[float],
    *,
    session: HGSession | None = None,
) -> list[MassBalanceRow]:
    """Continuous mass and atom weight of the geometric measure along real lambdas."""
    p = _spectral_param(r)
    rows: list[MassBalanceRow] = []
    for lam in lambdas:
        m = geometric_measure(lam, p, session=session)
        cont = continuous_moment(m, 0, session=session)
        weight = sum((complex(a.weight) for a in m.atoms), 0j)
        rows.append(
            {
                "lam": float(Lambda.of(lam).real_value),
                "continuous_mass": cont.real,
                "atom_weight": weight.real,
                "total": (cont + weight).real,
            }
        )
    return rows


def sample_density(measure: SpectralMeasure, ts: Sequence[float]) -> list[tuple[float, complex]]:
    vals = measure.density(np.asarray(ts, dtype=float))
    return [(float(t), complex(v)) for t, v in zip(ts, vals)]
