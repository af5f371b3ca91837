# src/hgspec/commands.py
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from .algebra import HyperElement, format_coefficient, mul_basis, mul_basis_closed, mul_basis_recursive
from .errors import EXIT_OK, EXIT_VERIFICATION, ParameterDomainError, RegimeError
from .export import render_csv, render_json
from .freegroup import enumerate_sphere, haagerup_gram, radial_convolve, sign_twist_check, sphere_size
from .functionals import Geometric, parse_functional, parse_lambda
from .instrumentation import Cat
from .orthopoly import coeffs_P
from .params import Param
from .run_configs import (
    BaseRunConfig,
    ClassifyConfig,
    GramConfig,
    InvertConfig,
    MeasureConfig,
    MomentsConfig,
    OracleConfig,
    PlotConfig,
    ProductConfig,
    TableConfig,
)
from .session import HGSession
from .spectra import SpectralMeasure, classify, geometric_measure, measure_for, verify_functional
from .svg import render_measure_svg
from .transform import default_schedule, interior_grid, invert
from .types import OutputFormat, RunStatus
from .. import config

DENSITY_COLUMNS = ["t", "re_density", "im_density", "residual"]
MOMENT_COLUMNS = ["n", "expected_re", "expected_im", "computed_re", "computed_im", "abs_error"]
CLOSED_FORM_AGREEMENT = 1e-4


@dataclass
class CommandResult:
    command: str
    payload: dict[str, Any]
    columns: list[str] = field(default_factory=list)
    rows: list[Any] = field(default_factory=list)
    svg: str | None = None
    exit_code: int = EXIT_OK
    status: RunStatus = RunStatus.OK

    def render(self, fmt: OutputFormat | str) -> str:
        fmt = OutputFormat(fmt)
        if fmt is OutputFormat.JSON:
            return render_json(self.payload)
        if fmt is OutputFormat.CSV:
            return render_csv(self.columns, self.rows)
        if self.svg is None:
            raise ParameterDomainError(f"{self.command} has no SVG output; use csv or json")
        return self.svg


Runner = Callable[[Any, HGSession], CommandResult]


@dataclass(frozen=True)
class CommandSpec:
    key: str
    description: str
    config_cls: type[BaseRunConfig]
    default_format: OutputFormat
    runner: Runner


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _elements_agree(a: HyperElement, b: HyperElement) -> bool:
    if a.degrees != b.degrees:
        return False
    for k, c in a:
        d = b[k]
        if isinstance(c, Fraction) and isinstance(d, Fraction):
            if c != d:
                return False
        elif abs(c - d) > 1e-12 * max(1.0, abs(c)):
            return False
    return True


def _free_group_rank(p: Param) -> int | None:
    """l when r = 1/(2l) for an integer l >= 2."""
    if not p.exact or p.r <= 0:
        return None
    inv = 1 / (2 * p.r)
    if inv.denominator != 1 or inv.numerator < 2:
        return None
    return int(inv.numerator)


def _term_rows(e: HyperElement) -> list[dict[str, Any]]:
    return [{"k": k, "coefficient": format_coefficient(c)} for k, c in e]


def _atom_label(weight: Any) -> str:
    if isinstance(weight, Fraction):
        return f"w={weight}"
    w = complex(weight)
    return f"w={w.real:.4g}" if w.imag == 0 else f"w={w.real:.3g}{w.imag:+.3g}i"


def _density_samples(measure: SpectralMeasure, grid: int) -> tuple[np.ndarray, np.ndarray]:
    if not measure.has_continuous or grid < 1:
        return np.zeros(0), np.zeros(0, dtype=complex)
    a = measure.halfwidth
    ts = np.linspace(-a, a, grid + 2)[1:-1]
    return ts, measure.density(ts)


def _measure_svg(measure: SpectralMeasure, title: str, grid: int) -> str:
    ts, vals = _density_samples(measure, grid)
    atoms = [(float(a.location), float(complex(a.weight).real), _atom_label(a.weight)) for a in measure.atoms]
    return render_measure_svg(
        ts.tolist(),
        vals.real.tolist(),
        vals.imag.tolist(),
        atoms,
        title=title,
    )


def _density_rows(measure: SpectralMeasure, grid: int) -> list[dict[str, Any]]:
    ts, vals = _density_samples(measure, grid)
    return [
        {"t": float(t), "re_density": float(v.real), "im_density": float(v.imag), "residual": 0.0}
        for t, v in zip(ts, vals)
    ]


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------

def run_product(cfg: ProductConfig, session: HGSession) -> CommandResult:
    p = Param.parse(cfg.r)
    prod = mul_basis(cfg.m, cfg.n, p, session=session)
    payload: dict[str, Any] = {
        "schema": config.SCHEMA_TAG,
        "m": cfg.m,
        "n": cfg.n,
        "r": p.label(),
        "product": prod.to_json(),
    }
    exit_code = EXIT_OK
    if cfg.check:
        checks: dict[str, str] = {}
        recursive = mul_basis_recursive(cfg.m, cfg.n, p)
        checks["recursive"] = "agree" if _elements_agree(recursive, prod) else "mismatch"

        lo, hi = sorted((cfg.m, cfg.n))
        if lo >= 1 and p.r != 0:
            closed = mul_basis_closed(lo, hi, p)
            checks["closed_form"] = "agree" if _elements_agree(closed, prod) else "mismatch"
        else:
            checks["closed_form"] = "skipped"

        l = _free_group_rank(p)
        if (
            l is not None
            and cfg.m + cfg.n <= config.MAX_CONVOLVE_DEGREE
            and sphere_size(l, lo) <= config.MAX_SPHERE_SIZE
        ):
            conv = radial_convolve(cfg.m, cfg.n, l, session=session)
            checks["free_group"] = "agree" if conv == prod else "mismatch"
        else:
            checks["free_group"] = "skipped"

        payload["checks"] = checks
        if "mismatch" in checks.values():
            exit_code = EXIT_VERIFICATION
            session.emit_signal(Cat.ALGEBRA, "product oracles disagree", level="error", m=cfg.m, n=cfg.n, r=p.label())
    return CommandResult(
        "product",
        payload,
        ["k", "coefficient"],
        _term_rows(prod),
        exit_code=exit_code,
        status=RunStatus.OK if exit_code == EXIT_OK else RunStatus.VERIFICATION_FAILED,
    )


def run_table(cfg: TableConfig, session: HGSession) -> CommandResult:
    p = Param.parse(cfg.r)
    if cfg.max_degree < 0:
        raise ParameterDomainError(f"max_degree must be non-negative, got {cfg.max_degree}")
    if cfg.max_degree > config.MAX_DEGREE:
        raise ParameterDomainError(f"max_degree {cfg.max_degree} exceeds HG_MAX_DEGREE={config.MAX_DEGREE}")
    table = [[format_coefficient(c) for c in coeffs_P(n, p)] for n in range(cfg.max_degree + 1)]
    columns = ["n"] + [f"c_{j}" for j in range(cfg.max_degree + 1)]
    rows = [[n] + coeffs + [""] * (cfg.max_degree - n) for n, coeffs in enumerate(table)]
    session.emit_diag(Cat.POLY, "coefficient table", r=p.label(), n=cfg.max_degree)
    payload = {
        "schema": config.SCHEMA_TAG,
        "r": p.label(),
        "rows": [{"n": n, "coefficients": coeffs} for n, coeffs in enumerate(table)],
    }
    return CommandResult("table", payload, columns, rows)


def run_classify(cfg: ClassifyConfig, session: HGSession) -> CommandResult:
    regime = classify(parse_lambda(cfg.lam), Param.parse(cfg.r), session=session)
    prox = regime.boundary_proximity
    row = {
        "lambda": regime.lam.text,
        "r": regime.r.label(),
        "case": regime.case.value,
        "reduced_continuous": regime.reduced_continuous,
        "modulus_gap": prox["modulus_gap"],
        "unit_gap": prox["unit_gap"],
        "flags": ";".join(regime.flags),
    }
    return CommandResult("classify", regime.to_json(), list(row), [row])


def run_measure(cfg: MeasureConfig, session: HGSession) -> CommandResult:
    lam = parse_lambda(cfg.lam)
    p = Param.parse(cfg.r)
    measure = geometric_measure(lam, p, session=session)
    rows = _density_rows(measure, cfg.grid)
    payload = measure.to_json()
    payload["samples"] = rows
    title = f"geometric lambda={lam.text} r={p.label()}"
    return CommandResult("measure", payload, DENSITY_COLUMNS, rows, svg=_measure_svg(measure, title, cfg.grid))


def run_invert(cfg: InvertConfig, session: HGSession) -> CommandResult:
    p = Param.parse(cfg.r)
    phi = parse_functional(cfg.functional, p)
    schedule = default_schedule(cfg.eps_base, cfg.eps_steps)
    grid = interior_grid(p, cfg.grid, cfg.end_band)
    result = invert(phi, p, grid=grid, schedule=schedule, levels=cfg.levels, strict=cfg.strict, session=session)

    closed: SpectralMeasure | None = None
    note = ""
    try:
        closed = measure_for(phi, p, session=session)
    except RegimeError as e:
        note = str(e)

    rows: list[dict[str, Any]] = []
    diffs: list[float] = []
    for est in result.grid:
        row: dict[str, Any] = dict(est.to_row(), converged=est.converged)
        if closed is not None:
            ref = complex(closed.density(est.t))
            row["closed_re"], row["closed_im"] = ref.real, ref.imag
            diff = abs(est.value - ref)
            row["abs_diff"] = diff
            if est.converged:
                diffs.append(diff)
        rows.append(row)

    payload = result.to_json()
    comparison: dict[str, Any] = {"closed_form": closed is not None, "note": note}
    if closed is not None:
        max_diff = max(diffs) if diffs else 0.0
        comparison["max_abs_diff"] = max_diff
        comparison["agrees"] = max_diff <= CLOSED_FORM_AGREEMENT
        comparison["atoms"] = [a.to_json() for a in closed.atoms]
    if isinstance(phi, Geometric):
        payload["regime"] = classify(phi.lam, p, session=session).to_json()
    payload["comparison"] = comparison

    exit_code = EXIT_OK
    if cfg.strict and closed is not None and not comparison["agrees"]:
        exit_code = EXIT_VERIFICATION
    columns = list(DENSITY_COLUMNS)
    if cfg.compare:
        columns += ["converged"] + (["closed_re", "closed_im", "abs_diff"] if closed is not None else [])
    return CommandResult(
        "invert",
        payload,
        columns,
        rows,
        exit_code=exit_code,
        status=RunStatus.OK if exit_code == EXIT_OK else RunStatus.VERIFICATION_FAILED,
    )


def run_moments(cfg: MomentsConfig, session: HGSession) -> CommandResult:
    p = Param.parse(cfg.r)
    spec = parse_functional(cfg.functional, p)
    report = verify_functional(spec, p, cfg.max_n, cfg.tol, session=session)
    exit_code = EXIT_OK if report.passed else EXIT_VERIFICATION
    return CommandResult(
        "moments",
        report.to_json(),
        MOMENT_COLUMNS,
        list(report.rows),
        exit_code=exit_code,
        status=RunStatus.OK if report.passed else RunStatus.VERIFICATION_FAILED,
    )


def run_plot(cfg: PlotConfig, session: HGSession) -> CommandResult:
    p = Param.parse(cfg.r)
    spec = parse_functional(cfg.functional, p)
    measure = measure_for(spec, p, session=session)
    title = f"{spec.label()} r={p.label()}"
    rows = _density_rows(measure, cfg.grid)
    payload = measure.to_json()
    payload["samples"] = rows
    return CommandResult("plot", payload, DENSITY_COLUMNS, rows, svg=_measure_svg(measure, title, cfg.grid))


def run_oracle(cfg: OracleConfig, session: HGSession) -> CommandResult:
    l = cfg.l
    r = Fraction(1, 2 * l)
    pairs: list[dict[str, Any]] = []
    for total in range(cfg.maxlen + 1):
        for m in range(total // 2 + 1):
            n = total - m
            conv = radial_convolve(m, n, l, session=session)
            alg = mul_basis(m, n, r, session=session)
            pairs.append({"m": m, "n": n, "l": l, "match": conv == alg, "terms": len(conv)})

    counts: list[dict[str, Any]] = []
    for n in range(cfg.maxlen + 1):
        expected = sphere_size(l, n)
        if expected > config.MAX_SPHERE_SIZE:
            counts.append({"n": n, "expected": expected, "enumerated": None, "match": None})
            continue
        got = len(enumerate_sphere(l, n, session=session))
        counts.append({"n": n, "expected": expected, "enumerated": got, "match": got == expected})

    ok = all(row["match"] for row in pairs) and all(c["match"] is not False for c in counts)
    payload = {
        "schema": config.SCHEMA_TAG,
        "l": l,
        "r": str(r),
        "maxlen": cfg.maxlen,
        "all_match": ok,
        "pairs": pairs,
        "sphere_counts": counts,
    }
    session.emit_signal(Cat.FREEGROUP, "oracle comparison", l=l, n=cfg.maxlen, pairs=len(pairs), all_match=ok)
    exit_code = EXIT_OK if ok else EXIT_VERIFICATION
    return CommandResult(
        "oracle",
        payload,
        ["m", "n", "l", "match", "terms"],
        pairs,
        exit_code=exit_code,
        status=RunStatus.OK if ok else RunStatus.VERIFICATION_FAILED,
    )


def run_gram(cfg: GramConfig, session: HGSession) -> CommandResult:
    lam = parse_lambda(cfg.lam)
    report = haagerup_gram(lam, cfg.l, cfg.radius, session=session)
    payload = report.to_json()
    exit_code = EXIT_OK
    if cfg.twist:
        twist_ok = sign_twist_check(lam, cfg.l, cfg.radius, session=session)
        payload["sign_twist"] = twist_ok
        if not twist_ok:
            exit_code = EXIT_VERIFICATION
    row = {k: payload[k] for k in ("lambda", "l", "radius", "dimension", "min_eigenvalue", "psd", "residual", "method")}
    return CommandResult(
        "gram",
        payload,
        list(row),
        [row],
        exit_code=exit_code,
        status=RunStatus.OK if exit_code == EXIT_OK else RunStatus.VERIFICATION_FAILED,
    )


COMMANDS: dict[str, CommandSpec] = {
    "product": CommandSpec("product", "exact basis product h_m h_n", ProductConfig, OutputFormat.CSV, run_product),
    "table": CommandSpec("table", "monomial coefficients of P_0..P_N", TableConfig, OutputFormat.CSV, run_table),
    "classify": CommandSpec("classify", "regime of the geometric functional", ClassifyConfig, OutputFormat.JSON, run_classify),
    "measure": CommandSpec("measure", "closed-form geometric measure", MeasureConfig, OutputFormat.JSON, run_measure),
    "invert": CommandSpec("invert", "numeric Stieltjes inversion", InvertConfig, OutputFormat.JSON, run_invert),
    "moments": CommandSpec("moments", "moment verification report", MomentsConfig, OutputFormat.CSV, run_moments),
    "plot": CommandSpec("plot", "SVG plot of a closed-form measure", PlotConfig, OutputFormat.SVG, run_plot),
    "oracle": CommandSpec("oracle", "free-group convolution oracle", OracleConfig, OutputFormat.JSON, run_oracle),
    "gram": CommandSpec("gram", "Haagerup Gram-matrix positivity", GramConfig, OutputFormat.JSON, run_gram),
}


def resolve_format(spec: CommandSpec, cfg: BaseRunConfig) -> OutputFormat:
    if cfg.format is None:
        return spec.default_format
    try:
        return OutputFormat(str(cfg.format).lower())
    except ValueError as e:
        raise ParameterDomainError(f"unknown format {cfg.format!r}; expected csv, json or svg") from e


def get_command(key: str) -> CommandSpec:
    try:
        return COMMANDS[key]
    except KeyError as e:
        raise ParameterDomainError(f"unknown command {key!r}; expected one of {', '.join(COMMANDS)}") from e
