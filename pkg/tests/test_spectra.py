from fractions import Fraction as F
import cmath
import math

import numpy as np
import pytest

from src.hgspec.errors import BranchAmbiguityError, ParameterDomainError, RegimeError
from src.hgspec.functionals import DeltaAt0, Geometric, PointEval, parse_lambda
from src.hgspec.params import Param
from src.hgspec.spectra import (
    Atom,
    atom_in_unit_interval,
    atom_residue,
    atom_weight,
    c_r,
    classify,
    continuous_moment,
    edge_density,
    ellipse_trace,
    geometric_measure,
    mass_balance_sweep,
    measure_for,
    moment,
    plancherel_measure,
    positivity_report,
    sample_density,
    sqrt_at_c_r,
    verify_functional,
)
from src.hgspec.types import MeasureFamily, RegimeCase

R = F(1, 4)
A = math.sqrt(3) / 2


# ---------- c_r and classification ----------

def test_c_r_values():
    assert c_r(F(3, 2), R) == F(7, 8)
    assert c_r(1, R) == 1
    assert c_r(3, R) == 1
    assert complex(c_r(parse_lambda("sqrt(3)"), R)).real == pytest.approx(A)


@pytest.mark.parametrize(
    "lam, case, reduced",
    [
        ("2", RegimeCase.CONTINUOUS_ONLY, True),
        ("3/2", RegimeCase.CONTINUOUS_PLUS_ATOM, False),
        ("sqrt(3)", RegimeCase.CONTINUOUS_ONLY, True),
        ("sqrt(3)*exp(i*pi*1/3)", RegimeCase.NOT_IN_ASTAR, True),
        ("0.9", RegimeCase.NOT_IN_ASTAR, False),
        ("1", RegimeCase.DIRAC_AT_EDGE, False),
        ("-1", RegimeCase.DIRAC_AT_EDGE, False),
        ("1.0+1.0i", RegimeCase.NOT_IN_ASTAR, False),
        ("2*exp(i*pi*1/6)", RegimeCase.CONTINUOUS_ONLY, True),
    ],
)
def test_classify_examples(session, lam, case, reduced):
    regime = classify(lam, R, session=session)
    assert regime.case is case
    assert regime.reduced_continuous is reduced
    assert regime.boundary_proximity["exact"]


def test_classify_flags(session):
    assert "critical_circle_nonreal" in classify("sqrt(3)*exp(i*pi*1/3)", R, session=session).flags
    assert "inside_unit_disc" in classify("0.9", R, session=session).flags
    assert "nonreal_subcritical" in classify("1.0+1.0i", R, session=session).flags


def test_classify_float_input_uses_tolerance(session):
    regime = classify(math.sqrt(3), 0.25, session=session)
    assert regime.case is RegimeCase.CONTINUOUS_ONLY
    assert not regime.boundary_proximity["exact"]
    assert "note" in regime.boundary_proximity


def test_classify_rejects_r_outside_hypergroup(session):
    with pytest.raises(ParameterDomainError):
        classify("2", "3/4", session=session)
    with pytest.raises(ParameterDomainError):
        classify("2", 0, session=session)


def test_regime_json_is_tagged(session):
    doc = classify("3/2", R, session=session).to_json()
    assert doc["schema"] == "hypergroup-spectra/1"
    assert doc["case"] == "ContinuousPlusAtom"


# ---------- measures ----------

def test_plancherel_density():
    m = plancherel_measure(R)
    assert m.density(0.0).real == pytest.approx(math.sqrt(3) / math.pi, abs=1e-6)
    assert m.density(0.95) == 0
    assert not m.atoms


def test_plancherel_at_half_is_arcsine():
    m = plancherel_measure(F(1, 2))
    ts = np.linspace(-0.95, 0.95, 77)
    np.testing.assert_allclose(m.density(ts).real, 1 / (math.pi * np.sqrt(1 - ts * ts)), rtol=0, atol=1e-12)


def test_plancherel_mass(session):
    assert moment(plancherel_measure(0.3), 0, session=session) == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("r", [0.1, 0.25, 0.5])
def test_plancherel_moments_vanish(session, r):
    m = plancherel_measure(r)
    for n in range(21):
        expected = 1.0 if n == 0 else 0.0
        assert abs(moment(m, n, session=session) - expected) <= 1e-9


def test_atom_example_is_exact(session):
    m = geometric_measure("3/2", R, session=session)
    assert m.atoms == [Atom(F(7, 8), F(4, 9))]
    assert m.regime.case is RegimeCase.CONTINUOUS_PLUS_ATOM
    assert atom_weight(F(3, 2), R) == F(4, 9)


def test_atom_example_first_moment(session):
    m = geometric_measure("3/2", R, session=session)
    assert moment(m, 1, session=session) == pytest.approx(2 / 3, abs=1e-8)


@pytest.mark.parametrize("lam", ["1", "-1"])
def test_dirac_at_edge(session, lam):
    m = geometric_measure(lam, R, session=session)
    sign = 1 if lam == "1" else -1
    assert m.family is MeasureFamily.DIRAC
    assert m.atoms == [Atom(F(sign), F(1))]
    assert not m.has_continuous
    for n in range(8):
        assert moment(m, n) == F(sign) ** n


def test_not_in_astar_is_rejected(session):
    with pytest.raises(RegimeError) as exc:
        geometric_measure("1.0+1.0i", R, session=session)
    assert exc.value.details()["regime"]["case"] == "NotInAstar"


@pytest.mark.parametrize("lam", ["1", "1.2", "1.5", "sqrt(3)", "2.5", "-1.5", "2*exp(i*pi*1/6)"])
def test_geometric_moment_recovery(session, lam):
    report = verify_functional(parse_lambda(lam), R, 15, 1e-7, session=session)
    assert report.passed, report.max_error


def test_negative_lambda_mirrors_the_atom(session):
    report = verify_functional(F(-3, 2), R, 15, 1e-7, session=session)
    assert report.passed
    assert report.measure.atoms == [Atom(F(-7, 8), F(4, 9))]


def test_delta_functional_at_half(session):
    report = verify_functional(DeltaAt0(), F(1, 2), 20, 1e-9, session=session)
    assert report.passed


def test_reflected_measure_matches_negative_lambda(session):
    plus = geometric_measure("3/2", R, session=session)
    minus = geometric_measure("-3/2", R, session=session)
    ts = np.linspace(-0.8, 0.8, 11)
    np.testing.assert_allclose(plus.reflected().density(ts), minus.density(ts), atol=1e-14)


def test_edge_density_matches_critical_measure(session):
    ts = np.linspace(-0.8, 0.8, 17)
    plus = geometric_measure("sqrt(3)", R, session=session)
    minus = geometric_measure("-sqrt(3)", R, session=session)
    np.testing.assert_allclose(edge_density(1, ts, R), plus.density(ts).real, rtol=1e-10)
    np.testing.assert_allclose(edge_density(-1, ts, R), minus.density(ts).real, rtol=1e-10)
    assert edge_density(1, 0.95, R) == 0.0
    with pytest.raises(ParameterDomainError):
        edge_density(0, 0.1, R)


def test_mass_balance_across_atom_birth(session):
    lambdas = np.linspace(1.9, 1.45, 19)
    rows = mass_balance_sweep(R, lambdas, session=session)
    crit = math.sqrt(3)
    for row in rows:
        assert row["total"] == pytest.approx(1.0, abs=1e-7)
        if row["lam"] > crit:
            assert row["atom_weight"] == 0
        else:
            assert row["atom_weight"] > 0


def test_measure_for_families(session):
    assert measure_for(DeltaAt0(), R, session=session).family is MeasureFamily.PLANCHEREL
    assert measure_for(Geometric(parse_lambda("2")), R, session=session).family is MeasureFamily.GEOMETRIC
    point = measure_for(PointEval(0.5, Param(R)), R, session=session)
    assert point.atoms == [Atom(0.5, F(1))]
    with pytest.raises(RegimeError):
        measure_for(PointEval(1.5, Param(R)), R, session=session)


def test_continuous_moment_of_atom_only_measure_is_zero(session):
    assert continuous_moment(geometric_measure("1", R, session=session), 3) == 0


def test_sample_density_pairs(session):
    pts = sample_density(plancherel_measure(R), [0.0, 0.5])
    assert [t for t, _ in pts] == [0.0, 0.5]


# ---------- positivity and c_r geometry ----------

def test_positivity_real_lambda(session):
    rep = positivity_report("2", R, session=session)
    assert rep.real and rep.positive and rep.consistent


def test_positivity_complex_lambda(session):
    rep = positivity_report("2*exp(i*pi*1/6)", R, session=session)
    assert not rep.real
    assert not rep.positive
    assert rep.max_imag > 1e-6
    assert rep.consistent


def test_positivity_rejects_boundary_nonreal(session):
    with pytest.raises(RegimeError):
        positivity_report("sqrt(3)*exp(i*pi*1/2)", R, session=session)


def test_atom_residue_and_branch_value():
    assert atom_residue(F(3, 2), R) == F(4, 9)
    assert atom_residue(F(2), R) == 0
    assert atom_residue(F(1), R) == 1
    # inside the critical circle the branch value is (1-r)/lambda - r lambda
    assert sqrt_at_c_r(F(3, 2), R) == F(1, 2) - F(3, 8)
    assert sqrt_at_c_r(F(2), R) == F(1, 2) - F(3, 8)
    with pytest.raises(BranchAmbiguityError):
        sqrt_at_c_r("sqrt(3)*exp(i*pi*1/3)", R)


def test_branch_value_squares_to_the_discriminant():
    lam = 1.3 + 0.4j
    s = complex(sqrt_at_c_r(lam, 0.25))
    c = complex(c_r(lam, 0.25))
    assert s * s == pytest.approx(c * c - 0.75, abs=1e-12)


def test_ellipse_trace():
    tr = ellipse_trace(2.0, R, samples=64)
    assert tr.semi_major == pytest.approx(0.875)
    assert tr.semi_minor == pytest.approx(0.125)
    assert tr.orientation == "counterclockwise"
    assert np.max(np.abs(tr.points.real)) == pytest.approx(0.875)
    assert ellipse_trace(math.sqrt(3), R).orientation == "degenerate"
    assert ellipse_trace(1.2, R).orientation == "clockwise"


def test_atom_in_unit_interval():
    assert atom_in_unit_interval(F(3, 2), R)
    assert atom_in_unit_interval(parse_lambda("sqrt(3)*exp(i*pi*1/3)"), R)
    assert not atom_in_unit_interval(F(9, 10), R)
    assert not atom_in_unit_interval(2 * cmath.exp(1j * math.pi / 6), R)
