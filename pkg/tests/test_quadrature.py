import math

import numpy as np
import pytest

from src.hgspec.errors import QuadratureAccuracyError
from src.hgspec.quadrature import gauss_panel, graded_points, integrate


def test_single_panel_is_exact_for_polynomials():
    assert gauss_panel(lambda x: x**5 - 2 * x, 0.0, 2.0, order=4).real == pytest.approx(64 / 6 - 4)


def test_smooth_integral(session):
    res = integrate(np.sin, 0.0, math.pi, session=session)
    assert res.converged
    assert res.value.real == pytest.approx(2.0, abs=1e-12)
    assert session.counters.get("quad.panels") == res.panels


def test_endpoint_singularity_with_graded_breakpoints(session):
    pts = graded_points(0.0, 1e-6, 0.0, 1.0)
    res = integrate(np.sqrt, 0.0, 1.0, breakpoints=pts, tol=1e-11, strict=False, session=session)
    assert res.value.real == pytest.approx(2 / 3, abs=1e-10)


def test_complex_integrand(session):
    res = integrate(lambda x: np.exp(1j * x), 0.0, math.pi, session=session)
    assert res.value == pytest.approx(2j, abs=1e-12)


def test_graded_points_stay_inside():
    pts = graded_points(0.5, 0.01, 0.0, 1.0)
    assert 0.5 in pts
    assert all(0.0 < p < 1.0 for p in pts)
    assert graded_points(0.5, 0.0, 0.0, 1.0) == []


def test_missed_target_raises_when_strict(session):
    def kink(x):
        return np.abs(x - 0.3) ** 0.5

    with pytest.raises(QuadratureAccuracyError) as exc:
        integrate(kink, 0.0, 1.0, tol=1e-15, max_depth=0, session=session)
    assert exc.value.target == 1e-15
    assert exc.value.achieved > 1e-15

    res = integrate(kink, 0.0, 1.0, tol=1e-15, max_depth=0, strict=False, session=session)
    assert not res.converged
    assert session.counters.get("quad.unconverged") == 2
