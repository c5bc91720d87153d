"""Tests for the fiber measure, its normalization, and the weight projector.

The closed-form hard-cutoff mass pi(1+2a) and a scipy-based reconstruction
of the projector serve as independent oracles; divergence detection is
exercised on purpose with parameters on the wrong side of a = m/2.
"""

import math

import numpy as np
import pytest
from scipy.integrate import quad as scipy_quad

from cstar_index.measure import (
    Cutoff,
    DivergenceDetected,
    FiberMeasureParams,
    ProjectorAxiomsReport,
    QuadratureConfig,
    lambda_m,
    project_m,
    projector_axioms_check,
    pullback_measure_total,
    radial_density,
    unity_check,
)

TIGHT = QuadratureConfig(rel_tolerance=1e-10)
DEFAULT = QuadratureConfig()


def _bump(w):
    return np.exp(-np.abs(w - 1.2) ** 2 / 0.4)


def test_radial_density_values():
    p = FiberMeasureParams(a=1.0, m=0)
    assert radial_density(0.5, p) == 0.5  # pure Lebesgue factor inside r = 1
    assert radial_density(0.0, p) == 0.0
    # fully in the tail: rho = 4 a^2 r^(-4a-1)
    assert abs(radial_density(2.0, p) - 4.0 * 2.0 ** (-6.0) * 2.0) < 1e-15
    hard = FiberMeasureParams(a=1.0, m=0, cutoff=Cutoff.HARD_STEP)
    assert radial_density(0.5, hard) == 0.5
    assert abs(radial_density(2.0, hard) - 0.125) < 1e-15


def test_radial_density_vectorized_and_validated():
    p = FiberMeasureParams(a=2.0, m=1)
    r = np.linspace(0.0, 3.0, 50)
    vals = radial_density(r, p)
    assert vals.shape == r.shape
    assert np.all(vals >= 0)
    with pytest.raises(ValueError):
        radial_density(-0.1, p)


def test_cutoffs_agree_outside_transition_band():
    smooth = FiberMeasureParams(a=1.5, m=0, cutoff=Cutoff.SMOOTH_BUMP)
    hard = FiberMeasureParams(a=1.5, m=0, cutoff=Cutoff.HARD_STEP)
    for r in (0.2, 0.8, 1.0, 1.5, 2.0, 5.0):
        s, h = radial_density(r, smooth), radial_density(r, hard)
        if r <= 1.0 or r >= math.sqrt(2.0):
            assert s == h, r
    # inside the band the smooth density interpolates strictly monotonically
    band = np.linspace(1.001, math.sqrt(2.0) - 0.001, 40)
    sv = radial_density(band, smooth)
    hv = radial_density(band, hard)
    assert np.all(sv > 0)
    assert not np.allclose(sv, hv)


def test_params_validation():
    with pytest.raises(ValueError):
        FiberMeasureParams(a=0.0, m=0)
    with pytest.raises(ValueError):
        FiberMeasureParams(a=1.0, m=-1)
    with pytest.raises(ValueError):
        FiberMeasureParams(a=1.0, m=2)  # a = m/2 diverges
    FiberMeasureParams(a=1.0, m=2, allow_divergent=True)
    FiberMeasureParams(a=1.01, m=2)


def test_quadrature_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tolerance=0.0)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=2)
    with pytest.raises(ValueError):
        QuadratureConfig(angular_nodes=4)


def test_lambda_hard_cutoff_closed_form():
    # Int r^(2m) rho = 1/(2m+2) + 2a^2/(2a-m) exactly for the hard step
    for a in (1.0, 2.0, 3.0):
        for m in (0, 1):
            p = FiberMeasureParams(a=a, m=m, cutoff=Cutoff.HARD_STEP)
            expected = 2.0 * math.pi * (1.0 / (2 * m + 2) + 2 * a * a / (2 * a - m))
            assert abs(lambda_m(p, TIGHT) - expected) < 1e-8, (a, m)
    assert abs(lambda_m(
        FiberMeasureParams(a=1.0, m=0, cutoff=Cutoff.HARD_STEP), TIGHT
    ) - 3.0 * math.pi) < 1e-8


def test_lambda_smooth_stable_under_refinement():
    p = FiberMeasureParams(a=1.0, m=0)
    coarse = lambda_m(p, QuadratureConfig(rel_tolerance=1e-6))
    fine = lambda_m(p, QuadratureConfig(rel_tolerance=1e-9))
    assert coarse > 0
    assert abs(coarse - fine) < 1e-5 * fine


def test_unity_check_is_one():
    for a, m in [(1.0, 0), (2.0, 1), (3.0, 2), (5.0, 3)]:
        for cutoff in (Cutoff.SMOOTH_BUMP, Cutoff.HARD_STEP):
            p = FiberMeasureParams(a=a, m=m, cutoff=cutoff)
            assert abs(unity_check(p, TIGHT) - 1.0) < 1e-8, (a, m, cutoff)


def test_divergence_detected_empirically():
    for m in (1, 2):
        p = FiberMeasureParams(a=m / 2 - 0.1, m=m, allow_divergent=True)
        with pytest.raises(DivergenceDetected):
            lambda_m(p, DEFAULT)
        with pytest.raises(DivergenceDetected):
            unity_check(p, DEFAULT)
    # the borderline case diverges logarithmically and must also be caught
    p = FiberMeasureParams(a=1.0, m=2, allow_divergent=True)
    with pytest.raises(DivergenceDetected):
        lambda_m(p, DEFAULT)


def test_just_convergent_side_converges():
    p = FiberMeasureParams(a=0.5 + 0.1, m=1)
    val = lambda_m(p, DEFAULT)
    assert math.isfinite(val) and val > 0


def test_pullback_measure_total_is_one():
    for cutoff in (Cutoff.SMOOTH_BUMP, Cutoff.HARD_STEP):
        p = FiberMeasureParams(a=1.0, m=0, cutoff=cutoff)
        for w in (1.0, 0.7 * np.exp(0.4j), 1.4 * np.exp(-1.1j)):
            assert abs(pullback_measure_total(p, DEFAULT, w) - 1.0) < 1e-5
    p = FiberMeasureParams(a=2.0, m=1)
    assert abs(pullback_measure_total(p, TIGHT, 1.1) - 1.0) < 1e-8


def test_projector_value_against_independent_oracle():
    # hard cutoff: lambda has a closed form, the radial integral goes to
    # scipy, and the angular average to a dense trapezoid rule, so no code
    # path is shared with project_m
    for a, m in [(1.0, 0), (2.0, 1)]:
        p = FiberMeasureParams(a=a, m=m, cutoff=Cutoff.HARD_STEP)
        lam_exact = 2.0 * math.pi * (1.0 / (2 * m + 2) + 2 * a * a / (2 * a - m))
        proj = project_m(_bump, p, QuadratureConfig(rel_tolerance=1e-8))
        nphi = 512
        phis = 2.0 * np.pi * np.arange(nphi) / nphi

        def radial(t):
            vals = _bump(t * np.exp(1j * phis))
            return float(np.real(np.mean(vals * np.exp(-1j * m * phis)))) * t**m

        i1 = scipy_quad(lambda t: radial(t) * t, 0, 1, epsabs=1e-13, epsrel=1e-12, limit=300)[0]
        i2 = scipy_quad(
            lambda t: radial(t) * 4 * a * a * t ** (-4 * a - 1),
            1, 30.0, epsabs=1e-13, epsrel=1e-12, limit=300,
        )[0]
        coefficient = 2.0 * math.pi * (i1 + i2) / lam_exact
        for w in (0.8 * np.exp(1.1j), 1.3):
            got = proj(complex(w))
            want = complex(w) ** m * coefficient
            assert abs(got - want) < 1e-7, (a, m, w)


def test_projector_shapes_and_zero_rejection():
    p = FiberMeasureParams(a=1.0, m=1)
    proj = project_m(_bump, p, DEFAULT)
    grid = np.array([[1.0 + 0j, 0.5j], [-1.2 + 0.3j, 2.0 + 0j]])
    vals = proj(grid)
    assert vals.shape == grid.shape
    assert isinstance(proj(1.0 + 0.5j), complex)
    with pytest.raises(ValueError):
        proj(0.0)


def test_projector_axioms_at_default_tolerance():
    p = FiberMeasureParams(a=1.0, m=0)
    rep = projector_axioms_check(p, DEFAULT)
    assert isinstance(rep, ProjectorAxiomsReport)
    assert rep.monomial_defect < 1e-6
    assert rep.idempotency_defect < 1e-6
    assert rep.equivariance_defect < 1e-6
    assert rep.measure_total_defect < 1e-6
    assert rep.rel_tolerance == 1e-6


def test_projector_axioms_nonzero_weight():
    p = FiberMeasureParams(a=2.0, m=1)
    rep = projector_axioms_check(p, DEFAULT)
    assert rep.monomial_defect < 1e-6
    assert rep.idempotency_defect < 1e-6
    assert rep.equivariance_defect < 1e-6
    assert rep.measure_total_defect < 1e-6


def test_defects_track_tolerance():
    # every defect must stay within one order of the requested tolerance;
    # the measure total is the route with genuine tolerance dependence
    p = FiberMeasureParams(a=1.0, m=0)
    for tol in (1e-4, 1e-6, 1e-8):
        q = QuadratureConfig(rel_tolerance=tol)
        assert abs(pullback_measure_total(p, q, 1.0) - 1.0) <= 10 * tol
        assert abs(unity_check(p, q) - 1.0) <= 10 * tol
    # composed projection at three levels
    for tol in (1e-3, 1e-4, 1e-5):
        q = QuadratureConfig(rel_tolerance=tol)
        pu = project_m(_bump, p, q)
        ppu = project_m(pu, p, q)
        w0 = 1.0 * np.exp(2.5j)
        assert abs(ppu(complex(w0)) - pu(complex(w0))) <= 10 * tol
