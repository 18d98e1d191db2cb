import math

import pytest

from core.errors import InvalidParameter
from geometry.matrices import principal_eigenvalue
from schedules.primitives import Drift
from systems.analysis import (
    all_thresholds,
    gronwall_audit,
    instability_threshold,
    nonperiodic_experiment,
    parameter_sweep,
    threshold_diag_bound,
    threshold_mu,
    threshold_pb,
)
from systems.propagation import poincare_closed_form


class TestThresholds:
    def test_reference_values(self):
        assert threshold_mu().c_star == pytest.approx(2.13834, abs=1e-5)
        assert threshold_diag_bound().c_star == pytest.approx(2.37323, abs=1e-5)
        assert threshold_pb().c_star == pytest.approx(6.34968, abs=1e-5)

    def test_ordering_and_residuals(self):
        reports = all_thresholds()
        assert [r.name for r in reports] == ["mu", "diagonal_bound", "peano_baker"]
        c_stars = [r.c_star for r in reports]
        assert c_stars == sorted(c_stars)
        assert all(r.residual < 1e-9 for r in reports)

    def test_bracket_contains_root(self):
        for report in all_thresholds(1e-10):
            lo, hi = report.bracket
            assert lo <= report.c_star <= hi
            assert hi - lo <= 1e-8

    def test_mu_crosses_one(self):
        c_star = instability_threshold()
        assert principal_eigenvalue(poincare_closed_form(c_star - 1e-6)) < 1.0
        assert principal_eigenvalue(poincare_closed_form(c_star + 1e-6)) > 1.0

    @pytest.mark.parametrize("precision", [0.0, 1e-13, 1e-2])
    def test_rejects_precision(self, precision):
        with pytest.raises(InvalidParameter):
            threshold_mu(precision)


class TestGronwallAudit:
    def test_default_epsilons(self):
        study = gronwall_audit(3.0)
        assert study.epsilons == [0.1, 0.05, 0.02, 0.01]
        assert all(e <= b for e, b in zip(study.errors, study.bounds))
        assert all(later < earlier for earlier, later in zip(study.errors, study.errors[1:]))
        assert study.mus[-1] > 1.0
        mu = principal_eigenvalue(poincare_closed_form(3.0))
        assert abs(study.mus[-1] - mu) < abs(study.mus[0] - mu)

    def test_a_priori_norms(self):
        study = gronwall_audit(3.0, [0.05])
        norms = study.apriori_norms[0]
        m = study.norm_bounds[0]
        assert len(norms) == 4
        for t, norm in zip((0.5, 1.0, 1.5, 2.0), norms):
            assert norm <= math.exp(m * t)
        assert study.deviation_integrals[0] <= 8.0 * m * 0.05

    def test_error_is_roughly_linear(self):
        study = gronwall_audit(3.0, [0.02, 0.01])
        assert study.errors[1] / study.errors[0] == pytest.approx(0.5, abs=0.2)

    def test_rejects_stable_c(self):
        with pytest.raises(InvalidParameter) as info:
            gronwall_audit(2.0)
        assert info.value.field == "c"

    def test_rejects_inputs(self):
        with pytest.raises(InvalidParameter):
            gronwall_audit(3.0, [0.3])
        with pytest.raises(InvalidParameter):
            gronwall_audit(3.0, [])
        with pytest.raises(InvalidParameter):
            gronwall_audit(3.0, [0.1], step=2e-3)


class TestNonperiodicExperiment:
    def test_default_drift_grows(self):
        report = nonperiodic_experiment(3.0)
        assert report.min_gap >= -1e-12
        assert report.growth_factor > 1e3
        assert len(report.period_norms_v) == 26
        for k, norm in enumerate(report.period_norms_v):
            assert norm >= report.mu ** k * (1.0 - 1e-8)

    def test_period_samples_land_on_multiples(self):
        report = nonperiodic_experiment(3.0, horizon_periods=5, sample_dt=0.25)
        assert report.times[0] == 0.0
        assert report.times[-1] == pytest.approx(10.0)
        assert report.times[8] == pytest.approx(2.0)
        assert report.period_norms_w[0] == pytest.approx(1.0)

    def test_zero_drift_reproduces_periodic_solution(self):
        report = nonperiodic_experiment(3.0, horizon_periods=5, drift=Drift.zero())
        assert report.v_states == report.w_states
        assert report.min_gap == 0.0
        for k, norm in enumerate(report.period_norms_w):
            assert norm == pytest.approx(report.mu ** k, rel=1e-9)

    def test_rejects_inputs(self):
        with pytest.raises(InvalidParameter):
            nonperiodic_experiment(1.0)
        with pytest.raises(InvalidParameter):
            nonperiodic_experiment(3.0, horizon_periods=4)
        with pytest.raises(InvalidParameter):
            nonperiodic_experiment(3.0, horizon_periods=5, sample_dt=0.0)


class TestParameterSweep:
    def test_grid(self):
        points = parameter_sweep(0.5, 8.0, 16)
        assert len(points) == 16
        assert points[0].c == 0.5 and points[-1].c == 8.0
        mus = [p.mu1 for p in points]
        # mu1 increases for c >= 1/2
        assert all(b > a for a, b in zip(mus, mus[1:]))

    def test_cone_columns(self):
        points = parameter_sweep(1.0, 3.0, 3)
        assert math.isnan(points[0].cone_lo)
        assert points[2].cone_lo == pytest.approx(0.5 * math.asin(24.0 / 37.0))
        assert points[2].pb_lower_bound == pytest.approx(4.0 + 1.0 / 12.0)

    def test_rejects_inputs(self):
        with pytest.raises(InvalidParameter):
            parameter_sweep(0.0, 1.0, 5)
        with pytest.raises(InvalidParameter):
            parameter_sweep(2.0, 1.0, 5)
        with pytest.raises(InvalidParameter):
            parameter_sweep(1.0, 2.0, 1)
