import math

import numpy as np
import pytest
from scipy import integrate

import extremix as ex
from extremix.distributions import _logpdf_raw
from extremix.fitting import numerical_hessian

from conftest import CANONICAL


class TestInitialParams:
    def test_gumbel_moment_start(self):
        a = math.pi / math.sqrt(6.0)
        params = ex.initial_params([-a, 0.0, a], "gumbel")
        assert params.scale == pytest.approx(1.0, abs=1e-12)
        assert params.location == pytest.approx(-0.5772, abs=1e-12)
        assert params.shape == 0.0

    def test_reference_summary_start(self):
        # mean 40.058, sd 2.1892 (three-point construction hits both exactly)
        data = [40.058 - 2.1892, 40.058, 40.058 + 2.1892]
        params = ex.initial_params(data, "generalized")
        assert params.scale == pytest.approx(1.7070, abs=1e-3)
        assert params.location == pytest.approx(39.0726, abs=1e-3)
        assert params.shape == -0.1

    def test_shape_starts_per_family(self):
        data = [1.0, 2.0, 3.0, 4.0, 5.0]
        assert ex.initial_params(data, "weibull").shape == -0.1
        assert ex.initial_params(data, "frechet").shape == 0.1
        assert ex.initial_params(data, "gumbel").shape == 0.0

    def test_support_inflation_terminates(self):
        data = [10.0, 10.0, 10.0, 10.0000001, 9.9999999, 10.5]
        params = ex.initial_params(data, "generalized")
        lo, hi = params.support()
        assert lo < min(data) and max(data) < hi

    def test_constant_data_rejected(self):
        with pytest.raises(ex.DataError):
            ex.initial_params([2.0, 2.0, 2.0], "generalized")


class TestFitMle:
    def test_recovers_canonical_parameters(self):
        data = ex.sample(CANONICAL, 5000, ex.SeededRng(0))
        fit = ex.fit_mle(data, "generalized")
        assert fit.converged
        assert fit.params.location == pytest.approx(39.22, abs=0.15)
        assert fit.params.scale == pytest.approx(2.182, abs=0.15)
        assert fit.params.shape == pytest.approx(-0.237, abs=0.08)

    def test_optimum_beats_truth_on_sample(self):
        data = ex.sample(CANONICAL, 800, ex.SeededRng(9))
        fit = ex.fit_mle(data, "generalized")
        assert fit.log_lik >= ex.log_likelihood(CANONICAL, data)

    def test_gumbel_family_pins_shape(self):
        gumbel = ex.GevParams(0.0, 1.0, 0.0, ex.Family.GUMBEL)
        data = ex.sample(gumbel, 500, ex.SeededRng(4))
        fit = ex.fit_mle(data, "gumbel")
        assert fit.params.shape == 0.0
        assert fit.params.family is ex.Family.GUMBEL

    def test_sign_constraints_exact(self):
        data = ex.sample(CANONICAL, 400, ex.SeededRng(12))
        weib = ex.fit_mle(data, "weibull")
        assert weib.params.shape < 0
        frechet_data = ex.sample(ex.GevParams(0.0, 1.0, 0.4), 400, ex.SeededRng(13))
        frech = ex.fit_mle(frechet_data, "frechet")
        assert frech.params.shape > 0

    def test_refit_from_optimum_is_fixed_point(self):
        data = ex.sample(CANONICAL, 600, ex.SeededRng(21))
        fit = ex.fit_mle(data, "generalized")
        refit = ex.fit_mle(data, "generalized", start=fit.params)
        assert refit.params.location == pytest.approx(fit.params.location, abs=1e-6)
        assert refit.params.scale == pytest.approx(fit.params.scale, abs=1e-6)
        assert refit.params.shape == pytest.approx(fit.params.shape, abs=1e-6)

    def test_deterministic_rerun(self):
        data = ex.sample(CANONICAL, 600, ex.SeededRng(22))
        a = ex.fit_mle(data, "generalized")
        b = ex.fit_mle(data, "generalized")
        assert a.params == b.params
        assert a.log_lik == b.log_lik

    def test_trace_is_monotone(self):
        data = ex.sample(CANONICAL, 600, ex.SeededRng(30))
        fit = ex.fit_mle(data, "generalized")
        assert len(fit.trace) >= 2
        assert all(b >= a for a, b in zip(fit.trace, fit.trace[1:]))
        assert fit.trace[-1] == pytest.approx(fit.log_lik, abs=1e-9)

    def test_gradient_small_at_interior_optimum(self):
        data = ex.sample(CANONICAL, 1000, ex.SeededRng(17))
        fit = ex.fit_mle(data, "generalized")
        assert fit.converged
        theta = np.array([fit.params.location, fit.params.scale, fit.params.shape])

        def ll(t):
            return float(np.sum(_logpdf_raw(data, t[0], t[1], t[2])))

        grad = np.empty(3)
        for j in range(3):
            h = 1e-6 * max(1.0, abs(theta[j]))
            e = np.zeros(3)
            e[j] = h
            grad[j] = (ll(theta + e) - ll(theta - e)) / (2 * h)
        assert np.max(np.abs(grad)) < 1e-4 * (1.0 + abs(fit.log_lik))

    def test_max_iter_exhaustion_is_not_a_crash(self):
        data = ex.sample(CANONICAL, 200, ex.SeededRng(2))
        fit = ex.fit_mle(data, "generalized", ex.FitConfig(max_iter=1))
        assert not fit.converged

    def test_degenerate_data_rejected(self):
        with pytest.raises(ex.DataError):
            ex.fit_mle([3.0] * 10, "generalized")
        with pytest.raises(ex.DataError):
            ex.fit_mle([1.0, 2.0], "generalized")

    def test_shape_stays_inside_box(self):
        # heavy right-skew data pushes the shape; the box must hold
        data = np.concatenate([np.ones(20) * 1.0, [1.1, 1.2, 50.0, 200.0, 1000.0]])
        data += np.linspace(0, 0.01, data.size)  # break ties
        fit = ex.fit_mle(data, "generalized")
        assert -0.99 <= fit.params.shape <= 0.99


class TestNumericalHessian:
    def test_quadratic_oracle(self):
        n = 400.0
        a = 1.7

        def f(theta):
            return n * (theta[0] - a) ** 2 / 2.0

        hess = numerical_hessian(f, np.array([a]))
        se = math.sqrt(np.linalg.inv(hess)[0, 0])
        assert se == pytest.approx(1.0 / math.sqrt(n), rel=1e-6)

    def test_non_finite_stencil_returns_none(self):
        def f(theta):
            return math.inf if theta[0] > 1.0 else theta[0] ** 2

        assert numerical_hessian(f, np.array([1.0])) is None


class TestStdErrors:
    def test_gumbel_asymptotic_variance(self):
        gumbel = ex.GevParams(0.0, 1.0, 0.0, ex.Family.GUMBEL)
        n = 10_000
        data = ex.sample(gumbel, n, ex.SeededRng(27))
        fit = ex.fit_mle(data, "gumbel")

        # quadrature oracle: expected information per observation
        def info_entry(j, k):
            h = 1e-5

            def d2(x):
                def lp(mu, sigma):
                    return float(_logpdf_raw(np.array([x]), mu, sigma, 0.0)[0])

                t = [0.0, 1.0]
                ej = [0.0, 0.0]
                ek = [0.0, 0.0]
                ej[j] = h
                ek[k] = h
                return -(
                    lp(t[0] + ej[0] + ek[0], t[1] + ej[1] + ek[1])
                    - lp(t[0] + ej[0] - ek[0], t[1] + ej[1] - ek[1])
                    - lp(t[0] - ej[0] + ek[0], t[1] - ej[1] + ek[1])
                    + lp(t[0] - ej[0] - ek[0], t[1] - ej[1] - ek[1])
                ) / (4 * h * h)

            integrand = lambda x: d2(x) * math.exp(
                float(_logpdf_raw(np.array([x]), 0.0, 1.0, 0.0)[0])
            )
            # the finite-difference integrand is noisy at ~1e-6; don't let
            # quad chase tolerances below that floor
            lo_part, _ = integrate.quad(integrand, -8.0, 0.0, limit=200, epsabs=1e-6, epsrel=1e-6)
            hi_part, _ = integrate.quad(integrand, 0.0, 15.0, limit=200, epsabs=1e-6, epsrel=1e-6)
            return lo_part + hi_part

        info = np.array([[info_entry(0, 0), info_entry(0, 1)], [info_entry(0, 1), info_entry(1, 1)]])
        var_mu = np.linalg.inv(info)[0, 0]
        assert var_mu == pytest.approx(1.10867, abs=2e-3)  # sanity on the oracle itself
        assert fit.std_errors is not None
        se_mu = fit.std_errors[0]
        assert abs(se_mu - math.sqrt(var_mu / n)) / math.sqrt(var_mu / n) < 0.20
        assert fit.std_errors[2] == 0.0  # shape not estimated

    def test_boundary_optimum_unavailable(self):
        # upper endpoint sits exactly on the sample maximum
        params = ex.GevParams(2.0, 1.0, -0.5)  # endpoint at 4.0
        data = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
        assert ex.std_errors(data, params) is None

    def test_available_at_interior_optimum(self):
        data = ex.sample(CANONICAL, 3000, ex.SeededRng(8))
        fit = ex.fit_mle(data, "generalized")
        assert fit.std_errors is not None
        assert all(se > 0 for se in fit.std_errors)
