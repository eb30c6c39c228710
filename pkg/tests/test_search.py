import numpy as np
import pytest

import extremix as ex
from extremix import tablestub
from extremix.search import GofObjective, _lattice, _refined

from conftest import bimodal_draws


def stub_initial_model():
    return ex.MixtureModel(
        weight=tablestub.BASELINE_P,
        base=tablestub.BASE_PARAMS,
        alt=tablestub.BASE_PARAMS,
    )


class CountingEvaluator:
    def __init__(self, inner):
        self.inner = inner
        self.calls = 0
        self.weights = []

    def __call__(self, model):
        self.calls += 1
        self.weights.append(model.weight)
        return self.inner(model)


class TestObjective:
    def test_matches_manual_gof(self):
        data = bimodal_draws(1)
        fit = ex.fit_mle(data, "generalized")
        model = ex.MixtureModel(weight=0.2, base=fit.params, alt=fit.params)
        manual = ex.chi_square_gof(data, lambda x: ex.mixture_cdf(model, x), df_penalty=0)
        assert ex.objective(data, model) == pytest.approx(manual.p_value, rel=1e-14)

    def test_perfect_model_scores_one(self):
        data = np.linspace(0.025, 0.975, 20)
        params = ex.GevParams(0.0, 1.0, 0.0)
        evaluator = GofObjective(data, k=2)

        class Uniform:
            weight = 0.0
            base = alt = params

        # model cdf reproducing the empirical bin proportions exactly
        uniform_model = ex.MixtureModel(weight=0.0, base=params, alt=params)
        cum = lambda x: np.clip((np.asarray(x) - 0.025) / 0.95, 0, 1)
        res = ex.chi_square_gof(data, cum, df_penalty=0, k=2)
        assert res.p_value == pytest.approx(1.0)

    def test_reference_statistic_to_p(self):
        stat, p = tablestub.TableStubObjective()(
            stub_initial_model().replace(alt=tablestub.BASE_PARAMS.replace(location=43.78))
        )
        assert stat == pytest.approx(11.1785939)
        assert p == pytest.approx(0.0830111)
        assert ex.chi_square_survival(11.1785939, 6) == pytest.approx(0.0830111, abs=1e-4)

    def test_degenerate_binning_scores_zero(self):
        # alt far outside the data pushes all expected mass into one class
        data = np.linspace(0.0, 1.0, 30)
        params = ex.GevParams(1000.0, 0.01, 0.0)
        model = ex.MixtureModel(weight=1.0, base=params, alt=params)
        stat, p = GofObjective(data)(model)
        assert p == 0.0


class TestScanParameter:
    def test_single_point_grid_at_current_value(self):
        data = bimodal_draws(2)
        fit = ex.fit_mle(data, "generalized")
        model = ex.MixtureModel(weight=0.1, base=fit.params, alt=fit.params)
        evaluator = GofObjective(data)
        current_p = evaluator(model)[1]
        stage, out = ex.scan_parameter(
            data, model, "alt_location", [model.alt.location], incumbent_p=current_p
        )
        assert stage.best_p == pytest.approx(current_p, abs=0)
        assert not stage.accepted
        assert out == model

    def test_reference_location_sweep(self):
        stage, model = ex.scan_parameter(
            None,
            stub_initial_model(),
            "alt_location",
            [v for v, _, _ in tablestub.LOCATION_SWEEP],
            incumbent_p=tablestub.BASELINE_P,
            evaluator=tablestub.TableStubObjective(),
        )
        assert stage.best_value == 43.78
        assert stage.best_p == pytest.approx(0.0830111)
        assert stage.accepted
        assert model.alt.location == 43.78

    def test_directional_consistency_increasing(self):
        # sweeping the alt scale upward only hurts: argmax at the grid minimum
        model = stub_initial_model().replace(alt=tablestub.BASE_PARAMS.replace(location=43.78))
        grid = [v for v, _ in tablestub.ALT_SCALE_INCREASING_EARLY]
        stage, _ = ex.scan_parameter(
            None, model, "alt_scale", grid, incumbent_p=0.08301,
            evaluator=tablestub.TableStubObjective(),
        )
        assert stage.best_value == min(grid)

    def test_directional_consistency_decreasing(self):
        model = stub_initial_model().replace(alt=tablestub.BASE_PARAMS.replace(location=43.78))
        grid = [v for v, _ in tablestub.ALT_SCALE_DECREASING_EARLY]
        stage, _ = ex.scan_parameter(
            None, model, "alt_scale", grid, incumbent_p=0.08301,
            evaluator=tablestub.TableStubObjective(),
        )
        assert stage.best_value == 0.05
        assert stage.best_p == pytest.approx(0.25267)

    def test_inadmissible_grid_rejected_before_evaluation(self):
        data = bimodal_draws(3)
        fit = ex.fit_mle(data, "generalized")
        model = ex.MixtureModel(weight=0.1, base=fit.params, alt=fit.params)
        counting = CountingEvaluator(GofObjective(data))
        with pytest.raises(ex.ParameterError):
            ex.scan_parameter(
                data, model, "alt_scale", [0.5, 0.005], incumbent_p=0.1, evaluator=counting
            )
        assert counting.calls == 0

    def test_unknown_parameter_rejected(self):
        model = stub_initial_model()
        with pytest.raises(ex.ParameterError):
            ex.scan_parameter(None, model, "alt_mu", [1.0], incumbent_p=0.1,
                              evaluator=tablestub.TableStubObjective())

    def test_tie_break_smallest_value(self):
        model = stub_initial_model()

        class Flat:
            def __call__(self, m):
                return None, 0.5

        stage, _ = ex.scan_parameter(
            None, model, "alt_location", [41.0, 40.0, 42.0], incumbent_p=0.1, evaluator=Flat()
        )
        assert stage.best_value == 40.0


class TestOptimize:
    def test_empty_free_params_returns_initial(self):
        data = bimodal_draws(4)
        fit = ex.fit_mle(data, "generalized")
        spec = ex.SearchSpec(free_params=(), grids={}, refine_rounds=2)
        model, trace = ex.optimize(data, fit, 0.3, spec)
        assert model.base == fit.params
        assert model.alt == fit.params
        assert model.weight == 0.3
        assert trace.stages == []
        assert trace.final_p == trace.initial_p

    def test_reference_trajectory(self):
        model, trace = ex.optimize(
            np.empty(0),
            tablestub.reference_fit(),
            tablestub.BASELINE_P,
            tablestub.search_spec(),
            evaluator=tablestub.TableStubObjective(),
        )
        assert (model.alt.location, model.base.scale, model.alt.scale) == (43.78, 3.15, 0.4)
        assert [s.incumbent_p for s in trace.stages] == pytest.approx(
            [0.0830111, 0.18169, 0.2278]
        )
        assert trace.initial_p == pytest.approx(0.05416)
        assert model.weight == tablestub.BASELINE_P

    def test_weight_frozen_through_search(self):
        data = bimodal_draws(5)
        fit = ex.fit_mle(data, "generalized")
        base_p = 0.123
        counting = CountingEvaluator(GofObjective(data))
        model, _ = ex.optimize(data, fit, base_p, evaluator=counting)
        assert model.weight == base_p
        assert counting.calls > 0
        assert all(w == base_p for w in counting.weights)

    def test_improves_on_synthetic_mixture(self):
        improved = 0
        for seed in range(5):
            data = bimodal_draws(seed)
            fit = ex.fit_mle(data, "generalized")
            base_p = ex.chi_square_gof(
                data, lambda x: ex.cdf(fit.params, x), df_penalty=3
            ).p_value
            model, trace = ex.optimize(data, fit, base_p)
            improved += trace.final_p > trace.initial_p
            history = trace.incumbent_history()
            assert all(b >= a for a, b in zip(history, history[1:]))
            bests = [s.best_p for s in trace.stages]
            assert all(b >= a for a, b in zip(bests, bests[1:]))
        assert improved >= 4

    def test_deterministic(self):
        data = bimodal_draws(6)
        fit = ex.fit_mle(data, "generalized")
        m1, t1 = ex.optimize(data, fit, 0.2)
        m2, t2 = ex.optimize(data, fit, 0.2)
        assert m1 == m2
        assert len(t1.stages) == len(t2.stages)
        for s1, s2 in zip(t1.stages, t2.stages):
            assert s1.values == s2.values
            assert s1.p_values == s2.p_values
            assert s1.best_value == s2.best_value

    @pytest.mark.parametrize("seed", [0, 1, 3, 4, 5])
    def test_scan_argmax_lands_near_second_mode(self, seed):
        # ground-truth construction: true base component and mixing weight,
        # alt-location sweep should peak within one step of the second mode
        data = bimodal_draws(seed, n=204)
        base = ex.GevParams(0.0, 1.0, -0.2)
        model = ex.MixtureModel(weight=0.1, base=base, alt=ex.GevParams(0.0, 0.5, -0.2))
        grid = list(np.arange(0.0, 8.01, 0.25))
        stage, _ = ex.scan_parameter(data, model, "alt_location", grid, incumbent_p=0.0)
        assert abs(stage.best_value - 5.0) <= 0.25 + 1e-12


class TestGrids:
    def test_lattice_contains_anchor_exactly(self):
        rng = ex.GridRange(0.0, 10.0, 0.3)
        grid = _lattice(4.01234567891234, rng, 0.01, False)
        assert 4.01234567891234 in grid
        assert min(grid) >= 0.0 and max(grid) <= 10.0
        steps = np.diff(grid)
        assert np.allclose(steps, 0.3, atol=1e-9)

    def test_refined_halves_step(self):
        rng = ex.GridRange(0.0, 10.0, 0.4)
        grid = _refined(5.0, rng, 1, 0.01, False)
        assert grid == [4.6, 4.8, 5.0, 5.2, 5.4]
        grid2 = _refined(5.0, rng, 2, 0.01, False)
        assert grid2 == [4.8, 4.9, 5.0, 5.1, 5.2]

    def test_scale_floor_enforced_in_spec(self):
        with pytest.raises(ex.ParameterError):
            ex.SearchSpec(
                free_params=("alt_scale",),
                grids={"alt_scale": ex.GridRange(0.001, 1.0, 0.01)},
            )

    def test_grid_range_validation(self):
        with pytest.raises(ex.ParameterError):
            ex.GridRange(1.0, 1.0, 0.1)
        with pytest.raises(ex.ParameterError):
            ex.GridRange(0.0, 1.0, 2.0)
