"""Tests for the seeded Monte-Carlo sweep harness."""

import numpy as np
import pytest

from onebit_precoding import (
    ComplexityReport,
    SimConfig,
    SolverRefusal,
    compare_sweeps,
    run_sweep,
    run_trial,
)
from onebit_precoding.simulation import (
    SOLVERS,
    available_solvers,
    check_solver_config,
    draw_channel,
    draw_noise,
    register_solver,
    trial_rng,
)

SMALL = dict(nt=4, k=2, m=4, snr_db=(0.0, 10.0), trials=40, seed=7)


class TestSimConfig:
    def test_defaults(self):
        cfg = SimConfig()
        assert (cfg.nt, cfg.k, cfg.m) == (128, 16, 4)
        assert cfg.solver == "two-stage"
        assert cfg.power_norm == "total"

    def test_snr_grid_coerced_to_float_tuple(self):
        cfg = SimConfig(snr_db=[0, 5, 10])
        assert cfg.snr_db == (0.0, 5.0, 10.0)
        assert all(isinstance(s, float) for s in cfg.snr_db)

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"nt": 0},
            {"nt": 4, "k": 5},
            {"k": 0},
            {"m": 1},
            {"snr_db": ()},
            {"trials": 0},
            {"seed": -1},
            {"delta": 0.0},
            {"tmax": 0},
            {"power_norm": "peak"},
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            SimConfig(**kwargs)


class TestSubstreams:
    def test_same_key_same_stream(self):
        a = trial_rng(3, 1, 17).standard_normal(8)
        b = trial_rng(3, 1, 17).standard_normal(8)
        np.testing.assert_array_equal(a, b)

    def test_distinct_keys_distinct_streams(self):
        base = trial_rng(3, 1, 17).standard_normal(8)
        for key in [(3, 1, 18), (3, 2, 17), (4, 1, 17)]:
            assert not np.array_equal(trial_rng(*key).standard_normal(8), base)

    def test_channel_moments(self):
        rng = trial_rng(0, 0, 0)
        h = draw_channel(100, 1000, rng)
        assert np.mean(np.abs(h) ** 2) == pytest.approx(1.0, abs=0.01)
        assert np.abs(h.mean()) < 0.01

    def test_noise_moments(self):
        rng = trial_rng(0, 0, 1)
        z = draw_noise(100_000, rng)
        assert np.mean(np.abs(z) ** 2) == pytest.approx(1.0, abs=0.02)


class TestRunTrial:
    def test_unknown_solver_raises(self):
        cfg = SimConfig(**SMALL, solver="nonesuch")
        with pytest.raises(ValueError):
            run_trial(cfg, 10.0, trial_rng(0, 0, 0))

    def test_error_flags_are_per_user(self):
        cfg = SimConfig(**SMALL)
        res = run_trial(cfg, 10.0, trial_rng(0, 0, 0))
        assert res.errors.shape == (cfg.k,)
        assert res.errors.dtype == bool

    def test_pure_noise_symbol_error_rate(self):
        cfg = SimConfig(nt=4, k=4, m=4, snr_db=(0.0,), trials=1, seed=3, solver="qzf")
        errors = 0
        symbols = 0
        for t in range(2500):
            res = run_trial(cfg, float("-inf"), trial_rng(cfg.seed, 0, t))
            errors += int(res.errors.sum())
            symbols += cfg.k
        assert errors / symbols == pytest.approx(3 / 4, abs=0.02)

    def test_noiseless_feasible_trials_decode_perfectly(self):
        cfg = SimConfig(nt=16, k=2, m=4, snr_db=(0.0,), trials=1, seed=5)
        feasible_seen = 0
        for t in range(200):
            res = run_trial(cfg, float("inf"), trial_rng(cfg.seed, 0, t))
            if res.report.iht_feasible:
                feasible_seen += 1
                assert not res.errors.any()
        assert feasible_seen > 150

    def test_solvers_see_identical_realizations(self):
        # At -inf dB the observation is exactly the noise draw, so any two
        # solvers fed the same substream must produce identical error flags.
        base = dict(nt=4, k=3, m=8, snr_db=(0.0,), trials=1, seed=9)
        for t in range(30):
            flags = [
                run_trial(SimConfig(**base, solver=s), float("-inf"), trial_rng(9, 0, t)).errors
                for s in ("qzf", "two-stage", "exhaustive-binary")
            ]
            np.testing.assert_array_equal(flags[0], flags[1])
            np.testing.assert_array_equal(flags[0], flags[2])

    def test_active_power_norm_runs(self):
        cfg = SimConfig(**SMALL, power_norm="active")
        res = run_trial(cfg, 10.0, trial_rng(0, 0, 0))
        assert res.errors.shape == (cfg.k,)


class TestSolverRegistry:
    def test_builtin_solvers_registered(self):
        names = available_solvers()
        for expected in ("two-stage", "qzf", "exhaustive-binary", "exhaustive-ternary"):
            assert expected in names

    def test_custom_solver_round_trip(self):
        def always_on(H, msgs, cfg):
            return np.ones(2 * cfg.nt), ComplexityReport(solver="always-on", multiplies=None, formula=None)

        register_solver("always-on", always_on)
        try:
            cfg = SimConfig(**SMALL, solver="always-on")
            curve = run_sweep(cfg)
            assert curve.solver == "always-on"
            assert curve.points[0].symbols_sent == cfg.trials * cfg.k
        finally:
            SOLVERS.pop("always-on")

    def test_check_solver_config_rejects_unknown(self):
        with pytest.raises(ValueError):
            check_solver_config(SimConfig(**SMALL, solver="nonesuch"))

    def test_check_solver_config_refuses_untractable_search(self):
        with pytest.raises(SolverRefusal):
            check_solver_config(SimConfig(nt=32, k=2, solver="exhaustive-ternary"))


class TestRunSweep:
    def test_deterministic_across_calls(self):
        cfg = SimConfig(**SMALL)
        assert run_sweep(cfg) == run_sweep(cfg)

    def test_deterministic_across_worker_counts(self):
        cfg = SimConfig(**SMALL, solver="qzf")
        assert run_sweep(cfg, workers=1) == run_sweep(cfg, workers=2)

    def test_point_bookkeeping(self):
        cfg = SimConfig(**SMALL)
        curve = run_sweep(cfg)
        assert len(curve.points) == len(cfg.snr_db)
        for point, snr in zip(curve.points, cfg.snr_db):
            assert point.snr_db == snr
            assert point.symbols_sent == cfg.trials * cfg.k
            assert 0 <= point.symbol_errors <= point.symbols_sent
            assert point.ser == point.symbol_errors / point.symbols_sent

    def test_two_stage_cost_columns_tie_together(self):
        cfg = SimConfig(**SMALL)
        curve = run_sweep(cfg)
        for p in curve.points:
            assert p.mean_chi == pytest.approx(8 * (p.mean_tstar + 1) * cfg.k * cfg.nt, rel=1e-12)
        assert curve.mean_multiplies == pytest.approx(
            sum(p.mean_chi for p in curve.points) / len(curve.points), rel=1e-12
        )

    def test_qzf_has_no_cost_columns(self):
        cfg = SimConfig(**SMALL, solver="qzf")
        curve = run_sweep(cfg)
        assert curve.mean_multiplies is None
        for p in curve.points:
            assert p.mean_tstar is None
            assert p.mean_chi is None

    def test_error_rate_falls_with_snr(self):
        cfg = SimConfig(nt=8, k=2, m=4, snr_db=(0.0, 25.0), trials=300, seed=2)
        curve = run_sweep(cfg)
        assert curve.points[0].symbol_errors > curve.points[1].symbol_errors

    def test_refusal_propagates(self):
        cfg = SimConfig(nt=32, k=2, solver="exhaustive-ternary", trials=2)
        with pytest.raises(SolverRefusal):
            run_sweep(cfg)


class TestCompareSweeps:
    def test_curves_are_paired(self):
        cfg = SimConfig(nt=4, k=2, m=8, snr_db=(float("-inf"), 0.0), trials=50, seed=13)
        qzf, two_stage = compare_sweeps(cfg, ["qzf", "two-stage"])
        assert qzf.solver == "qzf"
        assert two_stage.solver == "two-stage"
        # identical noise-only observations at -inf dB
        assert qzf.points[0].symbol_errors == two_stage.points[0].symbol_errors

    def test_solver_field_of_config_is_overridden(self):
        cfg = SimConfig(**SMALL, solver="qzf")
        curves = compare_sweeps(cfg, ["two-stage"])
        assert curves[0].solver == "two-stage"
