import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cssm.critval import (
    BUILTIN_TABLE,
    BridgeConfig,
    CriticalTable,
    _bridge_paths,
    critical_value,
    simulate_bridge_sup,
    sup_quantile,
)

from oracles import KOLMOGOROV_95_SQUARED


class TestBridgeConfig:
    def test_defaults_valid(self):
        cfg = BridgeConfig()
        assert cfg.grid_points == 2000 and cfg.replications == 100_000

    @pytest.mark.parametrize(
        "kwargs",
        [dict(grid_points=99), dict(replications=999), dict(seed=0), dict(seed=-3)],
    )
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            BridgeConfig(**kwargs)


class TestBridgeConstruction:
    def test_endpoint_is_exactly_zero(self):
        rng = np.random.default_rng(1)
        paths = _bridge_paths(rng, reps=200, n_bridges=2, grid_points=128)
        assert (paths[:, :, -1] == 0.0).all()

    def test_midpoint_variance(self):
        # Var B(1/2) = 1/4; check within 3 MC standard errors
        rng = np.random.default_rng(2)
        reps = 100_000
        paths = _bridge_paths(rng, reps=reps, n_bridges=1, grid_points=200)
        mid = paths[:, 0, 99]  # t = 100/200 = 0.5
        var = mid.var()
        se = 0.25 * math.sqrt(2.0 / reps)
        assert abs(var - 0.25) <= 3 * se

    def test_sups_nonnegative_and_positive(self):
        sups = simulate_bridge_sup(0, BridgeConfig(100, 1000, 3))
        assert (sups >= 0.0).all()
        assert (sups > 0.0).all()  # zero sup has probability zero


class TestReproducibility:
    def test_identical_config_bitwise(self):
        cfg = BridgeConfig(150, 2000, 44)
        a = simulate_bridge_sup(1, cfg)
        b = simulate_bridge_sup(1, cfg)
        assert np.array_equal(a, b)

    def test_worker_count_does_not_change_output(self):
        cfg = BridgeConfig(200, 3000, 99)
        serial = simulate_bridge_sup(1, cfg, workers=1)
        threaded = simulate_bridge_sup(1, cfg, workers=2)
        assert np.array_equal(serial, threaded)

    def test_different_seeds_differ(self):
        a = simulate_bridge_sup(0, BridgeConfig(100, 1000, 1))
        b = simulate_bridge_sup(0, BridgeConfig(100, 1000, 2))
        assert not np.array_equal(a, b)


class TestSupQuantile:
    def test_order_statistic_rule(self):
        # ceil((1 - 0.05) * 20) = 19, so the 19th smallest of 1..20
        values = np.arange(1.0, 21.0)
        assert sup_quantile(values, 0.05) == 19.0
        # ceil(0.5 * 4) = 2
        assert sup_quantile([4.0, 1.0, 3.0, 2.0], 0.5) == 2.0

    @given(
        st.lists(st.floats(min_value=0, max_value=1e6, allow_nan=False),
                 min_size=1, max_size=200),
        st.floats(min_value=0.01, max_value=0.99),
    )
    @settings(max_examples=60)
    def test_matches_manual_order_statistic(self, values, alpha):
        got = sup_quantile(values, alpha)
        rank = min(max(math.ceil((1 - alpha) * len(values)), 1), len(values))
        assert got == sorted(values)[rank - 1]

    def test_alpha_bounds(self):
        with pytest.raises(ValueError):
            sup_quantile([1.0], 0.0)
        with pytest.raises(ValueError):
            sup_quantile([1.0], 1.0)


class TestCriticalValue:
    def test_builtin_entry(self):
        assert critical_value(1, 0.05) == 2.408
        assert BUILTIN_TABLE.get(1, 0.05) == 2.408

    def test_missing_entry_without_config(self):
        with pytest.raises(ValueError, match="BridgeConfig"):
            critical_value(0, 0.05)

    def test_l0_simulation_matches_kolmogorov(self):
        # continuum value is 1.3581^2 = 1.8444; grid bias is one-sided down
        cfg = BridgeConfig(grid_points=2000, replications=100_000, seed=7)
        c = critical_value(0, 0.05, cfg)
        assert c == pytest.approx(KOLMOGOROV_95_SQUARED, abs=0.06)
        assert c <= KOLMOGOROV_95_SQUARED + 0.01

    def test_cache_roundtrip(self, tmp_path):
        cache = tmp_path / "cache.txt"
        cfg = BridgeConfig(grid_points=120, replications=1500, seed=5)
        first = critical_value(0, 0.10, cfg, cache_path=cache)
        text = cache.read_text().strip()
        fields = text.split()
        assert len(fields) == 6
        assert fields[0] == "0"
        assert float(fields[1]) == 0.10
        assert fields[2:5] == ["120", "1500", "5"]
        assert float(fields[5]) == first
        # a second call must reuse the record, not append another
        again = critical_value(0, 0.10, cfg, cache_path=cache)
        assert again == first
        assert len(cache.read_text().strip().splitlines()) == 1

    def test_cache_read_from_foreign_process(self, tmp_path):
        # records written by another run are honored
        cache = tmp_path / "cache.txt"
        cache.write_text("# comment line\n3 0.025 150 1200 77 9.125\n")
        cfg = BridgeConfig(grid_points=150, replications=1200, seed=77)
        assert critical_value(3, 0.025, cfg, cache_path=cache) == 9.125


class TestCriticalTable:
    def test_monotone_in_alpha_and_L(self):
        cfg = BridgeConfig(grid_points=400, replications=4000, seed=31)
        table = CriticalTable()
        for L in (0, 1):
            for alpha in (0.05, 0.10):
                table.put(L, alpha, sup_quantile(simulate_bridge_sup(L, cfg), alpha))
        table.check_monotone()

    def test_violation_detected(self):
        table = CriticalTable({(0, 0.05): 1.0, (0, 0.10): 2.0})
        with pytest.raises(ValueError, match="should exceed"):
            table.check_monotone()

    def test_put_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            CriticalTable().put(0, 0.05, 0.0)


class TestGridRefinement:
    def test_finer_grid_sup_is_larger_but_close(self):
        # sup over a finer grid is weakly larger; the bias gap stays small
        coarse = sup_quantile(
            simulate_bridge_sup(1, BridgeConfig(500, 100_000, 777)), 0.05
        )
        fine = sup_quantile(
            simulate_bridge_sup(1, BridgeConfig(4000, 100_000, 777)), 0.05
        )
        assert fine > coarse
        assert (fine - coarse) / coarse <= 0.02
