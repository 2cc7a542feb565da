import math

import numpy as np
import pytest

from hardyvx import (
    Constant,
    LogPerturbed,
    hardy_average,
    hardy_average_scaled,
    make_log_grid,
    necessity_test_function,
    operator_norm_lower_bound,
    rayleigh_quotient,
)
from hardyvx.hardy import (
    ResolutionError,
    dyadic_indicator_family,
    power_family,
    random_step_family,
    worker_count,
)

from conftest import power_function


class TestOperator:
    def test_power_closed_form(self, grid):
        # H(x^{-b})(x)/x = x^{-b}/(1-b)
        f = power_function(grid, -0.25)
        H = hardy_average(f)
        exact = grid.points ** -0.25 / 0.75
        assert np.max(np.abs(H.values / exact - 1.0)) < 1e-12

    def test_indicator_closed_form(self, grid):
        f = power_function(grid, 0.0, support=(0.25, 0.5))
        H = hardy_average(f)
        x = grid.points
        exact = np.where(x <= 0.25, 0.0,
                         np.where(x <= 0.5, (x - 0.25) / x, 0.25 / x))
        ok = exact > 0.0
        assert np.max(np.abs(H.values[ok] / exact[ok] - 1.0)) < 1e-9

    def test_dual_paths_agree_smooth(self, grid):
        p = LogPerturbed(2.0, 1.0, 0.5, "+")
        f = necessity_test_function(p, grid, 2.0 ** -6)
        H1 = hardy_average(f).values
        H2 = hardy_average_scaled(f).values
        ok = H1 > 0.0
        assert np.max(np.abs(H2[ok] / H1[ok] - 1.0)) < 1e-6


class TestRayleigh:
    def test_constant_exponent_quotient(self, grid):
        # for p = 2 and f = x^{-b}: quotient = 1/(1-b)
        f = power_function(grid, -0.3)
        q = rayleigh_quotient(f, Constant(2.0))
        assert q.value == pytest.approx(1.0 / 0.7, rel=1e-9)
        lo, hi = q.bounds
        assert lo <= q.value <= hi

    def test_zero_function_rejected(self, grid):
        f = power_function(grid, 0.0, coeff=0.0)
        f = f.__class__(grid, np.zeros(grid.n))
        with pytest.raises(ZeroDivisionError):
            rayleigh_quotient(f, Constant(2.0))


class TestFamilies:
    def test_power_family_respects_integrability(self, grid):
        members = power_family(Constant(2.0), grid)
        betas = [float(m.label.split("=")[1]) for m in members]
        assert max(betas) == pytest.approx(0.49)
        assert all(0.0 < b < 0.5 for b in betas)

    def test_dyadic_family_levels(self, grid):
        members = dyadic_indicator_family(grid)
        assert members[0].level == 1
        assert len(members) >= 30

    def test_necessity_function_modular_is_log2(self, grid):
        p = LogPerturbed(2.0, 1.0, 1.0, "+")
        from hardyvx import modular
        f = necessity_test_function(p, grid, 2.0 ** -15)
        assert modular(f, p).value == pytest.approx(math.log(2.0), rel=1e-9)

    def test_necessity_resolution_guard(self):
        grid = make_log_grid(1e-12, 41)  # ~1.5 points per octave
        with pytest.raises(ResolutionError):
            necessity_test_function(Constant(2.0), grid, 2.0 ** -10)

    def test_random_step_family_deterministic(self, grid):
        a = random_step_family(grid, seed=7)
        b = random_step_family(grid, seed=7)
        for ma, mb in zip(a, b):
            assert ma.label == mb.label
            for sa, sb in zip(ma.f, mb.f):
                assert sa.support == sb.support
                assert np.array_equal(sa.values, sb.values)


class TestOperatorNorm:
    def test_skips_members_with_infinite_modular(self, grid):
        # beta = 0.49 under p = 3 gives modular exponent -1.47: divergent
        members = power_family(Constant(2.0), grid)
        res = operator_norm_lower_bound(Constant(3.0), members)
        assert any("beta=0.49" in s for s in res.skipped)
        assert res.value > 1.0

    def test_deterministic_across_thread_counts(self, grid, monkeypatch):
        members = dyadic_indicator_family(grid, max_level=8)
        monkeypatch.setenv("HARDYVX_THREADS", "1")
        r1 = operator_norm_lower_bound(Constant(2.0), members)
        monkeypatch.setenv("HARDYVX_THREADS", "4")
        r4 = operator_norm_lower_bound(Constant(2.0), members)
        assert r1.value == r4.value
        assert r1.argmax == r4.argmax
        assert r1.quotients == r4.quotients

    def test_worker_count_env(self, monkeypatch):
        monkeypatch.setenv("HARDYVX_THREADS", "3")
        assert worker_count() == 3

    def test_level_series(self, grid):
        members = dyadic_indicator_family(grid, max_level=6)
        res = operator_norm_lower_bound(Constant(2.0), members)
        levels, series = res.level_series()
        assert levels == [1, 2, 3, 4, 5, 6]
        assert all(v > 0.0 for v in series)
