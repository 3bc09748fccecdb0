import math

import numpy as np
import pytest

from ghzfreq.channel import ChannelParams, adc, custom, dpc, pdc
from ghzfreq.optimize import (
    StrategyKind,
    maximize_f_over_t,
    sensitivity_ratio,
    sweep,
    table1,
    tabulated_f_over_t,
)
from ghzfreq.state import ProbeSpec

# independently computed to 40 digits with mpmath, gamma = 1
R_ADC_ANCILLA = 0.6605498810078088
T_OPT_ADC_ANCILLA_N1 = 1.2784645427610737
R_ADC_FREE = {2: 0.7591142705196142, 3: 0.6804306394597122, 4: 0.6633797579301411}
R_DPC_FREE_N2 = 0.7881595513189941
R_DPC_ANCILLA = {1: 0.7881595513189941, 2: 0.7699548354348226, 3: 0.7634992561052814}


class TestAnalyticOptima:
    @pytest.mark.parametrize("gamma", [1.0, 0.37, 4.2])
    def test_uncorrelated_amplitude_damping(self, gamma):
        spec = ProbeSpec.balanced(3)
        t_opt, best = maximize_f_over_t(StrategyKind.UNCORRELATED, spec, adc(gamma))
        assert t_opt == pytest.approx(1.0 / gamma, rel=1e-8)
        assert best == pytest.approx(3.0 / (math.e * gamma), rel=1e-10)

    @pytest.mark.parametrize("make", [dpc, pdc])
    def test_uncorrelated_quadratic_decay(self, make):
        gamma = 1.6
        spec = ProbeSpec.balanced(2)
        t_opt, best = maximize_f_over_t(StrategyKind.UNCORRELATED, spec, make(gamma))
        assert t_opt == pytest.approx(1.0 / (2.0 * gamma), rel=1e-8)
        assert best == pytest.approx(2.0 / (2.0 * math.e * gamma), rel=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_ghz_on_phase_damping(self, n):
        gamma = 1.0
        spec = ProbeSpec.balanced(n)
        t_opt, best = maximize_f_over_t(StrategyKind.GHZ_FREE, spec, pdc(gamma))
        assert t_opt == pytest.approx(1.0 / (2.0 * n * gamma), rel=1e-8)
        assert best == pytest.approx(n / (2.0 * math.e * gamma), rel=1e-10)

    def test_gamma_rescaling_moves_only_the_time_axis(self):
        spec = ProbeSpec.balanced(4)
        t1, b1 = maximize_f_over_t(StrategyKind.GHZ_FREE, spec, adc(1.0))
        t2, b2 = maximize_f_over_t(StrategyKind.GHZ_FREE, spec, adc(3.1))
        assert t2 * 3.1 == pytest.approx(t1, rel=1e-9)
        assert b2 * 3.1 == pytest.approx(b1, rel=1e-9)

    def test_amplitude_damping_ancilla_optimum_time(self):
        spec = ProbeSpec.balanced(1, 1)
        t_opt, _ = maximize_f_over_t(StrategyKind.GHZ_ANCILLA, spec, adc(1.0))
        assert t_opt == pytest.approx(T_OPT_ADC_ANCILLA_N1, rel=1e-8)


class TestMaximizerGuards:
    def test_noiseless_profile_rejected(self):
        with pytest.raises(ValueError):
            maximize_f_over_t(StrategyKind.GHZ_FREE, ProbeSpec.balanced(2), adc(0.0))

    def test_multimodal_profile_rejected(self):
        # transverse contrast that beats against the decay has several local peaks
        def rule(t):
            return ChannelParams(0.0, math.exp(-t) * (0.6 + 0.4 * math.cos(5.0 * t)), 1.0, 0.0)

        with pytest.raises(ValueError, match="unimodal"):
            maximize_f_over_t(StrategyKind.GHZ_FREE, ProbeSpec.balanced(1), custom(rule))

    def test_strategy_spec_mismatch_rejected(self):
        with pytest.raises(ValueError):
            maximize_f_over_t(StrategyKind.GHZ_ANCILLA, ProbeSpec.balanced(2, 0), adc(1.0))
        with pytest.raises(ValueError):
            maximize_f_over_t(StrategyKind.GHZ_FREE, ProbeSpec.balanced(2, 1), adc(1.0))


class TestSensitivityRatio:
    def test_phase_damping_ghz_gains_nothing(self):
        for n in (2, 6):
            r = sensitivity_ratio(ProbeSpec.balanced(n), pdc(1.0), StrategyKind.GHZ_FREE)
            assert r == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("n,expected", sorted(R_ADC_FREE.items()))
    def test_amplitude_damping_free(self, n, expected):
        r = sensitivity_ratio(ProbeSpec.balanced(n), adc(1.0), StrategyKind.GHZ_FREE)
        assert r == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("n", [1, 4, 12])
    def test_amplitude_damping_ancilla_is_n_independent(self, n):
        r = sensitivity_ratio(
            ProbeSpec.balanced(n, 1), adc(1.0), StrategyKind.GHZ_ANCILLA
        )
        assert r == pytest.approx(R_ADC_ANCILLA, rel=1e-9)

    @pytest.mark.parametrize("n,expected", sorted(R_DPC_ANCILLA.items()))
    def test_depolarizing_ancilla(self, n, expected):
        r = sensitivity_ratio(
            ProbeSpec.balanced(n, 1), dpc(1.0), StrategyKind.GHZ_ANCILLA
        )
        assert r == pytest.approx(expected, rel=1e-9)

    def test_single_probe_free_strategy_is_trivial(self):
        r = sensitivity_ratio(ProbeSpec.balanced(1), adc(1.0), StrategyKind.GHZ_FREE)
        assert r == pytest.approx(1.0, rel=1e-12)

    def test_gamma_invariance(self):
        a = sensitivity_ratio(ProbeSpec.balanced(3), dpc(1.0), StrategyKind.GHZ_FREE)
        b = sensitivity_ratio(ProbeSpec.balanced(3), dpc(2.9), StrategyKind.GHZ_FREE)
        assert a == pytest.approx(b, rel=1e-9)

    def test_uncorrelated_compared_to_itself_rejected(self):
        with pytest.raises(ValueError):
            sensitivity_ratio(ProbeSpec.balanced(2), adc(1.0), StrategyKind.UNCORRELATED)


class TestSweep:
    def test_row_order_and_schema(self):
        rows = sweep(adc(1.0), 2, 3)
        assert [(r.n, r.strategy) for r in rows] == [
            (2, StrategyKind.UNCORRELATED),
            (2, StrategyKind.GHZ_FREE),
            (2, StrategyKind.GHZ_ANCILLA),
            (3, StrategyKind.UNCORRELATED),
            (3, StrategyKind.GHZ_FREE),
            (3, StrategyKind.GHZ_ANCILLA),
        ]
        assert list(rows[0].as_dict()) == [
            "n",
            "strategy",
            "model",
            "gamma",
            "t_opt",
            "f_over_t_max",
            "ratio_r",
            "saturation_gap",
        ]

    def test_optimal_time_shrinks_with_probe_count(self):
        rows = sweep(adc(1.0), 1, 8, strategies=[StrategyKind.GHZ_FREE])
        t_opts = [r.t_opt for r in rows]
        assert all(a > b for a, b in zip(t_opts, t_opts[1:]))

    def test_uncorrelated_rows_are_reference_rows(self):
        rows = sweep(dpc(1.0), 2, 2, strategies=[StrategyKind.UNCORRELATED])
        assert rows[0].ratio_r == 1.0
        assert abs(rows[0].saturation_gap) <= 1e-8

    def test_single_probe_free_row(self):
        (row,) = sweep(adc(1.0), 1, 1, strategies=[StrategyKind.GHZ_FREE])
        assert row.ratio_r == pytest.approx(1.0, rel=1e-12)

    def test_known_plateau_value(self):
        (row,) = sweep(dpc(1.0), 2, 2, strategies=[StrategyKind.GHZ_FREE])
        assert row.ratio_r == pytest.approx(R_DPC_FREE_N2, rel=1e-9)

    def test_worker_pool_is_transparent(self):
        serial = sweep(adc(1.0), 1, 3, jobs=1)
        pooled = sweep(adc(1.0), 1, 3, jobs=4)
        assert serial == pooled  # dataclass equality, bit-for-bit floats

    def test_bad_range_rejected(self):
        with pytest.raises(ValueError):
            sweep(adc(1.0), 3, 2)
        with pytest.raises(ValueError):
            sweep(adc(1.0), 0, 2)


class TestTable1:
    def test_amplitude_damping_entries_match(self):
        row = table1(adc(1.0), 4, 0.6)
        assert not row.literal_mismatch
        assert row.f_ghz_over_t_literal == pytest.approx(row.f_ghz_over_t, rel=1e-12)
        assert row.f_uncorrelated_over_t == pytest.approx(
            4 * 0.6 * math.exp(-0.6), rel=1e-12
        )

    def test_phase_damping_entries_match(self):
        row = table1(pdc(1.0), 3, 0.4)
        assert not row.literal_mismatch
        assert row.f_ghz_over_t == pytest.approx(row.f_ancilla_over_t, rel=1e-12)

    def test_depolarizing_literal_carries_factor_two(self):
        row = table1(dpc(1.0), 3, 0.5)
        assert row.literal_mismatch
        assert row.f_ghz_over_t_literal / row.f_ghz_over_t == pytest.approx(
            2.0, abs=1e-9
        )

    def test_tabulated_expression_validation(self):
        with pytest.raises(ValueError):
            tabulated_f_over_t("custom", StrategyKind.GHZ_FREE, 2, 1.0, 0.5)
        with pytest.raises(ValueError):
            tabulated_f_over_t("adc", StrategyKind.GHZ_FREE, 0, 1.0, 0.5)
