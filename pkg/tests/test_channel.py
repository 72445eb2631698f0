import numpy as np
import pytest

from femtosim import draw_realization, draw_schedule, link_gain
from femtosim.channel import build_link_gains, complex_normal
from femtosim.engine import drop_rng
from femtosim.geometry import Position, pathloss
from helpers import draw_drop, tiny_scenario


class TestDrawRealization:
    def test_shapes(self):
        sc = tiny_scenario(f_grid=2, m_ant=4, l_ant=3)
        sch, real = draw_drop(sc, "uniform", 3, seed=0)
        assert real.h_mc.shape == (3, 4)
        assert real.H_f0.shape == (4, 4, 3)
        assert real.h_cross.shape == (4, 4, 3)
        assert real.h_kf.shape == (3, 4)

    def test_moments(self):
        rng = np.random.default_rng(0)
        x = complex_normal(rng, 100_000)
        assert abs(x.mean()) < 0.02                 # 5-sigma CLT bound
        assert 0.97 <= np.mean(np.abs(x) ** 2) <= 1.03

    def test_determinism(self):
        sc = tiny_scenario()
        _, a = draw_drop(sc, "uniform", 2, seed=42)
        _, b = draw_drop(sc, "uniform", 2, seed=42)
        for name in ("h_mc", "H_f0", "h_cross", "h_kf"):
            assert np.array_equal(getattr(a, name), getattr(b, name))

    def test_macro_subset_matches_full_draw(self):
        sc = tiny_scenario()
        rng1 = drop_rng(3, "uniform", 2, 0)
        sch = draw_schedule(sc, "uniform", 2, rng1)
        full = draw_realization(sc, sch, rng1)
        rng2 = drop_rng(3, "uniform", 2, 0)
        draw_schedule(sc, "uniform", 2, rng2)
        macro = draw_realization(sc, sch, rng2, links="macro")
        assert np.array_equal(macro.h_mc, full.h_mc)
        assert np.array_equal(macro.h_kf, full.h_kf)
        assert macro.h_cross.shape[0] == 0

    def test_link_independence(self):
        # empirical cross-correlation between two distinct scalar links
        sc = tiny_scenario()
        samples = []
        for i in range(4000):
            rng = drop_rng(9, "uniform", 1, i)
            sch = draw_schedule(sc, "uniform", 1, rng)
            real = draw_realization(sc, sch, rng, links="macro")
            samples.append([real.h_kf[0, 0], real.h_kf[0, 1]])
        x, y = np.asarray(samples).T
        corr = np.mean(x * np.conj(y))
        assert abs(corr) < 4 / np.sqrt(len(x))


class TestLinkGainTables:
    def test_against_scalar_pathloss(self):
        sc = tiny_scenario(f_grid=2)
        sch, real = draw_drop(sc, "uniform", 2, seed=1)
        g = real.gains
        layout = sc.layout
        # macro user 1 to macro-BS: outdoor-outdoor
        a = Position(*sch.macro_positions[1], None)
        assert g.macro_bs_ut[1] == pytest.approx(
            pathloss(a, Position(0.0, 0.0, None), layout), rel=1e-12)
        # macro user 0 to femto user 3: one wall
        b = Position(*sch.femto_ut_positions[3], 3)
        a0 = Position(*sch.macro_positions[0], None)
        assert g.macro_ut_femto_ut[0, 3] == pytest.approx(
            pathloss(a0, b, layout), rel=1e-12)
        # femto-BS 2 to macro-BS: one wall
        c2 = Position(*layout.femto_centers[2], 2)
        assert g.macro_bs_femto_bs[2] == pytest.approx(
            pathloss(c2, Position(0.0, 0.0, None), layout), rel=1e-12)
        # femto-BS 1 to femto user 3: two walls; own user: none
        u3 = Position(*sch.femto_ut_positions[3], 3)
        c1 = Position(*layout.femto_centers[1], 1)
        assert g.femto_bs_femto_ut[1, 3] == pytest.approx(
            pathloss(c1, u3, layout), rel=1e-12)
        u1 = Position(*sch.femto_ut_positions[1], 1)
        assert g.femto_bs_femto_ut[1, 1] == pytest.approx(
            pathloss(c1, u1, layout), rel=1e-12)

    def test_interference_cutoff_zeroes_far_pairs(self):
        sc = tiny_scenario(f_grid=2)
        sc_cut = tiny_scenario(f_grid=2)
        sc_cut.interference_cutoff = 120.0
        sch, real = draw_drop(sc, "uniform", 2, seed=2)
        g_full = build_link_gains(sc, sch)
        g_cut = build_link_gains(sc_cut, sch)
        off = ~np.eye(4, dtype=bool)
        assert np.any(g_cut.femto_bs_femto_ut[off] == 0.0)
        kept = g_cut.femto_bs_femto_ut != 0.0
        assert np.allclose(g_cut.femto_bs_femto_ut[kept],
                           g_full.femto_bs_femto_ut[kept])
        assert np.array_equal(np.diag(g_cut.femto_bs_femto_ut),
                              np.diag(g_full.femto_bs_femto_ut))


class TestLinkGainLookup:
    def test_zero_distance_outdoor_link_is_pure_fading(self):
        # macro user placed exactly at the macro-BS: gain 1, coefficient = fading
        sc = tiny_scenario(f_grid=2)
        sch, real = draw_drop(sc, "uniform", 1, seed=3)
        real.macro_positions[0] = [0.0, 0.0]
        real.gains.macro_bs_ut[0] = 1.0
        assert np.array_equal(link_gain(real, sc, ("macro_ut", 0)), real.h_mc[0])

    def test_breakpoint_link_scales_by_sqrt_half(self):
        sc = tiny_scenario(f_grid=2)
        sch, real = draw_drop(sc, "uniform", 1, seed=4)
        real.gains.macro_bs_ut[0] = 0.5
        coeff = link_gain(real, sc, ("macro_ut", 0))
        assert np.allclose(coeff, real.h_mc[0] / np.sqrt(2.0))

    def test_cross_link_formula(self):
        sc = tiny_scenario(f_grid=2)
        sch, real = draw_drop(sc, "uniform", 1, seed=5)
        got = link_gain(real, sc, ("femto", 1, 3))
        expected = np.sqrt(real.gains.femto_bs_femto_ut[1, 3]) * real.h_cross[1, 3]
        assert np.array_equal(got, expected)
        got = link_gain(real, sc, ("macro_femto", 0, 2))
        assert got == np.sqrt(real.gains.macro_ut_femto_ut[0, 2]) * real.h_kf[0, 2]
        got = link_gain(real, sc, ("femto_bs", 2))
        assert np.array_equal(
            got, np.sqrt(real.gains.macro_bs_femto_bs[2]) * real.H_f0[2])

    def test_unknown_link_rejected(self):
        sc = tiny_scenario(f_grid=2)
        sch, real = draw_drop(sc, "uniform", 1, seed=6)
        with pytest.raises(ValueError):
            link_gain(real, sc, ("uplink", 0))
