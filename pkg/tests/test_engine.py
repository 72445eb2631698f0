import numpy as np
import pytest

from femtosim import (Scenario, build_layout, calibrate_p0, default_kappa_grid,
                      default_scenario, pareto_boundary, run_dl_slot,
                      run_ul_slot, sweep)
from femtosim.engine import (SweepConfig, TradeoffCurve, TradeoffPoint,
                             _drop_sums, drop_rng, find_operating_point,
                             run_drop)
from helpers import draw_drop, forward_drop, tiny_scenario


class TestForwardSlot:
    def test_zero_temperature_silences_femtos(self):
        sc = tiny_scenario(f_grid=2)
        schedule, real = draw_drop(sc, "uniform", 2, seed=0)
        dl0 = run_dl_slot(sc, schedule, real, kappa=0.0)
        assert dl0.femto_sum == 0.0
        assert np.all(dl0.powers.femto_primal == 0.0)
        # macro rates equal the interference-free values
        from femtosim.sinr import evaluate_macro_dl_sinrs
        clean = evaluate_macro_dl_sinrs(real, dl0.beamformers,
                                        np.zeros(4), sc)
        assert np.allclose(dl0.macro_sinrs, clean)
        dl1 = run_dl_slot(sc, schedule, real, kappa=2.0)
        assert np.all(dl1.macro_sinrs <= dl0.macro_sinrs)

    def test_no_femtocells_reduces_to_mu_mimo(self):
        layout = build_layout(femto_grid_order=0, cell_side=500.0, femto_radius=10.0)
        sc = Scenario(layout=layout, macro_antennas=4, femto_antennas=3,
                      macro_power=calibrate_p0(layout, 10.0),
                      femto_peak_power=1000.0)
        schedule, real = draw_drop(sc, "uniform", 3, seed=1)
        dl = run_dl_slot(sc, schedule, real, kappa=1.0)
        assert dl.femto_rates.shape == (0,)
        assert dl.femto_sum == 0.0
        assert dl.macro_sum > 0.0 and np.isfinite(dl.macro_sum)
        ul = run_ul_slot(sc, schedule, real, dl, n_iter=10)
        assert ul.femto_sum == 0.0
        assert np.isfinite(ul.macro_sum)

    def test_smoke_positive_finite(self):
        sc = tiny_scenario(f_grid=3, m_ant=4)
        _, _, dl = forward_drop(sc, "uniform", 3, kappa=0.5, seed=2)
        assert 0.0 < dl.macro_sum < np.inf
        assert 0.0 < dl.femto_sum < np.inf


class TestReverseSlot:
    def test_zero_temperature_reduces_to_single_tier(self):
        sc = tiny_scenario(f_grid=2)
        schedule, real = draw_drop(sc, "uniform", 2, seed=3)
        dl = run_dl_slot(sc, schedule, real, kappa=0.0)
        ul = run_ul_slot(sc, schedule, real, dl, n_iter=20)
        assert ul.femto_sum == 0.0
        assert np.all(ul.powers.femto_dual == 0.0)
        assert np.all(ul.powers.macro_dual <= sc.macro_power / 2 + 1e-12)
        assert ul.macro_sum > 0.0

    def test_duality_of_sums_unconstrained(self):
        sc = tiny_scenario(f_grid=2)
        schedule, real = draw_drop(sc, "uniform", 2, seed=4)
        dl = run_dl_slot(sc, schedule, real, kappa=0.05)
        ul = run_ul_slot(sc, schedule, real, dl, n_iter=400, enforce_peaks=False)
        assert ul.macro_sum == pytest.approx(dl.macro_sum, rel=1e-6)
        assert ul.femto_sum == pytest.approx(dl.femto_sum, rel=1e-6)
        total_fwd = np.sum(dl.powers.femto_primal) + sc.macro_power
        total_rev = np.sum(ul.powers.femto_dual) + np.sum(ul.powers.macro_dual)
        assert total_rev == pytest.approx(total_fwd, rel=1e-6)

    def test_pairing_uses_forward_artifacts(self):
        sc = tiny_scenario(f_grid=2)
        schedule, real = draw_drop(sc, "uniform", 2, seed=5)
        dl = run_dl_slot(sc, schedule, real, kappa=0.3)
        ul = run_ul_slot(sc, schedule, real, dl, n_iter=4)
        assert ul.beamformers.v is dl.beamformers.v
        assert ul.beamformers.u is dl.beamformers.u
        assert ul.beamformers.swapped
        assert len(ul.powers.trace) == 5
        assert np.array_equal(ul.powers.femto_primal, dl.powers.femto_primal)

    def test_drop_sums_trace_slicing_matches_direct_runs(self):
        sc = tiny_scenario(f_grid=2)
        grid = np.array([0.1, 1.0])
        out = _drop_sums(sc, "uniform", 2, 0, grid, (2, 5), seed=77)
        rng = drop_rng(77, "uniform", 2, 0)
        schedule, real, v = run_drop(sc, "uniform", 2, rng)
        for i, kappa in enumerate(grid):
            dl = run_dl_slot(sc, schedule, real, float(kappa))
            assert out[i, 0] == pytest.approx(dl.macro_sum, rel=1e-12)
            assert out[i, 1] == pytest.approx(dl.femto_sum, rel=1e-12)
            for j, n_it in enumerate((2, 5)):
                ul = run_ul_slot(sc, schedule, real, dl, n_iter=n_it)
                assert out[i, 2 + 2 * j] == pytest.approx(ul.macro_sum, rel=1e-12)
                assert out[i, 3 + 2 * j] == pytest.approx(ul.femto_sum, rel=1e-12)


class TestSweep:
    def test_deterministic_and_structured(self):
        sc = tiny_scenario(f_grid=2)
        cfg = SweepConfig(kappa_grid=np.array([0.1, 1.0]), k_values=(1, 2),
                          modes=("uniform",), n_drops=2, pc_iterations=(3,),
                          seed=5)
        a = sweep(sc, cfg)
        b = sweep(sc, cfg)
        assert len(a) == 4   # (dl + ul) per K
        for ca, cb in zip(a, b):
            for pa, pb in zip(ca.points, cb.points):
                assert (pa.macro_mean, pa.femto_mean) == (pb.macro_mean, pb.femto_mean)
                assert pa.n_drops == 2

    def test_zero_grid_silences_femtos(self):
        sc = tiny_scenario(f_grid=2)
        cfg = SweepConfig(kappa_grid=np.array([0.0]), k_values=(1, 2),
                          modes=("colocated",), n_drops=2, pc_iterations=(2,),
                          seed=6)
        for curve in sweep(sc, cfg):
            for p in curve.points:
                assert p.femto_mean == 0.0

    def test_k_exceeding_antennas_rejected(self):
        sc = tiny_scenario(m_ant=2)
        cfg = SweepConfig(kappa_grid=np.array([0.1]), k_values=(3,),
                          modes=("uniform",), n_drops=1, seed=0)
        with pytest.raises(ValueError):
            sweep(sc, cfg)

    def test_worker_count_does_not_change_results(self):
        sc = tiny_scenario(f_grid=2)
        cfg = SweepConfig(kappa_grid=np.array([0.5]), k_values=(2,),
                          modes=("uniform",), n_drops=4, pc_iterations=(2,),
                          seed=11)
        serial = sweep(sc, cfg, workers=1)
        parallel = sweep(sc, cfg, workers=2)
        for cs, cp in zip(serial, parallel):
            for ps, pp in zip(cs.points, cp.points):
                assert ps.macro_mean == pp.macro_mean
                assert ps.femto_mean == pp.femto_mean


def point(kappa, macro, femto, K=1):
    return TradeoffPoint(kappa=kappa, macro_mean=macro, macro_se=0.0,
                         femto_mean=femto, femto_se=0.0, n_drops=1, K=K)


def curve(points, K=1):
    return TradeoffCurve(mode="colocated", direction="dl", K=K, n_iter=None,
                         points=points)


class TestPareto:
    def test_single_curve_drops_dominated(self):
        c = curve([point(0.1, 10.0, 1.0), point(0.2, 9.0, 0.5),
                   point(0.3, 8.0, 3.0)])
        boundary = pareto_boundary([c])
        got = {(p.macro_mean, p.femto_mean) for p in boundary.points}
        assert got == {(10.0, 1.0), (8.0, 3.0)}

    def test_dominating_curve_wins(self):
        c1 = curve([point(0.1, 10.0, 5.0), point(0.2, 6.0, 8.0)], K=1)
        c2 = curve([point(0.1, 9.0, 4.0), point(0.2, 5.0, 7.0)], K=2)
        boundary = pareto_boundary([c1, c2])
        assert all(p.K == 1 for p in boundary.points)
        assert len(boundary.points) == 2

    def test_sorted_staircase(self):
        c = curve([point(0.1, 1.0, 9.0), point(0.2, 5.0, 5.0),
                   point(0.3, 9.0, 1.0)])
        boundary = pareto_boundary([c])
        macros = [p.macro_mean for p in boundary.points]
        femtos = [p.femto_mean for p in boundary.points]
        assert macros == sorted(macros, reverse=True)
        assert femtos == sorted(femtos)

    def test_mixed_groups_rejected(self):
        c1 = curve([point(0.1, 1.0, 1.0)])
        c2 = TradeoffCurve(mode="uniform", direction="dl", K=2, n_iter=None,
                           points=[point(0.1, 2.0, 2.0)])
        with pytest.raises(ValueError):
            pareto_boundary([c1, c2])


class TestCalibration:
    def test_unit_gain_reference(self):
        # with a huge breakpoint distance the edge gain approaches 1,
        # so a 0 dB target needs unit power
        layout = build_layout(femto_grid_order=1, cell_side=1000.0,
                              femto_radius=10.0, pathloss_3db_distance=1e12)
        assert calibrate_p0(layout, 0.0) == pytest.approx(1.0, rel=1e-9)

    def test_default_layout_value(self):
        # 10^(10/10) / (1 / (1 + 10^3.5)) = 10 * (1 + 10^3.5)
        layout = default_scenario().layout
        expected = 10.0 * (1.0 + 10.0 ** 3.5)
        assert calibrate_p0(layout, 10.0) == pytest.approx(expected, rel=1e-12)
        assert 10.0 * np.log10(expected) == pytest.approx(45.0, abs=0.01)

    def test_monotone_in_breakpoint(self):
        layouts = [build_layout(femto_grid_order=1, cell_side=1000.0,
                                femto_radius=10.0, pathloss_3db_distance=d)
                   for d in (25.0, 50.0, 100.0)]
        p = [calibrate_p0(l, 10.0) for l in layouts]
        assert p[0] > p[1] > p[2]


class TestOperatingPoint:
    def test_met(self):
        c = curve([point(0.1, 20.0, 500.0), point(0.2, 14.0, 1000.0)])
        report = find_operating_point(c, macro_min=13.5, femto_min=900.0)
        assert report["met"] and report["failed_axis"] is None
        assert report["point"].femto_mean == 1000.0

    def test_failed_axis_reported(self):
        c = curve([point(0.1, 20.0, 100.0), point(0.2, 10.0, 1000.0)])
        report = find_operating_point(c, macro_min=13.5, femto_min=900.0)
        assert not report["met"]
        assert report["failed_axis"] in ("macro", "femto", "macro+femto")


def test_default_kappa_grid_span():
    grid = default_kappa_grid()
    assert len(grid) == 30
    assert grid[0] == pytest.approx(1e-3)
    assert grid[-1] == pytest.approx(1e3)
