import math

import pytest

from xduct import (
    DriveProtocol,
    ParameterError,
    added_noise,
    commutator_residual,
    efficiency,
    hz_to_rad,
    noise_lower_bound,
    solve_point,
    structure_report,
)
from xduct.metrics import mechanical_column_survives

from conftest import DRIVE_HZ, ideal_params, random_realistic_points, richardson

R_IDEAL = ideal_params(1.0).kappa_o / (4.0 * ideal_params(1.0).omega_m)


def solve_ideal(km_hz, drive):
    p = ideal_params(km_hz)
    return solve_point(p, drive, p.omega_m)


class TestEfficiency:
    def test_constant_ideal_magnitude(self):
        drive = DriveProtocol.constant(hz_to_rad(DRIVE_HZ))
        etas = [efficiency(solve_ideal(km, drive)) for km in (1e-3, 1e-4)]
        eta = richardson(etas)
        assert eta == pytest.approx(math.sqrt(1 + R_IDEAL**2), rel=1e-7)
        assert eta == pytest.approx(1.0863, abs=2e-4)

    def test_zero_coupling_gives_zero(self, realistic):
        sol = solve_point(realistic, DriveProtocol.constant(0.0), realistic.omega_m)
        assert efficiency(sol) == 0.0

    def test_unknown_port(self, realistic, drive_pd2):
        sol = solve_point(realistic, drive_pd2, realistic.omega_m)
        with pytest.raises(ParameterError, match="unknown port"):
            efficiency(sol, out_port="nope")


class TestAddedNoise:
    def test_constant_ideal_value(self):
        # (5/2) r^2 / (1 + r^2) in the vanishing-mechanical-loss limit
        drive = DriveProtocol.constant(hz_to_rad(DRIVE_HZ))
        vals = [added_noise(solve_ideal(km, drive)).s_added for km in (1e-3, 1e-4)]
        expect = 2.5 * R_IDEAL**2 / (1 + R_IDEAL**2)
        assert richardson(vals) == pytest.approx(expect, rel=1e-6)
        assert expect == pytest.approx(0.3813, abs=1e-4)

    def test_parametric_n1_ideal_noise_vanishes(self):
        drive = DriveProtocol.parametric(hz_to_rad(DRIVE_HZ), 1)
        vals = [added_noise(solve_ideal(km, drive)).s_added for km in (1e-3, 1e-4)]
        assert richardson(vals) == pytest.approx(0.0, abs=1e-7)

    def test_parametric_n2_ideal_value(self):
        drive = DriveProtocol.parametric(hz_to_rad(DRIVE_HZ), 2)
        vals = [added_noise(solve_ideal(km, drive)).s_added for km in (1e-3, 1e-4)]
        expect = 1.5 * R_IDEAL**2 / (1 + R_IDEAL**2)
        assert richardson(vals) == pytest.approx(expect, rel=1e-6)

    def test_conjugate_signal_weighted_three_halves(self, realistic, drive_const):
        report = added_noise(solve_point(realistic, drive_const, realistic.omega_m))
        heavy = [t for t in report.term_breakdown if t.weight == 1.5]
        assert len(heavy) == 1 and heavy[0].source == "e.ex'(w)"
        assert all(t.weight == 0.5 for t in report.term_breakdown if t is not heavy[0])
        assert not any(t.source.startswith("e.ex(w)") for t in report.term_breakdown)

    def test_mechanical_sign_rule_on_sidebands(self, realistic, drive_pd2):
        # at a positive probe the lower-sideband mechanical annihilation input
        # sits at negative frequency and is dropped; its creation partner stays
        report = added_noise(solve_point(realistic, drive_pd2, realistic.omega_m))
        sources = {t.source for t in report.term_breakdown}
        assert "m'(w-2wm)" in sources and "m(w-2wm)" not in sources
        assert "m(w+2wm)" in sources and "m'(w+2wm)" not in sources
        assert "m(w)" in sources and "m'(w)" not in sources

    def test_mechanical_sign_rule_flips_at_negative_probe(self, realistic, drive_const):
        report = added_noise(solve_point(realistic, drive_const, -realistic.omega_m))
        sources = {t.source for t in report.term_breakdown}
        assert "m'(w)" in sources and "m(w)" not in sources

    def test_matches_brute_force_enumeration(self, realistic, drive_const, drive_pd2):
        from oracles import brute_force_noise_sum
        for drive in (drive_const, drive_pd2):
            sol = solve_point(realistic, drive, realistic.omega_m)
            report = added_noise(sol)
            assert sum(t.contribution for t in report.term_breakdown) == pytest.approx(
                brute_force_noise_sum(sol), rel=1e-14)
            assert report.s_added == pytest.approx(
                brute_force_noise_sum(sol) / report.eta**2, rel=1e-12)

    def test_zero_efficiency_reports_infinity(self, realistic):
        report = added_noise(solve_point(realistic, DriveProtocol.constant(0.0),
                                         realistic.omega_m))
        assert report.eta_zero and math.isinf(report.s_added)
        assert math.isinf(report.s_lower_bound)


class TestLowerBound:
    def test_perfect_transducer(self):
        assert noise_lower_bound(1.0, 0.0) == 0.0

    def test_excess_noise_above_unity_efficiency(self):
        eta = 1.2
        assert noise_lower_bound(eta, 0.0) == pytest.approx((eta**2 - 1) / (2 * eta**2))

    def test_bound_holds_at_ideal_constant_point(self):
        drive = DriveProtocol.constant(hz_to_rad(DRIVE_HZ))
        report = added_noise(solve_ideal(1e-4, drive))
        assert report.s_added >= report.s_lower_bound - 1e-10

    def test_bound_holds_at_random_points(self):
        for params, omega_drive in random_realistic_points(6, seed=1234):
            for drive in (DriveProtocol.constant(omega_drive),
                          DriveProtocol.parametric(omega_drive, 2)):
                report = added_noise(solve_point(params, drive, params.omega_m))
                assert report.s_added >= report.s_lower_bound - 1e-10
                assert report.s_added >= 0 and report.eta >= 0

    def test_requires_positive_efficiency(self):
        with pytest.raises(ParameterError):
            noise_lower_bound(0.0, 0.1)


class TestCommutatorResidual:
    def test_constant_ideal_closed_forms_satisfy_identity(self):
        # |t_oe|^2 - |t_oe'|^2 + |t_oo|^2 - |t_oo'|^2 = 1 for the lossless
        # symmetric closed forms
        r = R_IDEAL
        t_oe, t_oo, t_conj = complex(-1, -r), -1j * r, -1j * r
        total = abs(t_oe) ** 2 - abs(t_conj) ** 2 + abs(t_oo) ** 2 - abs(t_conj) ** 2
        assert total == pytest.approx(1.0, abs=1e-15)

    def test_small_at_realistic_point_both_protocols(self, realistic, drive_const, drive_pd2):
        for drive in (drive_const, drive_pd2, DriveProtocol.parametric(
                drive_pd2.omega_drive, 1)):
            sol = solve_point(realistic, drive, realistic.omega_m)
            assert commutator_residual(sol) <= 1e-10

    def test_parametric_n1_ideal_dominated_by_transmission(self):
        drive = DriveProtocol.parametric(hz_to_rad(DRIVE_HZ), 1)
        sol = solve_ideal(1e-4, drive)
        assert commutator_residual(sol) <= 1e-10
        assert efficiency(sol) ** 2 == pytest.approx(1.0, abs=1e-4)


class TestStructureReport:
    def test_realistic_family(self, realistic):
        sols = []
        for n in (1, 2, 3, 5):
            sols.append(solve_point(realistic,
                                    DriveProtocol.parametric(hz_to_rad(DRIVE_HZ), n),
                                    realistic.omega_m))
        sols.append(solve_point(realistic,
                                DriveProtocol.parametric(hz_to_rad(DRIVE_HZ), 5),
                                realistic.omega_m, method="dense"))
        report = structure_report(sols)
        assert report.theorems_applicable
        assert report.off_block_max <= 1e-12
        assert report.tail_max is not None and report.tail_max <= 1e-12
        assert report.n_variation_max is not None and report.n_variation_max <= 1e-12
        assert report.n1_deviation is not None and report.n1_deviation > 1e-6

    def test_constant_only_marks_not_applicable(self, realistic, drive_const):
        report = structure_report(
            [solve_point(realistic, drive_const, realistic.omega_m)])
        assert not report.theorems_applicable


def test_mechanical_sign_rule_table():
    assert mechanical_column_survives(+1.0, creation=False)
    assert not mechanical_column_survives(-1.0, creation=False)
    assert mechanical_column_survives(-1.0, creation=True)
    assert not mechanical_column_survives(+1.0, creation=True)
    assert not mechanical_column_survives(0.0, creation=False)
    assert not mechanical_column_survives(0.0, creation=True)
