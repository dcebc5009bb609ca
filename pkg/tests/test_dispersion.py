"""Deformed mass shell: closed forms vs root-finder, group velocity, bounds."""

import math

import numpy as np
import pytest

from ncgrav import dispersion as D

LAM, C, HBAR = 0.1, 1.0, 1.0


class TestShellResidual:
    def test_origin(self):
        assert D.shell_residual(0.0, 0.0, 0.0, LAM, C, HBAR) == 0.0

    def test_massless_shell_identity(self):
        for omega in (0.1, 0.7, 2.0):
            k = -math.expm1(-omega * LAM) / (C * LAM)
            assert abs(D.shell_residual(omega, k, 0.0, LAM, C, HBAR)) < 1e-12

    def test_classical_shell_off_by_order_lam(self):
        omega, m = 1.0, 0.3
        k = math.sqrt(omega ** 2 / C ** 2 - (m * C / HBAR) ** 2)
        res = abs(D.shell_residual(omega, k, m, LAM, C, HBAR))
        assert 1e-3 < res < 0.5

    def test_negative_branch_gated(self):
        with pytest.raises(ValueError):
            D.shell_residual(-0.5, 0.1, 0.0, LAM, C, HBAR)
        D.shell_residual(-0.5, 0.1, 0.0, LAM, C, HBAR, allow_negative=True)


class TestSolveK:
    def test_massless_closed_form(self):
        for omega in np.linspace(0.05, 3.0, 50):
            k = D.solve_k(omega, 0.0, LAM, C, HBAR)
            want = -math.expm1(-omega * LAM) / (C * LAM)
            assert abs(k - want) <= 1e-10 * want

    def test_massive_matches_closed_form(self):
        for omega in np.linspace(0.5, 3.0, 50):
            for m in np.linspace(0.0, 0.4, 10):
                k2 = D.k_squared_closed(omega, m, LAM, C, HBAR)
                if k2 <= 1e-6:
                    continue
                k = D.solve_k(omega, m, LAM, C, HBAR)
                assert abs(k - math.sqrt(k2)) <= 1e-10 * math.sqrt(k2)

    def test_classical_limit(self):
        omega, m = 1.0, 0.3
        want = math.sqrt(omega ** 2 / C ** 2 - (m * C / HBAR) ** 2)
        ks = [D.solve_k(omega, m, lam, C, HBAR) for lam in (1e-4, 1e-5)]
        assert abs(ks[1] - want) < abs(ks[0] - want)
        assert abs(ks[1] - want) < 1e-4

    def test_momentum_bounded(self):
        # massless k -> 1/(c lam) as omega -> infinity
        k = D.solve_k(400.0, 0.0, LAM, C, HBAR)
        assert abs(k - 1.0 / (C * LAM)) < 1e-8
        for omega in np.linspace(0.1, 50, 40):
            for m in (0.0, 0.2):
                try:
                    k = D.solve_k(omega, m, LAM, C, HBAR)
                except D.EvanescentModeError:
                    continue
                assert k < 1.0 / (C * LAM) + m * C / HBAR

    def test_evanescent_reported(self):
        with pytest.raises(D.EvanescentModeError):
            D.solve_k(0.01, 5.0, LAM, C, HBAR)


class TestGroupVelocity:
    def test_massless_closed_form(self):
        for omega in np.linspace(0.01, 2.0, 30):
            vg = D.group_velocity(omega, 0.0, LAM, C, HBAR)
            assert abs(vg - C * math.exp(omega * LAM)) < 1e-8

    def test_massless_low_frequency_limit(self):
        vg = D.group_velocity(1e-8, 0.0, LAM, C, HBAR)
        assert abs(vg - C) < 1e-6

    def test_superluminal_value(self):
        vg = D.group_velocity(0.1, 0.0, 0.1, C, HBAR)  # omega lam = 0.01
        assert abs(vg / C - math.exp(0.01)) < 1e-10

    def test_monotone_in_omega(self):
        vgs = [D.group_velocity(w, 0.0, LAM, C, HBAR)
               for w in np.linspace(0.1, 3.0, 40)]
        assert all(b > a for a, b in zip(vgs, vgs[1:]))

    def test_time_of_flight(self):
        L = 100.0
        dt = D.time_of_flight_delta(0.5, 1.5, L, 0.0, LAM, C, HBAR)
        v1 = C * math.exp(0.5 * LAM)
        v2 = C * math.exp(1.5 * LAM)
        assert abs(dt - L * (1 / v1 - 1 / v2)) < 1e-10
        assert dt > 0  # higher frequency arrives first here


class TestSweep:
    def test_rows_and_flags(self):
        pts = D.sweep(np.linspace(0.0, 2.0, 11), 0.1, LAM, C, HBAR)
        assert len(pts) == 11
        assert math.isnan(pts[0].k)  # omega=0 with m>0 is evanescent
        good = [p for p in pts if not math.isnan(p.k)]
        assert good and all(abs(p.residual) < 1e-10 for p in good)
