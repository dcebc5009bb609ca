"""Deformed mass shell of the flat (beta = -1/c^2) model and group velocities.

Mode convention: e^{i k.x - i omega t} with omega > 0; the imaginary time
shifts then produce real factors e^{omega lam}.  The omega < 0 branch is not
treated by default and must be enabled explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq


class EvanescentModeError(ValueError):
    """Shell has no real spatial momentum at this (omega, m)."""


@dataclass(frozen=True)
class DispersionPoint:
    omega: float
    k: float
    m: float
    vg: float
    residual: float


def _check_omega(omega, allow_negative):
    if omega < 0 and not allow_negative:
        raise ValueError("omega < 0 branch disabled; pass allow_negative=True")


def shell_residual(omega, k, m, lam, c, hbar, allow_negative=False):
    """Residual of -k^2 e^{omega lam} + (2/(c^2 lam^2))(cosh(omega lam) - 1)
    = (m c / hbar)^2, normalized by the largest term."""
    _check_omega(omega, allow_negative)
    u = omega * lam
    t1 = -k ** 2 * math.exp(u)
    t2 = (2.0 / (c ** 2 * lam ** 2)) * 2.0 * math.sinh(u / 2) ** 2
    t3 = (m * c / hbar) ** 2
    scale = max(abs(t1), abs(t2), abs(t3))
    if scale == 0:
        return 0.0
    return (t1 + t2 - t3) / scale


def k_squared_closed(omega, m, lam, c, hbar, allow_negative=False):
    """k^2 = (1 - e^{-omega lam})^2 / (c lam)^2 - (m c / hbar)^2 e^{-omega lam}."""
    _check_omega(omega, allow_negative)
    u = omega * lam
    a = -math.expm1(-u) / (c * lam)  # (1 - e^{-u}) / (c lam), stable
    return a * a - (m * c / hbar) ** 2 * math.exp(-u)


def solve_k(omega, m, lam, c, hbar, allow_negative=False, _numeric=True):
    """Spatial momentum on the shell; bracketing root-find cross-checked
    against the closed form by the test suite."""
    k2 = k_squared_closed(omega, m, lam, c, hbar, allow_negative)
    if k2 < 0:
        raise EvanescentModeError(
            "no propagating mode at omega=%g, m=%g (k^2=%g)" % (omega, m, k2))
    if not _numeric:
        return math.sqrt(k2)
    k_hi = 1.0 / (c * lam) + m * c / hbar + 1.0
    f = lambda k: shell_residual(omega, k, m, lam, c, hbar, allow_negative)
    f0 = f(0.0)
    if f0 <= 0:
        return 0.0
    return brentq(f, 0.0, k_hi, xtol=1e-12, rtol=8.9e-16)


def group_velocity(omega, m, lam, c, hbar, allow_negative=False):
    """d omega / d k by implicit differentiation of the shell."""
    k = solve_k(omega, m, lam, c, hbar, allow_negative, _numeric=False)
    u = omega * lam
    eu = math.exp(u)
    denom = -k ** 2 * lam * eu + (2.0 / (c ** 2 * lam)) * math.sinh(u)
    if denom == 0:
        raise EvanescentModeError("stationary shell at omega=%g" % omega)
    return 2 * k * eu / denom


def dispersion_point(omega, m, lam, c, hbar, allow_negative=False):
    k = solve_k(omega, m, lam, c, hbar, allow_negative)
    vg = group_velocity(omega, m, lam, c, hbar, allow_negative)
    return DispersionPoint(omega=omega, k=k, m=m, vg=vg,
                           residual=shell_residual(omega, k, m, lam, c, hbar,
                                                   allow_negative))


def time_of_flight_delta(omega1, omega2, distance, m, lam, c, hbar):
    """Arrival-time difference over a common distance: L (1/v1 - 1/v2)."""
    v1 = group_velocity(omega1, m, lam, c, hbar)
    v2 = group_velocity(omega2, m, lam, c, hbar)
    return distance * (1.0 / v1 - 1.0 / v2)


def sweep(omegas, m, lam, c, hbar):
    """DispersionPoint per omega; evanescent points carry k = vg = nan."""
    out = []
    for omega in omegas:
        try:
            out.append(dispersion_point(float(omega), m, lam, c, hbar))
        except EvanescentModeError:
            out.append(DispersionPoint(omega=float(omega), k=float("nan"),
                                       m=m, vg=float("nan"),
                                       residual=float("nan")))
    return out
