"""Effective inertial/gravitational masses and the constant potential term.

Everything is a function of the dimensionless x = m~ lam (= m/m_p when lam is
the Planck time, with m_p = hbar/(lam c^2)):

    m_I = m (sinh x / x) e^{-x}
    m_G = m (x + e^{-x} - 1) / ((x/2) sinh x)
    V_0 = m c^2 (x / sinh x)(1 - sinh(x/2)/(x/2))

For x below 1e-4 the closed forms lose digits to cancellation; they are then
evaluated in extended precision (mpmath) rather than via truncated series, so
one code path serves all x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy.optimize import minimize_scalar

SMALL_X = 1e-4


@dataclass(frozen=True)
class PlanckUnits:
    lam: float = 1.0
    c: float = 1.0
    hbar: float = 1.0
    G: float = 1.0

    def __post_init__(self):
        if min(self.lam, self.c, self.hbar, self.G) <= 0:
            raise ValueError("units must be positive")

    @property
    def m_p(self):
        return self.hbar / (self.lam * self.c ** 2)


@dataclass(frozen=True)
class EffectiveParams:
    x: float
    m_I: float
    m_G: float
    V0: float


def _ratios(x):
    """(m_I/m, m_G/m, V0/(m c^2)) at dimensionless x, cancellation-safe."""
    if x < SMALL_X:
        with mpmath.workdps(30):
            xm = mpmath.mpf(x)
            mi = mpmath.sinh(xm) / xm * mpmath.exp(-xm)
            mg = (xm + mpmath.exp(-xm) - 1) / (xm / 2 * mpmath.sinh(xm))
            v0 = xm / mpmath.sinh(xm) * (1 - mpmath.sinh(xm / 2) / (xm / 2))
            return float(mi), float(mg), float(v0)
    mi = math.sinh(x) / x * math.exp(-x)
    # x + e^{-x} - 1 written via expm1: the numerator is ~x^2/2 at small x
    mg = (x + math.expm1(-x)) / (x / 2 * math.sinh(x))
    v0 = x / math.sinh(x) * (1 - math.sinh(x / 2) / (x / 2))
    return mi, mg, v0


def effective_params(m, units=PlanckUnits()):
    if m <= 0:
        raise ValueError("m must be positive")
    x = m * units.c ** 2 * units.lam / units.hbar  # = m / m_p
    mi, mg, v0 = _ratios(x)
    return EffectiveParams(x=x, m_I=m * mi, m_G=m * mg,
                           V0=m * units.c ** 2 * v0)


# fractions of the Planck scale, as plotted against x = m/m_p
def mI_over_mp(x):
    """= sinh(x) e^{-x} = (1 - e^{-2x})/2."""
    return -np.expm1(-2 * np.asarray(x, dtype=float)) / 2


def mG_over_mp(x):
    x = np.asarray(x, dtype=float)
    return x * np.array([_ratios(v)[1] for v in np.atleast_1d(x)]).reshape(x.shape)


def V0_over_mpc2(x):
    """= x^2/sinh x - x/cosh(x/2)."""
    x = np.asarray(x, dtype=float)
    return x ** 2 / np.sinh(x) - x / np.cosh(x / 2)


def mG_over_mI(x):
    """= 2 e^x (x + e^{-x} - 1) / sinh^2 x."""
    x = np.asarray(x, dtype=float)
    return 2 * np.exp(x) * (x + np.expm1(-x)) / np.sinh(x) ** 2


def series_check(order=1):
    """Leading small-x coefficients fitted from extended-precision samples:
    m_I/m = 1 - x + ..., m_G/m = 1 - x/3 + ..., V0/(mc^2) = -(x^2)/24 + ..."""
    xs = np.array([1e-6, 2e-6, 3e-6, 4e-6])
    mi = np.array([_ratios(x)[0] for x in xs])
    mg = np.array([_ratios(x)[1] for x in xs])
    v0 = np.array([_ratios(x)[2] for x in xs])
    c_mi = np.polyfit(xs, (mi - 1), 1)[0]
    c_mg = np.polyfit(xs, (mg - 1), 1)[0]
    c_v0 = np.polyfit(xs ** 2, v0, 1)[0]
    return {"m_I_linear": float(c_mi), "m_G_linear": float(c_mg),
            "V0_quadratic": float(c_v0),
            "expected": (-1.0, -1.0 / 3.0, -1.0 / 24.0)}


def extrema_report():
    """Locations and values of the bounds/extrema on x in (0, 50]."""
    res_v0 = minimize_scalar(V0_over_mpc2, bounds=(0.1, 50.0),
                             method="bounded",
                             options={"xatol": 1e-10})
    res_ratio = minimize_scalar(lambda x: -mG_over_mI(x), bounds=(0.1, 50.0),
                                method="bounded", options={"xatol": 1e-10})
    return {
        "mI_sup_over_mp": 0.5,
        "mI_at_x10_over_mp": float(mI_over_mp(10.0)),
        "V0_argmin": float(res_v0.x),
        "V0_min_over_mpc2": float(res_v0.fun),
        "mG_over_mI_argmax": float(res_ratio.x),
        "mG_over_mI_peak": float(-res_ratio.fun),
    }


def figure1_data(x_max=10.0, n_points=500):
    """Rows (x, m_I/m_p, m_G/m_p, V0/(m_p c^2)) on a uniform x grid."""
    if x_max <= 0 or n_points < 2:
        raise ValueError("x_max > 0 and n_points >= 2 required")
    xs = np.linspace(x_max / n_points, x_max, n_points)
    return np.column_stack([xs, mI_over_mp(xs), mG_over_mp(xs),
                            V0_over_mpc2(xs)])


def dark_energy_estimate(m_U, r_U, units=PlanckUnits()):
    """Constant-term energy density -(m_p c^2 / 2) (m_U / (4.5 m_p r_U^3)),
    i.e. a mass density of magnitude m_U / (9 r_U^3); the sign is opposite to
    observed dark energy and is reported as such."""
    if m_U < 0 or r_U <= 0:
        raise ValueError("m_U >= 0 and r_U > 0 required")
    mass_density = m_U / (9.0 * r_U ** 3)
    return {
        "mass_density": mass_density,
        "energy_density": -mass_density * units.c ** 2,
        "sign": "negative (opposite to observed dark energy)",
        "assumes": "all ordinary mass at the V0 minimum depth m_p c^2 / 2 "
                   "per 4.5 m_p of constituent mass",
    }
