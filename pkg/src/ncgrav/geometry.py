"""Radial profiles, the mu/nu first-order ODE system and weak-field checks.

The profile functions beta(r), mu(r), nu(r) and the gravitational potential
Phi(r) all live here as ``RadialProfile`` objects: either closed forms with
analytic derivatives or sampled data with spline evaluation.  The radial
reduction x_i d/dx_i = r d/dr is used throughout (all paper profiles are
spherically symmetric), so the ODE system reads

    r mu' + 2 mu = beta,      r nu' + nu = mu.
"""

from __future__ import annotations

import json
import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline


class SignatureError(ValueError):
    """beta >= 0 somewhere: the static metric loses Lorentzian signature."""


class RadialProfile:
    """Function of radius r > 0, closed-form or sampled."""

    def __init__(self, fn, deriv=None, deriv2=None, tag=None, structure=None):
        self._fn = fn
        self._deriv = deriv
        self._deriv2 = deriv2
        self.tag = tag or {"kind": "closed-form"}
        # optional additive decomposition [(kind-dict, profile), ...] used by
        # waveops to dispatch Delta_0 component-wise (see mu_nu_newton)
        self.structure = structure

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, value):
        return cls(lambda r: np.full_like(np.asarray(r, dtype=complex), value),
                   deriv=lambda r: np.zeros_like(np.asarray(r, dtype=complex)),
                   deriv2=lambda r: np.zeros_like(np.asarray(r, dtype=complex)),
                   tag={"kind": "constant", "value": value})

    @classmethod
    def power_law(cls, n, coef=1.0):
        """coef * r^{-n}."""
        return cls(lambda r: coef * np.asarray(r, dtype=float) ** (-n),
                   deriv=lambda r: -n * coef * np.asarray(r, dtype=float) ** (-n - 1),
                   deriv2=lambda r: n * (n + 1) * coef
                   * np.asarray(r, dtype=float) ** (-n - 2),
                   tag={"kind": "power-law", "n": n, "coef": coef})

    @classmethod
    def from_callable(cls, fn, deriv=None, deriv2=None, tag=None):
        return cls(fn, deriv=deriv, deriv2=deriv2, tag=tag)

    @classmethod
    def from_samples(cls, r, values, tag=None):
        r = np.asarray(r, dtype=float)
        if r.size < 16:
            raise ValueError("sampled profiles need >= 16 nodes")
        if np.any(r <= 0) or np.any(np.diff(r) <= 0):
            raise ValueError("r grid must be strictly increasing and positive")
        values = np.asarray(values)
        if np.iscomplexobj(values):
            sp_re = CubicSpline(r, values.real)
            sp_im = CubicSpline(r, values.imag)
            fn = lambda x: sp_re(x) + 1j * sp_im(x)
            dfn = lambda x: sp_re(x, 1) + 1j * sp_im(x, 1)
            d2fn = lambda x: sp_re(x, 2) + 1j * sp_im(x, 2)
        else:
            sp = CubicSpline(r, values)
            fn = lambda x: sp(x)
            dfn = lambda x: sp(x, 1)
            d2fn = lambda x: sp(x, 2)
        prof = cls(fn, deriv=dfn, deriv2=d2fn,
                   tag=tag or {"kind": "sampled", "n_nodes": int(r.size)})
        prof.r_nodes = r
        prof.values = values
        return prof

    # -- evaluation ---------------------------------------------------
    def __call__(self, r):
        return self._fn(np.asarray(r))

    def deriv(self, r):
        r = np.asarray(r, dtype=float)
        if self._deriv is not None:
            return self._deriv(r)
        h = np.maximum(1e-6 * r, 1e-9)
        return (self._fn(r + h) - self._fn(r - h)) / (2 * h)

    def deriv2(self, r):
        r = np.asarray(r, dtype=float)
        if self._deriv2 is not None:
            return self._deriv2(r)
        h = np.maximum(1e-5 * r, 1e-8)
        return (self._fn(r + h) - 2 * self._fn(r) + self._fn(r - h)) / h ** 2

    # -- linear structure --------------------------------------------
    def __add__(self, other):
        return RadialProfile(
            lambda r: self(r) + other(r),
            deriv=lambda r: self.deriv(r) + other.deriv(r),
            deriv2=lambda r: self.deriv2(r) + other.deriv2(r),
            tag={"kind": "sum"})

    def scale(self, c):
        return RadialProfile(
            lambda r: c * self(r),
            deriv=lambda r: c * self.deriv(r),
            deriv2=lambda r: c * self.deriv2(r),
            tag={"kind": "scaled", "base": self.tag, "factor": c})

    # -- CSV round trip ----------------------------------------------
    def to_csv(self, path, r_grid):
        r_grid = np.asarray(r_grid, dtype=float)
        vals = np.asarray(self(r_grid), dtype=complex)
        with open(path, "w") as fh:
            fh.write("# %s\n" % json.dumps(self.tag))
            fh.write("r,value_re,value_im\n")
            for rv, v in zip(r_grid, vals):
                fh.write("%.12e,%.12e,%.12e\n" % (rv, v.real, v.imag))

    @classmethod
    def from_csv(cls, path):
        with open(path) as fh:
            header = fh.readline()
            tag = json.loads(header.lstrip("# ").strip()) if header.startswith("#") \
                else None
            fh.readline()  # column names
            rows = [line.strip().split(",") for line in fh if line.strip()]
        r = np.array([float(row[0]) for row in rows])
        vals = np.array([complex(float(row[1]), float(row[2])) for row in rows])
        if np.allclose(vals.imag, 0):
            vals = vals.real
        return cls.from_samples(r, vals, tag=tag)


# ---------------------------------------------------------------------------
# closed-form mu/nu families
# ---------------------------------------------------------------------------

def mu_nu_closed(n):
    """Particular mu, nu for beta = 1/r^n.

    n = 1: mu = 1/r, nu = ln(r)/r;  n = 2: mu = ln(r)/r^2, nu = -(1+ln r)/r^2;
    otherwise mu = 1/((2-n) r^n), nu = 1/((2-n)(1-n) r^n).  The n = 2 nu sign
    is fixed by the ODE r nu' + nu = mu and by the n -> 2 limit of the generic
    family after removing the homogeneous 1/(eps r^2) piece.
    """
    if abs(n - 1) < 1e-12:
        mu = RadialProfile.power_law(1)
        nu = RadialProfile(
            lambda r: np.log(np.asarray(r, dtype=float)) / np.asarray(r, dtype=float),
            deriv=lambda r: (1 - np.log(r)) / np.asarray(r, dtype=float) ** 2,
            tag={"kind": "log-over-r"})
        return mu, nu
    if abs(n - 2) < 1e-12:
        mu = RadialProfile(
            lambda r: np.log(np.asarray(r, dtype=float)) / np.asarray(r, dtype=float) ** 2,
            deriv=lambda r: (1 - 2 * np.log(r)) / np.asarray(r, dtype=float) ** 3,
            tag={"kind": "log-over-r2"})
        nu = RadialProfile(
            lambda r: -(1 + np.log(np.asarray(r, dtype=float)))
            / np.asarray(r, dtype=float) ** 2,
            deriv=lambda r: (1 + 2 * np.log(r)) / np.asarray(r, dtype=float) ** 3,
            tag={"kind": "neg-one-plus-log-over-r2"})
        return mu, nu
    mu = RadialProfile.power_law(n, 1.0 / (2 - n))
    nu = RadialProfile.power_law(n, 1.0 / ((2 - n) * (1 - n)))
    return mu, nu


def mu_nu_newton(gamma, c):
    """The Newtonian-potential profiles:

    beta = -(1/c^2)(1 + gamma/r),  mu = -(1/c^2)(1/2 + gamma/r),
    nu = -(1/c^2)(1/2 - (gamma/r) ln(gamma/r)).

    beta carries a structure tag decomposing it as constant + 1/r, which is
    what lets the wave operators treat Delta_0 component-wise.
    """
    if gamma <= 0 or c <= 0:
        raise ValueError("gamma and c must be positive")
    inv_c2 = 1.0 / c ** 2
    const_part = RadialProfile.constant(-inv_c2)
    coulomb_part = RadialProfile.power_law(1, -inv_c2 * gamma)
    beta = RadialProfile(
        lambda r: -inv_c2 * (1 + gamma / np.asarray(r, dtype=float)),
        deriv=lambda r: inv_c2 * gamma / np.asarray(r, dtype=float) ** 2,
        deriv2=lambda r: -2 * inv_c2 * gamma / np.asarray(r, dtype=float) ** 3,
        tag={"kind": "newtonian-beta", "gamma": gamma, "c": c},
        structure=[({"kind": "constant", "value": -inv_c2}, const_part),
                   ({"kind": "power-law", "n": 1, "coef": -inv_c2 * gamma},
                    coulomb_part)])
    mu = RadialProfile(
        lambda r: -inv_c2 * (0.5 + gamma / np.asarray(r, dtype=float)),
        deriv=lambda r: inv_c2 * gamma / np.asarray(r, dtype=float) ** 2,
        tag={"kind": "newtonian-mu", "gamma": gamma, "c": c})

    def nu_fn(r):
        r = np.asarray(r, dtype=float)
        g = gamma / r
        return -inv_c2 * (0.5 - g * np.log(g))

    def nu_deriv(r):
        r = np.asarray(r, dtype=float)
        g = gamma / r
        # d/dr [g ln g] = -(g/r)(ln g + 1)
        return -inv_c2 * (g / r) * (np.log(g) + 1)

    nu = RadialProfile(nu_fn, deriv=nu_deriv,
                       tag={"kind": "newtonian-nu", "gamma": gamma, "c": c})
    return beta, mu, nu


def ode_residuals(beta, mu, nu, r):
    """|r mu' + 2 mu - beta| and |r nu' + nu - mu|, relative."""
    r = np.asarray(r, dtype=float)
    res_mu = r * mu.deriv(r) + 2 * mu(r) - beta(r)
    res_nu = r * nu.deriv(r) + nu(r) - mu(r)
    scale_mu = np.maximum(np.abs(beta(r)), 1e-30)
    scale_nu = np.maximum(np.abs(mu(r)), 1e-30)
    return np.abs(res_mu) / scale_mu, np.abs(res_nu) / scale_nu


def mu_nu_numeric(beta, r_ref, mu_ref, nu_ref, r_grid, rtol=1e-10):
    """Integrate r mu' + 2 mu = beta, r nu' + nu = mu from the pin outward and
    inward; returns sampled profiles on r_grid."""
    r_grid = np.asarray(r_grid, dtype=float)
    if np.any(r_grid <= 0):
        raise ValueError("r grid must be positive")

    def rhs(r, y):
        b = complex(np.asarray(beta(r)).item())
        return [(b - 2 * y[0]) / r, (y[0] - y[1]) / r]

    y0 = [complex(mu_ref), complex(nu_ref)]
    lo, hi = float(r_grid[0]), float(r_grid[-1])
    mu_vals = np.empty(r_grid.size, dtype=complex)
    nu_vals = np.empty(r_grid.size, dtype=complex)
    for direction, (a, b) in (("fwd", (r_ref, hi)), ("bwd", (r_ref, lo))):
        if a == b:
            continue
        mask = r_grid >= r_ref if direction == "fwd" else r_grid < r_ref
        t_eval = np.sort(r_grid[mask]) if direction == "fwd" \
            else np.sort(r_grid[mask])[::-1]
        if t_eval.size == 0:
            continue
        sol = solve_ivp(rhs, (a, b), y0, t_eval=t_eval, rtol=rtol, atol=1e-14,
                        method="DOP853")
        if not sol.success:
            raise RuntimeError("mu/nu integration failed: %s" % sol.message)
        order = np.argsort(sol.t)
        idx = np.where(mask)[0]
        mu_vals[idx] = sol.y[0][order]
        nu_vals[idx] = sol.y[1][order]
    if np.allclose(mu_vals.imag, 0) and np.allclose(nu_vals.imag, 0):
        mu_vals = mu_vals.real
        nu_vals = nu_vals.real
    return (RadialProfile.from_samples(r_grid, mu_vals, tag={"kind": "numeric-mu"}),
            RadialProfile.from_samples(r_grid, nu_vals, tag={"kind": "numeric-nu"}))


# ---------------------------------------------------------------------------
# finite differences on a (possibly nonuniform) radial grid
# ---------------------------------------------------------------------------

def fd1(values, r):
    """First derivative, 3-point nonuniform centered, one-sided at the ends."""
    values = np.asarray(values)
    r = np.asarray(r, dtype=float)
    out = np.empty_like(values, dtype=complex if np.iscomplexobj(values) else float)
    hm = r[1:-1] - r[:-2]
    hp = r[2:] - r[1:-1]
    out[1:-1] = (-hp / (hm * (hm + hp)) * values[:-2]
                 + (hp - hm) / (hm * hp) * values[1:-1]
                 + hm / (hp * (hm + hp)) * values[2:])
    out[0] = (values[1] - values[0]) / (r[1] - r[0])
    out[-1] = (values[-1] - values[-2]) / (r[-1] - r[-2])
    return out


def fd2(values, r):
    """Second derivative, 3-point nonuniform; copies neighbors at the ends."""
    values = np.asarray(values)
    r = np.asarray(r, dtype=float)
    out = np.empty_like(values, dtype=complex if np.iscomplexobj(values) else float)
    hm = r[1:-1] - r[:-2]
    hp = r[2:] - r[1:-1]
    out[1:-1] = 2 * (hp * values[:-2] - (hm + hp) * values[1:-1] + hm * values[2:]) \
        / (hm * hp * (hm + hp))
    out[0] = out[1]
    out[-1] = out[-2]
    return out


def laplacian_flat_radial(values, r):
    """3D flat Laplacian of a radial function: f'' + (2/r) f'."""
    return fd2(values, r) + 2.0 / np.asarray(r, dtype=float) * fd1(values, r)


# ---------------------------------------------------------------------------
# static metric and weak-field checks
# ---------------------------------------------------------------------------

class StaticMetric:
    """g = (1/beta) dt x dt + dx_i x dx_i with beta < 0."""

    def __init__(self, beta_profile, r_check=None):
        self.beta = beta_profile
        if r_check is not None:
            b = np.asarray(self.beta(r_check)).real
            if np.any(b >= 0):
                raise SignatureError("beta >= 0 on the check grid")

    def phi(self, r):
        b = np.asarray(self.beta(r), dtype=complex)
        return np.sqrt(-1.0 / b).real

    def laplace_beltrami_static(self, values, r):
        """LB operator on time-independent radial f: the conformal-factor form
        |beta|^{1/2} d_i (|beta|^{-1/2} d_i f) on radial functions."""
        r = np.asarray(r, dtype=float)
        w = np.abs(np.asarray(self.beta(r)).real) ** -0.5
        inner = w * fd1(values, r)
        return (fd1(inner, r) + 2.0 / r * inner) / w

    def laplace_beltrami_expanded(self, values, r):
        """Same operator in expanded form: flat Laplacian minus the drift
        (1/(2 beta)) beta' d/dr."""
        r = np.asarray(r, dtype=float)
        b = np.asarray(self.beta(r))
        bp = np.asarray(self.beta.deriv(r))
        return laplacian_flat_radial(values, r) - bp / (2 * b) * fd1(values, r)


def weak_field_check(phi_profile, rho_profile, c, G, r_grid,
                     interior_margin=3):
    """Compare Ricci_00 = phi LB_flat phi against LB_flat Phi and against the
    Poisson source 4 pi G rho, by radial finite differences.

    Boundary-affected nodes (interior_margin at each end) are excluded from
    the reported maxima.
    """
    r = np.asarray(r_grid, dtype=float)
    Phi = np.asarray(phi_profile(r)).real
    if np.max(np.abs(Phi)) / c ** 2 > 0.1:
        import warnings
        warnings.warn("Phi/c^2 not small: weak-field comparison dubious")
    u = Phi / c ** 2
    if np.any(1 - 2 * u <= 0):
        raise SignatureError("beta >= 0 somewhere on the grid")
    # phi_m = c (1 - 2u)^{-1/2}; carry only the deviation from c so that the
    # finite differences are not quantized at the scale c * eps
    dphi = c * np.expm1(-0.5 * np.log1p(-2 * u))
    phi_m = c + dphi
    sl = slice(interior_margin, -interior_margin or None)
    ricci00 = phi_m * laplacian_flat_radial(dphi, r)
    lap_phi = laplacian_flat_radial(Phi, r)
    rho = np.asarray(rho_profile(r)).real
    poisson_res = lap_phi - 4 * math.pi * G * rho
    scale = max(np.max(np.abs(lap_phi[sl])), 4 * math.pi * G * max(np.max(np.abs(rho)), 0)
                + 1e-300)
    dev = np.abs(ricci00[sl] - lap_phi[sl])
    return {
        "max_ricci00": float(np.max(np.abs(ricci00[sl]))),
        "max_lap_phi": float(np.max(np.abs(lap_phi[sl]))),
        "max_rel_deviation": float(np.max(dev) / scale),
        "max_poisson_residual": float(np.max(np.abs(poisson_res[sl]))),
        "poisson_scale": float(scale),
    }


def default_log_grid(r_min, r_max, n=400):
    return np.geomspace(r_min, r_max, n)
