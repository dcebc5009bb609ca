"""Bound states of the reduced radial problem and the reduction residuals.

The effective equation is i hbar dPsi/dt = -(hbar^2/2 m_I) lap Psi
+ (V0 - G M m_G / r) Psi.  Eigensolves use the u = r R substitution on a
uniform grid with Dirichlet ends (symmetric tridiagonal).  The reduction
laboratory evaluates the residual of the same physical state at three stages:

  (i)   the full noncommutative Klein-Gordon residual of psi = Psi e^{-i m~ t}
  (ii)  the identical quantity re-expanded by the finite-difference Leibniz
        identities into slow-mode symbols (a bookkeeping identity: (ii) == (i)
        to roundoff, with every term explicit and individually ablatable)
  (iii) the effective Schrodinger residual with the closed-form parameters

The gap between (i) and (iii), after units conversion, carries exactly the
dropped slow-variation terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import effective, timeops, waveops
from .geometry import RadialProfile
from .timeops import TimeFunction
from .waveops import SeparableField


@dataclass(frozen=True)
class BoundState:
    n: int
    l: int
    E: float
    method: str  # "numeric" | "bohr-oracle"


class GridConvergenceError(RuntimeError):
    """Eigenvalues still drifting when the grid is doubled."""


def bohr_radius(m_I, m_G, M, G, hbar):
    return hbar ** 2 / (m_I * G * M * m_G)


def bohr_oracle(m_I, m_G, V0, M, G, hbar, n_max=3):
    """E_n = V0 - m_I (G M m_G)^2 / (2 hbar^2 n^2), each with l = 0..n-1."""
    if min(m_I, m_G) <= 0:
        raise ValueError("masses must be positive")
    out = []
    for n in range(1, n_max + 1):
        E = V0 - m_I * (G * M * m_G) ** 2 / (2 * hbar ** 2 * n ** 2)
        for l in range(n):
            out.append(BoundState(n=n, l=l, E=E, method="bohr-oracle"))
    return out


def default_grid(m_I, m_G, M, G, hbar, n_bohr=40.0, n_nodes=4000):
    a = bohr_radius(m_I, m_G, M, G, hbar)
    return np.linspace(a * n_bohr / n_nodes, a * n_bohr, n_nodes)


def solve_radial(m_I, m_G, V0, M, G, hbar, l=0, grid=None, n_states=3,
                 return_vectors=False, check_grid=False, drift_tol=5e-3):
    """Lowest bound states below V0 at angular index l."""
    if grid is None:
        grid = default_grid(m_I, m_G, M, G, hbar)
    grid = np.asarray(grid, dtype=float)
    if grid.size < 2000:
        raise ValueError("grid needs >= 2000 nodes for the target accuracy")
    h = grid[1] - grid[0]
    if not np.allclose(np.diff(grid), h, rtol=1e-8):
        raise ValueError("solve_radial expects a uniform grid")
    kin = hbar ** 2 / (2 * m_I * h ** 2)
    pot = (hbar ** 2 * l * (l + 1) / (2 * m_I * grid ** 2)
           + V0 - G * M * m_G / grid)
    diag = 2 * kin + pot
    off = np.full(grid.size - 1, -kin)
    k = min(n_states + l, grid.size - 2)
    if return_vectors:
        vals, vecs = eigh_tridiagonal(diag, off, select="i",
                                      select_range=(0, k - 1))
    else:
        vals = eigh_tridiagonal(diag, off, select="i",
                                select_range=(0, k - 1),
                                eigvals_only=True)
        vecs = None
    states = []
    for j, E in enumerate(vals):
        if E >= V0:
            break
        states.append(BoundState(n=l + 1 + j, l=l, E=float(E),
                                 method="numeric"))
    states = states[:n_states]
    if check_grid and states:
        fine = np.linspace(grid[0] / 2, grid[-1], grid.size * 2)
        ref = solve_radial(m_I, m_G, V0, M, G, hbar, l=l, grid=fine,
                           n_states=len(states))
        for s, sr in zip(states, ref):
            scale = abs(sr.E - V0) + 1e-300
            if abs(s.E - sr.E) / scale > drift_tol:
                raise GridConvergenceError(
                    "state n=%d drifts %.2e under grid doubling"
                    % (s.n, abs(s.E - sr.E) / scale))
    if return_vectors:
        return states, grid, vecs
    return states


def virial_check(m_I, m_G, V0, M, G, hbar, grid=None):
    """2<T> + <V - V0> on the numeric ground state (Coulomb virial)."""
    states, grid, vecs = solve_radial(m_I, m_G, V0, M, G, hbar,
                                      return_vectors=True, n_states=1,
                                      grid=grid)
    u = vecs[:, 0]
    h = grid[1] - grid[0]
    norm = np.trapezoid(u * u, dx=h)
    V = np.trapezoid((-G * M * m_G / grid) * u * u, dx=h) / norm
    # kinetic energy consistent with the discrete Hamiltonian: E = T + V0 + V
    T = states[0].E - V0 - V
    return {"T": float(T), "V": float(V), "E1": states[0].E,
            "virial_rel": float(abs(2 * T + V) / abs(V))}


# ---------------------------------------------------------------------------
# reduction residual laboratory (units hbar = c = 1 internally)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReductionScales:
    omega: float
    spatial_scale: float
    norm_i: float
    norm_ii: float
    norm_iii: float
    gap_i_ii: float       # bookkeeping identity, roundoff-level
    gap_i_iii: float      # dropped slow-variation terms, after conversion
    conversion: float


def _stage_two(phi_vals, lap_vals, drift_vals, r, m_t, omega, lam, gamma,
               ablate_gamma_psidot=False):
    """Fast-mode/slow-mode expansion of the weak-field operator residual.

    Every factor is an operator symbol on e^{-i m~ t} (fast) or e^{-i Omega t}
    (slow); evaluated at t = 0.  beta0 = -1 in these units.
    """
    beta0 = -1.0
    zeta = math.exp(m_t * lam)
    sigma = math.exp(omega * lam)
    c_f = timeops.symbol_delta0_const(m_t, lam, beta0)
    c_g = timeops.symbol_delta0_const(omega, lam, beta0)
    p0_f = timeops.symbol_d0(m_t, lam)
    p0_g = timeops.symbol_d0(omega, lam)
    h_f = timeops.symbol_delta0_hybrid(m_t, lam)
    h_g = timeops.symbol_delta0_hybrid(omega, lam)

    out = zeta * sigma * (lap_vals + drift_vals)
    out = out + 2 * phi_vals * (c_f * sigma + c_g / zeta
                                + beta0 * p0_f * p0_g * sigma)
    hybrid = h_f + h_g / zeta
    if not ablate_gamma_psidot:
        hybrid = hybrid + p0_f * (-1j * omega)
    out = out - (2 * gamma / r) * phi_vals * zeta * sigma * hybrid
    out = out - m_t ** 2 * phi_vals
    return out


def reduction_residual(m, gamma, lam, omega, phi, grid,
                       ablate_gamma_psidot=False):
    """Residual norms of Psi = phi(r) e^{-i omega t} at the three stages.

    phi: RadialProfile with analytic derivatives; units hbar = c = 1, so
    m~ = m and the Compton scale is 1/m.
    """
    grid = np.asarray(grid, dtype=float)
    m_t = m
    # stage (i): full operator via waveops
    psi = SeparableField.single(phi, TimeFunction.mode(m_t + omega))
    cfg = waveops.WaveOpConfig(lam=lam, c=1.0, variant="newton", gamma=gamma)
    r_i = waveops.kg_residual(psi, cfg, m, 1.0, 1.0).to_grid(grid).evaluate(0.0)

    # stage (ii): identical operator, term-by-term symbol bookkeeping
    phi_vals = np.asarray(phi(grid), dtype=complex)
    lap_vals = phi.deriv2(grid) + 2.0 / grid * phi.deriv(grid)
    drift_vals = gamma / (2 * grid ** 2 * (1 + gamma / grid)) * phi.deriv(grid)
    r_ii = _stage_two(phi_vals, lap_vals, drift_vals, grid, m_t, omega, lam,
                      gamma, ablate_gamma_psidot=ablate_gamma_psidot)

    # stage (iii): effective Schrodinger residual with closed-form parameters
    units = effective.PlanckUnits(lam=lam)
    pars = effective.effective_params(m, units)
    GMmG = gamma / 2 * pars.m_G  # gamma = 2 G M / c^2
    r_iii = (omega * phi_vals + lap_vals / (2 * pars.m_I)
             - (pars.V0 - GMmG / grid) * phi_vals)

    x = m_t * lam
    K = (1.0 / (2 * m)) * (x / math.sinh(x))
    norm = lambda v: float(np.max(np.abs(v)))
    scale_iii = max(norm(omega * phi_vals), norm(lap_vals / (2 * pars.m_I)),
                    norm(GMmG / grid * phi_vals), 1e-300)
    return ReductionScales(
        omega=omega,
        spatial_scale=float(1.0 / np.max(np.abs(phi.deriv(grid)
                                                / phi_vals.real))),
        norm_i=norm(r_i),
        norm_ii=norm(r_ii),
        norm_iii=norm(r_iii) / scale_iii,
        gap_i_ii=norm(r_i - r_ii) / max(norm(r_i), 1e-300),
        gap_i_iii=norm(K * r_i - r_iii),
        conversion=K,
    )


def exp_orbital(a):
    """phi = e^{-r/a} with analytic derivatives (hydrogen-like shape)."""
    return RadialProfile.from_callable(
        lambda r: np.exp(-np.asarray(r, dtype=float) / a),
        deriv=lambda r: -np.exp(-r / a) / a,
        deriv2=lambda r: np.exp(-r / a) / a ** 2,
        tag={"kind": "exp-orbital", "a": a})
