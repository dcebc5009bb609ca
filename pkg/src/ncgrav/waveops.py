"""Wave operators on separable fields (spatial part x time part).

Three variants of the box operator:

  box_const   : constant beta,  box psi = lap psi(t+il) + 2 Delta0^const psi
  box_general : varying beta,   box psi = Dbar psi(t+il) + 2 Delta0 psi with
                Dbar = lap - (1/2 beta) beta' d/dr
  box_newton  : the weak-field operator for beta = -(1/c^2)(1 + gamma/r)

For box_general the spatial finite difference Delta0 is dispatched through the
closed forms when the beta profile carries a component decomposition (constant
plus power laws); untagged profiles fall back to the pointwise varying finite
difference, which is a different (non-resummed) object on logarithmic
profiles -- see the mode flag.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import timeops
from .geometry import RadialProfile, laplacian_flat_radial
from .timeops import TimeFunction

WEAK_FIELD_WARN = 0.3


class PlaneWave:
    """Spatial factor e^{i k.x}; only |k| matters to the operators here."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = float(k)

    def __repr__(self):
        return "PlaneWave(k=%g)" % self.k


class SeparableField:
    """Finite sum of (spatial part, TimeFunction) products."""

    def __init__(self, terms=None):
        self.terms = list(terms) if terms else []

    @classmethod
    def single(cls, spatial, time_part):
        return cls([(spatial, time_part)])

    @classmethod
    def time_only(cls, time_part):
        return cls([(RadialProfile.constant(1.0), time_part)])

    def __add__(self, other):
        return SeparableField(self.terms + other.terms)

    def scale(self, c):
        return SeparableField([(sp, f.scale(c)) for sp, f in self.terms])

    def __neg__(self):
        return self.scale(-1.0)

    def __sub__(self, other):
        return self + (-other)

    def spatial_values(self, r):
        """Per-term spatial samples; PlaneWave terms are rejected (use the
        symbol arithmetic instead of sampling an angular function radially)."""
        out = []
        for sp, _ in self.terms:
            if isinstance(sp, PlaneWave):
                raise ValueError("plane-wave term has no radial sampling")
            out.append(np.asarray(sp(r), dtype=complex))
        return out

    def evaluate(self, r, t):
        r = np.asarray(r, dtype=float)
        total = np.zeros(r.shape, dtype=complex)
        for sp_vals, (_, f) in zip(self.spatial_values(r), self.terms):
            total += sp_vals * f.evaluate(complex(t))
        return total

    def to_grid(self, r):
        g = GridField(r)
        for sp_vals, (_, f) in zip(self.spatial_values(r), self.terms):
            for key, c in f.terms.items():
                cur = g.data.get(key)
                add = c * sp_vals
                g.data[key] = add if cur is None else cur + add
        return g


class GridField:
    """psi(r, t) = sum_{p,s} A_{p,s}(r) t^p e^{st} with per-node coefficient
    arrays; closed under node-dependent imaginary time shifts."""

    def __init__(self, r, data=None):
        self.r = np.asarray(r, dtype=float)
        self.data = dict(data) if data else {}

    def copy(self):
        return GridField(self.r, {k: v.copy() for k, v in self.data.items()})

    def __add__(self, other):
        out = self.copy()
        for key, arr in other.data.items():
            cur = out.data.get(key)
            out.data[key] = arr.copy() if cur is None else cur + arr
        return out

    def scale(self, c):
        return GridField(self.r, {k: c * v for k, v in self.data.items()})

    def __sub__(self, other):
        return self + other.scale(-1.0)

    def evaluate(self, t):
        t = complex(t)
        total = np.zeros(self.r.shape, dtype=complex)
        for (p, s), arr in self.data.items():
            val = arr * t ** p if p else arr
            if s != 0:
                val = val * np.exp(s * t)
            total += val
        return total

    def max_abs(self, t_samples):
        return max(np.max(np.abs(self.evaluate(t))) for t in t_samples)


def field_max_diff(a, b, r, t_samples=(0.0, 0.37, -1.2, 2.5)):
    """Sup-norm difference over nodes and time samples, plus the larger of the
    two field norms (for forming relative errors)."""
    ga = a.to_grid(r) if isinstance(a, SeparableField) else a
    gb = b.to_grid(r) if isinstance(b, SeparableField) else b
    diff = max(np.max(np.abs(ga.evaluate(t) - gb.evaluate(t)))
               for t in t_samples)
    scale = max(ga.max_abs(t_samples), gb.max_abs(t_samples), 1e-300)
    return diff, scale


# ---------------------------------------------------------------------------
# spatial helpers
# ---------------------------------------------------------------------------

def _lap_profile(sp):
    """Flat 3D Laplacian of a radial profile as a new profile."""
    return RadialProfile.from_callable(
        lambda r: sp.deriv2(r) + 2.0 / np.asarray(r, dtype=float) * sp.deriv(r),
        tag={"kind": "laplacian"})


def _drift_profile(sp, beta):
    """-(1/2 beta) beta' d/dr applied to sp, as a profile."""
    return RadialProfile.from_callable(
        lambda r: -beta.deriv(r) / (2 * np.asarray(beta(r), dtype=complex))
        * sp.deriv(r),
        tag={"kind": "drift"})


# ---------------------------------------------------------------------------
# box variants
# ---------------------------------------------------------------------------

def box_const(psi, beta, lam):
    """Constant-beta wave operator; exact on plane-wave terms, analytic or
    spline derivatives on radial terms."""
    out = SeparableField()
    for sp, f in psi.terms:
        shifted = f.shift(1, lam)
        d0_part = timeops.delta0_const(f, lam, beta).scale(2.0)
        if isinstance(sp, PlaneWave):
            out.terms.append((sp, shifted.scale(-sp.k ** 2) + d0_part))
        else:
            out.terms.append((_lap_profile(sp), shifted))
            out.terms.append((sp, d0_part))
    return out


def _beta_components(beta):
    """Component list [(kind-dict, profile)] for a beta profile, or None."""
    if beta.structure is not None:
        return beta.structure
    kind = beta.tag.get("kind")
    if kind == "constant":
        return [(beta.tag, beta)]
    if kind == "power-law":
        return [(beta.tag, beta)]
    return None


def _delta0_closed_terms(sp, f, lam, components):
    """2 Delta0 psi for a beta decomposed into constant + power-law pieces,
    each through its closed form; separability is preserved."""
    terms = []
    for tag, _prof in components:
        if tag["kind"] == "constant":
            part = timeops.delta0_const(f, lam, tag["value"]).scale(2.0)
            terms.append((sp, part))
        elif tag["kind"] == "power-law":
            n = tag["n"]
            coef = tag.get("coef", 1.0)
            part, weight = timeops.delta0_power(f, lam, n)
            wprof = RadialProfile.from_callable(
                lambda r, _n=weight, _sp=sp, _c=coef:
                _c * np.asarray(r, dtype=float) ** (-_n)
                * np.asarray(_sp(r), dtype=complex),
                tag={"kind": "weighted"})
            terms.append((wprof, part.scale(2.0)))
        else:
            raise ValueError("unsupported beta component: %r" % tag)
    return terms


def box_general(psi, beta, mu, nu, lam, grid=None, mode="auto"):
    """Varying-beta wave operator.

    mode = "auto": tagged constant/power-law/superposition beta goes through
    the closed-form Delta0 of each component (result stays separable);
    anything else, or mode = "pointwise", evaluates the varying finite
    difference node by node on `grid` and returns a GridField.
    """
    components = _beta_components(beta) if mode == "auto" else None
    dbar = SeparableField()
    for sp, f in psi.terms:
        if isinstance(sp, PlaneWave):
            raise ValueError("box_general needs radial spatial parts")
        shifted = f.shift(1, lam)
        dbar.terms.append((_lap_profile(sp), shifted))
        dbar.terms.append((_drift_profile(sp, beta), shifted))

    if components is not None:
        out = SeparableField(dbar.terms)
        for sp, f in psi.terms:
            out.terms.extend(_delta0_closed_terms(sp, f, lam, components))
        return out

    if grid is None:
        raise ValueError("pointwise Delta0 needs an explicit grid")
    grid = np.asarray(grid, dtype=float)
    out = dbar.to_grid(grid)
    mu_v = np.asarray(mu(grid), dtype=complex)
    nu_v = np.asarray(nu(grid), dtype=complex)
    beta_v = np.asarray(beta(grid), dtype=complex)
    bad = np.where((mu_v == 0) | (mu_v + nu_v == 0))[0]
    if bad.size:
        raise timeops.DegenerateProfileError(
            "mu = 0 or mu + nu = 0 at node(s) %s" % bad.tolist())
    for sp, f in psi.terms:
        sp_v = np.asarray(sp(grid), dtype=complex)
        for j in range(grid.size):
            g = timeops.delta0_general(
                f, lam, complex(mu_v[j]), complex(nu_v[j]), complex(beta_v[j]))
            for key, c in g.terms.items():
                cur = out.data.get(key)
                if cur is None:
                    cur = np.zeros(grid.size, dtype=complex)
                    out.data[key] = cur
                cur[j] += 2.0 * c * sp_v[j]
    return out


def box_newton(psi, gamma, c, lam, r_min=None):
    """Weak-field operator for beta = -(1/c^2)(1 + gamma/r): constant-beta
    part, radial drift + (gamma / (2 r^2 (1 + gamma/r))) d/dr acting on
    psi(t+il), and the hybrid finite-difference term -(2 gamma/(c^2 r))
    Delta0^hybrid psi(t+il)."""
    if gamma <= 0:
        raise ValueError("gamma must be positive (use box_const for gamma=0)")
    if r_min is not None and gamma / r_min > WEAK_FIELD_WARN:
        warnings.warn("gamma/r = %.3g exceeds the weak-field regime"
                      % (gamma / r_min))
    out = box_const(psi, -1.0 / c ** 2, lam)
    for sp, f in psi.terms:
        if isinstance(sp, PlaneWave):
            raise ValueError("box_newton needs radial spatial parts")
        shifted = f.shift(1, lam)
        drift = RadialProfile.from_callable(
            lambda r, _sp=sp: gamma
            / (2 * np.asarray(r, dtype=float) ** 2
               * (1 + gamma / np.asarray(r, dtype=float))) * _sp.deriv(r),
            tag={"kind": "newton-drift"})
        out.terms.append((drift, shifted))
        hyb_weight = RadialProfile.from_callable(
            lambda r, _sp=sp: -(2 * gamma / c ** 2)
            / np.asarray(r, dtype=float) * np.asarray(_sp(r), dtype=complex),
            tag={"kind": "newton-hybrid-weight"})
        out.terms.append((hyb_weight, timeops.delta0_hybrid(shifted, lam)))
    return out


# ---------------------------------------------------------------------------
# configuration and the Klein-Gordon residual
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WaveOpConfig:
    lam: float
    c: float
    variant: str  # "const" | "general" | "newton"
    beta: object = None          # number (const) or RadialProfile (general)
    mu: object = None
    nu: object = None
    gamma: float = 0.0
    mode: str = "auto"

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        if self.variant == "newton" and self.gamma <= 0:
            raise ValueError("newton variant requires gamma > 0")


def apply_box(psi, config, grid=None):
    if config.variant == "const":
        return box_const(psi, config.beta, config.lam)
    if config.variant == "general":
        return box_general(psi, config.beta, config.mu, config.nu, config.lam,
                           grid=grid, mode=config.mode)
    if config.variant == "newton":
        r_min = None if grid is None else float(np.min(grid))
        return box_newton(psi, config.gamma, config.c, config.lam, r_min=r_min)
    raise ValueError("unknown variant %r" % config.variant)


def kg_residual(psi, config, m, hbar, c, grid=None):
    """box psi - (m c / hbar)^2 psi."""
    box = apply_box(psi, config, grid=grid)
    mass_term = psi.scale((m * c / hbar) ** 2)
    if isinstance(box, GridField):
        return box - mass_term.to_grid(box.r)
    return box - mass_term
