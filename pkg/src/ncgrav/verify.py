"""Named self-check registry: every module invariant behind one entry point.

Each check is a function level -> (ok, measured) where level is "fast" or
"full" (full uses more samples and finer grids).  The CLI `verify` subcommand
runs the registry and exits nonzero if anything fails.
"""

from __future__ import annotations

import math
import random
import time

import numpy as np

from . import dispersion as D
from . import effective as E
from . import geometry as G
from . import spectrum as S
from . import timeops as T
from . import waveops as W
from .coeff import Coeff
from .exactalg import (DT, THETA, NCElement, NCOneForm, commutator_d, dx,
                       exterior_d, exterior_d_formula, exterior_d_leibniz,
                       normal_order)
from .timeops import TimeFunction as TF

CHECKS = []


def check(name):
    def wrap(fn):
        CHECKS.append((name, fn))
        return fn
    return wrap


def _rand_elem(rng, d=3, max_deg=4, nterms=3):
    out = NCElement.zero(d)
    for _ in range(nterms):
        a = [0, 0, 0]
        for _ in range(rng.randint(0, max_deg)):
            a[rng.randrange(3)] += 1
        n = rng.randint(0, max(0, max_deg - sum(a)))
        c = Coeff.from_rational(rng.randint(-3, 3), rng.randint(-2, 2))
        out = out + NCElement.monomial(d, a, n, c)
    return out


def _rand_tf(rng, nterms=2):
    out = TF.zero()
    for _ in range(nterms):
        out = out + TF({(rng.randint(0, 2),
                         complex(rng.uniform(-0.5, 0.5),
                                 rng.uniform(-0.5, 0.5))):
                        complex(rng.uniform(-1, 1), rng.uniform(-1, 1))})
    return out


# -- exact calculus ----------------------------------------------------------

@check("exactalg.leibniz-product-rule")
def _(level):
    rng = random.Random(1)
    n = 200 if level == "full" else 30
    for _ in range(n):
        f, g = _rand_elem(rng), _rand_elem(rng)
        if exterior_d(f * g) != exterior_d(f).mul_elem(g) \
                + exterior_d(g).lmul(f):
            return False, "failed on a random product"
    return True, "%d exact products" % n


@check("exactalg.inner-form-property")
def _(level):
    rng = random.Random(2)
    n = 200 if level == "full" else 30
    for _ in range(n):
        psi = _rand_elem(rng)
        if exterior_d(psi) != commutator_d(psi):
            return False, "d psi != (i/lam)[theta, psi]"
    return True, "%d exact elements" % n


@check("exactalg.eq-route-agreement")
def _(level):
    top = 6 if level == "full" else 4
    count = 0
    for a1 in range(top):
        for a2 in range(top):
            for n in range(top):
                if a1 + a2 + n > top:
                    continue
                psi = NCElement.monomial(3, (a1, a2, 0), n)
                if exterior_d_leibniz(psi) != exterior_d_formula(psi):
                    return False, "monomial x1^%d x2^%d t^%d" % (a1, a2, n)
                count += 1
    return True, "%d monomials" % count


@check("exactalg.normal-order-confluence")
def _(level):
    rng = random.Random(3)
    n = 80 if level == "full" else 20
    gens = ["t", ("x", 1), ("x", 2)]
    for _ in range(n):
        word = [rng.choice(gens) for _ in range(rng.randint(2, 8))]
        pos = rng.randrange(len(word) + 1)
        full = word[:pos] + [rng.choice([DT, THETA, dx(1)])] + word[pos:]
        whole = normal_order(3, full)
        cut = rng.randrange(1, len(full))
        left, right = full[:cut], full[cut:]
        has_form = any(g in (DT, THETA) or (isinstance(g, tuple)
                       and g[0] == "dx") for g in left)
        part = normal_order(3, left)
        if has_form:
            for g in right:
                part = part.mul_gen(g)
        else:
            rest = normal_order(3, right)
            part = part * rest if isinstance(rest, NCElement) \
                else rest.lmul(part)
        if part != whole:
            return False, "split reduction disagrees"
    return True, "%d random words" % n


@check("exactalg.classical-limit-theta-divisible")
def _(level):
    rng = random.Random(4)
    for _ in range(20):
        theta_part = exterior_d(_rand_elem(rng)).coeff(THETA)
        for c in theta_part.terms.values():
            if c.lam_valuation() < 1:
                return False, "theta' coefficient survives lam -> 0"
    return True, "20 elements"


# -- time operators ----------------------------------------------------------

@check("timeops.leibniz-constant")
def _(level):
    rng = random.Random(5)
    lam, n = 0.3, (100 if level == "full" else 25)
    worst = 0.0
    for _ in range(n):
        f, g = _rand_tf(rng), _rand_tf(rng)
        lhs = T.delta0_const(f * g, lam, 1.0)
        rhs = (T.delta0_const(f, lam, 1.0) * g.shift(1, lam)
               + f.shift(-1, lam) * T.delta0_const(g, lam, 1.0)
               + T.d0(f, lam) * T.d0(g, lam).shift(1, lam))
        diff = lhs - rhs
        worst = max(worst, diff.max_coeff()
                    / max(lhs.max_coeff(), rhs.max_coeff(), 1.0))
    return worst < 1e-12, "max rel dev %.2e over %d pairs" % (worst, n)


@check("timeops.leibniz-hybrid")
def _(level):
    rng = random.Random(6)
    lam, n = 0.3, (100 if level == "full" else 25)
    worst = 0.0
    for _ in range(n):
        f, g = _rand_tf(rng), _rand_tf(rng)
        lhs = T.delta0_hybrid(f * g, lam)
        rhs = (T.delta0_hybrid(f, lam) * g
               + f.shift(-1, lam) * T.delta0_hybrid(g, lam)
               + T.d0(f, lam) * g.deriv())
        diff = lhs - rhs
        worst = max(worst, diff.max_coeff()
                    / max(lhs.max_coeff(), rhs.max_coeff(), 1.0))
    return worst < 1e-12, "max rel dev %.2e over %d pairs" % (worst, n)


@check("timeops.symbol-consistency")
def _(level):
    rng = random.Random(7)
    lam, worst = 0.3, 0.0
    for _ in range(20):
        w = rng.uniform(-2, 2)
        mode = TF.mode(w)
        pairs = [
            (T.symbol_d0(w, lam), T.d0(mode, lam)),
            (T.symbol_delta0_const(w, lam, -1.0),
             T.delta0_const(mode, lam, -1.0)),
            (T.symbol_delta0_hybrid(w, lam), T.delta0_hybrid(mode, lam)),
            (T.symbol_delta0_power(w, lam, 3),
             T.delta0_power(mode, lam, 3)[0]),
            (T.symbol_delta0_general(w, lam, 0.4, 0.3, 0.9),
             T.delta0_general(mode, lam, 0.4, 0.3, 0.9)),
        ]
        for sym, applied in pairs:
            diff = applied - TF.mode(w, sym)
            worst = max(worst, diff.max_coeff() / max(abs(sym), 1.0))
    return worst < 1e-12, "max dev %.2e" % worst


@check("timeops.power-special-case-continuity")
def _(level):
    rng = random.Random(8)
    worst = 0.0
    for n0 in (1.0, 2.0):
        for eps in (1e-6, -1e-6):
            f = _rand_tf(rng)
            near, _ = T.delta0_power(f, 0.3, n0 + eps)
            exact, _ = T.delta0_power(f, 0.3, n0)
            worst = max(worst, (near - exact).max_coeff()
                        / max(exact.max_coeff(), 1.0))
    return worst < 1e-5, "max dev %.2e" % worst


@check("timeops.general-reduces-to-const")
def _(level):
    rng = random.Random(9)
    worst = 0.0
    for _ in range(20):
        f, beta = _rand_tf(rng), -1.3
        diff = T.delta0_general(f, 0.3, beta / 2, beta / 2, beta) \
            - T.delta0_const(f, 0.3, beta)
        worst = max(worst, diff.max_coeff() / max(f.max_coeff(), 1.0))
    return worst < 1e-12, "max dev %.2e" % worst


@check("timeops.classical-limit-orders")
def _(level):
    rep1 = T.classical_limit_check(lambda g, lam: T.d0(g, lam),
                                   TF.monomial(3), [0.1, 0.05, 0.025],
                                   TF.monomial(3).deriv())
    f = TF.mode(1.0)
    rep2 = T.classical_limit_check(
        lambda g, lam: T.delta0_const(g, lam, 1.0), f,
        [0.1, 0.05, 0.025], f.deriv().deriv().scale(0.5))
    ok = 0.8 < rep1["fitted_order"] < 1.3 and rep2["fitted_order"] >= 1
    return ok, "d0 order %.2f, delta0 order %.2f" % (rep1["fitted_order"],
                                                     rep2["fitted_order"])


# -- geometry ----------------------------------------------------------------

@check("geometry.closed-form-ode-residuals")
def _(level):
    radii = G.default_log_grid(0.5, 50.0, 100)
    worst = 0.0
    for n in (1.0, 2.0, 3.0, 0.5, 5.0):
        mu, nu = G.mu_nu_closed(n)
        rm, rn = G.ode_residuals(G.RadialProfile.power_law(n), mu, nu, radii)
        worst = max(worst, rm.max(), rn.max())
    return worst < 1e-10, "max rel residual %.2e" % worst


@check("geometry.newton-ode-residuals")
def _(level):
    beta, mu, nu = G.mu_nu_newton(1.0, 1.0)
    rm, rn = G.ode_residuals(beta, mu, nu, G.default_log_grid(0.5, 50.0, 100))
    worst = max(rm.max(), rn.max())
    return worst < 1e-10, "max rel residual %.2e" % worst


@check("geometry.numeric-matches-closed")
def _(level):
    grid = G.default_log_grid(0.5, 10.0, 200)
    mu1, nu1 = G.mu_nu_closed(1)
    mu, nu = G.mu_nu_numeric(G.RadialProfile.power_law(1), 1.0, 1.0, 0.0, grid)
    worst = max(np.max(np.abs(mu(grid) - mu1(grid))),
                np.max(np.abs(nu(grid) - nu1(grid))))
    return worst < 1e-8, "max dev %.2e" % worst


@check("geometry.mu-nu-linearity")
def _(level):
    grid = G.default_log_grid(0.5, 10.0, 150)
    b1, b2 = G.RadialProfile.power_law(1), G.RadialProfile.constant(0.5)
    mu1, nu1 = G.mu_nu_numeric(b1, 1.0, 1.0, 0.0, grid, rtol=1e-12)
    mu2, nu2 = G.mu_nu_numeric(b2, 1.0, 0.25, 0.25, grid, rtol=1e-12)
    mu12, nu12 = G.mu_nu_numeric(b1 + b2, 1.0, 1.25, 0.25, grid, rtol=1e-12)
    worst = max(np.max(np.abs(mu12(grid) - mu1(grid) - mu2(grid))),
                np.max(np.abs(nu12(grid) - nu1(grid) - nu2(grid))))
    return worst < 1e-10, "max dev %.2e" % worst


@check("geometry.laplace-beltrami-forms")
def _(level):
    beta, _, _ = G.mu_nu_newton(1e-3, 1.0)
    met = G.StaticMetric(beta)
    r = np.geomspace(0.5, 5.0, 3000 if level == "full" else 1500)
    vals = r * np.exp(-r)
    a = met.laplace_beltrami_static(vals, r)
    b = met.laplace_beltrami_expanded(vals, r)
    worst = np.max(np.abs(a - b)[5:-5]) / np.max(np.abs(b))
    return worst < 1e-5, "max rel dev %.2e" % worst


@check("geometry.weak-field-poisson")
def _(level):
    Gn, c, M, a = 6.674e-11, 3e8, 5.97e24, 2e6
    phi = G.RadialProfile.from_callable(
        lambda r: -Gn * M / np.sqrt(np.asarray(r, dtype=float) ** 2 + a ** 2))
    rho = G.RadialProfile.from_callable(
        lambda r: 3 * M * a ** 2
        / (4 * np.pi * (np.asarray(r, dtype=float) ** 2 + a ** 2) ** 2.5))
    grid = np.geomspace(2e5, 2e8, 6000 if level == "full" else 3000)
    rep = G.weak_field_check(phi, rho, c, Gn, grid)
    ok = rep["max_poisson_residual"] / rep["poisson_scale"] < 1e-5 \
        and rep["max_rel_deviation"] < 1e-6
    return ok, "poisson %.2e, ricci dev %.2e" % (
        rep["max_poisson_residual"] / rep["poisson_scale"],
        rep["max_rel_deviation"])


# -- wave operators ----------------------------------------------------------

_GRID = G.default_log_grid(0.5, 20.0, 80)


def _exp_prof():
    return G.RadialProfile.from_callable(
        lambda r: np.exp(-np.asarray(r, dtype=float)),
        deriv=lambda r: -np.exp(-r), deriv2=lambda r: np.exp(-r))


@check("waveops.massless-shell-residual")
def _(level):
    lam, c = 0.05, 1.0
    worst = 0.0
    for w in (0.2, 0.8, 1.5):
        k = -math.expm1(-w * lam) / (c * lam)
        psi = W.SeparableField.single(W.PlaneWave(k), TF.mode(w))
        cfg = W.WaveOpConfig(lam=lam, c=c, variant="const", beta=-1 / c ** 2)
        res = W.kg_residual(psi, cfg, 0.0, 1.0, c)
        worst = max(worst, abs(sum(f.evaluate(0.1) for _, f in res.terms)))
    return worst < 1e-12, "max residual %.2e" % worst


@check("waveops.general-const-coherence")
def _(level):
    lam, beta0 = 0.05, -1.0
    psi = W.SeparableField.single(_exp_prof(), TF.mode(0.8))
    bc = W.box_const(psi, beta0, lam)
    half = G.RadialProfile.constant(beta0 / 2)
    bg = W.box_general(psi, G.RadialProfile.constant(beta0), half, half, lam,
                       grid=_GRID, mode="pointwise")
    d, s = W.field_max_diff(bc, bg, _GRID)
    return d / s < 1e-10, "rel dev %.2e" % (d / s)


@check("waveops.newton-general-coherence")
def _(level):
    lam, c, gamma = 0.05, 1.0, 1e-3
    beta, mu, nu = G.mu_nu_newton(gamma, c)
    worst = 0.0
    n_fields = 10 if level == "full" else 4
    for i in range(n_fields):
        w = 0.3 + 0.2 * i
        psi = W.SeparableField.single(_exp_prof(), TF.mode(w))
        d, s = W.field_max_diff(W.box_general(psi, beta, mu, nu, lam),
                                W.box_newton(psi, gamma, c, lam), _GRID)
        worst = max(worst, d / s)
    return worst < 1e-8, "rel dev %.2e over %d fields" % (worst, n_fields)


@check("waveops.linearity")
def _(level):
    lam = 0.05
    f1 = W.SeparableField.single(_exp_prof(), TF.mode(0.4))
    f2 = W.SeparableField.single(_exp_prof(), TF.mode(1.0))
    combo = f1 + f2.scale(2.5)
    lhs = W.box_newton(combo, 1e-3, 1.0, lam)
    rhs = W.box_newton(f1, 1e-3, 1.0, lam) \
        + W.box_newton(f2, 1e-3, 1.0, lam).scale(2.5)
    d, s = W.field_max_diff(lhs, rhs, _GRID)
    return d / s < 1e-12, "rel dev %.2e" % (d / s)


# -- dispersion --------------------------------------------------------------

@check("dispersion.solve-k-oracle")
def _(level):
    lam, c, hbar = 0.1, 1.0, 1.0
    worst = 0.0
    n_m = 10 if level == "full" else 3
    for w in np.linspace(0.5, 3.0, 50):
        for m in np.linspace(0.0, 0.4, n_m):
            k2 = D.k_squared_closed(w, m, lam, c, hbar)
            if k2 <= 1e-6:
                continue
            k = D.solve_k(w, m, lam, c, hbar)
            worst = max(worst, abs(k - math.sqrt(k2)) / math.sqrt(k2))
    return worst < 1e-10, "max rel dev %.2e" % worst


@check("dispersion.vg-massless-closed-form")
def _(level):
    lam, worst = 0.1, 0.0
    for w in np.linspace(0.01, 2.0, 30):
        vg = D.group_velocity(w, 0.0, lam, 1.0, 1.0)
        worst = max(worst, abs(vg - math.exp(w * lam)))
    return worst < 1e-8, "max dev %.2e" % worst


@check("dispersion.momentum-bounded")
def _(level):
    lam = 0.1
    k = D.solve_k(400.0, 0.0, lam, 1.0, 1.0)
    ok = abs(k - 1.0 / lam) < 1e-8
    return ok, "k(omega->inf) - 1/(c lam) = %.2e" % (k - 1.0 / lam)


# -- effective parameters ----------------------------------------------------

@check("effective.figure1-x1-row")
def _(level):
    mi = E.mI_over_mp(1.0)
    mg = float(E.mG_over_mp(1.0))
    v0 = float(E.V0_over_mpc2(1.0))
    ok = abs(mi - (1 - math.exp(-2)) / 2) < 1e-12 \
        and abs(mg - 2 * math.exp(-1) / math.sinh(1)) < 1e-12 \
        and abs(v0 + 0.0359007557) < 1e-9
    return ok, "x=1: (%.5f, %.5f, %.5f)" % (mi, mg, v0)


@check("effective.extrema")
def _(level):
    rep = E.extrema_report()
    ok = abs(rep["V0_argmin"] - 4.5) < 0.2 \
        and abs(rep["V0_min_over_mpc2"] + 0.49) < 0.01 \
        and 1.0 < rep["mG_over_mI_argmax"] < 1.6 \
        and abs(rep["mG_over_mI_peak"] - 1.46) < 0.02
    return ok, ("V0 min %.4f @ %.3f; ratio peak %.4f @ %.3f"
                % (rep["V0_min_over_mpc2"], rep["V0_argmin"],
                   rep["mG_over_mI_peak"], rep["mG_over_mI_argmax"]))


@check("effective.series-coefficients")
def _(level):
    rep = E.series_check()
    ok = abs(rep["m_I_linear"] + 1) < 1e-4 \
        and abs(rep["m_G_linear"] + 1 / 3) < 1e-4 \
        and abs(rep["V0_quadratic"] + 1 / 24) < 1e-4
    return ok, "(%.6f, %.6f, %.6f)" % (rep["m_I_linear"], rep["m_G_linear"],
                                       rep["V0_quadratic"])


@check("effective.bounds")
def _(level):
    xs = np.linspace(1e-3, 100, 500)
    ok = np.all(E.mI_over_mp(xs) <= 0.5) \
        and np.all(np.abs(E.V0_over_mpc2(xs)) <= 0.5)
    return bool(ok), "mI <= mp/2 and |V0| <= mp c^2/2 on (0, 100]"


@check("effective.dark-energy-order")
def _(level):
    rep = E.dark_energy_estimate(1e53, 1e26)
    g_cm3 = rep["mass_density"] * 1e3 / 1e6
    return abs(g_cm3 - 1.1e-29) < 0.05e-29, "%.3e g/cm^3" % g_cm3


# -- spectrum ----------------------------------------------------------------

@check("spectrum.numeric-vs-bohr")
def _(level):
    m_I = m_G = 1.0
    M, Gn, hbar = 1.0, 1e-3, 1.0
    oracle = {s.n: s.E for s in S.bohr_oracle(m_I, m_G, 0.0, M, Gn, hbar, 3)
              if s.l == 0}
    n_nodes = 8000 if level == "full" else 4000
    a = S.bohr_radius(m_I, m_G, M, Gn, hbar)
    grid = np.linspace(a * 40 / n_nodes, a * 40, n_nodes)
    worst = 0.0
    for s in S.solve_radial(m_I, m_G, 0.0, M, Gn, hbar, grid=grid,
                            n_states=3):
        worst = max(worst, abs(s.E - oracle[s.n]) / abs(oracle[s.n]))
    tol = 1e-3 if level == "full" else 5e-3
    return worst < tol, "max rel dev %.2e (%d nodes)" % (worst, n_nodes)


@check("spectrum.virial")
def _(level):
    rep = S.virial_check(1.0, 1.0, 0.0, 1.0, 1e-3, 1.0)
    return rep["virial_rel"] < 1e-2, "2T+V over |V|: %.2e" % rep["virial_rel"]


@check("spectrum.reduction-gap-quadratic")
def _(level):
    m, lam, gamma = 1.0, 0.05, 1e-2
    ladder = (1.0, 0.5, 0.25, 0.125) if level == "full" else (1.0, 0.5, 0.25)
    gaps = []
    for s in ladder:
        a = 1e3 / s
        grid = np.linspace(a, 6 * a, 300)
        gaps.append(S.reduction_residual(m, gamma, lam, 1e-2 * s,
                                         S.exp_orbital(a), grid).gap_i_iii)
    ratios = [hi / lo for hi, lo in zip(gaps, gaps[1:])]
    ok = all(2.8 < r < 5.2 for r in ratios)
    return ok, "ratios " + ", ".join("%.2f" % r for r in ratios)


@check("spectrum.reduction-ablation-linear")
def _(level):
    m, lam = 1.0, 0.05
    grid = np.linspace(1e3, 6e3, 300)
    devs = [S.reduction_residual(m, g, lam, 1e-2, S.exp_orbital(1e3), grid,
                                 ablate_gamma_psidot=True).gap_i_ii
            for g in (1e-2, 2e-2)]
    r = devs[1] / devs[0]
    return 1.8 < r < 2.2, "doubling gamma scales deviation by %.3f" % r


def run(level="fast"):
    """Execute the registry; returns the report dict (see CLI for exit code)."""
    results = []
    t0 = time.time()
    for name, fn in CHECKS:
        t = time.time()
        try:
            ok, measured = fn(level)
        except Exception as exc:  # a crash is a failure, not an abort
            ok, measured = False, "exception: %r" % exc
        results.append({"name": name, "ok": bool(ok), "measured": measured,
                        "seconds": round(time.time() - t, 3)})
    return {
        "level": level,
        "n_checks": len(results),
        "n_failed": sum(1 for r in results if not r["ok"]),
        "seconds": round(time.time() - t0, 3),
        "checks": results,
    }
