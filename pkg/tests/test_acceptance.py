"""Acceptance suite: one test group per numbered criterion.

Each check records a PASS/FAIL line (shown with ``-s`` and collected in the
terminal summary).  Run with ``pytest tests/test_acceptance.py -v``.
"""
import time
from dataclasses import replace
from pathlib import Path

import numpy as np
import pytest
from numpy.polynomial import hermite_e
from scipy import integrate

from conftest import random_gauge, random_moments, record
from gramclosure.baselines import Grid, grad_close, maxent_close
from gramclosure.cli import main
from gramclosure.closures import ClosureSpec, close
from gramclosure.distributions import BimodalParams, MottSmithParams, moments
from gramclosure.experiments import load_config, rel_error, run_convergence, run_sweep, to_csv
from gramclosure.gauge import GaugeParams, equilibrium_moments, invariance_residuals, transform_moments
from gramclosure.hyperbolicity import (
    char_poly_analytic,
    char_poly_fd,
    verdict,
)
from gramclosure.moment_core import orthogonal_poly, sigma

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
N_SETS = 200


@pytest.fixture
def rng():
    return np.random.default_rng(7)


# --------------------------------------------------------------------------
# 1. equilibrium preservation


def _maxwell_oracle(g, k):
    # independent of equilibrium_moments: Gauss-Hermite quadrature of rho * N(v, theta)
    x, w = hermite_e.hermegauss(30)
    c = g.v + np.sqrt(g.theta) * x
    return g.rho * np.dot(w, c ** k) / np.sqrt(2 * np.pi)


def test_criterion_1_equilibrium_preservation(rng):
    t0 = time.perf_counter()
    worst, worst_oracle = 0.0, 0.0
    for _ in range(50):
        g = random_gauge(rng)
        for M in (4, 6, 8, 10):
            w = equilibrium_moments(g, M + 1)
            pred = close(w[:M + 1], "extended_even").u_next
            worst = max(worst, abs(pred - w[M + 1]) / abs(w[M + 1]))
            ref = _maxwell_oracle(g, M + 1)
            worst_oracle = max(worst_oracle, abs(w[M + 1] - ref) / abs(ref))
    elapsed = time.perf_counter() - t0
    ok = record(1, "Maxwellian u_{M+1} reproduced", worst <= 1e-9,
                f"max rel err {worst:.2e} (tol 1e-9)")
    ok &= record(1, "recursion oracle vs Gauss-Hermite", worst_oracle <= 1e-11,
                 f"max rel diff {worst_oracle:.2e}")
    ok &= record(1, "runtime", elapsed < 1.0, f"{elapsed:.3f} s (< 1 s)")
    assert ok


# --------------------------------------------------------------------------
# 2. gauge equivariance


def _equivariance_gap(u, spec, g):
    M = len(u) - 1
    lhs = transform_moments(np.append(u, close(u, spec).u_next), g)[M + 1]
    rhs = close(transform_moments(u, g), spec).u_next
    return abs(lhs - rhs) / abs(lhs)


def test_criterion_2_gauge_equivariance(rng):
    t0 = time.perf_counter()
    gaps = {}
    for kind, orders in (("extended_even", (4, 6)), ("extended_odd", (3, 5))):
        gaps[kind] = max(_equivariance_gap(random_moments(rng, orders[i % 2]), ClosureSpec(kind),
                                           random_gauge(rng)) for i in range(N_SETS))
    shifted = []
    for i in range(N_SETS):
        g = random_gauge(rng)
        v = rng.choice([-1.0, 1.0]) * rng.uniform(1.0, 3.0)
        shifted.append(_equivariance_gap(random_moments(rng, (4, 6)[i % 2]),
                                         ClosureSpec("gramian_even"),
                                         GaugeParams(g.rho, v, g.theta)))
    elapsed = time.perf_counter() - t0
    ok = True
    for kind, gap in gaps.items():
        ok &= record(2, f"{kind} equivariant", gap <= 1e-8, f"max rel gap {gap:.2e} (tol 1e-8)")
    ok &= record(2, "gramian_even not equivariant", max(shifted) > 1e-2,
                 f"max rel gap {max(shifted):.2e} (> 1e-2 for |v| >= 1)")
    ok &= record(2, "runtime", elapsed < 5.0, f"{elapsed:.3f} s (< 5 s)")
    assert ok


# --------------------------------------------------------------------------
# 3. analytic factorization vs finite-difference Jacobian


def test_criterion_3_factorization_matches_fd(rng):
    t0 = time.perf_counter()
    ok = True
    for kind, orders in (("gramian_even", (4, 6)), ("extended_even", (4, 6)),
                         ("gramian_odd", (3, 5)), ("extended_odd", (3, 5))):
        for M in orders:
            worst = 0.0
            for _ in range(N_SETS):
                u = random_moments(rng, M)
                a = char_poly_analytic(u, kind).coeffs
                f = char_poly_fd(u, kind).coeffs
                worst = max(worst, np.max(np.abs(a - f)) / np.max(np.abs(a)))
            ok &= record(3, f"{kind} M={M}", worst <= 1e-5,
                         f"max rel coeff err {worst:.2e} (tol 1e-5)")
    elapsed = time.perf_counter() - t0
    ok &= record(3, "runtime", elapsed < 10.0, f"{elapsed:.3f} s (< 10 s)")
    assert ok


# --------------------------------------------------------------------------
# 4. strict hyperbolicity through interlacing


def test_criterion_4_interlacing(rng):
    t0 = time.perf_counter()
    ok = True
    for chi in (-0.5, 0.0, 0.5, 1.5, 3.0):
        spec = ClosureSpec("extended_even", chi=chi)
        bad = 0
        for i in range(N_SETS):
            v = verdict(random_moments(rng, (4, 6)[i % 2]), spec)
            bad += not (v.interlaced and v.status == "strict")
        ok &= record(4, f"chi={chi}", bad == 0, f"{bad}/{N_SETS} sets not strictly interlaced")
    spec = ClosureSpec("extended_even", chi=-1.0)
    broken = [not verdict(equilibrium_moments(g, M), spec).interlaced
              for g in (GaugeParams(), GaugeParams(2.0, 1.0, 0.5), GaugeParams(0.3, -2.0, 3.0))
              for M in (4, 6)]
    ok &= record(4, "chi=-1 on equilibrium", all(broken),
                 f"interlacing lost in {sum(broken)}/{len(broken)} cases")
    elapsed = time.perf_counter() - t0
    ok &= record(4, "runtime", elapsed < 5.0, f"{elapsed:.3f} s (< 5 s)")
    assert ok


# --------------------------------------------------------------------------
# 5. simple odd closure: roots in coincident pairs


def test_criterion_5_odd_pairs(rng):
    ok = True
    for M in (3, 5):
        worst_gap, worst_fd = 0.0, 0.0
        for _ in range(N_SETS):
            u = random_moments(rng, M)
            v = verdict(u, "gramian_odd")
            r = v.roots.roots
            scale = r.max() - r.min() + 1.0
            worst_gap = max(worst_gap, np.max(np.abs(r[0::2] - r[1::2])) / scale)
            # second route: FD characteristic polynomial against p_n squared
            pn = orthogonal_poly(np.append(u, close(u, "gramian_odd").u_next), (M + 1) // 2)
            sq = (pn * pn).coeffs
            fd = char_poly_fd(u, "gramian_odd").coeffs
            worst_fd = max(worst_fd, np.max(np.abs(fd - sq)) / np.max(np.abs(sq)))
        tol = v.roots.multiplicity_tol
        ok &= record(5, f"M={M} pairs", worst_gap <= tol,
                     f"max pair gap {worst_gap:.2e} (tol {tol:.0e})")
        ok &= record(5, f"M={M} FD polynomial is p_n^2", worst_fd <= 1e-5,
                     f"max rel coeff err {worst_fd:.2e}")
    assert ok


# --------------------------------------------------------------------------
# 6. invariance residuals


def test_criterion_6_extended_residuals_vanish(rng):
    ok = True
    for kind, orders in (("extended_even", (4, 6, 8)), ("extended_odd", (3, 5, 7))):
        worst = 0.0
        for i in range(N_SETS):
            r = invariance_residuals(random_moments(rng, orders[i % 3]), kind)
            worst = max(worst, max(abs(r.r1), abs(r.r2), abs(r.r3)) / r.scale)
        ok &= record(6, f"{kind} residuals", worst <= 1e-9,
                     f"max |r|/scale {worst:.2e} (tol 1e-9)")
    assert ok


def _gramian_even_r2(rng):
    out = []
    for M in (4, 6, 8):
        for _ in range(20):
            u = random_moments(rng, M)
            out.append((u, M // 2, invariance_residuals(u, "gramian_even").r2))
    return out


@pytest.mark.xfail(strict=True, reason="r2 equals (n+1) sigma_nn, not (n+1) u_2n; see README")
def test_criterion_6_gramian_even_r2_as_stated(rng):
    cases = _gramian_even_r2(rng)
    worst = max(abs(r2 - (n + 1) * u[2 * n]) / abs((n + 1) * u[2 * n]) for u, n, r2 in cases)
    ok = record(6, "gramian_even r2 = (n+1) u_2n", worst <= 1e-12,
                f"max rel diff {worst:.2e} (tol 1e-12)")
    assert ok


def test_criterion_6_gramian_even_r2_sigma(rng):
    cases = _gramian_even_r2(rng)
    worst = max(abs(r2 - (n + 1) * sigma(u, n, n)) / abs((n + 1) * sigma(u, n, n))
                for u, n, r2 in cases)
    # std normal M=4: sigma_22 = 2, u_4 = 3
    r2 = invariance_residuals(equilibrium_moments(GaugeParams(), 4), "gramian_even").r2
    ok = record(6, "gramian_even r2 = (n+1) sigma_nn", worst <= 1e-12 and r2 == pytest.approx(6.0),
                f"max rel diff {worst:.2e}; std normal r2 = {r2:.15g}")
    assert ok


# --------------------------------------------------------------------------
# 7. hand-derived values


def test_criterion_7_hand_values():
    n11 = [1.0, 1.0, 2.0, 4.0, 10.0]
    std3 = [1.0, 0.0, 1.0, 0.0]
    checks = [
        ("gramian_even N(1,1)", close(n11, "gramian_even").u_next, 20.0),
        ("extended_even N(1,1)", close(n11, ClosureSpec("extended_even", chi=1.5)).u_next, 26.0),
        ("gramian_odd N(0,1)", close(std3, "gramian_odd").u_next, 1.0),
        ("extended_odd N(0,1)", close(std3, "extended_odd").u_next, 0.0),
    ]
    ok = True
    for name, got, want in checks:
        ok &= record(7, name, abs(got - want) <= 1e-12 * max(1.0, abs(want)),
                     f"{got!r} vs {want}")
    assert ok


# --------------------------------------------------------------------------
# 8. baselines


def _hermite_density(g, alpha):
    def f(c):
        x = (c - g.v) / np.sqrt(g.theta)
        return (g.rho / np.sqrt(2 * np.pi * g.theta) * np.exp(-0.5 * x * x)
                * hermite_e.hermeval(x, alpha))
    return f


def test_criterion_8_baselines():
    res, sol = maxent_close([1.0, 0.0, 1.0], Grid(-8.0, 8.0, 1001))
    resid = np.max(np.abs(sol.constraint_residuals))
    ok = record(8, "maxent on (1,0,1)", sol.converged and abs(res.u_next) <= 1e-6 and resid <= 1e-8,
                f"u_3 = {res.u_next:.2e}, max residual {resid:.2e}")
    worst = 0.0
    for g, alpha in ((GaugeParams(1.4, 0.6, 1.8), [1, 0, 0, 0.03, 0.05]),
                     (GaugeParams(0.7, -1.1, 0.5), [1, 0, 0, -0.02, 0.04, 0.01, 0.004]),
                     (GaugeParams(2.0, 2.5, 3.0), [1, 0, 0, 0.05, 0.02, -0.01, 0.006, 0.001, 0.0005])):
        f = _hermite_density(g, alpha)
        s = np.sqrt(g.theta)
        assert np.all(f(np.linspace(g.v - 20 * s, g.v + 20 * s, 20001)) >= 0)
        M = len(alpha) - 1
        u = [integrate.quad(lambda c: c ** k * f(c), g.v - 40 * s, g.v + 40 * s,
                            epsabs=0, epsrel=1e-13, limit=200)[0] for k in range(M + 2)]
        worst = max(worst, abs(grad_close(u[:M + 1]).u_next - u[M + 1]) / abs(u[M + 1]))
    ok &= record(8, "grad exact on Hermite ansatz", worst <= 1e-8, f"max rel err {worst:.2e}")
    assert ok


# --------------------------------------------------------------------------
# 9. figure-level behaviour


def _err(u, kind, M):
    return rel_error(close(u[:M + 1], kind).u_next, u[M + 1])


def test_criterion_9_qualitative():
    u = moments(BimodalParams(v2=4.0), 5)
    e = {k: _err(u, k, 4) for k in ("gramian_even", "extended_even", "grad")}
    ok = record(9, "(a) bimodal v2=4 M=4",
                e["extended_even"] < e["gramian_even"] and e["extended_even"] < e["grad"],
                ", ".join(f"{k} {v:.2e}" for k, v in e.items()))
    g = _err(moments(BimodalParams(v2=0.5), 5), "grad", 4)
    ok &= record(9, "(b) bimodal v2=0.5 grad", g < 1e-2, f"{g:.2e} (< 1e-2)")
    u = moments(MottSmithParams(x=-10.0), 7)
    e = [_err(u, "extended_even", M) for M in (4, 6)]
    ok &= record(9, "(c) Mott-Smith x=-10 extended_even", max(e) < 1e-3,
                 f"M=4 {e[0]:.2e}, M=6 {e[1]:.2e} (< 1e-3)")
    for v2 in (2.0, 4.0):
        u = moments(BimodalParams(v2=v2), 11)
        e = [_err(u, "extended_even", M) for M in (4, 6, 8, 10)]
        ok &= record(9, f"(d) convergence v2={v2}",
                     all(b <= 1.1 * a for a, b in zip(e, e[1:])),
                     " > ".join(f"{x:.2e}" for x in e))
    assert ok


def test_criterion_9_sweep_runtime():
    cfg = load_config(CONFIGS / "bimodal_fig2.cfg")
    gramian = [s for s in cfg.closures if s.is_gramian]
    t0 = time.perf_counter()
    rows = run_sweep(replace(cfg, closures=gramian))
    fast = time.perf_counter() - t0
    ok = record(9, "bimodal v2 sweep, Gramian closures only", fast < 10.0 and len(rows) == 71 * 8,
                f"{len(rows)} rows in {fast:.2f} s (< 10 s)")
    t0 = time.perf_counter()
    rows = run_sweep(cfg)
    full = time.perf_counter() - t0
    me = [r for r in rows if r.closure_name == "maxent"]
    n_ok = sum(r.verdict == "ok" for r in me)
    ok &= record(9, "bimodal v2 sweep with maxent", full < 300.0,
                 f"{len(rows)} rows in {full:.2f} s (< 300 s), maxent converged {n_ok}/{len(me)}")
    assert ok


# --------------------------------------------------------------------------
# 10. determinism


def test_criterion_10_determinism(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        assert main(["sweep", "--config", str(CONFIGS / "bimodal_fig2.cfg"), "--output", str(p)],
                    out=open("/dev/null", "w")) == 0
    same = paths[0].read_bytes() == paths[1].read_bytes()
    cfg = load_config(CONFIGS / "electron_hole_fig6.cfg")
    same_conv = to_csv(run_convergence(cfg)) == to_csv(run_convergence(cfg))
    ok = record(10, "byte-identical CSV", same and same_conv,
                f"bimodal v2 sweep via CLI {'identical' if same else 'differs'}; "
                f"convergence study {'identical' if same_conv else 'differs'}")
    assert ok
