"""Acceptance criteria, one test each.

Every test records a ``PASS``/``FAIL`` line that is printed in the pytest
terminal summary (``pytest tests/test_acceptance.py``).
"""

import time

import numpy as np
import pytest
from conftest import conj_grid, random_interpolant

from lqoaaa.barycentric import denominator, eval_r1, eval_r2, literal_denominator, realize
from lqoaaa.cli import main
from lqoaaa.fitting import FitConfig, eval_barycentric, fit_linear_aaa, fit_lqo_aaa
from lqoaaa.io import sample_model
from lqoaaa.model import TimeSignal, eval_h1, eval_h2, make_benchmark, simulate

RESULTS = []


def record(tag, ok, detail):
    RESULTS.append(f"{'PASS' if ok else 'FAIL'}  {tag}: {detail}")
    return ok


def direct_r1(it, s):
    phi = 1 / (s - it.support)
    return np.sum(it.weights * it.h1_values * phi) / (1 + np.sum(it.weights * phi))


def direct_r2(it, s, z):
    ps, pz = 1 / (s - it.support), 1 / (z - it.support)
    num = np.sum(it.h2_grid * np.outer(it.weights * ps, it.weights * pz))
    return num / literal_denominator(it, s, z)


@pytest.fixture(scope="module")
def diag_fits():
    fits = {}
    for r in (1, 2, 4, 6):
        model = make_benchmark("diag", r)
        samples = sample_model(model, conj_grid(), real_symmetric=True)
        t0 = time.perf_counter()
        interp, report = fit_lqo_aaa(samples, FitConfig(tol=1e-6))
        fits[r] = (model, samples, interp, report, time.perf_counter() - t0)
    return fits


def test_ac1_interpolation_exactness(diag_fits):
    interps = [f[2] for f in diag_fits.values()]
    for kind in ("random-stable", "quad-only"):
        s = sample_model(make_benchmark(kind, 5, seed=1), conj_grid(), real_symmetric=True)
        for n_max in (2, 6, 10):
            interps.append(fit_lqo_aaa(s, FitConfig(tol=1e-14, n_max=n_max))[0])
    exact, worst = True, 0.0
    for it in interps:
        assert it.order <= 10
        scale = max(np.max(np.abs(it.h1_values)), np.max(np.abs(it.h2_grid)))
        for k, xk in enumerate(it.support):
            exact &= eval_r1(it, xk) == it.h1_values[k]
            worst = max(worst, abs(eval_r1(it, xk + 1e-9) - it.h1_values[k]) / scale)
            for l, xl in enumerate(it.support):
                exact &= eval_r2(it, xk, xl) == it.h2_grid[k, l]
                worst = max(worst, abs(eval_r2(it, xk + 1e-9, xl + 1e-9j) - it.h2_grid[k, l]) / scale)
    ok = bool(exact) and worst <= 1e-6
    record("AC1 interpolation exactness", ok, f"{len(interps)} fits, exact={bool(exact)}, perturbed err={worst:.2e} (<= 1e-6)")
    assert ok


def test_ac2_realization_equivalence():
    rng = np.random.default_rng(2)
    worst = 0.0
    for trial in range(100):
        it = random_interpolant(rng, int(rng.integers(1, 9)))
        m = realize(it)
        for _ in range(20):
            s, z = 3 * rng.standard_normal(2) + 3j * rng.standard_normal(2)
            r1, r2 = direct_r1(it, s), direct_r2(it, s, z)
            worst = max(
                worst,
                abs(eval_h1(m, s) - r1) / max(abs(r1), 1.0),
                abs(eval_h2(m, s, z) - r2) / max(abs(r2), 1.0),
            )
    ok = worst <= 1e-9
    record("AC2 realization equivalence", ok, f"100 interpolants x 20 probes, max rel err={worst:.2e} (<= 1e-9)")
    assert ok


def test_ac3_kronecker_oracle():
    rng = np.random.default_rng(3)
    worst = 0.0
    for order in range(1, 6):
        for seed in range(4):
            m = make_benchmark("random-stable", order, seed)
            for _ in range(10):
                s, z = rng.standard_normal(2) + 1j * rng.standard_normal(2)
                xs = np.linalg.inv(s * np.eye(order) - m.A) @ m.b
                xz = np.linalg.inv(z * np.eye(order) - m.A) @ m.b
                ref = m.M.ravel() @ np.kron(xs, xz)
                worst = max(worst, abs(eval_h2(m, s, z) - ref) / abs(ref))
    ok = worst <= 1e-10
    record("AC3 Kronecker oracle", ok, f"orders 1..5, max rel err={worst:.2e} (<= 1e-10)")
    assert ok


def test_ac4_exact_recovery(diag_fits):
    lines, ok, total = [], True, 0.0
    for r, (model, samples, interp, report, secs) in diag_fits.items():
        err = max(report.final.max_err_h1, report.final.max_err_h2)
        good = report.converged and interp.order <= 2 * r and err <= 1e-6
        ok &= good
        total += secs
        lines.append(f"r={r}: order {interp.order}, err {err:.1e}")
    ok &= total <= 60
    record("AC4 exact recovery", ok, "; ".join(lines) + f"; {total:.2f}s")
    assert ok


def test_ac5_denominator_factorization():
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(5):
        it = random_interpolant(rng, int(rng.integers(1, 9)))
        s = 4 * rng.standard_normal(1000) + 4j * rng.standard_normal(1000)
        z = 4 * rng.standard_normal(1000) + 4j * rng.standard_normal(1000)
        fac = denominator(it, s) * denominator(it, z)
        lit = np.array([literal_denominator(it, a, b) for a, b in zip(s, z)])
        worst = max(worst, np.max(np.abs(fac - lit) / np.abs(lit)))
    ok = worst <= 1e-12
    record("AC5 denominator factorization", ok, f"5 interpolants x 1000 pairs, max rel err={worst:.2e} (<= 1e-12)")
    assert ok


def test_ac6_time_domain(diag_fits):
    model, _, interp, _, _ = diag_fits[6]
    fitted = realize(interp, real=True)
    dt = 1e-3
    t = dt * np.arange(int(round(10 / dt)) + 1)
    u = TimeSignal(0.0, dt, np.sin(t))
    t0 = time.perf_counter()
    y, yf = simulate(model, u).values, simulate(fitted, u).values
    secs = time.perf_counter() - t0
    rel = np.linalg.norm(y - yf) / np.linalg.norm(y)
    ok = rel <= 1e-4 and secs <= 10
    record("AC6 time-domain validation", ok, f"order-6 diag vs order-{fitted.dim} fit, rel L2={rel:.2e} (<= 1e-4), {secs:.2f}s")
    assert ok


def test_ac7_linear_aaa():
    z = 1j * np.logspace(-1, 1, 50)
    f = 1 / (z + 1) + 1 / (z + 2)
    sup, w, vals, rep = fit_linear_aaa(z, f, tol=1e-13)
    err = np.max(np.abs(eval_barycentric(sup, w, vals, z) - f)) / np.max(np.abs(f))
    ok = rep.orders[-1] == 2 and err <= 1e-10
    record("AC7 linear AAA baseline", ok, f"order {rep.orders[-1]}, scaled err={err:.2e} (<= 1e-10)")
    assert ok


def test_ac8_determinism(tmp_path):
    reports = []
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        codes = [
            main(["bench", "--kind", "random-stable", "--order", "5", "--seed", "11", "--out", str(d / "m.json")]),
            main(["sample", "--model", str(d / "m.json"), "--points", "imlog:-1:2:30", "--conj", "--out", str(d / "s.json")]),
            main(["fit", "--samples", str(d / "s.json"), "--tol", "1e-8",
                  "--out-model", str(d / "f.json"), "--out-report", str(d / "r.csv")]),
        ]
        assert codes == [0, 0, 0]
        reports.append((d / "r.csv").read_bytes())
    ok = reports[0] == reports[1]
    record("AC8 determinism", ok, f"two bench->sample->fit runs, reports identical={ok}")
    assert ok
