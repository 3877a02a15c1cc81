"""Exit criteria at their stated tolerances, one PASS/FAIL line each.

Run alone with ``pytest -m acceptance -v``; the summary lines are printed at
the end of the session.
"""
import math
import time

import numpy as np
import pytest

from hardy_lab.core_fn import AnalyticPoly, BoundaryGrid, disk_points, eval_poly, random_poly, smirnov_check
from hardy_lab.errors import CertificateViolation
from hardy_lab.multipliers import (
    Family,
    MultiplierSeq,
    abel_decompose,
    alpha_norm,
    build_family,
    lemma1_check,
    sum_log_check,
    theorem2_check,
)
from hardy_lab.norms import NormParams, hinf_norm, lambda_functional
from hardy_lab.toeplitz import apply, build_truncation, certify, h2_spectral_norm, quadrature_apply

pytestmark = pytest.mark.acceptance


def rng_for(seed, trial):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def staggered_lambda(f, M):
    return lambda_functional(f, BoundaryGrid(M), BoundaryGrid(M, 0.5)).value


def test_c01_exact_lambda(criterion):
    t0 = time.perf_counter()
    errs = [abs(staggered_lambda(AnalyticPoly([0, 1]), M) - 1.0) for M in (64, 1024, 16384)]
    criterion("C1", max(errs) <= 1e-12, f"max |Lambda(z) - 1| = {max(errs):.2e}", time.perf_counter() - t0, 1)


def test_c02a_closed_form_lambda(criterion):
    t0 = time.perf_counter()
    err = abs(staggered_lambda(AnalyticPoly([0, 0, 1]), 16384) - 4 / math.pi)
    criterion("C2a", err <= 1e-3, f"|Lambda(z^2) - 4/pi| = {err:.2e} at M=16384", time.perf_counter() - t0, 30)


def test_c02b_error_halves(criterion):
    # staggered trapezoid sums converge at second order, so the error ratio sits near 4;
    # the criterion's 2 +/- 25% window is kept as stated
    t0 = time.perf_counter()
    f = AnalyticPoly([0, 0, 1])
    e1 = abs(staggered_lambda(f, 4096) - 4 / math.pi)
    e2 = abs(staggered_lambda(f, 8192) - 4 / math.pi)
    ratio = e1 / e2
    criterion("C2b", 1.5 <= ratio <= 2.5, f"error ratio M=4096->8192 is {ratio:.3f} (window 1.5..2.5)",
              time.perf_counter() - t0, 30)


def test_c03_lemma1_suite(criterion):
    t0 = time.perf_counter()
    worst, fails = math.inf, 0
    for t in range(1000):
        rng = rng_for(3, t)
        p = random_poly(rng, int(rng.integers(1, 65)), normalize=False)
        r = lemma1_check(p)
        worst = min(worst, r.margin)
        fails += not r.passed
    criterion("C3", fails == 0 and worst >= 0, f"{fails} failures, min margin {worst:.4f}",
              time.perf_counter() - t0, 300)


def test_c04_theorem2_bound(criterion):
    t0 = time.perf_counter()
    fails, worst, count = 0, math.inf, 0
    for fam in (Family.POWER, Family.LOG, Family.LOGLOG):
        for eps in (0.5, 1.0):
            alpha = build_family(fam, eps, 10_001)
            for t in range(100):
                rng = rng_for(4, t)
                f = random_poly(rng, int(rng.integers(1, 129)))
                r = theorem2_check(f, alpha)
                fails += not r.passed
                worst = min(worst, r.rhs - r.lhs)
                count += 1
    criterion("C4", fails == 0, f"{fails}/{count} failures, min margin {worst:.4f}", time.perf_counter() - t0, 600)


def test_c05_sum_of_logs(criterion):
    t0 = time.perf_counter()
    r = sum_log_check(1_000_000)
    ok = r.min_slack >= 0 and r.min_half_slack >= 0 and r.min_final_slack >= 0
    criterion("C5", ok, f"min slack {r.min_slack:.4f}, floor(n/2) step {r.min_half_slack:.4f}",
              time.perf_counter() - t0, 10)


def test_c06_abel_identity(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    families = (Family.POWER, Family.LOG, Family.LOGLOG)
    for t in range(200):
        rng = rng_for(6, t)
        deg = int(rng.integers(0, 257))
        terms = deg + int(rng.integers(0, 64))
        if t % 4 == 3:
            vals = np.sort(rng.random(terms + 3) + 0.1)[::-1]
            alpha = MultiplierSeq.custom(vals, tail_bound=0.0)
        else:
            alpha = build_family(families[t % 4], float(rng.uniform(0.25, 2.0)), terms + 3)
        d = abel_decompose(random_poly(rng, deg, normalize=False), alpha, terms)
        worst = max(worst, d.reconstruction_residual)
    criterion("C6", worst <= 1e-12, f"max relative residual {worst:.2e}", time.perf_counter() - t0, 30)


def test_c07_toeplitz_paths(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for t in range(50):
        rng = rng_for(7, t)
        f = random_poly(rng, int(rng.integers(0, 33)))
        dim = int(rng.integers(f.degree + 2, 129))
        h = random_poly(rng, int(rng.integers(0, dim)))
        z = disk_points(1, 0.9, rng)[0]
        # 512 nodes keep the |z|^M tail of the Cauchy kernel below 1e-20 at |z| = 0.9
        grid = BoundaryGrid(max(2 * (f.degree + h.degree + 1), 512))
        worst = max(worst, abs(eval_poly(apply(build_truncation(f, dim), h), z) - quadrature_apply(f, h, grid, z)))
    criterion("C7", worst <= 1e-8, f"max path difference {worst:.2e}", time.perf_counter() - t0, 30)


def test_c08_h2_contraction(criterion):
    t0 = time.perf_counter()
    worst = -math.inf
    for t in range(200):
        rng = rng_for(8, t)
        f = random_poly(rng, int(rng.integers(0, 65)), normalize=False)
        dim = int(rng.integers(f.degree + 1, 257))
        # the sup estimate needs a grid much finer than the symbol degree for small symbols
        sup = hinf_norm(f, oversample=max(16, math.ceil(64 * dim / (f.degree + 1)))).value
        worst = max(worst, h2_spectral_norm(build_truncation(f, dim)) - sup)
    criterion("C8", worst <= 1e-6, f"max (sigma_max - sup|f|) = {worst:.2e}", time.perf_counter() - t0, 120)


def test_c09_certificate_ordering(criterion):
    t0 = time.perf_counter()
    violations, tightest = 0, math.inf
    for t in range(500):
        rng = rng_for(9, t)
        f = random_poly(rng, int(rng.integers(0, 65)))
        for space in ("H1", "Hinf"):
            try:
                c = certify(f, space, trials=16, seed=t)
                tightest = min(tightest, c.upper - c.lower)
            except CertificateViolation:
                violations += 1
    criterion("C9", violations == 0, f"{violations} violations, min gap {tightest:.4f}",
              time.perf_counter() - t0, 600)


def test_c10_smirnov(criterion):
    t0 = time.perf_counter()
    worst = -math.inf
    for t in range(100):
        rng = rng_for(10, t)
        f = random_poly(rng, int(rng.integers(0, 33)))
        pts = disk_points(48, 0.9, rng)
        for q in (1, 2, 4):
            grid = BoundaryGrid(max(8192, 2 * (math.ceil(q * f.degree) + 1)))
            worst = max(worst, smirnov_check(f, q, grid, pts).max_violation)
    criterion("C10", worst <= 1e-8, f"max violation {worst:.2e}", time.perf_counter() - t0, 60)


def test_c11_basel(criterion):
    t0 = time.perf_counter()
    a = build_family(Family.POWER, 1.0, 10_001)
    v = alpha_norm(a)
    lo, hi = math.pi**2 / 6 - 1e-4, math.pi**2 / 6 + 2 * a.tail_bound
    criterion("C11", lo <= v <= hi, f"alpha_norm = {v:.8f} in [{lo:.8f}, {hi:.8f}]", time.perf_counter() - t0, 1)
