"""Acceptance gate: one test per criterion, one printed verdict line each.

Run with `pytest tests/test_acceptance.py -s` to see every verdict line.
"""

import math
import time

import numpy as np
import pytest

from sectorwalk import (
    WalkConfig,
    contains,
    min_radius,
    sample_walk,
    uniqueness_threshold,
)
from sectorwalk.cli import main as cli_main
from sectorwalk.exact_two import ExactTwoStep
from sectorwalk.genchi2 import GenChi2Params, cdf as genchi2_cdf, normal_cdf
from sectorwalk.largen import LargeNModel, in_support_mass
from sectorwalk.mc import histogram_density, ks_distance, tabulated_cdf
from sectorwalk.recursion import (
    cdf_radius_recursive,
    pdf_angle_approx,
    seed_two_step,
)
from sectorwalk.support import contains_batch


def _verdict(num, ok, detail):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} ({detail})"
    print(line)
    return line


def _sorted_ks(values, cdf):
    return ks_distance(values, cdf)


def test_criterion_1_exact_two_vs_mc():
    t0 = time.time()
    worst = 0.0
    for a in (0.5, math.pi / 4, math.pi / 2):
        law = ExactTwoStep(max_angle=a)
        batch = sample_walk(WalkConfig(2, a), 1_000_000, seed=101)
        worst = max(worst, _sorted_ks(batch.radii, law.cdf_radius))
        worst = max(worst, _sorted_ks(batch.angles, law.cdf_angle))
    elapsed = time.time() - t0
    ok = worst < 0.005 and elapsed < 30.0
    _verdict(1, ok, f"max KS {worst:.5f} < 0.005, runtime {elapsed:.1f}s < 30s")
    assert worst < 0.005
    assert elapsed < 30.0


def test_criterion_2_geometry_constants():
    checks = [
        abs(min_radius(WalkConfig(3, 0.85)) - 2.118) <= 1e-3,
        abs(min_radius(WalkConfig(4, 1.4)) - 0.680) <= 1e-3,
        abs(uniqueness_threshold(4) - 0.9553) <= 1e-3,
        abs(uniqueness_threshold(10**6) - math.pi / 4) <= 1e-5,
    ]
    _verdict(2, all(checks), f"min radii and uniqueness thresholds, {sum(checks)}/4 within tolerance")
    assert all(checks)


def test_criterion_3_recursion_matches_exact_two():
    a = 0.5
    grid = seed_two_step(WalkConfig(2, a), 400, 400)
    law = ExactTwoStep(max_angle=a)
    exact = law.joint_pdf(grid.radii[:, None], grid.angles[None, :])
    # the final radius row sits on the r = 2 boundary where the exact
    # density diverges; the grid stores the analytic cell average there,
    # so the node-by-node comparison covers the 399 interior rows
    cell_err = float(np.max(np.abs(grid.density[:-1, :] - exact[:-1, :])))
    r = np.linspace(law.min_radius, 2.0, 401)
    from sectorwalk.recursion import OneStepSource

    cdf_err = float(np.max(np.abs(
        cdf_radius_recursive(r, OneStepSource(WalkConfig(1, a))) - law.cdf_radius(r)
    )))
    ok = cell_err < 5e-3 and cdf_err < 5e-3
    _verdict(3, ok, f"joint cell error {cell_err:.2e} < 5e-3, radius CDF error {cdf_err:.2e} < 5e-3")
    assert cell_err < 5e-3
    assert cdf_err < 5e-3


def test_criterion_4_three_step_vs_mc():
    t0 = time.time()
    a = 0.5
    cfg = WalkConfig(3, a)
    grid2 = seed_two_step(WalkConfig(2, a))
    batch = sample_walk(cfg, 10_000_000, seed=104)
    radius_cdf = tabulated_cdf(lambda r: cdf_radius_recursive(r, grid2), 0.0, 3.0, 2001)
    ks_r = ks_distance(batch.radii, radius_cdf)
    edges, density, counts = histogram_density(batch.angles, bins=200)
    mid = 0.5 * (edges[1:] + edges[:-1])
    widths = np.diff(edges)
    model = pdf_angle_approx(mid, grid2)
    n = batch.size
    bin_se = np.sqrt(np.maximum(counts, 1.0)) / (n * widths)
    within = np.abs(model - density) < 3.0 * bin_se
    frac = float(np.mean(within))
    elapsed = time.time() - t0
    ok = ks_r < 0.01 and frac >= 0.95 and elapsed < 600.0
    _verdict(
        4,
        ok,
        f"KS radius {ks_r:.5f} < 0.01, angle pdf within 3 SE at {100 * frac:.1f}% of bins, "
        f"runtime {elapsed:.0f}s < 600s",
    )
    assert ks_r < 0.01
    assert frac >= 0.95
    assert elapsed < 600.0


def test_criterion_5_genchi2_kernel():
    # closed forms evaluated through the inversion path
    p_exp = GenChi2Params(weights=(1.0, 1.0), dofs=(1, 1), noncentralities=(0.0, 0.0))
    exp_err = max(
        abs(genchi2_cdf(x, p_exp) - (1.0 - math.exp(-x / 2.0))) for x in (0.2, 1.0, 3.0, 8.0)
    )
    p_fold = GenChi2Params(weights=(1.0,), dofs=(1,), noncentralities=(0.0,))
    fold_err = max(
        abs(genchi2_cdf(x, p_fold) - (2.0 * normal_cdf(math.sqrt(x)) - 1.0))
        for x in (0.04, 0.5, 2.0, 6.0)
    )
    rng = np.random.default_rng(105)
    worst_ks = 0.0
    for _ in range(20):
        m = int(rng.integers(1, 4))
        w = rng.uniform(0.2, 3.0, m) * rng.choice([-1.0, 1.0], m)
        k = rng.integers(1, 4, m)
        lam = rng.uniform(0.0, 2.0, m)
        s = float(rng.uniform(0.0, 1.0)) if rng.random() < 0.5 else 0.0
        off = float(rng.uniform(-2.0, 2.0))
        p = GenChi2Params(
            weights=tuple(w), dofs=tuple(k), noncentralities=tuple(lam),
            gaussian_sd=s, offset=off,
        )
        draws = np.full(1_000_000, off)
        for wj, kj, lj in zip(w, k, lam):
            draws += wj * rng.noncentral_chisquare(kj, lj, draws.size)
        if s > 0:
            draws += s * rng.standard_normal(draws.size)
        xs = np.sort(draws)[:: 1000]
        emp = (np.arange(0, draws.size, 1000) + 1.0) / draws.size
        ks = float(np.max(np.abs(genchi2_cdf(xs, p, abs_tol=1e-6) - emp)))
        worst_ks = max(worst_ks, ks)
    ok = exp_err < 1e-8 and fold_err < 1e-8 and worst_ks < 0.005
    _verdict(
        5,
        ok,
        f"exponential identity {exp_err:.1e} < 1e-8, folded normal {fold_err:.1e} < 1e-8, "
        f"worst randomized KS {worst_ks:.5f} < 0.005",
    )
    assert exp_err < 1e-8
    assert fold_err < 1e-8
    assert worst_ks < 0.005


def test_criterion_6_large_n_vs_mc():
    model = LargeNModel(n_steps=30, max_angle=0.5)
    batch = sample_walk(WalkConfig(30, 0.5), 10_000_000, seed=106)
    radius_cdf = tabulated_cdf(lambda r: model.cdf_radius(r, abs_tol=1e-6), 20.0, 30.0, 4001)
    ks_r = ks_distance(batch.radii, radius_cdf)
    ks_t = ks_distance(batch.angles, model.cdf_angle)
    small = LargeNModel(n_steps=5, max_angle=0.5)
    small_batch = sample_walk(WalkConfig(5, 0.5), 1_000_000, seed=107)
    small_cdf = tabulated_cdf(lambda r: small.cdf_radius(r, abs_tol=1e-6), 0.0, 5.0, 4001)
    ks_small = ks_distance(small_batch.radii, small_cdf)
    r = np.linspace(28.0, 29.5, 1501)
    mode = float(r[np.argmax(model.pdf_radius(r))])
    mass = in_support_mass(30, 0.5)
    ok = (
        ks_r < 0.01
        and ks_t < 0.01
        and ks_small > 0.02
        and 28.5 <= mode <= 29.0
        and mass >= 0.99
    )
    _verdict(
        6,
        ok,
        f"KS radius {ks_r:.5f} vs bound 0.01, KS angle {ks_t:.5f} < 0.01, "
        f"N=5 KS {ks_small:.4f} > 0.02, mode {mode:.2f} in [28.5, 29.0], "
        f"in-support mass {mass:.4f} >= 0.99",
    )
    assert ks_t < 0.01
    assert ks_small > 0.02
    assert 28.5 <= mode <= 29.0
    assert mass >= 0.99
    # the radius KS at N=30 is dominated by a systematic gap of the
    # normal approximation itself (about 0.012 at 10^7 samples), not by
    # the inversion kernel; see the decisions ledger for the analysis
    assert ks_r < 0.01, (
        f"radius KS {ks_r:.5f} exceeds the 0.01 bound; the gap is the normal "
        "approximation error at N=30, verified against a Gaussian surrogate sampler"
    )


def test_criterion_7_property_suite():
    failures = []
    # CDF/PDF shape properties across regimes
    law = ExactTwoStep(max_angle=0.5)
    r = np.linspace(0.0, 2.0, 301)
    th = np.linspace(-0.5, 0.5, 301)
    if not (np.all(np.diff(law.cdf_radius(r)) >= 0) and np.all(law.pdf_radius(r) >= 0)):
        failures.append("exact2 radius")
    if np.max(np.abs(law.pdf_angle(th) - law.pdf_angle(-th))) > 1e-12:
        failures.append("exact2 angle symmetry")
    model = LargeNModel(n_steps=30, max_angle=0.5)
    rr = np.linspace(24.0, 30.0, 101)
    tt = np.linspace(-0.45, 0.45, 101)
    if not np.all(np.diff(model.cdf_radius(rr)) >= -1e-9):
        failures.append("large-n radius monotone")
    if np.max(np.abs(model.pdf_angle(tt) - model.pdf_angle(-tt))) > 1e-12:
        failures.append("large-n angle symmetry")
    h = 1e-6
    fd = (model.cdf_angle(tt + h) - model.cdf_angle(tt - h)) / (2 * h)
    if not np.allclose(model.pdf_angle(tt), fd, rtol=1e-5, atol=1e-7):
        failures.append("large-n pdf vs cdf derivative")
    p = GenChi2Params(weights=(1.0, 2.0), dofs=(2, 1), noncentralities=(0.5, 0.0))
    x = np.linspace(0.1, 30.0, 101)
    c = genchi2_cdf(x, p)
    if not (np.all(np.diff(c) >= -1e-9) and np.all((0 <= c) & (c <= 1))):
        failures.append("genchi2 cdf bounds")
    grid2 = seed_two_step(WalkConfig(2, 0.5))
    f3 = pdf_angle_approx(th, grid2)
    if not (np.all(f3 >= 0) and np.max(np.abs(f3 - f3[::-1])) < 1e-9):
        failures.append("recursion angle pdf")
    # every MC endpoint inside the reachable set across the N/a matrix
    for n, a in [(2, 0.5), (2, math.pi / 4), (2, math.pi / 2), (3, 0.5), (5, 0.5), (30, 0.5)]:
        cfg = WalkConfig(n, a)
        b = sample_walk(cfg, 50_000, seed=108)
        if not contains_batch(b.radii, b.angles, cfg, tol=1e-9).all():
            failures.append(f"support containment N={n}, a={a}")
    ok = not failures
    _verdict(7, ok, "all property checks hold" if ok else f"failing: {failures}")
    assert not failures


def test_criterion_8_determinism():
    from click.testing import CliRunner

    runner = CliRunner()
    args = ["compare", "--regime", "exact2", "--n", "2", "--a", "0.5",
            "--count", "100000", "--seed", "12345"]
    first = runner.invoke(cli_main, args)
    second = runner.invoke(cli_main, args)
    ok = first.exit_code == 0 and first.output == second.output
    _verdict(8, ok, "repeated compare runs byte-identical")
    assert first.exit_code == 0
    assert first.output == second.output
