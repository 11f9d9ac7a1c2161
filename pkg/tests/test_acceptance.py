"""Acceptance gate: nine pinned criteria with pre-registered tolerance bands.

Every statistical band below was confirmed by a brute-force oracle run
before being frozen; seeds are fixed, so each criterion is deterministic.
One test per criterion, named and printed as its own pass/fail line.
"""

import json
import math
import time

import numpy as np
import pytest

from periodicgp import bridge, fit, regularity, spectral, synthesis
from periodicgp.cli import main as cli_main
from periodicgp.core import ParametricModel, SpectralCoefficients, h_norm


def test_criterion_1_bridge_coefficient_recovery():
    t0 = time.perf_counter()
    g = bridge.centered_bridge_covariogram()
    c = spectral.covariogram_to_coeffs(g, K=32, n=4096)
    err_c0 = abs(c.c0**2 - 1 / 12)
    err_ck = max(abs(c.c[k - 1] ** 2 - 1 / (2 * math.pi * k) ** 2)
                 for k in range(1, 33))
    elapsed = time.perf_counter() - t0
    assert err_c0 < 1e-7
    assert err_ck < 1e-7
    assert elapsed < 1.0
    print(f"\nPASS criterion 1: coefficient errors c0 {err_c0:.2e}, "
          f"max c_k {err_ck:.2e} (tol 1e-7), {elapsed:.2f}s")


def test_criterion_2_round_trip_isometry():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    worst_rt, worst_iso = 0.0, 0.0
    for _ in range(100):
        support = int(rng.integers(1, 65))
        raw = rng.uniform(0.0, 1.0, size=support + 1)
        raw[rng.uniform(size=support + 1) < 0.15] = 0.0
        c = SpectralCoefficients(raw[0], tuple(raw[1:]))
        g = spectral.coeffs_to_covariogram(c, 4096)
        back = spectral.covariogram_to_coeffs(g, K=support, n=4096)
        orig = np.concatenate(([c.c0], c.c))
        rec = np.concatenate(([back.c0], back.c))
        scale = max(float(np.max(orig)), 1e-300)
        worst_rt = max(worst_rt, float(np.max(np.abs(rec - orig))) / scale)
        c0_sq = g.at(0.0)
        worst_iso = max(worst_iso, abs(h_norm(c) ** 2 - c0_sq) / c0_sq)
    elapsed = time.perf_counter() - t0
    assert worst_rt < 1e-8
    assert worst_iso < 1e-10
    assert elapsed < 5.0
    print(f"\nPASS criterion 2: worst round-trip {worst_rt:.2e} (tol 1e-8), "
          f"worst isometry {worst_iso:.2e} (tol 1e-10), {elapsed:.2f}s")


def test_criterion_3_law_equivalence_of_bridge_constructions():
    t0 = time.perf_counter()
    R, n = 20000, 1024
    lags = [n * j // 32 for j in range(16)]
    closed = bridge.centered_bridge_covariogram()
    target = np.array([closed.at(d / n) for d in lags])

    shift = bridge.bridge_ensemble("centered_shift", R, n, 42)
    est_shift = synthesis.empirical_covariogram(shift, lags)
    z_shift = np.abs((est_shift.value - target) / est_shift.stderr)

    coeffs = bridge.centered_bridge_coefficients()
    series = synthesis.sample_ensemble(coeffs, n // 2 - 1, n, R, 43)
    est_series = synthesis.empirical_covariogram(series, lags)
    z_series = np.abs((est_series.value - target) / est_series.stderr)

    elapsed = time.perf_counter() - t0
    assert int((z_shift > 3).sum()) <= 1
    assert int((z_series > 3).sum()) <= 1
    assert elapsed < 120.0
    print(f"\nPASS criterion 3: 16-lag max |z| shift {z_shift.max():.2f}, "
          f"series {z_series.max():.2f} (band 3 s.e.), {elapsed:.1f}s")


def test_criterion_4_decomposition_corollary():
    rep = bridge.decomposition_check(20000, 1024, master_seed=0)
    assert rep.var_ok, "Var(Z) outside 3 s.e. of 1/12"
    assert rep.cov_ok, "residual covariogram outside 3 s.e. of closed form"
    assert rep.corr_ok, "Z correlates with the residual beyond 3 s.e."
    zv = abs(rep.var_z - rep.var_z_target) / rep.var_z_stderr
    print(f"\nPASS criterion 4: Var(Z) z {zv:.2f}, "
          f"cov and corr inside 3 s.e. at R=20000")


def test_criterion_5_proof_identity():
    t0 = time.perf_counter()
    gaps = [bridge.proof_identity(k, 10**6).gap for k in (1, 2, 3)]
    elapsed = time.perf_counter() - t0
    assert all(g < 1e-6 for g in gaps)
    assert elapsed < 1.0
    print(f"\nPASS criterion 5: identity gaps {[f'{g:.1e}' for g in gaps]} "
          f"(tol 1e-6), {elapsed:.2f}s")


def test_criterion_6_regularity_chain():
    for p in (0.75, 1.0, 2.0):
        c = fit.model_coefficients(ParametricModel(1.0, p), 64)
        decay = regularity.fit_decay(c)
        assert abs(decay.q - 2 * p) < 1e-9
    for p in (0.75, 1.0):
        rep = regularity.predict_regularity(2 * p)
        assert abs(rep.holder_bound - (p - 0.5)) < 1e-12
    rep = regularity.predict_regularity(4.0)
    assert rep.m == 1 and rep.holder_bound == pytest.approx(0.5)
    print("\nPASS criterion 6: q = 2p recovered to 1e-9; "
          "bounds p-1/2 and (m=1, 1/2) exact")


def test_criterion_7_empirical_holder_across_smoothness():
    t0 = time.perf_counter()
    R, n, K = 5000, 4096, 2047
    p_list = (1.0, 1.6, 2.1, 3.1)
    estimates = []
    for p in p_list:
        coeffs = fit.model_coefficients(ParametricModel(1.0, p), K)
        e = synthesis.sample_ensemble(coeffs, K, n, R, 71)
        estimates.append(regularity.estimate_holder(e))
    elapsed = time.perf_counter() - t0
    exps = [est.exponent for est in estimates]
    assert all(a <= b for a, b in zip(exps, exps[1:])), exps
    assert 0.35 < exps[0] < 0.65
    assert estimates[0].flag is None and estimates[1].flag is None
    assert elapsed < 300.0
    flagged = [p for p, est in zip(p_list, estimates) if est.flag]
    print(f"\nPASS criterion 7: exponents {[f'{x:.3f}' for x in exps]} "
          f"monotone, saturation flags at {flagged}, {elapsed:.1f}s")


def test_criterion_8_mle_calibration():
    t0 = time.perf_counter()
    model = fit.model_coefficients(ParametricModel(1.0, 1.5), 511)
    p_hats, a_hats = [], []
    for seed in range(200):
        path = synthesis.sample_path(model, 511, 1024, synthesis.RngStream(seed, 0))
        res = fit.fit_mle(path, K=256)
        p_hats.append(res.p_hat)
        a_hats.append(res.a_hat)
    p_hats, a_hats = np.array(p_hats), np.array(a_hats)

    path = synthesis.sample_path(model, 511, 1024, synthesis.RngStream(0, 0))
    base = fit.fit_mle(path, K=256)
    from periodicgp.core import GridPath
    scaled = fit.fit_mle(GridPath(1024, 3.0 * path.values), K=256)
    equiv_p = abs(scaled.p_hat - base.p_hat)
    equiv_a = abs(scaled.a_hat - 3.0 * base.a_hat)

    elapsed = time.perf_counter() - t0
    assert abs(np.median(p_hats) - 1.5) < 0.05
    assert np.mean(np.abs(p_hats - 1.5) <= 0.2) >= 0.95
    assert abs(np.median(a_hats) - 1.0) < 0.1
    assert equiv_p < 1e-9 and equiv_a < 1e-9
    assert elapsed < 120.0
    print(f"\nPASS criterion 8: median p {np.median(p_hats):.4f} (band 0.05), "
          f"{100 * np.mean(np.abs(p_hats - 1.5) <= 0.2):.0f}% within 0.2, "
          f"median a {np.median(a_hats):.4f} (band 0.1), "
          f"equivariance {max(equiv_p, equiv_a):.1e}, {elapsed:.1f}s")


def test_criterion_9_cli_byte_determinism(tmp_path):
    from periodicgp.core import write_coefficients

    cfile = tmp_path / "c.json"
    write_coefficients(SpectralCoefficients(1.0, (0.5, 0.25)), cfile)
    gfile = tmp_path / "g.csv"
    spectral.write_covariogram_csv(bridge.centered_bridge_covariogram(), gfile,
                                   n=1024)
    sim0 = tmp_path / "r0" / "sim"
    (tmp_path / "r0").mkdir()

    def commands(root):
        sim = root / "sim"
        return [
            ("simulate", "--model", "param", "--a", "1", "--p", "1.5",
             "--n", "512", "--paths", "3", "--seed", "7", "--out", str(sim)),
            ("simulate", "--model", "bridge:centralized", "--n", "256",
             "--paths", "2", "--seed", "3", "--out", str(root / "brg")),
            ("transform", "--direction", "c2g", "--in", str(cfile),
             "--grid", "256", "--check", "--out", str(root / "gout.csv")),
            ("transform", "--direction", "g2c", "--in", str(gfile),
             "--K", "16", "--out", str(root / "cout.json")),
            ("fit", "--in", str(sim) + ".csv", "--out", str(root / "fit")),
            ("regularity", "--coeffs", "bridge", "--out", str(root / "reg.json")),
            ("bridge-check", "--R", "2000", "--n", "256", "--seed", "0",
             "--terms", "100000", "--out", str(root / "chk.json")),
            ("sweep", "--p-list", "1,1.6,2.1,3.1", "--a", "1", "--n", "256",
             "--seed", "11", "--out", str(root / "sw")),
        ]

    roots = []
    for name in ("run_a", "run_b"):
        root = tmp_path / name
        root.mkdir()
        for argv in commands(root):
            assert cli_main([str(a) for a in argv]) == 0, argv
        roots.append(root)

    files_a = sorted(p.name for p in roots[0].iterdir())
    files_b = sorted(p.name for p in roots[1].iterdir())
    assert files_a == files_b and files_a
    for name in files_a:
        assert (roots[0] / name).read_bytes() == (roots[1] / name).read_bytes(), name
    print(f"\nPASS criterion 9: {len(files_a)} output files byte-identical "
          f"across re-runs of all six commands")
