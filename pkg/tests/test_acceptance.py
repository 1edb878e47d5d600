"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -rA`` (or ``-s``) to see the
per-criterion lines. The two benchmark criteria are Monte-Carlo studies with
100 runs each and take several minutes; their runtime targets are reported,
not asserted.
"""
import json
import math
import os
import time

import numpy as np
import scipy.stats

from hoinet import dataio
from hoinet.data import SeriesDataset, SymbolDataset
from hoinet.discrete import (
    conditional_mutual_information,
    entropy,
    joint_pmf,
    mutual_information,
    mutual_information_from_table,
)
from hoinet.generators import (
    Binary10Params,
    ThreeNodeDynamicParams,
    ThreeNodeStaticParams,
    exact_three_node_dynamic,
    exact_three_node_static,
    gen_binary10,
)
from hoinet.network import analyze_dynamic, analyze_static, benchmark, standard_scenario
from hoinet.physio import (
    BeatSeries,
    derive_cardiac_output,
    derive_discrete,
    derive_peripheral_resistance,
)
from hoinet.surrogates import SurrogateConfig, iaaft_surrogate
from hoinet.varmodel import (
    VarModel,
    fit_var,
    mir,
    model_covariances,
    restricted_residual_cov,
    simulate_var,
)

JOBS = min(os.cpu_count() or 1, 4)


def _report(num, ok, detail):
    print(f"[criterion {num:2d}] {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


def _sign_flips(values):
    signs = np.sign(values)
    return int(np.sum(signs[1:] != signs[:-1])), signs


def test_criterion_01_exact_static_sweep():
    start = time.time()
    alphas = np.round(np.arange(0.5, 1.0 + 1e-9, 0.025), 6)
    nis, is_12, cis_23 = [], [], []
    for alpha in alphas:
        links = exact_three_node_static(
            ThreeNodeStaticParams(alpha=float(alpha), beta=0.9, gamma=float(1.5 - alpha)))
        nis.append(links[(0, 1)].nis_value)
        is_12.append(links[(0, 1)].is_value)
        cis_23.append(links[(1, 2)].cis_value)
    elapsed = time.time() - start
    nis = np.array(nis)
    flips, _ = _sign_flips(nis)
    ok = (nis[0] < 0 and nis[-1] > 0 and flips == 1
          and is_12[0] <= 1e-12 and np.all(np.diff(is_12) > 0)
          and cis_23[-1] <= 1e-12 and elapsed < 1.0)
    _report(1, ok, f"nIS {nis[0]:+.4f} -> {nis[-1]:+.4f}, {flips} sign change(s); "
                   f"IS(S1;S2) 0 -> {is_12[-1]:.4f} monotone; "
                   f"cIS(S2;S3|S1) at gamma=0.5: {cis_23[-1]:.2e}; {elapsed:.2f} s")


def test_criterion_02_exact_dynamic_sweep():
    start = time.time()
    avals = np.round(np.arange(0.0, 1.0 + 1e-9, 0.05), 6)
    nis = []
    b_01_at_0 = b_23_at_1 = None
    for a in avals:
        links = exact_three_node_dynamic(
            ThreeNodeDynamicParams(a=float(a), b=1.0, c=float(1.0 - a)))
        nis.append(links[(0, 1)].nis_value)
        if a == 0.0:
            b_01_at_0 = links[(0, 1)].b_index
        if a == 1.0:
            b_23_at_1 = links[(1, 2)].b_index
    elapsed = time.time() - start
    nis = np.array(nis)
    flips, signs = _sign_flips(nis)
    flip_idx = int(np.flatnonzero(signs[1:] != signs[:-1])[0]) if flips else -1
    crossing_in_band = flips == 1 and 0.4 <= avals[flip_idx] and avals[flip_idx + 1] <= 0.6
    ok = (flips == 1 and crossing_in_band and b_01_at_0 == -1.0
          and b_23_at_1 == 1.0 and elapsed < 5.0)
    _report(2, ok, f"nIS sign change between a={avals[flip_idx]:.2f} and "
                   f"a={avals[flip_idx + 1]:.2f}; B(S1;S2)|a=0 = {b_01_at_0}, "
                   f"B(S2;S3)|c=0 = {b_23_at_1}; {elapsed:.2f} s")


def test_criterion_05_gaussian_closed_form_oracle():
    details = []
    ok = True
    for c in (0.5, 1.0):
        model = VarModel(np.array([[[0.0, 0.0], [c, 0.0]]]), np.eye(2))
        expected = 0.5 * math.log(1.0 + c * c)
        exact = mir(model, 0, 1, q=20)
        ok &= abs(exact - expected) <= 1e-6
        series = simulate_var(model, 100_000, np.random.default_rng([51, int(c * 10)]))
        fitted = fit_var(series, p_max=20)
        estimated = mir(fitted, 0, 1, q=20)
        ok &= abs(estimated - expected) <= 0.02
        details.append(f"c={c}: exact err {abs(exact - expected):.2e}, "
                       f"estimated err {abs(estimated - expected):.4f}")
    _report(5, ok, "; ".join(details))


def test_criterion_06_plugin_oracle():
    rng = np.random.default_rng(61)
    x = rng.integers(0, 2, 100_000)
    y = np.where(rng.random(100_000) < 0.9, x, 1 - x)
    ds = SymbolDataset(np.column_stack([x, y]), (2, 2))
    expected = math.log(2) + 0.9 * math.log(0.9) + 0.1 * math.log(0.1)
    estimated = mutual_information(ds, 0, 1)
    ok = abs(estimated - expected) <= 0.01
    _report(6, ok, f"MI = {estimated:.4f} vs brute-force {expected:.4f} "
                   f"(err {abs(estimated - expected):.4f})")


def test_criterion_07_surrogate_calibration():
    lo, hi = scipy.stats.binom.interval(0.95, 200, 0.05)
    pairs = [(0, 1), (0, 2), (1, 2)]

    static_rej = np.zeros(3, dtype=int)
    for run in range(200):
        rng = np.random.default_rng([1003, run])
        ds = SymbolDataset(rng.integers(0, 2, size=(300, 3)), (2, 2, 2))
        res = analyze_static(ds, SurrogateConfig(method="shuffle",
                                                 master_seed=1003 * 7 + run))
        for k, (i, j) in enumerate(pairs):
            static_rej[k] += res.link(i, j).is_significant

    dynamic_rej = np.zeros(3, dtype=int)
    for run in range(200):
        rng = np.random.default_rng([3000, run])
        series = SeriesDataset(rng.standard_normal((300, 3)))
        res = analyze_dynamic(series, SurrogateConfig(method="iaaft",
                                                      master_seed=4000 + run),
                              p_max=5, q=10)
        for k, (i, j) in enumerate(pairs):
            dynamic_rej[k] += res.link(i, j).is_significant

    ok = (all(lo <= c <= hi for c in static_rej)
          and all(lo <= c <= hi for c in dynamic_rej))
    _report(7, ok, f"IS rejections/200 within [{lo:.0f}, {hi:.0f}]: "
                   f"static {static_rej.tolist()}, dynamic {dynamic_rej.tolist()}")


def test_criterion_08_iaaft_properties():
    ar2 = VarModel(np.array([[[0.5]], [[-0.3]]]), np.array([[1.0]]))
    x = simulate_var(ar2, 300, np.random.default_rng(88)).data[:, 0]
    px = np.abs(np.fft.rfft(x)) ** 2
    errors = []
    sorted_ok = True
    for r in range(50):
        surr = iaaft_surrogate(x, np.random.default_rng([88, r]))
        sorted_ok &= bool(np.array_equal(np.sort(surr), np.sort(x)))
        ps = np.abs(np.fft.rfft(surr)) ** 2
        errors.append(np.linalg.norm(ps - px) / np.linalg.norm(px))
    mean_err = float(np.mean(errors))
    ok = sorted_ok and mean_err <= 0.05
    _report(8, ok, f"sorted values exact: {sorted_ok}; periodogram rel L2 error "
                   f"{mean_err:.4f} (<= 0.05) over 50 surrogates at N=300")


def test_criterion_09_structural_identities():
    # chain rule on shared empirical pmfs
    max_gap = 0.0
    for seed in range(5):
        rng = np.random.default_rng([91, seed])
        ds = SymbolDataset(rng.integers(0, 3, size=(200, 3)), (3, 3, 3))
        table = joint_pmf(ds, (0, 1, 2))
        i_x_yz = (entropy(table.marginal((0,))) + entropy(table.marginal((1, 2)))
                  - entropy(table))
        i_x_z = mutual_information_from_table(table.marginal((0, 2)), 0, 2)
        cmi = conditional_mutual_information(ds, 0, 1, [2])
        max_gap = max(max_gap, abs(i_x_yz - (i_x_z + cmi)))

    # full-subset restricted residual covariance reproduces Sigma_U
    coeffs = np.zeros((1, 3, 3))
    coeffs[0, 1, 0], coeffs[0, 2, 0], coeffs[0, 2, 1] = 0.5, 1.0, 0.5
    exact_model = VarModel(coeffs, np.eye(3))
    gaps = []
    for model in (exact_model,
                  fit_var(simulate_var(exact_model, 5000,
                                       np.random.default_rng(92)), p_max=5)):
        cov = model_covariances(model, 20)
        resid = restricted_residual_cov(cov, (0, 1, 2), 20)
        gaps.append(np.abs(resid - model.sigma_u).max())
    ok = max_gap <= 1e-10 and max(gaps) <= 1e-8
    _report(9, ok, f"chain-rule gap {max_gap:.2e} (<= 1e-10); full-subset "
                   f"residual vs Sigma_U gaps {gaps[0]:.2e}, {gaps[1]:.2e} (<= 1e-8)")


def test_criterion_10_physio_and_io_properties(tmp_path):
    checks = []
    # derivation rules on constructed beat series
    hv = derive_discrete("hv", BeatSeries(hp=[800.0, 820.0, 810.0]))
    checks.append(hv.tolist() == [0])
    checks.append(derive_discrete("sv", BeatSeries(sp=[120.0] * 5)).tolist() == [0, 0, 0])
    checks.append(derive_discrete("rp", BeatSeries(ra=np.linspace(0, 1, 7))).tolist()
                  == [0, 0, 0, 0])
    co = derive_cardiac_output(BeatSeries(hp=[1000.0, 900.0], zmax=[1.0, 1.0],
                                          lvet=[300.0, 300.0]), beta=1.0)
    checks.append(abs(co[0] - 18.0) <= 1e-12)
    rng = np.random.default_rng(101)
    n = 40
    beats = BeatSeries(hp=850 + 40 * rng.random(n), map=90 + 5 * rng.random(n),
                       zmax=1 + rng.random(n), lvet=260 + 20 * rng.random(n))
    co = derive_cardiac_output(beats, beta=0.7)
    checks.append(np.allclose(derive_cardiac_output(beats, beta=1.4), 2 * co, atol=1e-12))
    pr = derive_peripheral_resistance(beats, co)
    checks.append(np.abs(pr * co - beats.map[1:]).max() <= 1e-12)

    # cli-io round trips and determinism
    ds, _ = gen_binary10(Binary10Params(n=200, seed=102))
    path = tmp_path / "ds.csv"
    dataio.write_dataset(path, ds)
    back = dataio.read_dataset(path, "static")
    checks.append(np.array_equal(back.data, ds.data))
    series = SeriesDataset(rng.standard_normal((30, 3)))
    spath = tmp_path / "s.csv"
    dataio.write_dataset(spath, series)
    checks.append(np.array_equal(dataio.read_dataset(spath, "dynamic").data, series.data))
    config = SurrogateConfig(count=30, method="shuffle", master_seed=103)
    doc1 = json.dumps(dataio.result_to_json_dict(analyze_static(ds, config)))
    doc2 = json.dumps(dataio.result_to_json_dict(analyze_static(ds, config)))
    checks.append(doc1 == doc2)

    ok = all(checks)
    _report(10, ok, f"{sum(checks)}/{len(checks)} physio derivation, round-trip and "
                    f"determinism checks passed (subject-level results not reproducible; "
                    f"property-based substitute)")


def test_criterion_03_binary10_benchmark():
    start = time.time()
    scenario = standard_scenario("binary10")
    config = SurrogateConfig(count=100, alpha=0.05, method="shuffle", master_seed=31)
    report = benchmark(scenario, lengths=[250, 1000], runs=100, config=config, jobs=JOBS)
    elapsed = time.time() - start

    cells = {cell.n: cell for cell in report.cells()}
    sens_1000 = cells[1000].sensitivity
    spec_1000 = cells[1000].specificity
    sens_250 = cells[250].sensitivity
    runs_1000 = report.records_for("default", 1000)
    fp67 = sum((5, 6) in rec.false_positive_pairs for rec in runs_1000) / len(runs_1000)
    ok = (sens_1000 >= 0.95 and 0.94 <= spec_1000 <= 1.0 and fp67 >= 0.60
          and sens_250 < sens_1000
          and cells[1000].failed == 0 and cells[250].failed == 0)
    _report(3, ok, f"N=1000: sensitivity {sens_1000:.3f} (>= 0.95), specificity "
                   f"{spec_1000:.3f} (in [0.94, 1.00]), S6-S7 FP rate {fp67:.2f} "
                   f"(>= 0.60); sensitivity N=250 {sens_250:.3f} < N=1000; "
                   f"runtime {elapsed / 60:.1f} min (target < 10)")


def test_criterion_04_var_stars_benchmark():
    start = time.time()
    config = SurrogateConfig(count=100, alpha=0.05, method="iaaft", master_seed=41)
    results = {}
    for structure in ("propagation", "competing"):
        scenario = standard_scenario(f"var-stars-{structure}", arms=[0.5])
        report = benchmark(scenario, lengths=[1000], runs=100, config=config,
                           p_max=20, q=20, jobs=JOBS)
        results[structure] = report.cells()[0]
    elapsed = time.time() - start

    prop, comp = results["propagation"], results["competing"]
    ok = (abs(prop.specificity - 1.0 / 7.0) <= 0.10 and prop.sensitivity >= 0.95
          and comp.specificity >= 0.90
          and prop.failed == 0 and comp.failed == 0)
    _report(4, ok, f"propagation: specificity {prop.specificity:.3f} "
                   f"(1/7 = 0.143 +- 0.10), sensitivity {prop.sensitivity:.3f} (>= 0.95); "
                   f"competing: specificity {comp.specificity:.3f} (>= 0.90); "
                   f"runtime {elapsed / 60:.1f} min (target < 20)")
