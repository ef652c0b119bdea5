"""Exit criteria for the package. Each test records one PASS/FAIL line that is
printed in the pytest terminal summary under "acceptance criteria"."""

import math
import subprocess
import sys
import time

import numpy as np

from conftest import random_l2_configs
from hierconsensus import closedform as cf
from hierconsensus.dynamics import InputSpec, SimConfig, consensus_value, empirical_rate, simulate
from hierconsensus.hierarchy import HierarchyConfig, build_weight_matrix
from hierconsensus.spectral import numeric_spectrum, rate_autonomous, rate_with_input
from hierconsensus.sweep import REGION_B, REGION_G, classify_lambda_region, classify_point, fig3_grid
from hierconsensus.verify import match_spectra

CONFIGS_50 = random_l2_configs(50, seed=20240601)
CONFIGS_20 = random_l2_configs(20, seed=20240602)
R_EXAMPLE3 = (6 - math.sqrt(32)) / 8


def test_01_stochasticity_sweep(acceptance):
    start = time.perf_counter()
    worst = 0.0
    for L in (2, 3, 4):
        for M in range(2, 7):
            for a in (0.1, 1.0, 10.0):
                for b in (0.1, 1.0, 10.0):
                    W = build_weight_matrix(HierarchyConfig(L, M, a, b)).entries
                    worst = max(worst, float(np.max(np.abs(W.sum(axis=1) - 1))))
    elapsed = time.perf_counter() - start
    acceptance("01 stochasticity sweep", worst < 1e-12 and elapsed < 5,
               f"max row deviation {worst:.2e} (<1e-12), {elapsed:.2f}s (<5s)")


def test_02_spectrum_equivalence(acceptance):
    start = time.perf_counter()
    unmatched, bad_count = 0, 0
    for cfg in CONFIGS_50:
        s = cf.analytic_spectrum_l2(cfg)
        if sum(m for _, _, m in s.pairs()) != (cfg.M + 1) ** 2:
            bad_count += 1
        ev = numeric_spectrum(build_weight_matrix(cfg).entries).eigenvalues
        unmatched += match_spectra(s.values(), ev, 1e-7)
    elapsed = time.perf_counter() - start
    acceptance("02 spectrum equivalence", unmatched == 0 and bad_count == 0 and elapsed < 20,
               f"{unmatched} unmatched at 1e-7, {bad_count} bad multiplicity totals, {elapsed:.2f}s (<20s)")


def test_03_perron_vector(acceptance):
    worst_res, worst_sum, min_entry = 0.0, 0.0, np.inf
    for cfg in CONFIGS_50:
        pi = cf.left_perron_l2(cfg).pi
        W = build_weight_matrix(cfg).entries
        worst_res = max(worst_res, float(np.max(np.abs(pi @ W - pi))))
        worst_sum = max(worst_sum, abs(float(pi.sum()) - 1))
        min_entry = min(min_entry, float(pi.min()))
    uniform_dev = 0.0
    for M in range(2, 7):
        for a in (0.05, 0.7, 1.0, 3.3, 20.0):
            pi = cf.left_perron_l2(HierarchyConfig(2, M, a, a)).pi
            uniform_dev = max(uniform_dev, float(np.max(np.abs(pi - 1 / pi.size))))
    ok = worst_res < 1e-10 and worst_sum <= 1e-12 and min_entry > 0 and uniform_dev < 1e-12
    acceptance("03 Perron vector", ok,
               f"residual {worst_res:.1e}, |sum-1| {worst_sum:.1e}, min {min_entry:.3g}, uniform dev {uniform_dev:.1e}")


def test_04_example_rate(acceptance):
    cfg = HierarchyConfig(2, 3, 1.0, 1.0)
    W = build_weight_matrix(cfg)
    r_cf = cf.rate_autonomous_l2(cfg)
    r_num = rate_autonomous(W)
    x0 = np.random.default_rng(4).uniform(size=W.n)
    traj = simulate(W, InputSpec.none(W.n), x0, SimConfig(0.01, 30 / r_cf, 100))
    r_emp = empirical_rate(traj, np.full(W.n, consensus_value(cf.left_perron_l2(cfg).pi, x0)))
    ok = abs(r_cf - R_EXAMPLE3) < 1e-12 and abs(r_num - R_EXAMPLE3) < 1e-8 and abs(r_emp - R_EXAMPLE3) / R_EXAMPLE3 < 0.10
    acceptance("04 closed-form rate at M=3, alpha=beta=1", ok,
               f"analytic {r_cf:.12f}, numeric {r_num:.12f}, empirical {r_emp:.6f}, target {R_EXAMPLE3:.12f}")


def test_05_monotone_in_alpha(acceptance):
    violations = 0
    alphas = [0.1 * k for k in range(1, 101)]
    for M in (2, 3, 4, 5):
        for b in (0.5, 1.0, 2.0):
            r = np.array([cf.rate_autonomous_l2(HierarchyConfig(2, M, a, b)) for a in alphas])
            violations += int(np.count_nonzero(np.diff(r) < -1e-13))
    acceptance("05 rate nondecreasing in alpha", violations == 0, f"{violations} violations")


def test_06_equal_weights_optimum(acceptance):
    step = 0.001
    grid = np.round(np.arange(100, 10001) * step, 10)
    worst = 0.0
    for M in range(2, 11):
        rates = [cf.rate_equal_weights(M, a) for a in grid]
        worst = max(worst, abs(grid[int(np.argmax(rates))] - cf.optimal_alpha_equal(M)))
    a3 = cf.optimal_alpha_equal(3)
    ratio = cf.optimal_alpha_equal(1000) / 1000
    ok = worst <= step + 1e-12 and abs(a3 - 2.4330303) < 1e-7 and 0.70 <= ratio <= 0.715
    acceptance("06 equal-weights optimum", ok,
               f"max |grid argmax - alpha*| {worst:.1e}, alpha*(3)={a3:.7f}, alpha*(1000)/1000={ratio:.4f}")


def test_07_perturbation(acceptance):
    gamma = 1e-6
    worst = 0.0
    for cfg in CONFIGS_20:
        W = build_weight_matrix(cfg)
        lam = numeric_spectrum(W.entries - gamma * np.diag(np.eye(W.n)[cfg.M + 1])).real.max()
        c = cf.perturbation_coefficient(cfg.M, cfg.alpha, cfg.beta)
        worst = max(worst, abs((1 - lam) / gamma - c) / c)
    c3 = cf.perturbation_coefficient(3, 1.0, 1.0)
    acceptance("07 input perturbation coefficient", worst < 1e-3 and abs(c3 - 1 / 16) < 1e-15,
               f"max relative error {worst:.2e} (<1e-3), c(3,1,1)={c3}")


def test_08_bottom_up_non_monotone(acceptance):
    alphas = np.geomspace(0.1, 10, 50)
    rates = np.array([
        rate_with_input(build_weight_matrix(HierarchyConfig(2, 3, a, 1.0)), InputSpec.single(16, 5, 1.0, 1.0))
        for a in alphas
    ])
    k = int(np.argmax(rates))
    ok = 0 < k < len(alphas) - 1 and rates[k] > rates[0] and rates[k] > rates[-1]
    acceptance("08 bottom-up rate non-monotone in alpha", ok,
               f"argmax alpha={alphas[k]:.4g}, max {rates[k]:.5g} vs ends {rates[0]:.5g}, {rates[-1]:.5g}")


def test_09_region_map(acceptance):
    at_one = classify_point(HierarchyConfig(2, 3, 1.0, 1.0))
    grid3 = fig3_grid(3)
    region3 = classify_lambda_region(grid3).values
    a = np.asarray(grid3.alpha_values)[None, :]
    b = np.asarray(grid3.beta_values)[:, None]
    g_corner = bool(np.any((region3 == REGION_G) & (a >= 25) & (b <= 0.2)))
    counts = [int((classify_lambda_region(fig3_grid(M)).values == REGION_G).sum()) for M in (3, 5)]
    ok = at_one == REGION_B and g_corner and counts[0] > counts[1]
    acceptance("09 lambda_B / lambda_G region map", ok,
               f"(3,1,1)->{'B' if at_one == REGION_B else at_one}, G at alpha>=25,beta<=0.2: {g_corner}, "
               f"G cells M=3: {counts[0]}, M=5: {counts[1]}")


def test_10_appendix_eigenvectors(acceptance):
    worst, rank_fail = 0.0, 0
    for cfg in CONFIGS_20:
        W = build_weight_matrix(cfg).entries
        V, lams = cf.appendix_eigenbasis(cfg)
        worst = max(worst, max(cf.eigen_residual(W, V[:, k], lams[k]) for k in range(V.shape[1])))
        rank_fail += int(np.linalg.matrix_rank(V) != (cfg.M + 1) ** 2)
    acceptance("10 eigenvector families", worst < 1e-8 and rank_fail == 0,
               f"max relative residual {worst:.1e} (<1e-8), {rank_fail} rank-deficient bases")


def test_11_dynamics_convergence(acceptance):
    cfg = HierarchyConfig(2, 3, 1.0, 1.0)
    W = build_weight_matrix(cfg)
    x0 = np.random.default_rng(11).uniform(size=W.n)
    r = rate_autonomous(W)
    traj = simulate(W, InputSpec.none(W.n), x0, SimConfig(0.01, 30 / r, 1000))
    auto_err = float(np.max(np.abs(traj.final - cf.left_perron_l2(cfg).pi @ x0)))

    inp = InputSpec.single(W.n, 5, 1.0, 1.0)
    r_in = rate_with_input(W, inp)
    traj = simulate(W, inp, np.zeros(W.n), SimConfig(0.01, 30 / r_in, 10000))
    input_err = float(np.max(np.abs(traj.final - 1.0)))
    acceptance("11 dynamics convergence", auto_err < 1e-6 and input_err < 1e-6,
               f"autonomous err {auto_err:.1e} at T={30 / r:.0f}, input err {input_err:.1e} at T={30 / r_in:.0f}")


def test_12_cli_determinism(acceptance):
    commands = [
        ["build", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1", "--format", "csv"],
        ["rate", "--layers", "2", "--breadth", "3", "--alpha", "1", "--beta", "1"],
        ["spectrum", "--layers", "3", "--breadth", "2", "--alpha", "2", "--beta", "0.5", "--numeric"],
        ["simulate", "--breadth", "3", "--alpha", "2", "--t-end", "5", "--seed", "7"],
        ["sweep", "--mode", "input", "--alpha-grid", "0.1:10:6", "--beta-grid", "0.5:2:3", "--log-spacing"],
        ["verify", "--layers", "2", "--breadth", "3", "--alpha", "2", "--beta", "0.5"],
    ]
    differing = []
    for argv in commands:
        outs = [
            subprocess.run([sys.executable, "-m", "hierconsensus", *argv], capture_output=True, check=True).stdout
            for _ in range(2)
        ]
        if outs[0] != outs[1] or not outs[0]:
            differing.append(argv[0])
    acceptance("12 CLI determinism", not differing,
               f"{len(commands) - len(differing)}/{len(commands)} commands byte-identical")
