"""Acceptance suite: one test per criterion, each printing a pass/fail line.

Tolerances and runtime budgets are pinned here; independent references are
math.exp / math.cos / scipy erfc and the analytic power rules, never the
code paths under test.
"""

import math
import subprocess
import sys
import time

import numpy as np
import pytest
from scipy.special import erfc

from conftest import record
from fracrelax.grids import GridFunction, UniformGrid
from fracrelax.kinetics import (
    KineticProblem,
    SolutionCurve,
    closed_form_curve,
    differential_equation_residual,
    integral_equation_residual,
    neumann_partial_sum,
    neumann_term,
    power_source_solution,
    power_source_solution_origin,
    relaxation_solution,
    relaxation_solution_origin,
)
from fracrelax.mittag_leffler import MLParams, ml_eval
from fracrelax.riemann_liouville import (
    build_weights,
    rl_derivative_constant,
    rl_derivative_numeric,
    rl_integral_numeric,
    rl_integral_power,
)
from fracrelax.volterra import OracleConfig, solve_volterra


class Stopwatch:
    def __init__(self, limit_s: float):
        self.limit = limit_s
        self.start = time.perf_counter()

    @property
    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    def check(self) -> float:
        elapsed = self.elapsed
        assert elapsed < self.limit, f"runtime {elapsed:.2f}s over {self.limit}s budget"
        return elapsed


def oracle_mask(grid: UniformGrid, steps: int = 10) -> np.ndarray:
    t = grid.times()
    mask = t >= grid.a + steps * grid.h
    mask[0] = False
    return mask


def test_criterion_1_classical_limit():
    # nu = 1 reduces the fractional solution to N_a exp(-c t); 500 samples
    # per rate on (0, 5/c], relative tolerance 1e-12.
    watch = Stopwatch(1.0)
    worst = 0.0
    for c in (0.5, 1.0, 2.0):
        problem = KineticProblem(nu=1.0, c=c, N_a=1.0)
        span = 5.0 / c
        for i in range(500):
            t = (i + 1) * span / 500
            got = relaxation_solution(problem, t)
            ref = math.exp(-c * t)
            worst = max(worst, abs(got - ref) / ref)
    assert worst <= 1e-12
    elapsed = watch.check()
    record(f"[criterion 1] PASS classical limit: worst rel {worst:.2e} "
           f"(tol 1e-12), {elapsed:.2f}s")


def test_criterion_2_ml_identity_suite():
    watch = Stopwatch(1.0)
    n_pts = 250

    p = MLParams(1.0, 1.0)
    worst_exp = max(
        abs(ml_eval(p, z) - math.exp(z)) / math.exp(z)
        for z in np.linspace(-10.0, 5.0, n_pts)
    )
    assert worst_exp <= 1e-10

    p = MLParams(2.0, 1.0)
    worst_cos = max(
        abs(ml_eval(p, -x * x) - math.cos(x)) for x in np.linspace(0.0, 10.0, n_pts)
    )
    assert worst_cos <= 1e-10

    p = MLParams(1.0, 2.0)
    worst_b2 = max(
        abs(ml_eval(p, z) - (math.exp(z) - 1.0) / z) / abs((math.exp(z) - 1.0) / z)
        for z in np.linspace(-10.0, -0.01, n_pts)
    )
    assert worst_b2 <= 1e-10

    p = MLParams(0.5, 1.0)
    worst_erfc = max(
        abs(ml_eval(p, -x) - math.exp(x * x) * erfc(x))
        / (math.exp(x * x) * erfc(x))
        for x in np.linspace(0.0, 5.0, n_pts)
    )
    assert worst_erfc <= 1e-8

    elapsed = watch.check()
    record(
        "[criterion 2] PASS ML identities: "
        f"exp {worst_exp:.1e}, cos {worst_cos:.1e}, (e^z-1)/z {worst_b2:.1e}, "
        f"erfc {worst_erfc:.1e}, {elapsed:.2f}s"
    )


def test_criterion_3_power_rule_convergence():
    watch = Stopwatch(30.0)
    grid_sizes = (250, 500, 1000, 2000)
    span = 2.0
    weights = {}
    for nu in (0.3, 0.5, 0.9):
        for n in grid_sizes:
            weights[(nu, n)] = build_weights(UniformGrid.from_span(0.0, span, n), nu)

    notes = []
    for rho in (1.0, 2.0, 3.0):
        for nu in (0.3, 0.5, 0.9):
            errs = []
            for n in grid_sizes:
                w = weights[(nu, n)]
                t = w.grid.times()
                f = GridFunction(grid=w.grid, values=t ** (rho - 1.0))
                got = rl_integral_numeric(f, nu, weights=w)
                exact = np.empty(n + 1)
                exact[0] = 0.0
                exact[1:] = [rl_integral_power(0.0, rho, nu, tv) for tv in t[1:]]
                errs.append(float(np.abs(got.values - exact).max()))
            if max(errs) <= 1e-12:
                # constant and linear data are reproduced exactly by the
                # product-trapezoid rule; nothing left to converge
                notes.append(f"rho={rho} nu={nu}: exact ({max(errs):.1e})")
                continue
            order = math.log2(errs[-2] / errs[-1])
            assert order >= 1.8, f"rho={rho} nu={nu}: errs={errs}, order={order:.2f}"
            notes.append(f"rho={rho} nu={nu}: order {order:.2f}")

    # derivative of the constant: the analytic start term makes it exact, so
    # the order bound 2 - nu - 0.2 is met trivially; assert exactness.
    for nu in (0.3, 0.5, 0.9):
        worst = 0.0
        for n in (250, 500, 1000):
            g = UniformGrid.from_span(0.0, span, n)
            f = GridFunction(grid=g, values=np.ones(n + 1))
            got = rl_derivative_numeric(f, nu)
            t = g.times()
            interior = t[1:] >= 0.5
            exact = np.array(
                [rl_derivative_constant(0.0, nu, tv) for tv in t[1:][interior]]
            )
            rel = np.abs(got.values[1:][interior] - exact) / np.abs(exact)
            worst = max(worst, float(rel.max()))
        assert worst <= 1e-12
        notes.append(f"D^{nu} 1: exact ({worst:.1e})")

    elapsed = watch.check()
    record(f"[criterion 3] PASS power rules: {'; '.join(notes)}, {elapsed:.1f}s")


def test_criterion_4_oracle_agreement_relaxation():
    watch = Stopwatch(30.0)
    notes = []
    for nu in (0.25, 0.5, 0.75, 1.0):
        problem = KineticProblem(nu=nu, c=1.0, N_a=1.0)
        errs = {}
        for n in (1000, 2000):
            grid = UniformGrid.from_span(0.0, 5.0, n)
            oracle = solve_volterra(problem, OracleConfig(grid=grid))
            closed = closed_form_curve(problem, grid)
            mask = oracle_mask(grid)
            errs[n] = float(
                np.abs(oracle.values[mask] - closed.values[mask]).max()
            )
        assert errs[2000] <= 1e-4, f"nu={nu}: err {errs[2000]:.2e}"
        order = math.log2(errs[1000] / errs[2000])
        assert order >= 1.0, f"nu={nu}: order {order:.2f}"
        notes.append(f"nu={nu}: err {errs[2000]:.1e}, order {order:.2f}")
    elapsed = watch.check()
    record(f"[criterion 4] PASS relaxation oracle: {'; '.join(notes)}, {elapsed:.1f}s")


def test_criterion_5_oracle_agreement_power_source():
    watch = Stopwatch(180.0)
    n = 2000
    grid = UniformGrid.from_span(0.0, 5.0, n)
    mask = oracle_mask(grid)
    weights = {
        nu: build_weights(grid, nu) for nu in (0.5, 0.75, 1.0)
    }
    plain_oracles = {
        nu: solve_volterra(
            KineticProblem(nu=nu, c=1.0, N_a=1.0), OracleConfig(grid=grid),
            weights=weights[nu],
        )
        for nu in (0.5, 0.75, 1.0)
    }
    notes = []
    for nu in (0.5, 0.75, 1.0):
        for mu in (0.5, 1.0, 1.5):
            problem = KineticProblem(nu=nu, c=1.0, N_a=1.0, mu=mu)
            oracle = solve_volterra(
                problem, OracleConfig(grid=grid), weights=weights[nu]
            )
            closed = closed_form_curve(problem, grid)
            err = float(np.abs(oracle.values[mask] - closed.values[mask]).max())
            assert err <= 5e-4, f"nu={nu} mu={mu}: err {err:.2e}"
            if mu == 1.0:
                collapse = float(
                    np.abs(
                        oracle.values[1:] - plain_oracles[nu].values[1:]
                    ).max()
                )
                assert collapse <= 1e-12, f"nu={nu}: mu=1 collapse {collapse:.2e}"
            notes.append(f"({nu},{mu}): {err:.1e}")
    elapsed = watch.check()
    record(f"[criterion 5] PASS power-source oracle: {'; '.join(notes)}, "
           f"{elapsed:.1f}s")


def test_criterion_6_residual_substitution():
    watch = Stopwatch(60.0)
    problem = KineticProblem(nu=0.5, c=1.0, N_a=1.0)
    sizes = (250, 500, 1000, 2000)
    window = 10 * (5.0 / sizes[0])  # fixed interior window across levels

    residuals = []
    curves = {}
    for n in sizes:
        grid = UniformGrid.from_span(0.0, 5.0, n)
        curve = closed_form_curve(problem, grid)
        curves[n] = curve
        res = integral_equation_residual(problem, curve)
        t = grid.times()
        residuals.append(float(np.abs(res.values[t >= window]).max()))
    orders = [
        math.log2(residuals[i] / residuals[i + 1]) for i in range(len(sizes) - 1)
    ]
    assert all(r1 > r2 for r1, r2 in zip(residuals, residuals[1:]))
    assert all(o >= 1.0 for o in orders), f"orders {orders}"

    # test power: a 1% perturbation must leave a residual plateau ~ 0.01 N_a
    grid = curves[1000].grid
    perturbed = SolutionCurve(
        problem=problem,
        grid=grid,
        values=1.01 * curves[1000].values,
        method_tag="closed_form",
    )
    res = integral_equation_residual(problem, perturbed)
    floor = float(np.abs(res.values).max())
    assert floor >= 1e-3 * problem.N_a

    diff_notes = []
    for nu in (0.3, 0.5, 0.7):
        p = KineticProblem(nu=nu, c=1.0, N_a=1.0)
        maxima = []
        for n in (250, 500, 1000):
            grid = UniformGrid.from_span(0.0, 5.0, n)
            curve = closed_form_curve(p, grid)
            res = differential_equation_residual(p, curve)
            t = grid.times()
            maxima.append(float(np.abs(res.values[t >= window]).max()))
        assert maxima[0] > maxima[1] > maxima[2], f"nu={nu}: {maxima}"
        diff_notes.append(f"nu={nu}: {maxima[0]:.1e}->{maxima[2]:.1e}")

    elapsed = watch.check()
    record(
        "[criterion 6] PASS residuals: integral orders "
        f"{['%.2f' % o for o in orders]}, perturbation floor {floor:.2e}, "
        f"differential {'; '.join(diff_notes)}, {elapsed:.1f}s"
    )


def test_criterion_7_neumann_convergence():
    watch = Stopwatch(1.0)
    worst = 0.0
    for nu in (0.5, 0.75, 1.0):
        problem = KineticProblem(nu=nu, c=1.0, N_a=1.0)
        for t in np.linspace(0.1, 1.0, 10):  # c^nu (t-a)^nu <= 1
            closed = relaxation_solution(problem, t)
            gap = abs(neumann_partial_sum(problem, t, 30) - closed)
            worst = max(worst, gap)
            # alternating-series envelope where the terms decrease
            for M in range(1, 12):
                coef, expo = neumann_term(problem, M + 1)
                bound = abs(coef) * t**expo
                prev_coef, prev_expo = neumann_term(problem, M)
                if bound < abs(prev_coef) * t**prev_expo:
                    assert (
                        abs(neumann_partial_sum(problem, t, M) - closed)
                        <= bound + 1e-15
                    )
    assert worst <= 1e-10
    elapsed = watch.check()
    record(f"[criterion 7] PASS Neumann: |S_30 - closed| worst {worst:.2e} "
           f"(tol 1e-10), {elapsed:.2f}s")


def test_criterion_8_reduction_chain():
    watch = Stopwatch(1.0)
    nu, c, N0 = 0.6, 1.0, 1.0
    plain = KineticProblem(nu=nu, c=c, N_a=N0)
    with_mu = KineticProblem(nu=nu, c=c, N_a=N0, mu=1.0)
    worst = 0.0
    exact_origin = True
    for i in range(1000):
        t = (i + 1) * 5.0 / 1000
        v1 = relaxation_solution(plain, t)
        v2 = power_source_solution(with_mu, t)
        v3 = relaxation_solution_origin(nu, c, N0, t)
        v4 = power_source_solution_origin(nu, 1.0, c, N0, t)
        worst = max(worst, abs(v2 - v1), abs(v3 - v1), abs(v4 - v2))
        exact_origin = exact_origin and (v3 == v1) and (v4 == v2)
    assert worst <= 1e-14
    assert exact_origin  # the origin forms are definitional delegations
    elapsed = watch.check()
    record(f"[criterion 8] PASS reduction chain: worst gap {worst:.2e} "
           f"(tol 1e-14), origin forms bitwise, {elapsed:.2f}s")


def test_criterion_9_cli_end_to_end(tmp_path):
    watch = Stopwatch(120.0)
    args = [
        sys.executable, "-m", "fracrelax", "verify",
        "--nu", "0.5", "--c", "1", "--a", "0", "--T", "5",
        "--n", "250", "--levels", "3",
    ]
    f1, f2 = tmp_path / "run1.csv", tmp_path / "run2.csv"
    r1 = subprocess.run([*args, "--out", str(f1)], capture_output=True, text=True)
    assert r1.returncode == 0, r1.stdout + r1.stderr
    r2 = subprocess.run([*args, "--out", str(f2)], capture_output=True, text=True)
    assert r2.returncode == 0
    b1, b2 = f1.read_bytes(), f2.read_bytes()
    assert b1 == b2 and len(b1) > 0
    elapsed = watch.check()
    record(f"[criterion 9] PASS CLI verify: exit 0, report byte-identical "
           f"({len(b1)} bytes), {elapsed:.1f}s")
