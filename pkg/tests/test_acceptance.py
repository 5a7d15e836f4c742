"""Acceptance gate: each criterion at its stated tolerance.

A one-line PASS/FAIL per criterion is printed in the terminal summary.
"""

import math
import time

import numpy as np
import pytest

from qpfbounds.bounds import ekera_bound, qpe_exact, qpe_lower_bound, qpf_lower_bound, qpf_upper_bound
from qpfbounds.probability import CircuitParams, success_prob_bruteforce, success_prob_exact
from qpfbounds.simulator import SimulationConfig, build_sampler, run_simulation
from qpfbounds.verify import CHECKS, random_instances

R = (3, 15, 63, 255)
M_SMALL, M_LARGE = 1 << 5, 1 << 8
TABLE_TOL = 5e-4

EXACT_ROW = dict(zip([(r, M_SMALL) for r in R] + [(r, M_LARGE) for r in R],
                     [0.664, 0.930, 0.981, 0.993, 0.666, 0.933, 0.984, 0.996]))
UPPER_ROW = dict(zip(EXACT_ROW, [0.664, 0.930, 0.981, 0.994, 0.666, 0.933, 0.984, 0.997]))
LOWER_ROW = dict(zip(EXACT_ROW, [0.664, 0.930, 0.981, 0.992, 0.666, 0.933, 0.984, 0.995]))
EKERA_ROW = dict(zip(EXACT_ROW, [0.662, 0.925, 0.968, 0.951, 0.664, 0.916, 0.909, 0.689]))
CELL_IDS = [f"r{r}-M{M}" for r, M in EXACT_ROW]


def _params(r):
    return CircuitParams.build(8, 5, r)


def _within(value, target):
    # rounding to 3 decimals and comparing is the same as |value - target| <= 5e-4, up to ties
    return abs(value - target) <= TABLE_TOL + 1e-12


@pytest.mark.criterion(1, "exact row of the reference table, < 1 s per cell")
@pytest.mark.parametrize("cell", list(EXACT_ROW), ids=CELL_IDS)
def test_exact_row(cell):
    r, M = cell
    start = time.perf_counter()
    value = success_prob_exact(_params(r), M)
    elapsed = time.perf_counter() - start
    print(f"exact r={r} M={M}: {value:.6f} (table {EXACT_ROW[cell]}) in {elapsed:.3f}s")
    assert _within(value, EXACT_ROW[cell])
    assert elapsed < 1.0


@pytest.mark.criterion(2, "lower and upper rows of the reference table")
@pytest.mark.parametrize("cell", list(UPPER_ROW), ids=CELL_IDS)
def test_upper_row(cell):
    r, M = cell
    value = qpf_upper_bound(_params(r), M)
    print(f"upper r={r} M={M}: {value:.6f} (table {UPPER_ROW[cell]})")
    assert _within(value, UPPER_ROW[cell])


@pytest.mark.criterion(2, "lower and upper rows of the reference table")
@pytest.mark.parametrize("cell", list(LOWER_ROW), ids=CELL_IDS)
def test_lower_row(cell):
    r, M = cell
    value = qpf_lower_bound(_params(r), M)
    print(f"lower r={r} M={M}: {value:.6f} (table {LOWER_ROW[cell]})")
    assert _within(value, LOWER_ROW[cell])


@pytest.mark.criterion(3, "prior-work row, including entries that fall as M grows")
@pytest.mark.parametrize("cell", list(EKERA_ROW), ids=CELL_IDS)
def test_ekera_row(cell):
    r, M = cell
    value = ekera_bound(_params(r), M)
    print(f"ekera r={r} M={M}: {value:.6f} (table {EKERA_ROW[cell]})")
    assert _within(value, EKERA_ROW[cell])


@pytest.mark.criterion(3, "prior-work row, including entries that fall as M grows")
def test_ekera_non_monotone():
    for r in (15, 63, 255):
        assert ekera_bound(_params(r), M_LARGE) < ekera_bound(_params(r), M_SMALL)


@pytest.mark.criterion(4, "closed form equals brute force within 1e-10 on r in [2, 255], < 2 min")
def test_oracle_grid():
    start = time.perf_counter()
    worst = 0.0
    for r in range(2, 256):
        p = _params(r)
        for M in (M_SMALL, M_LARGE):
            worst = max(worst, abs(success_prob_exact(p, M) - success_prob_bruteforce(p, M)))
    elapsed = time.perf_counter() - start
    print(f"oracle grid: worst gap {worst:.3e} in {elapsed:.1f}s")
    assert worst <= 1e-10
    assert elapsed < 120.0


@pytest.mark.criterion(5, "50,000-trial Monte Carlo within 4 stderr of exact, < 1 min per cell")
@pytest.mark.parametrize("cell", list(EXACT_ROW), ids=CELL_IDS)
def test_monte_carlo(cell):
    r, M = cell
    p = _params(r)
    start = time.perf_counter()
    res = run_simulation(SimulationConfig(p, 50000, seed=2024, workers=8, tolerance=M))
    elapsed = time.perf_counter() - start
    exact = success_prob_exact(p, M)
    print(f"simulation r={r} M={M}: {res.estimate:.4f} +- {res.stderr:.4f}, exact {exact:.4f}, {elapsed:.2f}s")
    assert abs(res.estimate - exact) <= 4 * res.stderr
    assert elapsed < 60.0


@pytest.mark.criterion(6, "lower <= exact <= upper (+1e-9) on >= 500 random instances, m in [4, 12]")
def test_sandwich_sweep():
    cells = random_instances(count=500, seed=2024)
    assert len(cells) >= 500
    assert {m for m, *_ in cells} <= set(range(4, 13))
    worst = -math.inf
    for m, q, r, M in cells:
        p = CircuitParams.build(m, q, r)
        exact = success_prob_exact(p, M)
        worst = max(worst, qpf_lower_bound(p, M) - exact, exact - qpf_upper_bound(p, M))
    print(f"sandwich sweep: {len(cells)} instances, worst excess {worst:.3e}")
    assert worst <= 1e-9


_suite_start = {}


@pytest.mark.criterion(7, "lemma suite passes at stated tolerances, < 5 min")
@pytest.mark.parametrize("check", CHECKS, ids=[c.name for c in CHECKS])
def test_lemma_suite(check):
    _suite_start.setdefault("t", time.perf_counter())
    res = check.run()
    print(f"{res.scope}/{res.name}: grid {res.grid_size}, worst {res.worst:.3e}, tol {res.tolerance:.1e}")
    assert res.passed
    assert time.perf_counter() - _suite_start["t"] < 300.0


@pytest.mark.criterion(8, "phase-estimation bound below exact mass, t = 10, B in [1, 8]")
def test_qpe():
    x = np.linspace(0.0, 1.0, 1000)
    for B in range(1, 9):
        assert np.all(qpe_lower_bound(B, 10) <= qpe_exact(x, B, 10))
    assert abs(qpe_lower_bound(2, 10) - (1 - 4 / (3 * math.pi**2))) <= 1e-12


@pytest.mark.criterion(9, "simulation identical for 1, 4 and 8 workers at fixed seed")
@pytest.mark.parametrize("r", [15, 255])
def test_reproducibility(r):
    p = _params(r)
    sampler = build_sampler(p)
    results = [run_simulation(SimulationConfig(p, 50000, seed=77, workers=w), sampler) for w in (1, 4, 8)]
    assert results[0] == results[1] == results[2]
