import math

import numpy as np
import pytest

from qpfbounds.errors import CapacityError, DomainError
from qpfbounds.probability import (
    CircuitParams,
    check_tolerance,
    measure_prob,
    measure_prob_array,
    phi_term,
    success_prob_bruteforce,
    success_prob_exact,
    success_windows,
)

# (m, q, r, M) -> success probability, brute-force sums in mpmath at 30 digits
ORACLE = {
    (8, 5, 3, 32): 0.66350063059012145,
    (8, 5, 15, 32): 0.93016726663134928,
    (8, 5, 63, 32): 0.98096091667094443,
    (8, 5, 255, 32): 0.99291240018996055,
    (8, 5, 3, 256): 0.66627096059809625,
    (8, 5, 255, 256): 0.99568302064834794,
    (4, 2, 3, 4): 0.64173918635929699,
    (5, 1, 12, 2): 0.86673371376089834,
    (6, 3, 40, 8): 0.96235160868748598,
}


def test_build():
    p = CircuitParams.build(8, 5, 15)
    assert p.n == 22
    assert p.L == (1 << 22) // 15
    assert -15 / (1 << 22) < p.epsilon <= 0
    assert (p.split.p, p.split.s, p.tau) == (15, 0, 0)


@pytest.mark.parametrize("args", [(8, 5, 1), (8, 5, 256), (0, 5, 3), (8, -1, 3), (8, 5, 2.5)])
def test_build_rejects(args):
    with pytest.raises(DomainError):
        CircuitParams.build(*args)


def test_tolerance_range():
    p = CircuitParams.build(8, 5, 255)
    assert check_tolerance(p, 2) == 2
    assert check_tolerance(p, p.max_tolerance) == p.max_tolerance
    for M in (1, p.max_tolerance + 1):
        with pytest.raises(DomainError):
            check_tolerance(p, M)


@pytest.mark.parametrize("cell,expected", sorted(ORACLE.items()))
def test_exact_matches_oracle(cell, expected):
    m, q, r, M = cell
    p = CircuitParams.build(m, q, r)
    assert success_prob_exact(p, M) == pytest.approx(expected, abs=1e-12)
    assert success_prob_bruteforce(p, M) == pytest.approx(expected, abs=1e-12)


def test_measure_prob_peak_limit():
    p = CircuitParams.build(4, 2, 4)
    assert measure_prob(0, p) == p.L / p.two_n
    assert measure_prob(p.two_n // 4, p) == p.L / p.two_n


def test_measure_prob_scalar_vs_array():
    p = CircuitParams.build(5, 2, 7)
    ell = np.arange(p.two_n)
    arr = measure_prob_array(ell, p)
    for e in (0, 1, 146, 147, 500, p.two_n - 1):
        assert arr[e] == pytest.approx(measure_prob(e, p), rel=1e-12, abs=1e-300)
    assert math.fsum(arr.tolist()) == pytest.approx(1.0, abs=1e-12)


def test_measure_prob_domain():
    p = CircuitParams.build(4, 1, 3)
    with pytest.raises(DomainError):
        measure_prob(p.two_n, p)


def test_windows_disjoint():
    p = CircuitParams.build(6, 2, 12)
    windows = success_windows(p, 4)
    assert len(windows) == 11
    # k = 3 is an integer centre: symmetric window of 2M + 1 states
    u3 = 3 * p.two_n // 12
    assert (u3 - 4, u3 + 4) in windows
    assert (u3 + u3 // 3 - 3, u3 + u3 // 3 + 4) in windows
    for (_, hi), (lo, _) in zip(windows, windows[1:]):
        assert hi < lo


def test_phi_zero_for_odd_r():
    assert phi_term(CircuitParams.build(8, 5, 63), 32) == 0.0


def test_phi_positive_for_even_r():
    p = CircuitParams.build(8, 5, 12)
    phi = phi_term(p, 32)
    assert 0 < phi <= (12 / p.two_n) ** 2


@pytest.mark.parametrize("r", [2, 4, 32, 128])
def test_power_of_two_exact(r):
    p = CircuitParams.build(8, 3, r)
    assert success_prob_exact(p, 8) == pytest.approx(1 - 1 / r, abs=1e-13)


def test_bruteforce_capacity():
    p = CircuitParams.build(14, 1, 3)
    with pytest.raises(CapacityError):
        success_prob_bruteforce(p, 2)


def test_exact_large_m():
    # n = 2 * 20 + 3 + 1 = 44, still cheap
    p = CircuitParams.build(20, 3, 1_000_003)
    val = success_prob_exact(p, 8)
    assert 0.9 < val < 1.0
