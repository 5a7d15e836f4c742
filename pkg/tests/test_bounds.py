import math

import numpy as np
import pytest

from qpfbounds.bounds import (
    bound_report,
    ekera_bound,
    ekera_bound_with_smoothness,
    h_lower_bound,
    h_upper_bound,
    leading_term,
    perturbation_envelope,
    qpe_exact,
    qpe_lower_bound,
    qpf_lower_bound,
    qpf_lower_bound_simple,
    qpf_upper_bound,
)
from qpfbounds.errors import DomainError
from qpfbounds.kernel import h_exact, h_perturbed
from qpfbounds.probability import CircuitParams, success_prob_exact


@pytest.mark.parametrize("L", [16, 33, 128])
@pytest.mark.parametrize("M", [1, 2, 5])
def test_h_bounds_bracket(L, M):
    x = np.linspace(0, 1, 301)
    h = h_exact(x, M, L)
    assert np.all(h_lower_bound(x, M, L) <= h + 1e-9 * L * L)
    assert np.all(h <= h_upper_bound(x, M, L) + 1e-9 * L * L)


def test_h_bounds_domain():
    with pytest.raises(DomainError):
        h_lower_bound(0.3, 8, 16)
    with pytest.raises(DomainError):
        h_upper_bound(0.3, 0, 16)


def test_perturbation_envelope_holds():
    x = np.linspace(0, 1, 101)
    L, eps = 64, -1 / 32
    for M in (1, 4, 16, 31):
        gap = np.max(np.abs(h_perturbed(x, M, L, eps) - h_exact(x, M, L)))
        assert gap <= perturbation_envelope(M, L, eps)


def test_perturbation_envelope_zero():
    assert perturbation_envelope(4, 64, 0.0) == 0.0


def test_leading_term_value():
    assert leading_term(3, 32) == pytest.approx(1 - 1 / 3 - 31.5 / (math.pi**2 * 32 * 31), abs=1e-15)


def test_lower_row_value():
    # lower bound at r = 255, M = 2^5 rounds to 0.992
    p = CircuitParams.build(8, 5, 255)
    assert round(qpf_lower_bound(p, 32), 3) == 0.992
    assert round(qpf_upper_bound(p, 32), 3) == 0.994


@pytest.mark.parametrize("r,M,expected", [
    (3, 32, 0.662), (15, 32, 0.925), (63, 32, 0.968), (255, 32, 0.951),
    (3, 256, 0.664), (15, 256, 0.916), (63, 256, 0.909), (255, 256, 0.689),
])
def test_ekera_row(r, M, expected):
    assert abs(ekera_bound(CircuitParams.build(8, 5, r), M) - expected) <= 5e-4


def test_ekera_decreases_with_M():
    p = CircuitParams.build(8, 5, 255)
    assert ekera_bound(p, 256) < ekera_bound(p, 32)


def test_simple_lower_weaker():
    p = CircuitParams.build(8, 5, 63)
    assert qpf_lower_bound_simple(p, 32) <= qpf_lower_bound(p, 32)
    assert qpf_lower_bound_simple(p, 32) <= success_prob_exact(p, 32)


def test_upper_bound_fails_for_powers_of_two():
    # every outcome sits on an exact peak; the true value exceeds the bound
    p = CircuitParams.build(6, 5, 8)
    assert success_prob_exact(p, 32) > qpf_upper_bound(p, 32)
    assert qpf_lower_bound(p, 32) <= success_prob_exact(p, 32)


def test_small_m_rejected():
    p = CircuitParams.build(3, 2, 5)
    with pytest.raises(DomainError):
        qpf_lower_bound(p, 2)


def test_smoothness_factor():
    base = ekera_bound(CircuitParams.build(8, 5, 63), 32)
    val = ekera_bound_with_smoothness(63, 8, 14, 32, 1.0)
    assert val == pytest.approx(base * (1 - 1 / math.log(8) - 1 / 63))
    with pytest.raises(DomainError):
        ekera_bound_with_smoothness(63, 8, 2, 32, 1.0)


def test_qpe_value():
    assert qpe_lower_bound(2, 10) == pytest.approx(1 - 4 / (3 * math.pi**2), abs=1e-12)


@pytest.mark.parametrize("B", range(1, 9))
def test_qpe_below_exact(B):
    x = np.linspace(0, 1, 1000)
    assert np.all(qpe_lower_bound(B, 10) <= qpe_exact(x, B, 10))


def test_qpe_domain():
    with pytest.raises(DomainError):
        qpe_lower_bound(0, 10)
    with pytest.raises(DomainError):
        qpe_lower_bound(512, 10)


def test_report():
    rep = bound_report(CircuitParams.build(8, 5, 15), 32)
    assert rep.sandwich_ok()
    d = rep.to_dict()
    assert set(d) == {"r", "M", "lower", "exact", "upper", "ekera", "mc_estimate", "mc_stderr"}
    assert d["exact"] == pytest.approx(0.93016726663134928, abs=1e-12)
