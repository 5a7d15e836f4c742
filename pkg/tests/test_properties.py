import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qpfbounds.bounds import h_lower_bound, h_upper_bound, qpf_lower_bound, qpf_upper_bound
from qpfbounds.kernel import h_exact, h_perturbed, lemma_p3a_sum
from qpfbounds.number_theory import cf_postprocess, convergents, residue_distribution, residues_bruteforce
from qpfbounds.probability import CircuitParams, success_prob_exact

unit = st.floats(0.0, 1.0, allow_nan=False)


@given(x=unit, L=st.integers(2, 300), data=st.data())
def test_symmetry(x, L, data):
    M = data.draw(st.integers(1, L))
    a, b = h_exact(x, M, L), h_exact(1.0 - x, M, L)
    assert math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-9 * L * L)


@given(x=unit, L=st.integers(3, 500), data=st.data())
def test_h_bounds(x, L, data):
    M = data.draw(st.integers(1, (L - 1) // 2))
    h = h_exact(x, M, L)
    slack = 1e-9 * L * L
    assert h_lower_bound(x, M, L) <= h + slack
    assert h <= h_upper_bound(x, M, L) + slack


@given(x1=st.floats(0.0, 0.5), x2=st.floats(0.0, 0.5), L=st.integers(4, 200), data=st.data())
def test_monotone_on_half(x1, x2, L, data):
    M = data.draw(st.integers(1, L // 2))
    lo, hi = sorted((x1, x2))
    assert h_exact(hi, M, L) <= h_exact(lo, M, L) + 1e-9 * L * L


@given(x=unit, L=st.integers(8, 400), eps=st.floats(-0.05, 0.0), data=st.data())
def test_perturbed_positive(x, L, eps, data):
    M = data.draw(st.integers(1, int(L / (2 * (1 + abs(eps))))))
    assert h_perturbed(x, M, L, eps) >= 0.0


@given(a=st.integers(1, 20), b=st.integers(1, 20), c=st.integers(1, 20), x=st.floats(0.0, 0.99))
def test_lemma_p3a(a, b, c, x):
    g = math.gcd(a, b)
    rho = g * math.gcd(a // g, c)
    assume(rho <= b)
    assert math.isclose(lemma_p3a_sum(a, b, c, x), b * c * c / rho, rel_tol=1e-8)


@given(num=st.integers(0, 1 << 60), den=st.integers(1, 1 << 60))
def test_convergents_last(num, den):
    last = list(convergents(num, den))[-1]
    assert last.numerator * den == num * last.denominator


@given(r=st.integers(2, 600), extra=st.integers(0, 6))
def test_residue_counts(r, extra):
    n = r.bit_length() + extra
    dist = residue_distribution(r, n)
    seen = {}
    for f in residues_bruteforce(r, n):
        j = f * dist.p
        seen[int(j)] = seen.get(int(j), 0) + 1
    assert seen == {j: c for j, c in dist.frequency.items() if c}


@settings(max_examples=60, deadline=None)
@given(m=st.integers(4, 10), q=st.integers(1, 5), data=st.data())
def test_sandwich(m, q, data):
    r = data.draw(st.integers(3, (1 << m) - 1))
    assume(r & (r - 1))
    p = CircuitParams.build(m, q, r)
    M = data.draw(st.integers(2, min(p.max_tolerance, 1 << (q + 3))))
    exact = success_prob_exact(p, M)
    assert qpf_lower_bound(p, M) <= exact + 1e-9
    assert exact <= qpf_upper_bound(p, M) + 1e-9


@settings(max_examples=200)
@given(m=st.integers(3, 7), q=st.integers(0, 3), data=st.data())
def test_cf_window_equivalence(m, q, data):
    r = data.draw(st.integers(2, (1 << m) - 1))
    n = 2 * m + q + 1
    ell = data.draw(st.integers(0, (1 << n) - 1))
    N = 1 << n
    in_window = any(abs(ell * r - k * N) <= r << q for k in range(1, r))
    assert (cf_postprocess(ell, n, m, r) is not None) == in_window
