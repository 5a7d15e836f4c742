"""Numerical verification of the structural facts the bounds rely on.

Each check sweeps a grid, reduces it to one "worst violation" number and
passes when that number is at most the check's tolerance. Tolerances can be
overridden per check (or globally) to exercise the failure path.
"""

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _backend
from .bounds import (
    ekera_bound,
    h_lower_bound,
    h_upper_bound,
    leading_term,
    perturbation_envelope,
    qpe_exact,
    qpe_lower_bound,
    qpf_lower_bound,
    qpf_upper_bound,
)
from .kernel import f_term, h_exact, h_perturbed, lemma_p3a_sum, max_perturbed_window
from .number_theory import cf_postprocess, convergents, residue_distribution
from .probability import (
    CircuitParams,
    measure_prob_array,
    phi_term,
    success_prob_bruteforce,
    success_prob_exact,
)
from .simulator import SimulationConfig, build_sampler, run_simulation, simulate_trials

__all__ = ["Check", "CheckResult", "CHECKS", "SCOPES", "run_checks", "TABLE1_R", "TABLE1_SHIFTS"]

SCOPES = ("kernel", "number_theory", "probability", "bounds", "simulator")
TABLE1_R = (3, 15, 63, 255)
TABLE1_SHIFTS = (0, 3)


@dataclass
class CheckResult:
    name: str
    scope: str
    grid_size: int
    worst: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class Check:
    name: str
    scope: str
    tolerance: float
    fn: Callable[[], tuple[int, float]]
    description: str = ""

    def run(self, tolerance: Optional[float] = None) -> CheckResult:
        tol = self.tolerance if tolerance is None else tolerance
        size, worst = self.fn()
        return CheckResult(self.name, self.scope, size, float(worst), tol, bool(worst <= tol))


# -- kernel ---------------------------------------------------------------


def _symmetry():
    x = np.linspace(0.0, 1.0, 401)
    worst, size = 0.0, 0
    for L in (5, 8, 16, 31, 32, 100):
        for M in range(1, L + 1):
            h = h_exact(x, M, L)
            worst = max(worst, float(np.max(np.abs(h - h[::-1]))) / L**2)
            size += x.size
        for eps in (-1 / 32, -2.0**-10, 2.0**-10, 1 / 32):
            for M in range(1, max_perturbed_window(L, eps) + 1):
                h = h_perturbed(x, M, L, eps)
                worst = max(worst, float(np.max(np.abs(h - h[::-1]))) / L**2)
                size += x.size
    return size, worst


def _f_matrix(x, L):
    z = np.arange(L, dtype=np.float64)[:, None]
    return _backend.sinc_ratio_array(z + x, L) + _backend.sinc_ratio_array(z + 1.0 - x, L)


def _monotonicity():
    x = np.linspace(0.0, 0.5, 1001)
    worst, size = -np.inf, 0
    for L in (5, 8, 16, 31, 32):
        H = np.cumsum(_f_matrix(x, L), axis=0)
        steps = np.diff(H, axis=1) / L**2
        half = L // 2
        # rows 0..half-1 are M = 1..floor(L/2): non-increasing
        worst = max(worst, float(steps[:half].max()), float((-steps[half:]).max()))
        size += H.size
    return size, worst


def _closed_forms():
    x = np.linspace(0.0, 1.0, 501)
    worst, size = 0.0, 0
    for L in range(2, 65):
        h = h_exact(x, L // 2, L)
        if L % 2 == 0:
            ref = np.full_like(x, float(L * L))
        else:
            ref = L * L - np.sin(np.pi * x) ** 2 / np.cos(np.pi * (0.5 - x) / L) ** 2
        worst = max(worst, float(np.max(np.abs(h - ref))) / L**2)
        size += x.size
    return size, worst


def _f_increasing():
    x = np.linspace(0.01, 0.49, 481)
    step = 1e-4
    worst, size = -np.inf, 0
    for L in (8, 16, 31):
        for z in range(1, L - 1):
            fd = (f_term(x + step, z, L) - f_term(x - step, z, L)) / (2 * step)
            worst = max(worst, float(np.max(-fd)))
            size += x.size
    return size, worst


def _h_bounds_sandwich():
    x = np.concatenate([[0.0], np.linspace(0.0005, 0.9995, 1000), [1.0]])
    worst, size = -np.inf, 0
    for L in (5, 16, 31, 64, 257, 1024):
        for M in range(1, (L + 1) // 2):
            if not M < L / 2:
                continue
            h = h_exact(x, M, L)
            lo = h_lower_bound(x, M, L)
            hi = h_upper_bound(x, M, L)
            worst = max(worst, float(np.max(lo - h)) / L**2, float(np.max(h - hi)) / L**2)
            size += x.size
    return size, worst


def _perturbation():
    x = np.linspace(0.0, 1.0, 201)
    worst, size = -np.inf, 0
    for L in (32, 64, 256, 1024):
        for eps in (2.0**-20, -(2.0**-20), 2.0**-10, -(2.0**-10), 1 / 32, -1 / 32):
            top = max_perturbed_window(L, eps)
            Ms = sorted({1, 2, 3, 4, 8, top // 2, top} - {0})
            for M in Ms:
                gap = np.abs(h_perturbed(x, M, L, eps) - h_exact(x, M, L))
                worst = max(worst, float(np.max(gap - perturbation_envelope(M, L, eps))) / L**2)
                size += x.size
    return size, worst


def _lemma_p3a():
    worst, size = 0.0, 0
    for a in range(1, 13):
        for b in range(1, 13):
            for c in range(1, 13):
                g = math.gcd(a, b)
                rho = g * math.gcd(a // g, c)
                if rho > b:
                    continue
                target = b * c * c / rho
                for x in (0.0, 0.25, 0.5, 0.9):
                    worst = max(worst, abs(lemma_p3a_sum(a, b, c, x) - target) / target)
                    size += 1
    return size, worst


def _digamma():
    N = 10**6
    n = np.arange(N, dtype=np.float64)
    xs = np.linspace(0.02, 0.98, 49)
    tail = 2.0 / (N - 1)
    worst = -np.inf
    for x in xs:
        exact = np.pi**2 / np.sin(np.pi * x) ** 2
        partial = np.sum(1.0 / (n + x) ** 2 + 1.0 / (n + 1.0 - x) ** 2)
        worst = max(worst, abs(exact - partial) - tail)
    return xs.size * N, worst


def _mittag_leffler():
    N = 10**6
    n = np.arange(-N, N + 1, dtype=np.float64)
    xs = np.linspace(0.02, 0.98, 49)
    tail = 2.0 / (N - 1)
    worst = -np.inf
    for x in xs:
        exact = np.pi**2 / np.sin(np.pi * x) ** 2
        worst = max(worst, abs(exact - np.sum(1.0 / (n + x) ** 2)) - tail)
    return xs.size * n.size, worst


# -- number theory --------------------------------------------------------


def _residue_table():
    mismatches, size = 0, 0
    for r in range(2, 4097):
        n = 2 * r.bit_length() + 6
        dist = residue_distribution(r, n)
        k = np.arange(1, r, dtype=np.int64)
        resid = (k * pow(2, n, r)) % r
        p = dist.p
        # resid / r = j / p  <=>  j = resid * p / r
        scaled = resid * p
        if np.any(scaled % r):
            mismatches += 1
            continue
        hist = np.bincount(scaled // r, minlength=p)
        expected = np.array([dist.frequency[j] for j in range(p)])
        mismatches += int(not np.array_equal(hist, expected))
        # a residue of exactly 1/2 would need 2 * resid == r
        mismatches += int(np.any(2 * resid == r))
        size += r - 1
    return size, mismatches


def _convergent_order():
    rng = np.random.default_rng(7)
    bad, size = 0, 0
    for _ in range(2000):
        den = int(rng.integers(1, 1 << 40))
        num = int(rng.integers(0, den + 1))
        seq = list(convergents(num, den))
        dens = [c.denominator for c in seq]
        bad += int(any(b <= a for a, b in zip(dens[1:], dens[2:])))
        bad += int(len(dens) > 1 and dens[1] < dens[0])
        bad += int(any(math.gcd(c.numerator, c.denominator) != 1 for c in seq))
        g = math.gcd(num, den)
        bad += int((seq[-1].numerator, seq[-1].denominator) != (num // g, den // g))
        size += len(seq)
    return size, bad


def _cf_window():
    mismatches, size = 0, 0
    for m in (4, 5, 6):
        for q in (1, 2, 3):
            n = 2 * m + q + 1
            ell = np.arange(1 << n, dtype=np.int64)
            for r in range(2, 1 << m):
                cf = _backend.cf_batch(ell, n, m, r) > 0
                win = _backend.window_batch(ell, n, r, 1 << q)
                mismatches += int(np.count_nonzero(cf != win))
                size += ell.size
    # the exact big-integer path against the batch kernel
    rng = np.random.default_rng(11)
    for r in (15, 63, 200, 255):
        m, q = 8, 5
        n = 2 * m + q + 1
        ell = rng.integers(0, 1 << n, size=3000)
        fast = _backend.cf_batch(ell, n, m, r)
        for e, d in zip(ell.tolist(), fast.tolist()):
            mismatches += int((cf_postprocess(e, n, m, r) or 0) != d)
        size += ell.size
    return size, mismatches


# -- probability ----------------------------------------------------------


def _oracle():
    worst, size = 0.0, 0
    for q in (3, 5):
        for r in range(2, 256):
            p = CircuitParams.build(8, q, r)
            for M in (1 << q, 1 << (q + 3)):
                worst = max(worst, abs(success_prob_exact(p, M) - success_prob_bruteforce(p, M)))
                size += 1
    return size, worst


def _normalization():
    worst, size = 0.0, 0
    for m, q in ((4, 2), (5, 1), (6, 3), (8, 5)):
        p0 = CircuitParams.build(m, q, 2)
        ell = np.arange(p0.two_n, dtype=np.int64)
        for r in sorted({2, 3, 5, 7, 12, (1 << m) - 1, (1 << (m - 1)) + 1}):
            p = CircuitParams.build(m, q, r)
            total = math.fsum(measure_prob_array(ell, p).tolist())
            worst = max(worst, abs(total - 1.0))
            size += ell.size
    return size, worst


def _phi_bound():
    worst, size = -np.inf, 0
    for q in (3, 5):
        for r in range(2, 256):
            p = CircuitParams.build(8, q, r)
            for M in (1 << q, 1 << (q + 3)):
                phi = phi_term(p, M)
                cap = min((r / p.two_n) ** 2, 2.0 ** (-2 * (p.m + q + 1)))
                worst = max(worst, -phi, phi - cap)
                size += 1
    return size, worst


def _power_of_two():
    worst, size = 0.0, 0
    for q in (3, 5):
        for s in range(1, 8):
            r = 1 << s
            p = CircuitParams.build(8, q, r)
            for M in (2, 1 << q, 1 << (q + 3)):
                worst = max(worst, abs(success_prob_exact(p, M) - (1.0 - 1.0 / r)))
                size += 1
    return size, worst


# -- bounds ---------------------------------------------------------------


def random_instances(count=500, seed=2024):
    """Reproducible (m, q, r, M) instances with m in [4, 12].

    r = 2^s is skipped: there rL = 2^n, every peak is exact and the success
    probability is 1 - 1/r, which the upper bound does not cover.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        m = int(rng.integers(4, 13))
        q = int(rng.choice([1, 3, 5, 7]))
        r = int(rng.integers(3, 1 << m))
        if r & (r - 1) == 0:
            continue
        p = CircuitParams.build(m, q, r)
        top = min(p.max_tolerance, 1 << (q + 3))
        if top < 2:
            continue
        M = int(rng.choice([1 << q, int(rng.integers(2, top + 1))]))
        out.append((m, q, r, min(M, top)))
    return out


def _sandwich_random():
    worst = -np.inf
    cells = random_instances()
    for m, q, r, M in cells:
        p = CircuitParams.build(m, q, r)
        exact = success_prob_exact(p, M)
        worst = max(worst, qpf_lower_bound(p, M) - exact, exact - qpf_upper_bound(p, M))
    return len(cells), worst


def _lower_power_of_two():
    worst, size = -np.inf, 0
    for m in (4, 8, 12):
        for q in (1, 3, 5):
            for s in range(1, m):
                p = CircuitParams.build(m, q, 1 << s)
                for M in sorted({2, 1 << q, min(1 << (q + 3), p.max_tolerance)}):
                    if M < 2:
                        continue
                    worst = max(worst, qpf_lower_bound(p, M) - success_prob_exact(p, M))
                    size += 1
    return size, worst


def _sandwich_table():
    worst, size = -np.inf, 0
    for r in TABLE1_R:
        p = CircuitParams.build(8, 5, r)
        for shift in TABLE1_SHIFTS:
            M = 1 << (5 + shift)
            exact = success_prob_exact(p, M)
            worst = max(worst, qpf_lower_bound(p, M) - exact, exact - qpf_upper_bound(p, M))
            size += 1
    return size, worst


def _beats_prior():
    worst, size = -np.inf, 0
    for r in TABLE1_R:
        p = CircuitParams.build(8, 5, r)
        for shift in TABLE1_SHIFTS:
            M = 1 << (5 + shift)
            worst = max(worst, ekera_bound(p, M) - qpf_lower_bound(p, M))
            size += 1
    return size, worst


def _leading_monotone():
    M = np.arange(2, 4097, dtype=np.float64)
    worst = -np.inf
    for r in (2, 3, 15, 255, 4095):
        vals = leading_term(r, M)
        worst = max(worst, float(np.max(-np.diff(vals))))
    return 5 * M.size, worst


def _sum_sin():
    worst = 0.0
    for r in range(2, 4097):
        k = np.arange(1, r, dtype=np.float64)
        worst = max(worst, abs(math.fsum((np.sin(np.pi * k / r) ** 2).tolist()) - r / 2))
    return 4095, worst


def _qpe():
    x = np.linspace(0.0, 1.0, 1000)
    worst = -np.inf
    for B in range(1, 9):
        worst = max(worst, float(np.max(qpe_lower_bound(B, 10) - qpe_exact(x, B, 10))))
    worst = max(worst, abs(qpe_lower_bound(2, 10) - (1.0 - 4.0 / (3.0 * np.pi**2))) - 1e-12)
    return 8 * x.size + 1, worst


# -- simulator ------------------------------------------------------------


def _worker_independence():
    p = CircuitParams.build(6, 3, 21)
    sampler = build_sampler(p)
    results = {w: run_simulation(SimulationConfig(p, 40000, seed=99, workers=w), sampler) for w in (1, 4, 8)}
    base = results[1]
    bad = sum(int(res != base) for res in results.values())
    return 3, bad


def _cf_window_audit():
    p = CircuitParams.build(8, 5, 255)
    records = simulate_trials(SimulationConfig(p, 20000, seed=5, workers=2))
    bad = sum(int(rec.success != rec.in_window) for rec in records)
    return len(records), bad


CHECKS = [
    Check("symmetry", "kernel", 1e-10, _symmetry, "H(x) = H(1-x), with and without perturbation"),
    Check("monotonicity", "kernel", 1e-9, _monotonicity, "H non-increasing on [0,1/2] for M <= L/2, else non-decreasing"),
    Check("closed_forms", "kernel", 1e-9, _closed_forms, "H at M = floor(L/2) in closed form"),
    Check("f_term_increasing", "kernel", 1e-8, _f_increasing, "summand increasing in x for 1 <= z <= L-2"),
    Check("h_bounds", "kernel", 1e-12, _h_bounds_sandwich, "lower <= H <= upper, relative to L^2"),
    Check("perturbation_envelope", "kernel", 1e-12, _perturbation, "|H_eps - H| within the envelope"),
    Check("lemma_p3a", "kernel", 1e-9, _lemma_p3a, "sinusoid-ratio sum equals b c^2 / rho"),
    Check("digamma", "kernel", 0.0, _digamma, "reflected inverse-square series vs pi^2/sin^2, past the tail bound"),
    Check("mittag_leffler", "kernel", 0.0, _mittag_leffler, "two-sided inverse-square series vs pi^2/sin^2"),
    Check("residue_distribution", "number_theory", 0.0, _residue_table, "closed-form residue table vs enumeration, r <= 4096"),
    Check("convergents", "number_theory", 0.0, _convergent_order, "convergent denominators increase, lowest terms"),
    Check("cf_window", "number_theory", 0.0, _cf_window, "continued fractions succeed exactly inside the 2^q window"),
    Check("oracle_equivalence", "probability", 1e-10, _oracle, "closed form vs brute-force enumeration"),
    Check("normalization", "probability", 1e-9, _normalization, "measurement distribution sums to 1"),
    Check("phi_bound", "probability", 0.0, _phi_bound, "0 <= phi <= (r/2^n)^2"),
    Check("power_of_two", "probability", 1e-12, _power_of_two, "r = 2^s gives exactly 1 - 1/r"),
    Check("sandwich_table", "bounds", 1e-9, _sandwich_table, "lower <= exact <= upper on the reference table"),
    Check("sandwich_random", "bounds", 1e-9, _sandwich_random, "lower <= exact <= upper on 500 random instances"),
    Check("lower_power_of_two", "bounds", 1e-9, _lower_power_of_two, "lower bound still holds when r = 2^s"),
    Check("beats_prior", "bounds", 0.0, _beats_prior, "new lower bound >= prior-work bound on the reference table"),
    Check("leading_monotone", "bounds", 0.0, _leading_monotone, "leading term increasing in M"),
    Check("sum_sin", "bounds", 1e-9, _sum_sin, "sum of sin^2(pi k / r) = r/2"),
    Check("qpe", "bounds", 0.0, _qpe, "phase-estimation bound below the exact mass"),
    Check("worker_independence", "simulator", 0.0, _worker_independence, "identical results for 1, 4, 8 workers"),
    Check("cf_window_audit", "simulator", 0.0, _cf_window_audit, "per-trial verdicts agree with the window rule"),
]


def run_checks(scope=None, overrides=None, tolerance=None, on_result=None):
    """Run every check in ``scope`` (a name from SCOPES, or None for all)."""
    if scope is not None and scope not in SCOPES:
        raise ValueError(f"unknown scope {scope!r}; choose from {', '.join(SCOPES)}")
    overrides = overrides or {}
    unknown = set(overrides) - {c.name for c in CHECKS}
    if unknown:
        raise ValueError(f"unknown check name(s): {', '.join(sorted(unknown))}")
    results = []
    for check in CHECKS:
        if scope is not None and check.scope != scope:
            continue
        tol = overrides.get(check.name, tolerance)
        res = check.run(tol)
        results.append(res)
        if on_result is not None:
            on_result(res)
    return results
