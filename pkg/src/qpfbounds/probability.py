"""Measurement distribution and exact success probability of period finding."""

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import CapacityError, DomainError, OverlapError
from .kernel import h_perturbed
from .number_theory import OddDyadicSplit, split_odd_dyadic

__all__ = [
    "CircuitParams",
    "check_tolerance",
    "measure_prob",
    "measure_prob_array",
    "success_windows",
    "success_prob_bruteforce",
    "success_prob_exact",
    "phi_term",
    "BRUTEFORCE_MAX_N",
]

BRUTEFORCE_MAX_N = 28
_ARRAY_MAX_N = 32


@dataclass(frozen=True)
class CircuitParams:
    """One period-finding instance.

    ``n = 2m + q + 1`` is the upper-register width, ``L = floor(2^n / r)``
    and ``epsilon = rL/2^n - 1``, which lies in (-r/2^n, 0].
    """

    m: int
    q: int
    n: int
    r: int
    L: int
    epsilon: float
    split: OddDyadicSplit
    tau: int

    @classmethod
    def build(cls, m: int, q: int, r: int) -> "CircuitParams":
        if int(m) != m or m < 1:
            raise DomainError(f"m must be a positive integer, got {m!r}")
        if int(q) != q or q < 0:
            raise DomainError(f"q must be a non-negative integer, got {q!r}")
        m, q = int(m), int(q)
        if int(r) != r or not 2 <= r <= (1 << m) - 1:
            raise DomainError(f"r must be an integer in [2, 2^m - 1] = [2, {(1 << m) - 1}], got {r!r}")
        r = int(r)
        n = 2 * m + q + 1
        two_n = 1 << n
        L = two_n // r
        # exact integer numerator, single rounding
        epsilon = (r * L - two_n) / two_n
        split = split_odd_dyadic(r)
        return cls(m=m, q=q, n=n, r=r, L=L, epsilon=epsilon, split=split, tau=split.tau)

    @property
    def two_n(self) -> int:
        return 1 << self.n

    @property
    def max_tolerance(self) -> int:
        """Largest admissible tolerance, floor(L / (2(1+|eps|)))."""
        return int(math.floor(self.L / (2.0 * (1.0 + abs(self.epsilon)))))


def check_tolerance(params: CircuitParams, M: int) -> int:
    if int(M) != M or not 2 <= M <= params.max_tolerance:
        raise DomainError(
            f"tolerance M must be an integer in [2, {params.max_tolerance}] "
            f"(floor(L/(2(1+|eps|))) for r={params.r}, n={params.n}), got {M!r}"
        )
    return int(M)


def measure_prob(ell: int, params: CircuitParams) -> float:
    """Probability of measuring ``ell`` in the upper register.

    Both sine arguments are reduced exactly in integer arithmetic before
    conversion to floating point, so the result is accurate at and around
    the peak centres. Where sin(pi ell r / 2^n) = 0 the limit L/2^n is returned.
    """
    N = params.two_n
    if int(ell) != ell or not 0 <= ell < N:
        raise DomainError(f"ell must be in [0, 2^n - 1], got {ell!r}")
    L = params.L
    a = (int(ell) * params.r) % N
    if a == 0:
        return L / N
    b = (a * L) % N
    if a > N // 2:
        a -= N
    if b > N // 2:
        b -= N
    num = math.sin(math.pi * (b / N)) ** 2
    den = math.sin(math.pi * (a / N)) ** 2
    return num / den / (N * L)


def measure_prob_array(ell, params: CircuitParams) -> np.ndarray:
    """Vectorised ``measure_prob`` for n <= 32."""
    if params.n > _ARRAY_MAX_N:
        raise CapacityError(f"array evaluation supports n <= {_ARRAY_MAX_N}, got n={params.n}")
    ell = np.asarray(ell, dtype=np.int64)
    if ell.size and (ell.min() < 0 or ell.max() >= params.two_n):
        raise DomainError("ell must be in [0, 2^n - 1]")
    return _backend.measure_prob_array(ell, params.n, params.r, params.L)


def success_windows(params: CircuitParams, M: int) -> list[tuple[int, int]]:
    """Inclusive ell-ranges counted as success, one per k = 1..r-1.

    A peak with integer centre (zero residue) gets the symmetric window
    [u_k - M, u_k + M]; otherwise [u_k - M + 1, u_k + M].
    """
    N, r = params.two_n, params.r
    windows = []
    for k in range(1, r):
        u_k, rem = divmod(k * N, r)
        lo = u_k - M if rem == 0 else u_k - M + 1
        windows.append((lo, u_k + M))
    for (lo0, hi0), (lo1, hi1) in zip(windows, windows[1:]):
        if lo1 <= hi0:
            raise OverlapError(f"success windows [{lo0},{hi0}] and [{lo1},{hi1}] overlap")
    if windows and (windows[0][0] < 0 or windows[-1][1] >= N):
        raise OverlapError("success window leaves [0, 2^n - 1]")
    return windows


def success_prob_bruteforce(params: CircuitParams, M: int) -> float:
    """Success probability by summing the measurement distribution over every success window."""
    M = check_tolerance(params, M)
    if params.n > BRUTEFORCE_MAX_N:
        raise CapacityError(f"brute-force enumeration supports n <= {BRUTEFORCE_MAX_N}, got n={params.n}")
    windows = success_windows(params, M)
    ell = np.concatenate([np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in windows])
    probs = _backend.measure_prob_array(ell, params.n, params.r, params.L)
    return math.fsum(probs.tolist())


def phi_term(params: CircuitParams, M: int) -> float:
    """Mass of the one extra boundary state per zero-residue peak."""
    eps = params.epsilon
    if params.tau == 0 or eps == 0.0:
        return 0.0
    num = math.sin(math.pi * M * eps) ** 2
    den = math.sin(math.pi * M * (1.0 + eps) / params.L) ** 2
    return params.tau / (params.two_n * params.L) * num / den


def success_prob_exact(params: CircuitParams, M: int) -> float:
    """Closed-form success probability from the residue table.

    Sums 2^s - [j == 0] copies of H_L(j/p; M, eps) over j = 0..p-1, divides
    by 2^n L, then adds the boundary term ``phi_term``.
    """
    M = check_tolerance(params, M)
    p, s = params.split.p, params.split.s
    x = np.arange(p, dtype=np.float64) / p
    h = h_perturbed(x, M, params.L, params.epsilon)
    weights = np.full(p, float(1 << s))
    weights[0] -= 1.0
    total = math.fsum((weights * h).tolist())
    return total / (params.two_n * params.L) + phi_term(params, M)
