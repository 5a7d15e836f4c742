"""Closed-form bounds on window sums and on the period-finding success probability.

All values are returned unclamped; some prior-work bounds go negative or
decrease with M and that behaviour is part of the comparison.
"""

import math
from dataclasses import dataclass, asdict
from typing import Optional

import numpy as np

from .errors import DomainError
from .kernel import h_exact
from .probability import CircuitParams, check_tolerance, success_prob_exact

__all__ = [
    "BoundReport",
    "h_lower_bound",
    "h_upper_bound",
    "perturbation_envelope",
    "leading_term",
    "qpf_lower_bound",
    "qpf_lower_bound_simple",
    "qpf_upper_bound",
    "ekera_bound",
    "ekera_bound_with_smoothness",
    "qpe_lower_bound",
    "qpe_exact",
    "bound_report",
]

PI2 = math.pi ** 2


@dataclass
class BoundReport:
    r: int
    M: int
    lower: float
    exact: float
    upper: float
    ekera: float
    mc_estimate: Optional[float] = None
    mc_stderr: Optional[float] = None

    def sandwich_ok(self, slack: float = 1e-9) -> bool:
        return self.lower <= self.exact + slack and self.exact <= self.upper + slack

    def to_dict(self) -> dict:
        return asdict(self)


def _check_h_bound_args(M, L):
    if int(L) != L or L < 2:
        raise DomainError(f"L must be an integer >= 2, got {L!r}")
    if int(M) != M or M < 1 or not M < L / 2:
        raise DomainError(f"need 1 <= M < L/2, got M={M!r}, L={L!r}")


def _endpoint_fill(x, values, L):
    xa = np.asarray(x, dtype=np.float64)
    out = np.where((xa == 0.0) | (xa == 1.0), float(L) * L, values)
    return float(out) if np.ndim(x) == 0 else out


def h_lower_bound(x, M, L):
    """Lower bound on H_L(x; M), the better of a flat and an x-dependent estimate."""
    _check_h_bound_args(M, L)
    s2 = np.sin(np.pi * np.asarray(x, dtype=np.float64)) ** 2
    flat = 4.0 / (PI2 * (2 * M - 1))
    if M > 1:
        shaped = s2 * (2 * M - 1) / (PI2 * M * (M - 1))
        loss = np.minimum(flat, shaped)
    else:
        loss = np.full_like(s2, flat)
    return _endpoint_fill(x, L * L * (1.0 - loss), L)


def h_upper_bound(x, M, L):
    """Upper bound on H_L(x; M)."""
    _check_h_bound_args(M, L)
    s2 = np.sin(np.pi * np.asarray(x, dtype=np.float64)) ** 2
    val = L * L * (1.0 - 4.0 * s2 / (PI2 * (2 * M + 1))) + 4.0 * L * s2 / PI2
    return _endpoint_fill(x, val, L)


def perturbation_envelope(M, L, epsilon):
    """Bound on |H_L(x; M, eps) - H_L(x; M)|, uniform in x."""
    e = abs(epsilon)
    if e > 0.5 or int(M) != M or M < 1 or M > L / (2.0 * (1.0 + e)):
        raise DomainError(f"need |eps| <= 1/2 and 1 <= M <= L/(2(1+|eps|)), got M={M!r}, L={L!r}, eps={epsilon!r}")
    return 2.0 * math.pi * L * L * e * (1.0 / 3.0 + (math.log2(M) + PI2 / 6.0) / (4.0 * (1.0 - e) ** 3))


def leading_term(r, M):
    """1 - 1/r - (M - 1/2) / (pi^2 M (M - 1)): the tight part of both bounds."""
    return 1.0 - 1.0 / r - (M - 0.5) / (PI2 * M * (M - 1))


def _check_qpf(params: CircuitParams, M):
    if params.m < 4:
        raise DomainError(f"period-finding bounds need m >= 4, got m={params.m}")
    return check_tolerance(params, M)


def qpf_lower_bound(params: CircuitParams, M) -> float:
    M = _check_qpf(params, M)
    return leading_term(params.r, M) - params.r * (2.0 * math.log2(M) + 7.0) / params.two_n


def qpf_lower_bound_simple(params: CircuitParams, M) -> float:
    """Weaker lower bound from the flat H estimate alone, with the same error term."""
    M = _check_qpf(params, M)
    r = params.r
    head = (r * params.L / params.two_n) * (1.0 - 1.0 / r) * (1.0 - 4.0 / (PI2 * (2 * M - 1)))
    return head - r * (2.0 * math.log2(M) + 7.0) / params.two_n


def qpf_upper_bound(params: CircuitParams, M) -> float:
    """Upper bound on the success probability.

    Covers r with rL != 2^n. For r = 2^s every outcome sits exactly on a
    peak and the true value 1 - 1/r exceeds this bound.
    """
    M = _check_qpf(params, M)
    r = params.r
    kappa = 1.0 + (M - 0.25) / (M * (M - 1))
    head = 1.0 - 1.0 / r - (M - 0.5) / (kappa * PI2 * M * (M - 1))
    tail = 2.0 * math.log2(M) + 7.0 + 2.0 / PI2 + 2.0 ** -(params.m + params.q + 1)
    return head + r * tail / params.two_n


def _ekera_circuit(r, B, log2_size):
    head = (r - 1) / r * (1.0 - (2.0 / B + 1.0 / B ** 2 + 1.0 / B ** 3) / PI2)
    return head - PI2 * (r - 1) * (2 * B + 1) / 2.0 ** log2_size


def ekera_bound(params: CircuitParams, M) -> float:
    """Prior-work single-run bound with B = M, the l = 0 peak removed."""
    if int(M) != M or M < 1:
        raise DomainError(f"M must be a positive integer, got {M!r}")
    return _ekera_circuit(params.r, int(M), params.n)


def ekera_bound_with_smoothness(r, m, ell, B, c) -> float:
    """Prior-work bound including the probability that r/r_hat is cm-smooth.

    ``ell`` is the extra register width, so the register has m + ell qubits.
    The smoothness factor uses the natural logarithm.
    """
    if int(B) != B or B < 1:
        raise DomainError(f"B must be a positive integer, got {B!r}")
    if not c >= 1:
        raise DomainError(f"c must be >= 1, got {c!r}")
    if not (1 << m) > r or not (1 << (m + ell)) > r * r:
        raise DomainError(f"need 2^m > r and 2^(m+ell) > r^2 (r={r}, m={m}, ell={ell})")
    smooth = 1.0 - 1.0 / (c * math.log(c * m)) - 1.0 / r
    return _ekera_circuit(r, int(B), m + ell) * smooth


def qpe_lower_bound(B, t) -> float:
    """Phase-estimation bound 1 - 4/(pi^2 (2B - 1)) for integer tolerance B."""
    if int(t) != t or t < 2:
        raise DomainError(f"t must be an integer >= 2, got {t!r}")
    if int(B) != B or not 1 <= B < (1 << (t - 1)):
        raise DomainError(f"need 1 <= B < 2^(t-1), got B={B!r}, t={t!r}")
    return 1.0 - 4.0 / (PI2 * (2 * B - 1))


def qpe_exact(x, B, t):
    """Exact phase-estimation success mass H_{2^t}(x; B) / 2^(2t)."""
    qpe_lower_bound(B, t)
    size = 1 << t
    return h_exact(x, int(B), size) / float(size) ** 2


def bound_report(params: CircuitParams, M, mc_estimate=None, mc_stderr=None) -> BoundReport:
    return BoundReport(
        r=params.r,
        M=int(M),
        lower=qpf_lower_bound(params, M),
        exact=success_prob_exact(params, M),
        upper=qpf_upper_bound(params, M),
        ekera=ekera_bound(params, M),
        mc_estimate=mc_estimate,
        mc_stderr=mc_stderr,
    )
