"""Sinusoid-ratio kernel and the windowed sums built from it.

The basic object is the ratio

    sin^2(pi u) / sin^2(pi u / L),

i.e. the squared modulus of a length-L geometric sum of roots of unity. It
has removable singularities at u = 0 (mod L), where it equals L^2. Windowed
sums of 2M such ratios, evaluated at z + x and z + 1 - x for z < M, give
the (unnormalised) probability mass of one peak within tolerance M.
"""

import math

import numpy as np

from . import _backend
from .errors import DomainError

__all__ = [
    "sinc_ratio",
    "f_term",
    "h_exact",
    "h_perturbed",
    "h_reference",
    "lemma_p3a_sum",
    "max_perturbed_window",
]


def _check_L(L):
    if int(L) != L or L < 2:
        raise DomainError(f"L must be an integer >= 2, got {L!r}")


def _check_x(x):
    xa = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(xa)) or np.any(xa < 0.0) or np.any(xa > 1.0):
        raise DomainError("x must lie in [0, 1]")
    return xa


def _unwrap(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


def sinc_ratio(u, L):
    """Return sin^2(pi u) / sin^2(pi u / L), with the limit L^2 at u = 0 mod L.

    Works elementwise on arrays. Both sines are argument-reduced (to the
    nearest integer and the nearest multiple of L respectively), which keeps
    full relative accuracy for large ``u``.
    """
    _check_L(L)
    ua = np.asarray(u, dtype=np.float64)
    if not np.all(np.isfinite(ua)):
        raise DomainError("u must be finite")
    return _unwrap(_backend.sinc_ratio_array(ua, int(L)), u)


def f_term(x, z, L):
    """One summand of the window sum: the ratios at z + x and z + 1 - x."""
    _check_L(L)
    if int(z) != z or not 0 <= z <= L - 1:
        raise DomainError(f"z must be an integer in [0, L-1], got {z!r}")
    xa = _check_x(x)
    out = _backend.sinc_ratio_array(z + xa, int(L)) + _backend.sinc_ratio_array(z + 1.0 - xa, int(L))
    return _unwrap(out, x)


def h_exact(x, M, L):
    """Unperturbed window sum H_L(x; M) for 1 <= M <= L.

    Equals L^2 at x = 0 and x = 1 whenever M <= L - 1.
    """
    _check_L(L)
    if int(M) != M or not 1 <= M <= L:
        raise DomainError(f"M must be an integer in [1, L], got M={M!r}, L={L!r}")
    xa = _check_x(x)
    return _unwrap(_backend.h_sum(xa, int(M), int(L), 0.0), x)


def max_perturbed_window(L, epsilon):
    """Largest M allowed in a perturbed window sum: floor(L / (2(1+|eps|)))."""
    return int(math.floor(L / (2.0 * (1.0 + abs(epsilon)))))


def h_perturbed(x, M, L, epsilon):
    """Perturbed window sum H_L(x; M, eps).

    Each ratio is taken at (z + x)(1 + eps) and (z + 1 - x)(1 + eps). Needs
    |eps| <= 1/2 and 1 <= M <= L / (2(1 + |eps|)); reduces to ``h_exact``
    when eps = 0.
    """
    _check_L(L)
    if not math.isfinite(epsilon) or abs(epsilon) > 0.5:
        raise DomainError(f"|epsilon| must be <= 1/2, got {epsilon!r}")
    if int(M) != M or M < 1 or M > L / (2.0 * (1.0 + abs(epsilon))):
        raise DomainError(
            f"M={M!r} outside [1, L/(2(1+|eps|))] = [1, {L / (2.0 * (1.0 + abs(epsilon))):.6g}]"
        )
    xa = _check_x(x)
    return _unwrap(_backend.h_sum(xa, int(M), int(L), float(epsilon)), x)


def h_reference(x, M, L, epsilon=0.0):
    """Slow scalar evaluation of H_L(x; M, eps) with compensated summation.

    No argument reduction: each ratio is sin^2(pi u)/sin^2(pi u/L) taken
    literally, except exactly at u = 0 mod L. Meant as a cross-check of the
    fast path, not for production use.
    """
    _check_L(L)
    terms = []
    scale = 1.0 + epsilon
    for z in range(int(M)):
        for u in ((z + x) * scale, (z + 1.0 - x) * scale):
            if u % L == 0.0:
                terms.append(float(L) * L)
            else:
                terms.append(math.sin(math.pi * u) ** 2 / math.sin(math.pi * u / L) ** 2)
    return math.fsum(terms)


def lemma_p3a_sum(a, b, c, x):
    """Direct sum of sin^2(pi(z+x)a/b) / sin^2(pi(z+x)a/(bc)) over z < bc/rho.

    rho = gcd(a, b) * gcd(a/gcd(a, b), c). The closed form of this sum is
    b c^2 / rho, valid when rho <= b (equivalently c <= bc/rho); other
    inputs are rejected.
    """
    for name, v in (("a", a), ("b", b), ("c", c)):
        if int(v) != v or v < 1:
            raise DomainError(f"{name} must be a positive integer, got {v!r}")
    g = math.gcd(a, b)
    rho = g * math.gcd(a // g, c)
    if rho > b:
        raise DomainError(f"need b/rho >= 1, got b={b}, rho={rho}")
    terms = []
    for z in range(b * c // rho):
        num_arg = (z + x) * a / b
        den_arg = (z + x) * a / (b * c)
        d = den_arg - round(den_arg)
        if abs(d) < 1e-12:
            terms.append(float(c) * c)
            continue
        s = math.sin(math.pi * (num_arg - round(num_arg)))
        terms.append(s * s / math.sin(math.pi * d) ** 2)
    return math.fsum(terms)
