"""Exact integer machinery: odd/dyadic split, residue tables, continued fractions."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import DomainError

__all__ = [
    "OddDyadicSplit",
    "ResidueDistribution",
    "Convergent",
    "split_odd_dyadic",
    "residues_bruteforce",
    "residue_distribution",
    "convergents",
    "cf_postprocess",
]


@dataclass(frozen=True)
class OddDyadicSplit:
    p: int
    s: int

    @property
    def tau(self) -> int:
        """Number of k in [1, r-1] whose residue is exactly zero."""
        return (1 << self.s) - 1

    @property
    def r(self) -> int:
        return self.p << self.s


@dataclass(frozen=True)
class ResidueDistribution:
    """How often each residue j/p occurs among k*2^n/r mod 1, k = 1..r-1."""

    p: int
    frequency: dict

    def total(self) -> int:
        return sum(self.frequency.values())


@dataclass(frozen=True)
class Convergent:
    numerator: int
    denominator: int

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)


def split_odd_dyadic(r: int) -> OddDyadicSplit:
    """Write r = p * 2^s with p odd."""
    if int(r) != r or r < 2:
        raise DomainError(f"r must be an integer >= 2, got {r!r}")
    r = int(r)
    s = (r & -r).bit_length() - 1
    return OddDyadicSplit(p=r >> s, s=s)


def _check_residue_args(r, n):
    split = split_odd_dyadic(r)
    if int(n) != n or split.s >= n:
        raise DomainError(f"need 2^s < 2^n (s={split.s}, n={n!r})")
    return split


def residues_bruteforce(r: int, n: int) -> list[Fraction]:
    """Fractional parts of k*2^n/r for k = 1..r-1, as exact fractions."""
    _check_residue_args(r, n)
    two_n = 1 << n
    return [Fraction((k * two_n) % r, r) for k in range(1, r)]


def residue_distribution(r: int, n: int) -> ResidueDistribution:
    """Closed-form residue table: j = 0 occurs 2^s - 1 times, every other j occurs 2^s times."""
    split = _check_residue_args(r, n)
    freq = {0: split.tau}
    for j in range(1, split.p):
        freq[j] = 1 << split.s
    return ResidueDistribution(p=split.p, frequency=freq)


def convergents(numerator: int, denominator: int) -> Iterator[Convergent]:
    """Yield the continued-fraction convergents of numerator/denominator.

    Exact integer arithmetic; the last convergent is the fraction itself in
    lowest terms.
    """
    if int(denominator) != denominator or denominator < 1:
        raise DomainError(f"denominator must be a positive integer, got {denominator!r}")
    if int(numerator) != numerator or numerator < 0:
        raise DomainError(f"numerator must be a non-negative integer, got {numerator!r}")
    a_num, a_den = int(numerator), int(denominator)
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    while a_den:
        a, rem = divmod(a_num, a_den)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        yield Convergent(h, k)
        a_num, a_den = a_den, rem


def cf_postprocess(ell_hat: int, n: int, m: int, r: int) -> int | None:
    """Continued-fraction post-processing of one measurement.

    Walks the convergents p_k/q_k of ell_hat/2^n and stops at the first one
    with q_k >= 2^m or |p_k/q_k - ell_hat/2^n| <= 2^-(2m+1). Returns q_k if
    it is a non-trivial divisor of r below 2^m, else None.
    """
    two_n = 1 << n
    if int(ell_hat) != ell_hat or not 0 <= ell_hat < two_n:
        raise DomainError(f"ell_hat must be in [0, 2^n - 1], got {ell_hat!r}")
    ell_hat = int(ell_hat)
    two_m = 1 << m
    scale = 1 << (2 * m + 1)
    for c in convergents(ell_hat, two_n):
        q_k = c.denominator
        if q_k >= two_m:
            return None
        if abs(c.numerator * two_n - ell_hat * q_k) * scale <= q_k * two_n:
            if 1 < q_k and r % q_k == 0:
                return q_k
            return None
    return None
