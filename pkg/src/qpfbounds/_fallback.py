"""Pure numpy / Python implementations of the hot kernels.

Mirrors the API of the compiled ``_core`` extension one-for-one. Selected
automatically when the extension is not built, or forced with
``QPFBOUNDS_PURE=1``.
"""

import numpy as np

# |u/L - round(u/L)| below this is treated as the removable singularity
SINGULAR_TOL = 1e-12


def sinc_ratio_array(u, L):
    u = np.asarray(u, dtype=np.float64)
    # one shared reduction keeps numerator and denominator consistent near u = kL
    w = u - L * np.rint(u / L)
    dv = w / L
    singular = np.abs(dv) < SINGULAR_TOL
    num = np.sin(np.pi * (w - np.rint(w))) ** 2
    den = np.sin(np.pi * np.where(singular, 0.5, dv)) ** 2
    return np.where(singular, float(L) * L, num / den)


def h_sum(x, M, L, eps):
    """Sum of the 2M perturbed sinusoid ratios, one value per entry of ``x``."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros(x.shape, dtype=np.float64)
    scale = 1.0 + eps
    for z in range(M):
        out += sinc_ratio_array((z + x) * scale, L)
        out += sinc_ratio_array((z + 1.0 - x) * scale, L)
    return out


def measure_prob_array(ell, n, r, L):
    ell = np.asarray(ell, dtype=np.int64)
    N = np.int64(1) << n
    half = N >> 1
    a = (ell * r) & (N - 1)
    b = (a * L) & (N - 1)
    a = np.where(a > half, a - N, a)
    b = np.where(b > half, b - N, b)
    zero = a == 0
    num = np.sin(np.pi * (b / float(N))) ** 2
    den = np.sin(np.pi * (np.where(zero, 1, a) / float(N))) ** 2
    ratio = np.where(zero, float(L) * L, num / den)
    return ratio / (float(N) * L)


def _cf_one(ell, n, m, r):
    two_n = 1 << n
    two_m = 1 << m
    shift = n - 2 * m - 1
    # convergent recurrences: (h, k) are numerator / denominator
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    a_num, a_den = ell, two_n
    while a_den:
        a, rem = divmod(a_num, a_den)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if k >= two_m:
            return 0
        dev = abs(h * two_n - ell * k)
        if shift >= 0:
            close = dev <= (k << shift)
        else:
            close = (dev << -shift) <= k
        if close:
            return k if (k > 1 and r % k == 0) else 0
        a_num, a_den = a_den, rem
    return 0


def cf_batch(ell, n, m, r):
    ell = np.asarray(ell, dtype=np.int64)
    out = np.empty(ell.shape, dtype=np.int64)
    flat = out.reshape(-1)
    for i, e in enumerate(ell.reshape(-1).tolist()):
        flat[i] = _cf_one(e, n, m, r)
    return out


def window_batch(ell, n, r, M):
    """True where ``ell`` is within M of k*2^n/r for some k in [1, r-1]."""
    ell = np.asarray(ell, dtype=np.int64)
    N = np.int64(1) << n
    # nearest k: round(ell*r / 2^n), done in integers
    k = (2 * ell * r + N) // (2 * N)
    k = np.clip(k, 1, r - 1)
    hit = np.zeros(ell.shape, dtype=bool)
    for dk in (-1, 0, 1):
        kk = np.clip(k + dk, 1, r - 1)
        hit |= np.abs(ell * r - kk * N) <= M * r
    return hit
