"""Pure-Python/numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_ckernels`` module; used
when the extension is not built or ``PADICPI_PURE_PYTHON`` is set.

Window encoding shared by the Gram kernels: a point of ``B_R(0)`` is
``x = t p^{-R}`` with integer ``t``. At level ``N <= R`` the covering
``eps`` index is ``t mod p^{R-N}`` and the wavelet phase is
``(j t mod p^{R+1-N}) / p^{R+1-N}``.
"""

from __future__ import annotations

import math

import numpy as np


def reduce_root_sum(exponents, P: int, p: int) -> dict:
    """Power-basis coordinates of ``sum_d zeta_P^d`` (integer multiplicities)."""
    block = P // p
    cutoff = (p - 1) * block
    out: dict[int, int] = {}
    for d in exponents:
        if d < cutoff:
            out[d] = out.get(d, 0) + 1
        else:
            r = d - cutoff
            for t in range(p - 1):
                k = r + t * block
                out[k] = out.get(k, 0) - 1
    return {k: v for k, v in out.items() if v}


def gram_exact_window(p: int, n_lo: int, n_hi: int, R: int):
    """Exact Gram check; returns ``(n_indices, n_entries, n_mismatches)``.

    For nested supports ``(psi_I, psi_J)`` is a positive scalar times
    ``sum_s zeta^{d_s}`` over the ``p`` children of ``supp psi_J``, so the
    entry is 0 (resp. 1) exactly when that root sum reduces to 0 (resp. ``p``).
    """
    top = R + 1 - n_lo
    P = p**top
    n_indices = n_entries = bad = 0
    for N2 in range(n_lo, n_hi + 1):
        span2 = p ** (R - N2)
        mod2 = p ** (R + 1 - N2)
        sc2 = P // mod2
        for k2 in range(span2):
            ts = [k2 + s * span2 for s in range(p)]
            for j2 in range(1, p):
                n_indices += 1
                ph2 = [(j2 * t % mod2) * sc2 for t in ts]
                for N1 in range(N2, n_hi + 1):
                    mod1 = p ** (R + 1 - N1)
                    sc1 = P // mod1
                    for j1 in range(1, p):
                        if N1 == N2 and j1 < j2:
                            continue
                        ds = [((j1 * t % mod1) * sc1 - b) % P for t, b in zip(ts, ph2)]
                        red = reduce_root_sum(ds, P, p)
                        n_entries += 1
                        if N1 == N2 and j1 == j2:
                            good = red == {0: p}
                        else:
                            good = not red
                        bad += not good
    return n_indices, n_entries, bad


def gram_float_window(p: int, n_lo: int, n_hi: int, R: int):
    """Brute-force Gram over the finest cells; ``(n_indices, n_entries, max_defect)``."""
    L = n_lo - 1
    cells = p ** (R - L)
    top = R + 1 - n_lo
    P = p**top
    roots = np.exp(2j * np.pi * np.arange(P) / P)
    t = np.arange(cells, dtype=np.int64)
    cell = float(p) ** L
    levels = list(range(n_lo, n_hi + 1))
    phase = {}
    for N in levels:
        mod = p ** (R + 1 - N)
        for j in range(1, p):
            phase[N, j] = (j * t % mod) * (P // mod)
    n_indices = sum((p - 1) * p ** (R - N) for N in levels)
    n_entries = 0
    worst = 0.0
    for i2, N2 in enumerate(levels):
        span2 = p ** (R - N2)
        for N1 in levels[i2:]:
            amp = p ** (-(N1 + N2) / 2) * cell
            for j1 in range(1, p):
                for j2 in range(1, p):
                    if N1 == N2 and j1 < j2:
                        continue
                    prod = roots[(phase[N1, j1] - phase[N2, j2]) % P]
                    # t = row * span2 + k; contiguous rows give numpy's pairwise sum
                    cols = np.ascontiguousarray(prod.reshape(-1, span2).T)
                    acc = cols.sum(axis=1) * amp
                    re, im = acc.real, acc.imag
                    target = 1.0 if (N1 == N2 and j1 == j2) else 0.0
                    worst = max(worst, float(np.max(np.hypot(re - target, im))))
                    n_entries += span2
    return n_indices, n_entries, worst


def green_term(p: int, alpha: float, N: int) -> float:
    """``p^{-N} / (p^{alpha(1-N)} + 1)`` without overflow."""
    e = alpha * (1 - N)
    if e > 0:
        return float(p) ** (-N - e) / (1.0 + float(p) ** (-e))
    return float(p) ** (-N) / (float(p) ** e + 1.0)


def green_level_sum(p: int, alpha: float, n_lo: int, n_hi: int) -> float:
    """``sum_{N=n_lo}^{n_hi} p^{-N} / (p^{alpha(1-N)} + 1)``, correctly rounded."""
    return math.fsum(green_term(p, alpha, N) for N in range(n_lo, n_hi + 1))
