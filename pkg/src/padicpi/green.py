"""Green function of D^alpha + I at a point and the delta functional.

Only the level-N wavelet whose support contains the anchor ``x_k`` enters
the expansion of ``h_k``, so the series is one-dimensional in N with
``p - 1`` terms per level. Truncation uses ``sum_{N > M} (p-1) p^{-N} = p^{-M}``
above and, for alpha > 1 at the anchor, the geometric bound
``(p-1) p^{-alpha} p^{(N-1)(alpha-1)} / (1 - p^{1-alpha})`` below level N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .errors import DiagonalDivergenceError, NotInL2Error
from .padic_core import PadicRational, RationalLike, check_prime, frac_p, phase_to_complex, to_fraction, vp
from .schwartz import TestFunction
from .vladimirov import SpectralMultiplier, p_power
from .wavelets import EPS, WaveletExpansion, WaveletIndex, covering_eps, expand_test_function, wavelet_eval

IMAG_TOL = 1e-12


def _check_alpha(alpha: float) -> None:
    if not alpha > 0.5:
        raise NotInL2Error(alpha)


@dataclass(frozen=True)
class GreenFunction:
    """``h_k`` with ``D^alpha h_k + h_k = delta_{x_k}``."""

    p: int
    alpha: float
    anchor: Fraction

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "anchor", to_fraction(self.anchor))
        _check_alpha(self.alpha)

    def damping(self, N: int) -> float:
        """``1 / (p^{alpha(1-N)} + 1)``."""
        return 1.0 / SpectralMultiplier(self.alpha, 1.0).eigenvalue(N, self.p)


@dataclass(frozen=True)
class DeltaFunctional:
    p: int
    point: Fraction

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "point", to_fraction(self.point))


def green_coefficient(g: GreenFunction, idx: WaveletIndex) -> complex:
    """``(h_k, psi_idx)``."""
    p = g.p
    if covering_eps(idx.N, g.anchor, p) != idx.eps:
        return 0j
    phase = -frac_p(Fraction(p) ** (idx.N - 1) * idx.j * g.anchor, p)
    return p ** (-idx.N / 2) * phase_to_complex(phase) * g.damping(idx.N)


def _upper_level(p: int, tol: float) -> int:
    """Least ``M`` with ``p^{-M} <= tol / 2``."""
    return math.ceil(math.log(2.0 / tol, p))


def _lower_level(p: int, alpha: float, tol: float) -> int:
    """Greatest ``N_lo`` whose lower tail at the anchor is at most ``tol / 2``."""
    c = (p - 1) * p_power(p, -alpha) / (1 - p_power(p, 1 - alpha))
    return math.floor(1 + math.log(tol / (2 * c), p) / (alpha - 1))


def lower_tail_bound(p: int, alpha: float, n_lo: int) -> float:
    return (p - 1) * p_power(p, -alpha) * p_power(p, (n_lo - 1) * (alpha - 1)) / (1 - p_power(p, 1 - alpha))


def green_eval(g: GreenFunction, x: RationalLike, tol: float = 1e-12) -> tuple[float, float]:
    """``h_k(x)`` by direct summation of the wavelet series, with an error bound."""
    p, xk = g.p, g.anchor
    q = x.value if isinstance(x, PadicRational) else to_fraction(x)
    M = _upper_level(p, tol)
    tail = float(p) ** (-M)
    if q == xk:
        if g.alpha <= 1:
            raise DiagonalDivergenceError(f"h_k(x_k) diverges for alpha={g.alpha} <= 1")
        n_lo = _lower_level(p, g.alpha, tol)
        tail += lower_tail_bound(p, g.alpha, n_lo)
    else:
        # only levels whose support ball holds both points contribute
        n_lo = -vp(q - xk, p)
    if n_lo > M:
        return 0.0, tail
    xp = PadicRational(p, q)
    terms = []
    for N in range(n_lo, M + 1):
        eps = covering_eps(N, xk, p)
        for j in range(1, p):
            idx = WaveletIndex(N, j, eps)
            terms.append(green_coefficient(g, idx) * wavelet_eval(idx, xp))
    re = math.fsum(t.real for t in terms)
    im = math.fsum(t.imag for t in terms)
    scale = sum(abs(t) for t in terms)
    rounding = 8 * EPS * scale
    if abs(im) > max(IMAG_TOL, rounding):
        raise ArithmeticError(f"imaginary part {im} of a real-valued function")
    return re, tail + rounding


def radial_oracle(p: int, alpha: float, gamma0: int, tol: float = 1e-12) -> tuple[float, float]:
    """``h_k(x)`` at ``|x - x_k|_p = p^gamma0`` via the character-sum identity.

    Summing ``chi`` over ``j = 1..p-1`` gives ``p - 1`` below the distance
    level and ``-1`` at it, leaving a one-dimensional series in N.
    """
    check_prime(p)
    _check_alpha(alpha)
    M = max(_upper_level(p, tol), gamma0)
    first = -float(p) ** (-gamma0) / (p_power(p, alpha * (1 - gamma0)) + 1)
    rest = (p - 1) * kernels.green_level_sum(p, alpha, gamma0 + 1, M)
    value = first + rest
    return value, float(p) ** (-M) + 8 * EPS * (abs(first) + abs(rest))


def diagonal_value(p: int, alpha: float, tol: float = 1e-12) -> tuple[float, float]:
    """``h_k(x_k) = (p-1) sum_N p^{-N} / (p^{alpha(1-N)} + 1)``; needs alpha > 1."""
    check_prime(p)
    _check_alpha(alpha)
    if alpha <= 1:
        raise DiagonalDivergenceError(f"h_k(x_k) diverges for alpha={alpha} <= 1")
    M = _upper_level(p, tol)
    n_lo = _lower_level(p, alpha, tol)
    value = (p - 1) * kernels.green_level_sum(p, alpha, n_lo, M)
    bound = float(p) ** (-M) + lower_tail_bound(p, alpha, n_lo) + 8 * EPS * abs(value)
    return value, bound


def delta_pairing(d: DeltaFunctional, e: WaveletExpansion):
    """``<delta_{x_k}, u> = sum_I c_I psi_I(x_k)`` for a finite expansion."""
    if not e.is_finite:
        raise ValueError("delta pairing needs a finite expansion")
    p = d.p
    cover: dict[int, Fraction] = {}
    terms = []
    for idx, c in e.coeffs.items():
        if idx.N not in cover:
            cover[idx.N] = covering_eps(idx.N, d.point, p)
        if cover[idx.N] != idx.eps:
            continue
        phase = frac_p(Fraction(p) ** (idx.N - 1) * idx.j * d.point, p)
        terms.append(complex(c) * p ** (-idx.N / 2) * phase_to_complex(phase))
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def pair_with_green(e: WaveletExpansion, g: GreenFunction) -> complex:
    """``(u, h_k) = sum_I c_I conj(h_I)`` for a finite expansion ``u``."""
    terms = [complex(c) * green_coefficient(g, idx).conjugate() for idx, c in e.coeffs.items()]
    return complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))


def weak_residual(g: GreenFunction, phi, tol: float = 1e-12) -> tuple[float, float]:
    """``|<h_k, (D^alpha + I) phi> - phi(x_k)|`` and a bound on the truncation error.

    ``phi`` is a test function (expanded with tail bounds) or a finite
    wavelet expansion (exact identity up to rounding).
    """
    p = g.p
    if isinstance(phi, TestFunction):
        e = expand_test_function(phi, phi.constancy() + 1, tol=tol / 2) if phi.terms else WaveletExpansion(p)
        target = complex(phi(g.anchor))
        truncation = e.sup_tail
        e = WaveletExpansion(p, e.coeffs)
    else:
        if not phi.is_finite:
            raise ValueError("weak residual needs a test function or a finite expansion")
        e = phi
        target = delta_pairing(DeltaFunctional(p, g.anchor), e)
        truncation = 0.0
    shifted = SpectralMultiplier(g.alpha, 1.0)
    terms = [complex(c) * shifted.eigenvalue(idx.N, p) * green_coefficient(g, idx).conjugate() for idx, c in e.coeffs.items()]
    # h_k is real, so <h_k, phi> = (phi, h_k)
    lhs = complex(math.fsum(t.real for t in terms), math.fsum(t.imag for t in terms))
    rounding = 8 * EPS * (sum(abs(t) for t in terms) + abs(target))
    return abs(lhs - target), truncation + rounding


@dataclass
class HalfPowerSeries:
    """Partial sums of ``||D^{alpha/2} h_k||^2`` split at N = 0.

    ``upper`` runs over N = 1, 2, ... and ``lower`` over N = 0, -1, ...;
    ``lower_bound`` holds the matching partial sums of the lower estimate.
    """

    upper: list
    lower: list
    lower_bound: list


def _damped(p: int, alpha: float, N: int, k: int) -> float:
    """``(p-1) p^{-N} lam^k / (lam + 1)^2`` with ``lam = p^{alpha(1-N)}``, overflow-safe."""
    e = alpha * (1 - N)
    if e > 0:
        return (p - 1) * p_power(p, -N + (k - 2) * e) / (1 + p_power(p, -e)) ** 2
    lam = p_power(p, e)
    return (p - 1) * p_power(p, -N) * lam**k / (lam + 1) ** 2


def half_power_increment(p: int, alpha: float, N: int) -> float:
    return _damped(p, alpha, N, 1)


def half_power_lower_increment(p: int, alpha: float, N: int) -> float:
    """``(p-1) p^{-alpha} p^{N(alpha-1)} / 4``, valid for N <= 1."""
    return (p - 1) * p_power(p, -alpha) * p_power(p, N * (alpha - 1)) / 4


def half_power_membership(g: GreenFunction, n_floor: int, n_ceil: int = 60) -> HalfPowerSeries:
    from .vladimirov import _running_sums

    p, a = g.p, g.alpha
    upper = _running_sums(half_power_increment(p, a, N) for N in range(1, n_ceil + 1))
    lower = _running_sums(half_power_increment(p, a, N) for N in range(0, n_floor - 1, -1))
    bound = _running_sums(half_power_lower_increment(p, a, N) for N in range(0, n_floor - 1, -1))
    return HalfPowerSeries(upper, lower, bound)


def l2_norm_increment(p: int, alpha: float, N: int) -> float:
    """Level-N contribution to ``||h_k||^2``; defined for every alpha > 0."""
    return _damped(p, alpha, N, 0)


def l2_norm_partial(p: int, alpha: float, n_floor: int, n_ceil: int = 60) -> list[float]:
    from .vladimirov import _running_sums

    return _running_sums(l2_norm_increment(p, alpha, N) for N in range(n_ceil, n_floor - 1, -1))


def green_norm_squared(p: int, alpha: float, tol: float = 1e-14) -> float:
    """Upper bound for ``||h_k||^2 = sum_N (p-1) p^{-N} / (lam_N + 1)^2``, within ``tol``.

    Below level 1 the terms are at most ``(p-1) p^{-2 alpha} p^{N(2 alpha - 1)}``,
    a geometric series exactly when alpha > 1/2.
    """
    check_prime(p)
    _check_alpha(alpha)
    M = _upper_level(p, tol)
    s = 2 * alpha - 1
    c = (p - 1) * p_power(p, -2 * alpha) / (1 - p_power(p, -s))
    n_lo = min(0, math.floor(1 + math.log(tol / (2 * c), p) / s))
    body = math.fsum(l2_norm_increment(p, alpha, N) for N in range(n_lo, M + 1))
    return body + float(p) ** (-M) + c * p_power(p, (n_lo - 1) * s)


def continuity_bound(e: WaveletExpansion, alpha: float) -> float:
    """``sup |u| <= ||h|| * ||(D^alpha + I) u||`` for a finite expansion ``u``."""
    if not e.is_finite:
        raise ValueError("continuity bound needs a finite expansion")
    shifted = SpectralMultiplier(alpha, 1.0)
    graph = math.fsum(abs(complex(c)) ** 2 * shifted.eigenvalue(idx.N, e.p) ** 2 for idx, c in e.coeffs.items())
    return math.sqrt(green_norm_squared(e.p, alpha) * graph)
