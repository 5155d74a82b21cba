"""The operator D^alpha: diagonal on wavelets, plus an independent point oracle."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnboundedTailError
from .padic_core import PadicRational, check_prime, frac_p, phase_to_complex, vp
from .schwartz import TestFunction, canonicalize, fourier
from .wavelets import WaveletExpansion, WaveletIndex, wavelet_eval


def p_power(p: int, e: float) -> float:
    """``p ** e`` with the exponent split into an exact integer part.

    Rounding of ``e`` itself would otherwise be amplified by ``|e| ln p``.
    """
    q = Fraction(e)
    ip = math.floor(q)
    return float(p) ** int(ip) * float(p) ** float(q - ip)


@dataclass(frozen=True)
class SpectralMultiplier:
    """``psi_{N j eps} -> (p^{alpha(1-N)} + shift) psi_{N j eps}``."""

    alpha: float
    shift: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if self.shift < 0:
            raise ValueError(f"shift must be non-negative, got {self.shift}")

    def eigenvalue(self, N: int, p: int) -> float:
        return p_power(p, self.alpha * Fraction(1 - N)) + self.shift

    def exact_eigenvalue(self, N: int, p: int):
        """Rational eigenvalue when alpha and shift are integers, else ``None``."""
        if float(self.alpha).is_integer() and float(self.shift).is_integer():
            return Fraction(p) ** (int(self.alpha) * (1 - N)) + int(self.shift)
        return None

    def sup_from(self, n_floor: int, p: int) -> float:
        """Sup over levels ``N >= n_floor`` (the eigenvalue decreases in N)."""
        return self.eigenvalue(n_floor, p)


def apply_spectral(m: SpectralMultiplier, e: WaveletExpansion) -> WaveletExpansion:
    p = e.p
    if not e.is_finite and e.tail_n_floor is None:
        raise UnboundedTailError("multiplier unbounded on tail")
    exact = e.is_exact
    coeffs = {}
    for idx, c in e.coeffs.items():
        lam = m.exact_eigenvalue(idx.N, p) if exact else None
        coeffs[idx] = c * (lam if lam is not None else m.eigenvalue(idx.N, p))
    if e.is_finite:
        return WaveletExpansion(p, coeffs)
    s = m.sup_from(e.tail_n_floor, p)
    return WaveletExpansion(p, coeffs, e.l2_tail * s, e.sup_tail * s, e.tail_n_floor)


def quadratic_form(m: SpectralMultiplier, e: WaveletExpansion) -> float:
    """``(M u, u)`` for a finite expansion; real and non-negative."""
    return math.fsum(abs(complex(c)) ** 2 * m.eigenvalue(idx.N, e.p) for idx, c in e.coeffs.items())


def semigroup_defect(e: WaveletExpansion, a1: float, a2: float) -> float:
    """Largest coefficient gap between ``D^a1 D^a2 e`` and ``D^(a1+a2) e``."""
    two = apply_spectral(SpectralMultiplier(a1), apply_spectral(SpectralMultiplier(a2), e))
    one = apply_spectral(SpectralMultiplier(a1 + a2), e)
    worst = 0.0
    for idx, c in one.coeffs.items():
        b = complex(c)
        worst = max(worst, abs(complex(two.coeffs[idx]) - b) / max(1.0, abs(b)))
    return worst


def _ball_integral_abs_power(alpha: float, g: int, m, p: int) -> float:
    """``int_{B_g(0)} |xi|^alpha chi(-xi x) dxi`` for ``|x| = p^m`` (m = -inf at 0)."""
    top = g if m == -math.inf else min(g, -m)
    s = alpha + 1
    # spheres |xi| = p^k, k <= top, on which the character integrates to the full measure
    total = (1 - 1 / p) * p_power(p, s * top) / (1 - p_power(p, -s))
    if m != -math.inf and 1 - m <= g:
        # sphere k = 1 - m: the character sums to -p^{k-1}
        total -= p_power(p, alpha * (1 - m)) * p_power(p, -m)
    return total


def dalpha_point_oracle(phi: TestFunction, alpha: float, x: PadicRational) -> complex:
    """``(D^alpha phi)(x)`` straight from the Fourier-multiplier definition."""
    p = phi.p
    if x.p != p:
        raise ValueError(f"mismatched primes {x.p} and {p}")
    q = x.value
    m = -math.inf if q == 0 else -vp(q, p)
    parts = []
    for b, c in fourier(canonicalize(phi)).terms:
        c = complex(c)
        ga = b.center_norm_exponent()
        if ga <= b.gamma:
            parts.append(c * _ball_integral_abs_power(alpha, b.gamma, m, p))
        elif m <= -b.gamma:
            # |xi| = |a| throughout the ball; chi(-xi x) is constant on it too
            parts.append(c * p_power(p, alpha * ga) * float(p) ** b.gamma * phase_to_complex(frac_p(-b.center * q, p)))
    return complex(math.fsum(z.real for z in parts), math.fsum(z.imag for z in parts))


def membership_increment(p: int, alpha: float, N: int) -> float:
    """Increment of ``||D^alpha f||^2`` at level ``N`` for the counterexample ``f``."""
    return p_power(p, 2 * alpha - 1) * p_power(p, N * (1 - 2 * alpha)) / N**2


def _running_sums(terms) -> list[float]:
    out, s, comp = [], 0.0, 0.0
    for t in terms:
        # Neumaier compensation
        u = s + t
        comp += (s - u) + t if abs(s) >= abs(t) else (t - u) + s
        s = u
        out.append(s + comp)
    return out


@dataclass(frozen=True)
class Counterexample:
    """``f = sum_{N <= -1} |N|^{-1} p^{(N-1)/2} psi_{N,1,0}``: in L2, unbounded near 0."""

    p: int

    def __post_init__(self):
        check_prime(self.p)

    def coefficient(self, N: int) -> float:
        if N > -1:
            return 0.0
        return p_power(self.p, (N - 1) / 2) / abs(N)

    def level_mass(self, N: int) -> float:
        """``sum |c|^2`` at level ``N``."""
        return self.coefficient(N) ** 2

    def norm_partial(self, n_floor: int) -> list[float]:
        return _running_sums(float(self.p) ** (N - 1) / N**2 for N in range(-1, n_floor - 1, -1))

    def expansion(self, n_floor: int) -> WaveletExpansion:
        coeffs = {WaveletIndex(N, 1, 0): self.coefficient(N) for N in range(n_floor, 0)}
        return WaveletExpansion(self.p, coeffs)


def domain_membership_partial(e, alpha: float, n_floor: int) -> list[float]:
    """Partial sums of ``sum |c|^2 p^{2 alpha (1 - N)}``, one per level, top down.

    ``e`` is a :class:`WaveletExpansion` or a :class:`Counterexample`; for the
    latter the exact coefficient law is used for every level ``>= n_floor``.
    """
    p = e.p
    if isinstance(e, Counterexample):
        levels = range(-1, n_floor - 1, -1)
        mass = {N: e.level_mass(N) for N in levels}
    else:
        mass: dict[int, float] = {}
        for idx, c in e.coeffs.items():
            if idx.N >= n_floor:
                mass[idx.N] = mass.get(idx.N, 0.0) + abs(complex(c)) ** 2
        levels = sorted(mass, reverse=True)
    return _running_sums(mass[N] * p_power(p, 2 * alpha * (1 - N)) for N in levels)


def membership_tail_bound(p: int, alpha: float, n_floor: int) -> float:
    """Bound on the counterexample's membership series below ``n_floor``."""
    M = abs(n_floor)
    if alpha < 0.5:
        r = p_power(p, -(1 - 2 * alpha))
        # 1/N^2 <= 1/M^2 below the floor; the rest is geometric
        return p_power(p, 2 * alpha - 1) / M**2 * r ** (M + 1) / (1 - r)
    if alpha == 0.5:
        return 1.0 / M
    return math.inf


def counterexample_value(p: int, n: int) -> complex:
    """Closed form of ``f(p^n)``: ``p^{-1/2} (chi(1/p)/n + H_{n-1})``."""
    check_prime(p)
    if n < 1:
        raise ValueError("n must be >= 1")
    harmonic = math.fsum(1.0 / k for k in range(1, n))
    return p ** -0.5 * (phase_to_complex(Fraction(1, p)) / n + harmonic)


def counterexample_series(p: int, n: int, depth: int | None = None) -> complex:
    """``f(p^n)`` summed term by term over the wavelet series."""
    check_prime(p)
    f = Counterexample(p)
    x = PadicRational(p, Fraction(p) ** n)
    depth = n + 3 if depth is None else depth
    vals = [f.coefficient(N) * wavelet_eval(WaveletIndex(N, 1, 0), x) for N in range(-depth, 0)]
    return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))
