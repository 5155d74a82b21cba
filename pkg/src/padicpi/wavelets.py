"""The p-adic wavelet basis psi_{N j eps}.

``psi_{N j eps}(x) = p^{-N/2} chi_p(p^{N-1} j x) Omega(|p^N x - eps|_p)``
with ``N`` an integer, ``j`` in ``1..p-1`` and ``eps`` a canonical
representative ``k/p^m`` of Q_p/Z_p. The support of ``psi_{N j eps}`` is
the ball ``B_N(p^{-N} eps)``, and on each of its ``p`` children the
wavelet is constant.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

from . import kernels
from .cyclotomic import Cyclo
from .padic_core import (
    Ball,
    PadicRational,
    check_prime,
    format_rational,
    frac_p,
    parse_rational,
    phase_to_complex,
    to_fraction,
    vp,
)
from .schwartz import TestFunction, canonicalize, conj, integrate, l2_norm_squared, times_phase

EPS = sys.float_info.epsilon


@dataclass(frozen=True, order=True)
class WaveletIndex:
    N: int
    j: int
    eps: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "eps", to_fraction(self.eps))

    def validate(self, p: int) -> "WaveletIndex":
        if not 1 <= self.j <= p - 1:
            raise ValueError(f"j must lie in [1, {p - 1}], got {self.j}")
        e = self.eps
        if not 0 <= e < 1:
            raise ValueError(f"eps must lie in [0, 1), got {e}")
        den = e.denominator
        while den % p == 0:
            den //= p
        if den != 1:
            raise ValueError(f"eps denominator must be a power of {p}, got {e}")
        return self

    def support(self, p: int) -> Ball:
        return Ball(self.N, self.eps / Fraction(p) ** self.N, p)

    def to_dict(self) -> dict:
        return {"N": self.N, "j": self.j, "eps": format_rational(self.eps)}

    @classmethod
    def from_dict(cls, d: dict) -> "WaveletIndex":
        return cls(int(d["N"]), int(d["j"]), parse_rational(str(d["eps"])))


def amplitude(N: int, p: int, exact: bool = False):
    """``p^{-N/2}``."""
    if exact:
        return Cyclo.p_power_half(p, -N)
    return p ** (-N / 2)


def covering_eps(N: int, x: Fraction, p: int) -> Fraction:
    """The unique ``eps`` at level ``N`` whose support contains ``x``."""
    return frac_p(x * Fraction(p) ** N, p)


def wavelet_phase(idx: WaveletIndex, x: Fraction, p: int):
    """Phase of ``psi_idx(x)`` or ``None`` outside the support."""
    scale = Fraction(p) ** idx.N
    if vp(scale * x - idx.eps, p) < 0:
        return None
    return frac_p(scale / p * idx.j * x, p)


def wavelet_eval(idx: WaveletIndex, x: PadicRational, exact: bool = False):
    p = x.p
    phase = wavelet_phase(idx, x.value, p)
    if phase is None:
        return Cyclo.rational(p, 0) if exact else 0j
    if exact:
        return Cyclo.zeta(p, phase) * amplitude(idx.N, p, True)
    return amplitude(idx.N, p) * phase_to_complex(phase)


def support_pieces(idx: WaveletIndex, p: int) -> list[tuple[Ball, Fraction]]:
    """Children of the support with the (constant) phase on each."""
    out = []
    for child in idx.support(p).children():
        out.append((child, frac_p(Fraction(p) ** (idx.N - 1) * idx.j * child.center, p)))
    return out


def wavelet_test_function(idx: WaveletIndex, p: int, exact: bool = True) -> TestFunction:
    """``psi_idx`` written as a ball combination."""
    amp = amplitude(idx.N, p, exact)
    terms = tuple((b, times_phase(amp, ph, p)) for b, ph in support_pieces(idx, p))
    return TestFunction(p, terms, True)


def wavelet_inner_test(idx: WaveletIndex, phi: TestFunction, exact: bool | None = None):
    """``(psi_idx, phi) = int psi_idx * conj(phi)``, summed exactly over pieces."""
    p = phi.p
    if exact is None:
        exact = phi.is_exact
    phi = canonicalize(phi)
    supp = idx.support(p)
    pieces = support_pieces(idx, p)
    amp = amplitude(idx.N, p, exact)
    total = Cyclo.rational(p, 0) if exact else 0j
    for b, c in phi.terms:
        if b.gamma >= supp.gamma:
            # phi constant on the whole support, where psi integrates to 0
            continue
        cb = conj(c)
        for piece, ph in pieces:
            if b.gamma >= piece.gamma:
                if b.contains(piece.center):
                    total = total + times_phase(amp, ph, p) * cb * piece.measure
            elif piece.contains(b.center):
                total = total + times_phase(amp, ph, p) * cb * b.measure
    return total


def wavelet_inner(I: WaveletIndex, J: WaveletIndex, p: int, exact: bool = False):
    """``(psi_I, psi_J)`` from the nesting of the two supports."""
    if I.N < J.N:
        return conj(wavelet_inner(J, I, p, exact))
    sI, sJ = I.support(p), J.support(p)
    if not sI.contains(sJ.center):
        return Cyclo.rational(p, 0) if exact else 0j
    # psi_I is constant on every child of supp psi_J
    counts: dict[Fraction, int] = {}
    for piece, phJ in support_pieces(J, p):
        phI = wavelet_phase(I, piece.center, p)
        q = (phI - phJ) % 1
        counts[q] = counts.get(q, 0) + 1
    m = Fraction(p) ** (J.N - 1)
    if exact:
        return Cyclo(p, {q: c * m for q, c in counts.items()}) * Cyclo.p_power_half(p, -(I.N + J.N))
    s = sum(c * phase_to_complex(q) for q, c in counts.items())
    return s * float(m) * p ** (-(I.N + J.N) / 2)


def window_indices(p: int, n_lo: int, n_hi: int, radius_exp: int) -> list[WaveletIndex]:
    """All indices with ``n_lo <= N <= n_hi`` whose support meets ``B_R(0)``."""
    out = []
    for N in range(n_lo, n_hi + 1):
        m = max(radius_exp - N, 0)
        for k in range(p**m):
            eps = Fraction(k, p**m)
            for j in range(1, p):
                out.append(WaveletIndex(N, j, eps))
    return out


@dataclass
class GramReport:
    p: int
    n_indices: int
    n_entries: int
    max_defect: float
    exact_identity: bool | None


def gram_window_exact(p: int, n_lo: int, n_hi: int, radius_exp: int) -> GramReport:
    """Exact Gram check over a window.

    Points of ``B_R(0)`` are encoded as ``x = t p^{-R}`` with integer ``t``,
    so ``psi_{N j eps}`` has phase ``(j t mod p^{R+1-N}) / p^{R+1-N}`` on the
    child of its support containing ``x``. Every pair with nested supports is
    evaluated in exact arithmetic; pairs with disjoint supports vanish
    identically and are not enumerated.
    """
    check_prime(p)
    R = radius_exp
    if n_hi > R:
        raise ValueError("window levels must not exceed the radius exponent")
    top = R + 1 - n_lo
    P = p**top
    memo: dict = {}
    ok = True
    worst = 0.0
    n_entries = 0
    n_indices = 0
    for N2 in range(n_lo, n_hi + 1):
        span2 = p ** (R - N2)
        mod2 = p ** (R + 1 - N2)
        for k2 in range(span2):
            ts = [k2 + s * span2 for s in range(p)]
            for j2 in range(1, p):
                n_indices += 1
                ph2 = [(j2 * t % mod2) * (P // mod2) for t in ts]
                for N1 in range(N2, n_hi + 1):
                    mod1 = p ** (R + 1 - N1)
                    for j1 in range(1, p):
                        if N1 == N2 and j1 < j2:
                            continue
                        counts: dict[int, int] = {}
                        for t, b in zip(ts, ph2):
                            a = (j1 * t % mod1) * (P // mod1)
                            d = (a - b) % P
                            counts[d] = counts.get(d, 0) + 1
                        key = (N1, N2, tuple(sorted(counts.items())))
                        g = memo.get(key)
                        if g is None:
                            m = Fraction(p) ** (N2 - 1)
                            g = Cyclo(p, {Fraction(d, P): c * m for d, c in counts.items()})
                            g = g * Cyclo.p_power_half(p, -(N1 + N2))
                            memo[key] = g
                        same = N1 == N2 and j1 == j2
                        n_entries += 1
                        if g != (1 if same else 0):
                            ok = False
                            worst = max(worst, abs(complex(g - (1 if same else 0))))
    return GramReport(p, n_indices, n_entries, worst, ok)


def gram_window(p: int, n_lo: int, n_hi: int, radius_exp: int, exact: bool = False) -> GramReport:
    """Gram check over a window using the compiled (or fallback) kernels.

    ``exact=True`` decides every entry by integer reduction of a root-of-unity
    sum in the cyclotomic power basis; otherwise entries are integrated
    numerically over the finest cells of the window.
    """
    check_prime(p)
    if n_hi > radius_exp:
        raise ValueError("window levels must not exceed the radius exponent")
    if exact:
        n_idx, n_ent, bad = kernels.gram_exact_window(p, n_lo, n_hi, radius_exp)
        return GramReport(p, n_idx, n_ent, 0.0 if bad == 0 else math.inf, bad == 0)
    n_idx, n_ent, worst = kernels.gram_float_window(p, n_lo, n_hi, radius_exp)
    return GramReport(p, n_idx, n_ent, worst, None)


@dataclass
class WaveletExpansion:
    """Finite part of a wavelet series plus rigorous bounds on what is omitted.

    ``l2_tail`` bounds the L2 norm of the omitted terms, ``sup_tail`` their
    pointwise sum, and ``tail_n_floor`` is a lower bound for the level of
    any omitted term (``None`` when nothing is omitted).
    """

    p: int
    coeffs: dict = field(default_factory=dict)
    l2_tail: float = 0.0
    sup_tail: float = 0.0
    tail_n_floor: int | None = None

    def __post_init__(self):
        check_prime(self.p)
        self.coeffs = {self._key(k): v for k, v in self.coeffs.items()}

    def _key(self, k) -> WaveletIndex:
        if not isinstance(k, WaveletIndex):
            k = WaveletIndex(*k)
        return k.validate(self.p)

    @property
    def is_finite(self) -> bool:
        return self.l2_tail == 0 and self.sup_tail == 0

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (Cyclo, Rational)) for c in self.coeffs.values())

    def norm_squared(self):
        total = 0
        for c in self.coeffs.values():
            total = total + c * conj(c)
        return total

    def levels(self) -> list[int]:
        return sorted({k.N for k in self.coeffs})

    def scale(self, s) -> "WaveletExpansion":
        return WaveletExpansion(
            self.p,
            {k: c * s for k, c in self.coeffs.items()},
            self.l2_tail * abs(s),
            self.sup_tail * abs(s),
            self.tail_n_floor,
        )

    def __add__(self, other: "WaveletExpansion") -> "WaveletExpansion":
        if other.p != self.p:
            raise ValueError(f"mismatched primes {self.p} and {other.p}")
        coeffs = dict(self.coeffs)
        for k, c in other.coeffs.items():
            coeffs[k] = coeffs[k] + c if k in coeffs else c
        floors = [f for f in (self.tail_n_floor, other.tail_n_floor) if f is not None]
        return WaveletExpansion(
            self.p,
            coeffs,
            self.l2_tail + other.l2_tail,
            self.sup_tail + other.sup_tail,
            min(floors) if floors else None,
        )

    def to_dict(self) -> dict:
        coeffs = []
        for k in sorted(self.coeffs):
            z = complex(self.coeffs[k])
            coeffs.append({**k.to_dict(), "re": z.real, "im": z.imag})
        return {
            "p": self.p,
            "coeffs": coeffs,
            "l2_tail": self.l2_tail,
            "sup_tail": self.sup_tail,
            "tail_n_floor": self.tail_n_floor,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "WaveletExpansion":
        coeffs = {WaveletIndex.from_dict(c): complex(c.get("re", 0.0), c.get("im", 0.0)) for c in d["coeffs"]}
        return cls(int(d["p"]), coeffs, float(d.get("l2_tail", 0.0)), float(d.get("sup_tail", 0.0)), d.get("tail_n_floor"))

    @classmethod
    def from_json(cls, s: str) -> "WaveletExpansion":
        return cls.from_dict(json.loads(s))


def _level_coefficients(phi: TestFunction, N: int, exact: bool) -> dict:
    p = phi.p
    scale = Fraction(p) ** N
    eps_set = sorted({frac_p(b.center * scale, p) for b, _ in phi.terms if b.gamma < N})
    out = {}
    for eps in eps_set:
        for j in range(1, p):
            idx = WaveletIndex(N, j, eps)
            c = conj(wavelet_inner_test(idx, phi, exact))
            if c != 0:
                out[idx] = c
    return out


def expand_test_function(
    phi: TestFunction,
    n_min: int,
    n_max: int | None = None,
    tol: float = 1e-13,
    exact: bool | None = None,
) -> WaveletExpansion:
    """Wavelet coefficients ``(phi, psi_I)`` for ``n_min <= N <= n_max``.

    Levels ``N <= l(phi)`` vanish identically. Above the support exponent
    ``G`` only ``eps = 0`` survives and for ``N >= G + 2`` the coefficient is
    ``p^{-N/2} int phi``. When ``n_max`` is omitted it is chosen so that the
    pointwise tail ``|int phi| p^{-n_max}`` is at most ``tol``.
    """
    p = phi.p
    phi = canonicalize(phi)
    if exact is None:
        exact = phi.is_exact
    if not phi.terms:
        return WaveletExpansion(p)
    lo_level = phi.constancy() + 1
    G = phi.support_exponent()
    mass = integrate(phi)
    mass_abs = abs(complex(mass))
    if n_max is None:
        n_max = G + 1
        if mass_abs > 0:
            n_max = max(n_max, math.ceil(math.log(mass_abs / tol, p)))
    coeffs: dict = {}
    sup_tail = 0.0
    omitted_low = False
    for N in range(lo_level, G + 2):
        level = _level_coefficients(phi, N, exact)
        if n_min <= N <= n_max:
            coeffs.update(level)
        elif level:
            omitted_low = omitted_low or N < n_min
            sup_tail += _level_sup(level, N, p)
    for N in range(G + 2, min(n_min, n_max + 1)):
        omitted_low = omitted_low or mass_abs > 0
        sup_tail += (p - 1) * mass_abs * float(p) ** (-N)
    for N in range(max(G + 2, n_min), n_max + 1):
        c = amplitude(N, p, exact) * mass
        for j in range(1, p):
            coeffs[WaveletIndex(N, j, Fraction(0))] = c
    high_start = max(n_max, G + 1)
    if mass_abs > 0:
        sup_tail += mass_abs * float(p) ** (-high_start)

    norm2 = l2_norm_squared(phi)
    kept = 0
    for c in coeffs.values():
        kept = kept + c * conj(c)
    radicand = complex(norm2 - kept).real
    if radicand < -1e-12 * max(1.0, abs(complex(norm2))):
        raise ArithmeticError(f"Parseval violated: tail radicand {radicand}")
    l2_tail = math.sqrt(max(radicand, 0.0))
    floor = None
    if omitted_low:
        floor = lo_level
    elif mass_abs > 0 or any(N > n_max for N in range(lo_level, G + 2)):
        floor = n_max + 1
    if l2_tail == 0 and sup_tail == 0:
        floor = None
    return WaveletExpansion(p, coeffs, l2_tail, sup_tail, floor)


def _level_sup(level: dict, N: int, p: int) -> float:
    """Pointwise bound for one level: one eps per (N, j) at any point."""
    best: dict[int, float] = {}
    for idx, c in level.items():
        best[idx.j] = max(best.get(idx.j, 0.0), abs(complex(c)))
    return sum(best.values()) * p ** (-N / 2)


def point_eval(e: WaveletExpansion, x: PadicRational):
    """Value of the represented function at ``x`` and an error bound."""
    if x.p != e.p:
        raise ValueError(f"mismatched primes {x.p} and {e.p}")
    p, q = e.p, x.value
    exact = e.is_exact
    cover: dict[int, Fraction] = {}
    seen: set[tuple[int, int]] = set()
    terms = []
    for idx, c in e.coeffs.items():
        if idx.N not in cover:
            cover[idx.N] = covering_eps(idx.N, q, p)
        if cover[idx.N] != idx.eps:
            continue
        key = (idx.N, idx.j)
        assert key not in seen, "two eps at one (N, j) cannot both cover a point"
        seen.add(key)
        terms.append(c * wavelet_eval(idx, x, exact))
    if exact:
        total = sum(terms, Cyclo.rational(p, 0))
        return total, e.sup_tail
    vals = [complex(t) for t in terms]
    total = complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))
    rounding = 4 * EPS * sum(abs(v) for v in vals)
    return total, e.sup_tail + rounding
