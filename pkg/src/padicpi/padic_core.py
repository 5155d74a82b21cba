"""Exact arithmetic of rationals viewed inside Q_p.

Every element of Q_p that the library touches is a rational number, so
valuations, digits, fractional parts and characters are all exact.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

RationalLike = Union[int, Fraction, str, "PadicRational"]

# Deterministic Miller-Rabin witnesses, valid for every n < 3.3e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


@lru_cache(maxsize=256)
def is_prime(n: int) -> bool:
    """Deterministic primality test (exact for all n < 2**64)."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise ValueError(f"p must be a prime integer, got {p!r}")
    return p


def to_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, PadicRational):
        return x.value
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def parse_rational(s: str) -> Fraction:
    """Parse ``"num/den"`` or ``"num"``; floats are rejected."""
    text = s.strip()
    if any(c in text for c in ".eE"):
        raise ValueError(f"not an exact rational: {s!r}")
    return Fraction(text)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _int_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(q: Fraction, p: int) -> float | int:
    """p-adic valuation of a rational; ``math.inf`` for zero."""
    if q == 0:
        return math.inf
    return _int_valuation(q.numerator, p) - _int_valuation(q.denominator, p)


def frac_p(q: Fraction, p: int) -> Fraction:
    """Fractional part {q}_p computed through a modular inverse."""
    if q == 0:
        return Fraction(0)
    den = q.denominator
    m = _int_valuation(den, p)
    if m == 0:
        return Fraction(0)
    pm = p**m
    unit_den = den // pm
    k = q.numerator * pow(unit_den, -1, pm) % pm
    return Fraction(k, pm)


def digits(q: Fraction, p: int, count: int) -> tuple[int, list[int]]:
    """First ``count`` digits of the canonical expansion ``p^g * sum x_i p^i``.

    Digit recursion kept separate from :func:`frac_p` so each can check
    the other. Returns ``(g, [x_0, x_1, ...])``.
    """
    if q == 0:
        raise ValueError("zero has no canonical expansion")
    g = vp(q, p)
    u = q / Fraction(p) ** g
    out = []
    for _ in range(count):
        inv = pow(u.denominator % p, -1, p)
        d = u.numerator * inv % p
        out.append(d)
        u = (u - d) / p
    return g, out


@dataclass(frozen=True)
class PadicRational:
    """A rational number regarded as an element of Q_p."""

    p: int
    value: Fraction

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", to_fraction(self.value))

    def _coerce(self, other) -> Fraction:
        if isinstance(other, PadicRational):
            if other.p != self.p:
                raise ValueError(f"mismatched primes {self.p} and {other.p}")
            return other.value
        return to_fraction(other)

    def __add__(self, other):
        return PadicRational(self.p, self.value + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return PadicRational(self.p, self.value - self._coerce(other))

    def __rsub__(self, other):
        return PadicRational(self.p, self._coerce(other) - self.value)

    def __mul__(self, other):
        return PadicRational(self.p, self.value * self._coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return PadicRational(self.p, self.value / self._coerce(other))

    def __neg__(self):
        return PadicRational(self.p, -self.value)

    def valuation(self):
        return vp(self.value, self.p)

    def norm(self) -> Fraction:
        return norm(self)

    def fractional_part(self) -> Fraction:
        return frac_p(self.value, self.p)

    def __str__(self):
        return format_rational(self.value)


def as_padic(x: RationalLike, p: int) -> PadicRational:
    if isinstance(x, PadicRational):
        if x.p != p:
            raise ValueError(f"mismatched primes {x.p} and {p}")
        return x
    return PadicRational(p, to_fraction(x))


def valuation(x: PadicRational):
    """Exponent ``g`` with ``x = p^g m/n``, ``p`` dividing neither; inf at 0."""
    return vp(x.value, x.p)


def norm(x: PadicRational) -> Fraction:
    v = vp(x.value, x.p)
    if v == math.inf:
        return Fraction(0)
    return Fraction(x.p) ** (-v)


def fractional_part(x: PadicRational) -> Fraction:
    return frac_p(x.value, x.p)


def phase_to_complex(q: Fraction) -> complex:
    """``exp(2 pi i q)``, exact on quarter turns."""
    q = q % 1
    if q.denominator <= 4 and 4 % q.denominator == 0:
        return (1 + 0j, 1j, -1 + 0j, -1j)[int(q * 4)]
    t = 2.0 * math.pi * float(q)
    return complex(math.cos(t), math.sin(t))


@dataclass(frozen=True)
class UnitPhase:
    """The unit complex number ``exp(2 pi i phase)`` with an exact phase."""

    phase: Fraction
    p: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "phase", Fraction(self.phase) % 1)

    @property
    def value(self) -> complex:
        return phase_to_complex(self.phase)

    def __mul__(self, other: "UnitPhase") -> "UnitPhase":
        return UnitPhase(self.phase + other.phase, self.p or other.p)

    def conjugate(self) -> "UnitPhase":
        return UnitPhase(-self.phase, self.p)

    def __complex__(self):
        return self.value

    def __str__(self):
        q = self.phase
        if q == 0:
            return "0"
        den = q.denominator
        if self.p is not None:
            m = _int_valuation(den, self.p)
            if self.p**m == den:
                return f"{q.numerator}/{self.p}^{m}"
        return format_rational(q)


def parse_phase(s: str) -> UnitPhase:
    text = s.strip()
    if text == "0":
        return UnitPhase(Fraction(0))
    num, den = text.split("/")
    if "^" in den:
        base, exp = den.split("^")
        return UnitPhase(Fraction(int(num), int(base) ** int(exp)), int(base))
    return UnitPhase(Fraction(int(num), int(den)))


def character(x: PadicRational) -> UnitPhase:
    """The additive character ``chi_p(x) = exp(2 pi i {x}_p)``."""
    return UnitPhase(frac_p(x.value, x.p), x.p)


def canonical_center(a: Fraction, gamma: int, p: int) -> Fraction:
    """Fixed representative of the ball of radius ``p^gamma`` around ``a``."""
    scale = Fraction(p) ** gamma
    return frac_p(a * scale, p) / scale


class BallRelation(enum.Enum):
    DISJOINT = "Disjoint"
    EQUAL = "Equal"
    FIRST_INSIDE_SECOND = "FirstInsideSecond"
    SECOND_INSIDE_FIRST = "SecondInsideFirst"


@dataclass(frozen=True, order=True)
class Ball:
    """Closed ball ``{x : |x - center|_p <= p^gamma}`` with canonical center."""

    gamma: int
    center: Fraction
    p: int

    def __post_init__(self):
        check_prime(self.p)
        c = canonical_center(to_fraction(self.center), self.gamma, self.p)
        object.__setattr__(self, "center", c)

    @classmethod
    def around(cls, center: RationalLike, gamma: int, p: int) -> "Ball":
        return cls(gamma, to_fraction(center), p)

    def contains(self, x: RationalLike) -> bool:
        return vp(to_fraction(x) - self.center, self.p) >= -self.gamma

    def children(self) -> list["Ball"]:
        """The ``p`` disjoint balls of radius ``p^(gamma-1)`` covering this one."""
        step = Fraction(self.p) ** (-self.gamma)
        return [Ball(self.gamma - 1, self.center + k * step, self.p) for k in range(self.p)]

    def child_containing(self, x: Fraction) -> "Ball":
        return Ball(self.gamma - 1, x, self.p)

    def parent(self) -> "Ball":
        return Ball(self.gamma + 1, self.center, self.p)

    @property
    def measure(self) -> Fraction:
        return Fraction(self.p) ** self.gamma

    def center_norm_exponent(self):
        """``log_p |center|_p`` (``-inf`` when the center is 0)."""
        return -vp(self.center, self.p)

    def __str__(self):
        return f"B_{self.gamma}({format_rational(self.center)})"


def ball_relation(b1: Ball, b2: Ball) -> BallRelation:
    if b1.p != b2.p:
        raise ValueError(f"mismatched primes {b1.p} and {b2.p}")
    if b1.gamma == b2.gamma:
        return BallRelation.EQUAL if b2.contains(b1.center) else BallRelation.DISJOINT
    if b1.gamma < b2.gamma:
        return BallRelation.FIRST_INSIDE_SECOND if b2.contains(b1.center) else BallRelation.DISJOINT
    return BallRelation.SECOND_INSIDE_FIRST if b1.contains(b2.center) else BallRelation.DISJOINT


def haar_measure(b: Ball) -> Fraction:
    return Fraction(b.p) ** b.gamma
