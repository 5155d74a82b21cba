"""Exact values in Q(zeta_{p^oo}, sqrt p).

Characters of Q_p take values in p-power roots of unity and wavelet
amplitudes carry half-integer powers of p, so every exact quantity the
library produces (test-function coefficients after a Fourier transform,
wavelet inner products, Gram entries) lives in this field.

Elements are stored in the power basis of the largest cyclotomic level
present, which makes equality and zero tests exact. The square root of p
is folded into the cyclotomic part when it belongs there (p = 2 and
p = 1 mod 4); for p = 3 mod 4 it is kept as a second coordinate.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from .padic_core import check_prime, phase_to_complex


def _level(q: Fraction, p: int) -> int:
    den, m = q.denominator, 0
    while den > 1:
        den //= p
        m += 1
    return m


def _reduce(terms: dict, p: int) -> dict:
    """Rewrite ``sum c_q zeta^q`` in the power basis of its top level."""
    terms = {q % 1: c for q, c in terms.items() if c != 0}
    if not terms:
        return {}
    top = max(_level(q, p) for q in terms)
    if top == 0:
        c = sum(terms.values(), Fraction(0))
        return {Fraction(0): c} if c else {}
    pm = p**top
    block = p ** (top - 1)
    cutoff = (p - 1) * block
    out: dict[int, Fraction] = {}
    for q, c in terms.items():
        k = int(q * pm)
        if k < cutoff:
            out[k] = out.get(k, 0) + c
        else:
            r = k - cutoff
            for t in range(p - 1):
                kk = r + t * block
                out[kk] = out.get(kk, 0) - c
    return {Fraction(k, pm): c for k, c in out.items() if c != 0}


def _convolve(a: dict, b: dict) -> dict:
    out: dict = {}
    for qa, ca in a.items():
        for qb, cb in b.items():
            q = (qa + qb) % 1
            out[q] = out.get(q, 0) + ca * cb
    return out


def _sqrt_p_terms(p: int) -> dict | None:
    """sqrt(p) as a cyclotomic sum, when it is one."""
    if p == 2:
        return {Fraction(1, 8): Fraction(1), Fraction(7, 8): Fraction(1)}
    if p % 4 == 1:
        # quadratic Gauss sum
        return {Fraction(k, p): Fraction(1 if pow(k, (p - 1) // 2, p) == 1 else -1) for k in range(1, p)}
    return None


class Cyclo:
    """Exact ``A + sqrt(p) B`` with ``A, B`` in the p-power cyclotomic field."""

    __slots__ = ("p", "main", "root")

    def __init__(self, p: int, main: dict | None = None, root: dict | None = None):
        self.p = check_prime(p)
        main = dict(main or {})
        root = dict(root or {})
        fold = _sqrt_p_terms(p)
        if fold is not None and root:
            for q, c in _convolve(root, fold).items():
                main[q] = main.get(q, 0) + c
            root = {}
        self.main = _reduce({Fraction(q): Fraction(c) for q, c in main.items()}, p)
        self.root = _reduce({Fraction(q): Fraction(c) for q, c in root.items()}, p)

    @classmethod
    def rational(cls, p: int, c) -> "Cyclo":
        return cls(p, {Fraction(0): Fraction(c)})

    @classmethod
    def zeta(cls, p: int, phase: Fraction, coeff=1) -> "Cyclo":
        """``coeff * exp(2 pi i phase)``."""
        return cls(p, {Fraction(phase) % 1: Fraction(coeff)})

    @classmethod
    def p_power_half(cls, p: int, e: int) -> "Cyclo":
        """``p^(e/2)``."""
        if e % 2 == 0:
            return cls.rational(p, Fraction(p) ** (e // 2))
        return cls(p, root={Fraction(0): Fraction(p) ** ((e - 1) // 2)})

    def _lift(self, other):
        if isinstance(other, Cyclo):
            if other.p != self.p:
                raise ValueError(f"mismatched primes {self.p} and {other.p}")
            return other
        if isinstance(other, Rational):
            return Cyclo.rational(self.p, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) + other
        main = dict(self.main)
        for q, c in o.main.items():
            main[q] = main.get(q, 0) + c
        root = dict(self.root)
        for q, c in o.root.items():
            root[q] = root.get(q, 0) + c
        return Cyclo(self.p, main, root)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.p, {q: -c for q, c in self.main.items()}, {q: -c for q, c in self.root.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) * other
        main = _convolve(self.main, o.main)
        for q, c in _convolve(self.root, o.root).items():
            main[q] = main.get(q, 0) + self.p * c
        root = _convolve(self.main, o.root)
        for q, c in _convolve(self.root, o.main).items():
            root[q] = root.get(q, 0) + c
        return Cyclo(self.p, main, root)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            return self * (1 / Fraction(other))
        return complex(self) / other

    def conjugate(self) -> "Cyclo":
        return Cyclo(self.p, {-q: c for q, c in self.main.items()}, {-q: c for q, c in self.root.items()})

    def is_zero(self) -> bool:
        return not self.main and not self.root

    def is_rational(self) -> bool:
        return not self.root and set(self.main) <= {Fraction(0)}

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("value is not rational")
        return self.main.get(Fraction(0), Fraction(0))

    def __complex__(self):
        def total(d):
            vals = [float(c) * phase_to_complex(q) for q, c in d.items()]
            return complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))

        return total(self.main) + math.sqrt(self.p) * total(self.root)

    def __abs__(self):
        return abs(complex(self))

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return complex(self) == other
        return self.main == o.main and self.root == o.root

    def __hash__(self):
        return hash((self.p, frozenset(self.main.items()), frozenset(self.root.items())))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        def fmt(d):
            return " + ".join(f"{c}*z^{q}" for q, c in sorted(d.items())) or "0"

        if self.root:
            return f"Cyclo(p={self.p}: {fmt(self.main)} + sqrt(p)*({fmt(self.root)}))"
        return f"Cyclo(p={self.p}: {fmt(self.main)})"


def is_exact(c) -> bool:
    return isinstance(c, (Cyclo, Rational))
