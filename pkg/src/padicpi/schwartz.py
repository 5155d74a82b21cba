"""Test functions on Q_p: finite linear combinations of ball indicators.

Ball data is always exact. Coefficients are either inexact (``float`` /
``complex``) or exact (``int``, ``Fraction`` or :class:`Cyclo`); every
operation keeps exact inputs exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

from .cyclotomic import Cyclo
from .padic_core import (
    Ball,
    RationalLike,
    check_prime,
    format_rational,
    parse_rational,
    phase_to_complex,
    to_fraction,
    vp,
)


def times_phase(c, phase: Fraction, p: int):
    """``c * exp(2 pi i phase)``, exact when ``c`` is exact."""
    if isinstance(c, (Cyclo, Rational)):
        if phase % 1 == 0:
            return c
        return Cyclo.zeta(p, phase) * c
    return c * phase_to_complex(phase)


def conj(c):
    return c.conjugate()


@dataclass(frozen=True)
class TestFunction:
    """``sum_i c_i * 1_{B_i}``; ``canonical`` means disjoint balls, nonzero coefficients."""

    __test__ = False  # not a pytest class

    p: int
    terms: tuple = ()
    canonical: bool = False

    def __post_init__(self):
        check_prime(self.p)
        for ball, _ in self.terms:
            if ball.p != self.p:
                raise ValueError(f"mismatched primes {ball.p} and {self.p}")

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, p: int) -> "TestFunction":
        return cls(p, (), True)

    @classmethod
    def indicator(cls, ball: Ball, coeff=1) -> "TestFunction":
        return cls(ball.p, ((ball, coeff),), coeff != 0)

    @classmethod
    def ball(cls, p: int, center: RationalLike, gamma: int, coeff=1) -> "TestFunction":
        return cls.indicator(Ball(gamma, to_fraction(center), p), coeff)

    @classmethod
    def omega(cls, p: int) -> "TestFunction":
        """Indicator of the unit ball Z_p."""
        return cls.ball(p, 0, 0)

    @classmethod
    def sphere(cls, p: int, gamma: int) -> "TestFunction":
        """Indicator of ``{|x|_p = p^gamma}``."""
        return cls(p, ((Ball(gamma, Fraction(0), p), 1), (Ball(gamma - 1, Fraction(0), p), -1))).canonicalize()

    # -- algebra ------------------------------------------------------
    def __add__(self, other: "TestFunction") -> "TestFunction":
        if other.p != self.p:
            raise ValueError(f"mismatched primes {self.p} and {other.p}")
        return TestFunction(self.p, self.terms + other.terms)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "TestFunction":
        return TestFunction(self.p, tuple((b, c * s) for b, c in self.terms), self.canonical and s != 0)

    def __mul__(self, s):
        return self.scale(s)

    __rmul__ = __mul__

    def canonicalize(self) -> "TestFunction":
        return canonicalize(self)

    def __call__(self, x: RationalLike):
        return evaluate(self, x)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, (Cyclo, Rational)) for _, c in self.terms)

    def support_exponent(self):
        """Least ``G`` with ``supp phi`` inside ``B_G(0)``; ``None`` for zero."""
        if not self.terms:
            return None
        return max(max(b.gamma, b.center_norm_exponent()) for b, _ in self.terms)

    def constancy(self):
        """Parameter of constancy ``l(phi)`` (``math.inf`` for the zero function)."""
        phi = self if self.canonical else canonicalize(self)
        if not phi.terms:
            return math.inf
        return min(b.gamma for b, _ in phi.terms)

    # -- serialization ------------------------------------------------
    def to_dict(self) -> dict:
        terms = []
        for b, c in self.terms:
            z = complex(c)
            terms.append({"center": format_rational(b.center), "gamma": b.gamma, "re": z.real, "im": z.imag})
        return {"p": self.p, "terms": terms}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "TestFunction":
        p = int(d["p"])
        terms = []
        for t in d["terms"]:
            c = complex(t.get("re", 0.0), t.get("im", 0.0))
            terms.append((Ball(int(t["gamma"]), parse_rational(str(t["center"])), p), c))
        return cls(p, tuple(terms))

    @classmethod
    def from_json(cls, s: str) -> "TestFunction":
        return cls.from_dict(json.loads(s))


def _is_zero(c) -> bool:
    return c == 0


def canonicalize(raw: TestFunction) -> TestFunction:
    """Pointwise-equal form with disjoint balls, merged where possible."""
    if raw.canonical:
        return raw
    p = raw.p
    merged: dict[Ball, object] = {}
    for b, c in raw.terms:
        merged[b] = merged[b] + c if b in merged else c
    items = [(b, c) for b, c in merged.items() if not _is_zero(c)]
    items.sort(key=lambda t: -t[0].gamma)

    roots: list[tuple[Ball, list]] = []
    for b, c in items:
        for root, members in roots:
            if root.contains(b.center) and root.gamma >= b.gamma:
                members.append((b, c))
                break
        else:
            roots.append((b, [(b, c)]))

    leaves: dict[Ball, object] = {}

    def descend(ball, inherited, members):
        own = inherited
        inner = []
        for b, c in members:
            if b.gamma == ball.gamma:
                own = own + c
            else:
                inner.append((b, c))
        if not inner:
            leaves[ball] = own
            return
        for child in ball.children():
            sub = [(b, c) for b, c in inner if child.contains(b.center)]
            if sub:
                descend(child, own, sub)
            else:
                leaves[child] = own

    for root, members in roots:
        descend(root, 0, members)

    leaves = {b: c for b, c in leaves.items() if not _is_zero(c)}
    changed = True
    while changed:
        changed = False
        groups: dict[Ball, list[Ball]] = {}
        for b in leaves:
            groups.setdefault(b.parent(), []).append(b)
        for parent, kids in groups.items():
            if len(kids) == p:
                first = leaves[kids[0]]
                if all(leaves[k] == first for k in kids[1:]):
                    for k in kids:
                        del leaves[k]
                    leaves[parent] = first
                    changed = True
    terms = tuple(sorted(leaves.items(), key=lambda t: (t[0].gamma, t[0].center)))
    return TestFunction(p, terms, True)


def evaluate(phi: TestFunction, x: RationalLike):
    q = to_fraction(x)
    total = 0
    for b, c in phi.terms:
        if vp(q - b.center, phi.p) >= -b.gamma:
            total = total + c
    return total


def integrate(phi: TestFunction):
    total = 0
    for b, c in phi.terms:
        total = total + c * b.measure
    return total


def _overlap_measure(b1: Ball, b2: Ball):
    if b1.gamma <= b2.gamma:
        return b1.measure if b2.contains(b1.center) else None
    return b2.measure if b1.contains(b2.center) else None


def inner_product(phi: TestFunction, psi: TestFunction):
    """``int phi * conj(psi)`` over the common refinement."""
    if phi.p != psi.p:
        raise ValueError(f"mismatched primes {phi.p} and {psi.p}")
    a, b = canonicalize(phi), canonicalize(psi)
    total = 0
    for b1, c1 in a.terms:
        for b2, c2 in b.terms:
            m = _overlap_measure(b1, b2)
            if m is not None:
                total = total + c1 * conj(c2) * m
    return total


def l2_norm_squared(phi: TestFunction):
    return inner_product(phi, phi)


def fourier(phi: TestFunction) -> TestFunction:
    """``F[phi](xi) = int chi_p(xi x) phi(x) dx`` as a ball combination.

    Each ``1_{B_g(a)}`` maps to ``p^g chi_p(xi a) 1_{B_{-g}(0)}``; the
    character is constant on balls of radius ``1/|a|_p``, so the dual
    ball is split down to that radius.
    """
    p = phi.p
    out = []
    for b, c in canonicalize(phi).terms:
        scale = c * b.measure
        g = b.center_norm_exponent()
        if g <= b.gamma:
            out.append((Ball(-b.gamma, Fraction(0), p), scale))
            continue
        step = Fraction(p) ** b.gamma
        for k in range(p ** (g - b.gamma)):
            xi0 = k * step
            out.append((Ball(-g, xi0, p), times_phase(scale, xi0 * b.center, p)))
    return canonicalize(TestFunction(p, tuple(out)))


def reflect(phi: TestFunction) -> TestFunction:
    """``x -> phi(-x)``."""
    return TestFunction(phi.p, tuple((Ball(b.gamma, -b.center, phi.p), c) for b, c in phi.terms))
