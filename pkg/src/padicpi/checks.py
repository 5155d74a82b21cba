"""Invariant suites run by ``padicpi verify``."""

from __future__ import annotations

import math
import random
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DiagonalDivergenceError, NotInL2Error
from .green import (
    GreenFunction,
    continuity_bound,
    diagonal_value,
    green_eval,
    radial_oracle,
    weak_residual,
)
from .padic_core import Ball, PadicRational, ball_relation, BallRelation, character, digits, frac_p, norm, vp
from .realization import (
    DomainElement,
    InteractionConfig,
    build_r_matrix,
    construct_domain_element,
    element_with_boundary,
    friedrichs_domain_check,
    gamma_maps,
    green_identity_defect,
    is_self_adjoint,
    non_hermitian_witness,
    random_expansion,
    symmetry_defect,
)
from .schwartz import TestFunction, fourier, l2_norm_squared, reflect
from .vladimirov import (
    SpectralMultiplier,
    counterexample_series,
    counterexample_value,
    dalpha_point_oracle,
    quadratic_form,
    semigroup_defect,
)
from .wavelets import WaveletIndex, expand_test_function, gram_window, point_eval, wavelet_eval, wavelet_test_function

SUITES = ("core", "schwartz", "wavelets", "vladimirov", "green", "realization")


@dataclass
class CheckResult:
    name: str
    passed: bool
    defect: float
    tol: float
    runtime: float


@dataclass
class RunReport:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checks": [asdict(c) for c in self.checks]}


def random_rational(rng: random.Random, p: int, spread: int = 4) -> Fraction:
    num = rng.randint(-10 * p**2, 10 * p**2)
    return Fraction(num, rng.randint(1, 6)) * Fraction(p) ** rng.randint(-spread, spread)


def random_test_function(rng: random.Random, p: int, n_terms: int = 3) -> TestFunction:
    terms = []
    for _ in range(n_terms):
        gamma = rng.randint(-1, 2)
        center = Fraction(rng.randint(0, p**2), p ** rng.randint(0, 1))
        terms.append((Ball(gamma, center, p), Fraction(rng.randint(-4, 4), rng.randint(1, 3))))
    return TestFunction(p, tuple(terms)).canonicalize()


class _Runner:
    def __init__(self, report: RunReport):
        self.report = report

    def check(self, name: str, tol: float, fn):
        t0 = time.perf_counter()
        try:
            defect = float(fn())
            passed = defect <= tol
        except Exception as exc:  # a crash is a failed check, not a crashed run
            defect, passed = math.inf, False
            name = f"{name} ({type(exc).__name__}: {exc})"
        self.report.checks.append(CheckResult(name, passed, defect, tol, time.perf_counter() - t0))


def _expect(exc_type, fn) -> float:
    try:
        fn()
    except exc_type:
        return 0.0
    return math.inf


def suite_core(p, alpha, tol, seed, cfg=None) -> RunReport:
    rng = random.Random(seed)
    run = _Runner(RunReport("core"))
    xs = [random_rational(rng, p) for _ in range(40)]

    def frac_vs_digits():
        worst = 0
        for x in xs:
            if x == 0:
                continue
            v, ds = digits(x, p, 12)
            tail = sum(Fraction(d) * Fraction(p) ** (v + i) for i, d in enumerate(ds) if v + i < 0)
            worst = max(worst, abs(tail - frac_p(x, p)))
        return worst

    def ultrametric():
        worst = 0.0
        for x, y in zip(xs, xs[1:]):
            worst = max(worst, float(norm(PadicRational(p, x + y)) - max(norm(PadicRational(p, x)), norm(PadicRational(p, y)))))
        return max(worst, 0.0)

    def character_additive():
        worst = 0.0
        for x, y in zip(xs, xs[1:]):
            a = character(PadicRational(p, x + y))
            b = character(PadicRational(p, x)) * character(PadicRational(p, y))
            worst = max(worst, float((a.phase - b.phase) % 1))
        return worst

    def balls_nested_or_disjoint():
        bad = 0
        for x, y in zip(xs, xs[1:]):
            b1, b2 = Ball.around(x, rng.randint(-2, 2), p), Ball.around(y, rng.randint(-2, 2), p)
            rel = ball_relation(b1, b2)
            inside = b2.contains(b1.center) and b1.gamma <= b2.gamma
            if (rel in (BallRelation.EQUAL, BallRelation.FIRST_INSIDE_SECOND)) != inside:
                bad += 1
        return bad

    run.check("fractional part matches digit expansion", 0, frac_vs_digits)
    run.check("strong triangle inequality", 0, ultrametric)
    run.check("character is additive", 0, character_additive)
    run.check("balls nested or disjoint", 0, balls_nested_or_disjoint)
    return run.report


def suite_schwartz(p, alpha, tol, seed, cfg=None) -> RunReport:
    rng = random.Random(seed)
    run = _Runner(RunReport("schwartz"))
    phis = [random_test_function(rng, p) for _ in range(5)]

    def inversion():
        bad = 0
        for phi in phis:
            bad += fourier(fourier(phi)) != reflect(phi).canonicalize()
        return bad

    def parseval():
        worst = 0.0
        for phi in phis:
            worst = max(worst, abs(complex(l2_norm_squared(fourier(phi)) - l2_norm_squared(phi))))
        return worst

    def pointwise_canonical():
        worst = 0.0
        for phi in phis:
            raw = TestFunction(p, phi.terms + phi.terms)
            for _ in range(10):
                x = random_rational(rng, p)
                worst = max(worst, abs(complex(raw(x) - raw.canonicalize()(x))))
        return worst

    run.check("F F phi = phi(-x) exactly", 0, inversion)
    run.check("Parseval identity exactly", 0, parseval)
    run.check("canonical form is pointwise equal", 0, pointwise_canonical)
    return run.report


def suite_wavelets(p, alpha, tol, seed, cfg=None) -> RunReport:
    rng = random.Random(seed)
    run = _Runner(RunReport("wavelets"))
    run.check("Gram identity (exact kernel)", 0, lambda: 0 if gram_window(p, -2, 2, 2, exact=True).exact_identity else 1)
    run.check("Gram identity (float kernel)", 1e-12, lambda: gram_window(p, -2, 2, 2).max_defect)

    def reconstruction():
        worst = 0.0
        for _ in range(3):
            phi = random_test_function(rng, p)
            if not phi.terms:
                continue
            e = expand_test_function(phi, phi.constancy() + 1, tol=tol)
            for _ in range(5):
                x = random_rational(rng, p, 2)
                val, bound = point_eval(e, PadicRational(p, x))
                target = complex(phi(x))
                # exact values are compared after conversion to floats
                worst = max(worst, abs(complex(val) - target) - bound - 1e-14 * max(1.0, abs(target)))
        return max(worst, 0.0)

    run.check("expansion reproduces point values within bound", 0, reconstruction)
    return run.report


def suite_vladimirov(p, alpha, tol, seed, cfg=None) -> RunReport:
    rng = random.Random(seed)
    nrng = np.random.default_rng(seed)
    run = _Runner(RunReport("vladimirov"))

    def eigenrelation():
        worst = 0.0
        for N in (-1, 0, 1, 2):
            idx = WaveletIndex(N, rng.randint(1, p - 1), Fraction(rng.randrange(p), p) if N < 1 else 0)
            phi = wavelet_test_function(idx, p)
            for _ in range(5):
                x = PadicRational(p, random_rational(rng, p, 2))
                got = dalpha_point_oracle(phi, alpha, x)
                worst = max(worst, abs(got - p ** (alpha * (1 - N)) * wavelet_eval(idx, x)))
        return worst

    def semigroup():
        return max(semigroup_defect(random_expansion(p, nrng), alpha, 0.5 + rng.random()) for _ in range(10))

    def positivity():
        return max(max(0.0, -quadratic_form(SpectralMultiplier(alpha), random_expansion(p, nrng))) for _ in range(10))

    def counterexample():
        return max(abs(counterexample_series(p, n) - counterexample_value(p, n)) for n in range(1, 31))

    run.check("eigenrelation vs Fourier definition", 1e-9, eigenrelation)
    run.check("semigroup property", 1e-12, semigroup)
    run.check("positivity of the form", 0, positivity)
    run.check("counterexample closed form vs series", 1e-12, counterexample)
    return run.report


def suite_green(p, alpha, tol, seed, cfg=None) -> RunReport:
    rng = random.Random(seed)
    run = _Runner(RunReport("green"))
    if alpha <= 0.5:
        run.check("GreenFunction rejects alpha <= 1/2", 0, lambda: _expect(NotInL2Error, lambda: GreenFunction(p, alpha, 0)))
        run.check("radial oracle rejects alpha <= 1/2", 0, lambda: _expect(NotInL2Error, lambda: radial_oracle(p, alpha, 0)))
        return run.report
    etol = min(tol, 1e-9)

    def radial():
        worst = 0.0
        for _ in range(10):
            xk, x = random_rational(rng, p), random_rational(rng, p)
            if x == xk:
                continue
            v1, b1 = green_eval(GreenFunction(p, alpha, xk), x, etol)
            v2, b2 = radial_oracle(p, alpha, -vp(x - xk, p), etol)
            worst = max(worst, abs(v1 - v2) - (b1 + b2))
        return max(worst, 0.0)

    def residual():
        worst = 0.0
        for xk in (Fraction(0), Fraction(1), Fraction(1, p)):
            r, b = weak_residual(GreenFunction(p, alpha, xk), TestFunction.omega(p), 1e-12)
            worst = max(worst, r - b)
        return max(worst, 0.0)

    def uniform_bound():
        # |u(x)| <= ||h|| ||(D^alpha + I) u|| on random finite elements
        nrng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(10):
            e = random_expansion(p, nrng)
            bound = continuity_bound(e, alpha)
            for _ in range(5):
                v, _ = point_eval(e, PadicRational(p, random_rational(rng, p, 2)))
                worst = max(worst, abs(v) - bound * (1 + 1e-12))
        return max(worst, 0.0)

    run.check("direct series vs radial form", 0, radial)
    run.check("weak identity on the unit ball", 0, residual)
    run.check("uniform point bound", 0, uniform_bound)
    if alpha > 1:
        run.check(
            "diagonal value vs series at the anchor",
            0,
            lambda: max(0.0, abs(diagonal_value(p, alpha, etol)[0] - green_eval(GreenFunction(p, alpha, 0), 0, etol)[0]) - 2 * etol),
        )
    else:
        run.check(
            "anchor value diverges",
            0,
            lambda: _expect(DiagonalDivergenceError, lambda: green_eval(GreenFunction(p, alpha, 0), 0)),
        )
    return run.report


def default_config(p: int, alpha: float, rng: np.random.Generator) -> InteractionConfig:
    n = 3
    A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return InteractionConfig(p, alpha, ("0", "1", f"1/{p}"), A + A.conj().T, 0.0)


def suite_realization(p, alpha, tol, seed, cfg=None) -> RunReport:
    nrng = np.random.default_rng(seed)
    run = _Runner(RunReport("realization"))
    if alpha <= 0.5:
        run.check("configuration rejects alpha <= 1/2", 0, lambda: _expect(NotInL2Error, lambda: default_config(p, alpha, nrng)))
        return run.report
    cfg = cfg or default_config(p, alpha, nrng)
    R = build_r_matrix(cfg)
    n = cfg.n

    def rvec():
        return nrng.normal(size=n) + 1j * nrng.normal(size=n)

    def green_identity():
        worst = 0.0
        for _ in range(10):
            f = DomainElement(random_expansion(cfg.p, nrng), rvec())
            g = DomainElement(random_expansion(cfg.p, nrng), rvec())
            worst = max(worst, green_identity_defect(f, g, cfg, R))
        return worst

    def surjectivity():
        worst = 0.0
        for _ in range(10):
            a, b = rvec(), rvec()
            bd = gamma_maps(element_with_boundary(a, b, cfg, R), cfg, R)
            worst = max(worst, float(np.max(np.abs(bd.gamma0 - a))), float(np.max(np.abs(bd.gamma1 - b))))
        return worst

    def symmetry():
        if not is_self_adjoint(cfg):
            f, g = non_hermitian_witness(cfg, R)
            return 0.0 if abs(symmetry_defect(f, g, cfg)) > 1e-3 else 1.0
        worst = 0.0
        for _ in range(5):
            f = construct_domain_element(rvec(), cfg, R)
            g = construct_domain_element(rvec(), cfg, R)
            worst = max(worst, abs(symmetry_defect(f, g, cfg)))
        return worst

    def friedrichs():
        u = random_expansion(cfg.p, nrng)
        bad = 0
        if cfg.alpha <= 1:
            bad += not friedrichs_domain_check(DomainElement(u, np.zeros(n)), cfg, R)
            bad += friedrichs_domain_check(DomainElement(u, np.eye(n)[0]), cfg, R)
        else:
            f = element_with_boundary(np.zeros(n), -rvec(), cfg, R)
            bad += not friedrichs_domain_check(f, cfg, R)
            g = element_with_boundary(np.eye(n)[0], -rvec(), cfg, R)
            bad += friedrichs_domain_check(g, cfg, R)
        return bad

    run.check("abstract Green identity", 1e-10, green_identity)
    run.check("boundary maps are onto", 1e-10, surjectivity)
    run.check("symmetry follows B" if is_self_adjoint(cfg) else "non-Hermitian B has a witness", 1e-9, symmetry)
    run.check("Friedrichs predicate", 0, friedrichs)
    return run.report


SUITE_FUNCS = {
    "core": suite_core,
    "schwartz": suite_schwartz,
    "wavelets": suite_wavelets,
    "vladimirov": suite_vladimirov,
    "green": suite_green,
    "realization": suite_realization,
}


def run_suite(name: str, p: int, alpha: float, tol: float, seed: int, cfg=None) -> list[RunReport]:
    names = SUITES if name == "all" else (name,)
    return [SUITE_FUNCS[s](p, alpha, tol, seed, cfg) for s in names]
