"""Acceptance criteria 1-10, each at its stated tolerance.

Every test prints one ``[PASS]/[FAIL] criterion k`` line; the lines are
repeated in the terminal summary.
"""

import random
import time
from fractions import Fraction

import numpy as np

from padicpi import kernels
from padicpi.green import (
    GreenFunction,
    green_eval,
    half_power_increment,
    half_power_lower_increment,
    half_power_membership,
    radial_oracle,
    weak_residual,
)
from padicpi.padic_core import PadicRational, vp
from padicpi.realization import (
    DomainElement,
    InteractionConfig,
    build_r_matrix,
    construct_domain_element,
    element_with_boundary,
    friedrichs_domain_check,
    gamma_maps,
    green_identity_defect,
    is_eta_self_adjoint,
    is_self_adjoint,
    non_hermitian_witness,
    random_expansion,
    realization_domain_check,
    symmetry_defect,
)
from padicpi.schwartz import TestFunction
from padicpi.vladimirov import (
    Counterexample,
    SpectralMultiplier,
    counterexample_series,
    counterexample_value,
    dalpha_point_oracle,
    domain_membership_partial,
    membership_tail_bound,
    semigroup_defect,
)
from padicpi.wavelets import WaveletExpansion, WaveletIndex, covering_eps, gram_window, wavelet_eval, wavelet_test_function


def rand_point(rng, p, spread=3):
    return Fraction(rng.randint(-30 * p, 30 * p), rng.choice([1, 1, 7])) * Fraction(p) ** rng.randint(-spread, spread)


def test_criterion_1_orthonormality(criterion):
    t0 = time.perf_counter()
    worst, exact_ok, counts = 0.0, True, []
    for p in (2, 3, 5):
        ex = gram_window(p, -3, 3, 3, exact=True)
        fl = gram_window(p, -3, 3, 3, exact=False)
        expected = sum((p - 1) * p ** (3 - N) for N in range(-3, 4))
        exact_ok = exact_ok and ex.exact_identity and ex.n_indices == expected == fl.n_indices
        worst = max(worst, fl.max_defect)
        counts.append(ex.n_indices)
    elapsed = time.perf_counter() - t0
    ok = exact_ok and worst <= 1e-12 and elapsed <= 10
    criterion(1, ok, f"Gram = I on {counts} indices (p=2,3,5), exact={exact_ok}, float defect {worst:.2e}, {elapsed:.2f}s [{kernels.BACKEND}]")


def test_criterion_2_eigenrelation(criterion):
    rng = random.Random(2)
    t0 = time.perf_counter()
    worst = 0.0
    for p in (2, 3):
        indices = []
        for N in (-1, 0, 1):
            for k in range(3):
                indices.append(WaveletIndex(N, 1 + k % (p - 1), Fraction(rng.randrange(p), p)))
        points = [PadicRational(p, rand_point(rng, p, 2)) for _ in range(20)]
        for alpha in (0.5, 1.0, 2.0):
            lam = SpectralMultiplier(alpha)
            for idx in indices:
                psi = wavelet_test_function(idx, p, exact=False)
                for x in points:
                    d = abs(dalpha_point_oracle(psi, alpha, x) - lam.eigenvalue(idx.N, p) * wavelet_eval(idx, x))
                    worst = max(worst, d)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed <= 5
    criterion(2, ok, f"D^alpha psi = p^(alpha(1-N)) psi on 20 pts x 9 idx x 3 alpha (p=2,3): defect {worst:.2e}, {elapsed:.2f}s")


def test_criterion_3_semigroup(criterion):
    rng = np.random.default_rng(3)
    worst = 0.0
    for i in range(50):
        p = (2, 3, 5)[i % 3]
        e = random_expansion(p, rng, n_terms=6, n_range=(-4, 4))
        a1, a2 = rng.uniform(0.1, 3.0, size=2)
        worst = max(worst, semigroup_defect(e, float(a1), float(a2)))
    criterion(3, worst <= 1e-12, f"D^a1 D^a2 = D^(a1+a2) on 50 expansions: coefficient defect {worst:.2e}")


def test_criterion_4_counterexample(criterion):
    worst = 0.0
    for p in (2, 3):
        for n in range(1, 31):
            worst = max(worst, abs(counterexample_series(p, n) - counterexample_value(p, n)))
    f = Counterexample(2)
    low = domain_membership_partial(f, 0.4, -60)
    bound = membership_tail_bound(2, 0.4, -60)
    deeper = domain_membership_partial(f, 0.4, -400)
    tail_ok = bound < 1e-6 and 0 <= deeper[-1] - low[-1] <= bound
    high = domain_membership_partial(f, 0.75, -60)
    ok = worst <= 1e-12 and tail_ok and high[-1] > 1e3
    criterion(
        4,
        ok,
        f"series vs closed form n<=30 (p=2,3): {worst:.2e}; alpha=0.4 sum {low[-1]:.6f} tail<={bound:.2e}; alpha=0.75 sum at -60 {high[-1]:.3g}",
    )


def test_criterion_5_weak_identity(criterion):
    worst_omega = 0.0
    for p in (2, 3):
        for xk in (Fraction(0), Fraction(1), Fraction(1, p)):
            for alpha in (0.8, 1.5, 3.0):
                r, _ = weak_residual(GreenFunction(p, alpha, xk), TestFunction.omega(p), tol=1e-12)
                worst_omega = max(worst_omega, r)
    rng = np.random.default_rng(5)
    worst_finite = 0.0
    for p in (2, 3):
        for alpha in (0.8, 1.5, 3.0):
            for xk in (Fraction(0), Fraction(1), Fraction(1, p)):
                r, _ = weak_residual(GreenFunction(p, alpha, xk), random_expansion(p, rng, n_terms=8))
                worst_finite = max(worst_finite, r)
    ok = worst_omega <= 1e-10 and worst_finite <= 1e-12
    criterion(5, ok, f"<h_k,(D^alpha+I)Omega> = Omega(x_k): {worst_omega:.2e}; finite wavelet phi: {worst_finite:.2e}")


def test_criterion_6_radial(criterion):
    rng = random.Random(6)
    worst, within = 0.0, True
    for p in (2, 3):
        for alpha in (0.8, 1.5, 3.0):
            for _ in range(20):
                xk = rand_point(rng, p)
                x = xk
                while x == xk:
                    x = rand_point(rng, p)
                v1, b1 = green_eval(GreenFunction(p, alpha, xk), x, tol=1e-9)
                v2, b2 = radial_oracle(p, alpha, -vp(x - xk, p), tol=1e-9)
                d = abs(v1 - v2)
                within = within and d <= b1 + b2
                worst = max(worst, d)
    ok = within and worst <= 1e-8
    criterion(6, ok, f"green_eval vs radial_oracle on 120 pairs at tol 1e-9: max gap {worst:.2e}, within bounds={within}")


def test_criterion_7_half_power(criterion):
    s = half_power_membership(GreenFunction(2, 1.5, 0), -100)
    last_inc = max(s.upper[-1] - s.upper[-2], s.lower[-1] - s.lower[-2])
    cauchy = last_inc < 1e-10
    d = half_power_membership(GreenFunction(2, 0.8, 0), -100)
    consistent = all(
        half_power_increment(2, 0.8, N) >= half_power_lower_increment(2, 0.8, N) for N in range(-100, 1)
    ) and all(a >= b for a, b in zip(d.lower, d.lower_bound))
    ok = cauchy and d.lower[-1] > 1e3 and consistent
    criterion(
        7,
        ok,
        f"alpha=1.5 last increment {last_inc:.2e}; alpha=0.8 sum at -100 {d.lower[-1]:.3g} >= lower bound {d.lower_bound[-1]:.3g}",
    )


def test_criterion_8_green_identity(criterion):
    rng = np.random.default_rng(8)
    worst, worst_surj = 0.0, 0.0
    for i in range(50):
        p = (2, 3)[i % 2]
        n = 1 + i % 3
        alpha = (0.8, 1.5)[(i // 2) % 2]
        points = [Fraction(0), Fraction(1), Fraction(1, p)][:n]
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        cfg = InteractionConfig(p, alpha, points, A)
        R = build_r_matrix(cfg)

        def vec():
            return rng.normal(size=n) + 1j * rng.normal(size=n)

        f = DomainElement(random_expansion(p, rng), vec())
        g = DomainElement(random_expansion(p, rng), vec())
        worst = max(worst, green_identity_defect(f, g, cfg, R))
        a, b = vec(), vec()
        bd = gamma_maps(element_with_boundary(a, b, cfg, R), cfg, R)
        worst_surj = max(worst_surj, float(np.max(np.abs(bd.gamma0 - a))), float(np.max(np.abs(bd.gamma1 - b))))
    ok = worst <= 1e-10 and worst_surj <= 1e-10
    criterion(8, ok, f"Green identity on 50 pairs (n=1..3, alpha=0.8,1.5): {worst:.2e}; surjectivity round trip {worst_surj:.2e}")


def _cfg(p, alpha, n, B, Y=None):
    points = [Fraction(0), Fraction(1), Fraction(1, p)][:n]
    return InteractionConfig(p, alpha, points, B, 0.0, Y)


def test_criterion_9_classification(criterion):
    rng = np.random.default_rng(9)
    sym_worst, sa_ok = 0.0, True
    for i in range(20):
        n, alpha = 2 + i % 2, (0.8, 1.5)[i % 2]
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        cfg = _cfg(2, alpha, n, A + A.conj().T)
        R = build_r_matrix(cfg)
        f = construct_domain_element(rng.normal(size=n) + 1j * rng.normal(size=n), cfg, R)
        g = construct_domain_element(rng.normal(size=n) + 1j * rng.normal(size=n), cfg, R)
        sa_ok = sa_ok and is_self_adjoint(cfg) and realization_domain_check(f, cfg, R) and realization_domain_check(g, cfg, R)
        sym_worst = max(sym_worst, abs(symmetry_defect(f, g, cfg)))

    wit_min, nsa_ok = np.inf, True
    for i in range(20):
        n, alpha = 2 + i % 2, (0.8, 1.5)[i % 2]
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        cfg = _cfg(3, alpha, n, A)
        R = build_r_matrix(cfg)
        f, g = non_hermitian_witness(cfg, R)
        nsa_ok = nsa_ok and not is_self_adjoint(cfg)
        wit_min = min(wit_min, abs(symmetry_defect(f, g, cfg)))

    eta_ok, yb_worst, non_herm_seen = True, 0.0, False
    gate_ok = True
    for i in range(10):
        n = 2 + i % 2
        H = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        H = H + H.conj().T
        # high regime: any invertible Y
        Y = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) + 3 * np.eye(n)
        cfg = _cfg(2, 1.5, n, np.linalg.solve(Y, H), Y)
        v = is_eta_self_adjoint(cfg, build_r_matrix(cfg))
        eta_ok = eta_ok and bool(v)
        yb_worst = max(yb_worst, v.yb_defect)
        non_herm_seen = non_herm_seen or not is_self_adjoint(cfg)
        # low regime: Y = R^{-1} K with K Hermitian makes RY Hermitian
        low = _cfg(2, 0.8, n, np.eye(n))
        R = build_r_matrix(low)
        K = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        K = K + K.conj().T + 4 * n * np.eye(n)
        Yg = np.linalg.solve(R.entries, K)
        good = _cfg(2, 0.8, n, np.linalg.solve(Yg, H), Yg)
        vg = is_eta_self_adjoint(good, R)
        eta_ok = eta_ok and bool(vg)
        yb_worst = max(yb_worst, vg.yb_defect)
        non_herm_seen = non_herm_seen or not is_self_adjoint(good)
        # same YB-Hermitian construction with RY not Hermitian must be refused
        bad = _cfg(2, 0.8, n, np.linalg.solve(Y, H), Y)
        vb = is_eta_self_adjoint(bad, R)
        gate_ok = gate_ok and vg.ry_required and not vb and vb.failed == ["RY not Hermitian"] and vb.yb_defect <= 1e-12

    ok = (
        sa_ok
        and sym_worst <= 1e-9
        and nsa_ok
        and wit_min > 1e-3
        and eta_ok
        and yb_worst <= 1e-12
        and non_herm_seen
        and gate_ok
    )
    criterion(
        9,
        ok,
        f"Hermitian B: symmetry {sym_worst:.2e}; non-Hermitian witness min {wit_min:.3g}; "
        f"eta families YB defect {yb_worst:.2e}, non-Hermitian instance={non_herm_seen}, RY gate={gate_ok}",
    )


def test_criterion_10_friedrichs(criterion):
    rng = np.random.default_rng(10)
    low_ok = True
    for i in range(20):
        n = 1 + i % 3
        cfg = _cfg(2, 0.8, n, np.eye(n))
        R = build_r_matrix(cfg)
        c = np.zeros(n, dtype=complex) if i % 2 else rng.normal(size=n) + 1j * rng.normal(size=n)
        f = DomainElement(random_expansion(2, rng), c)
        low_ok = low_ok and friedrichs_domain_check(f, cfg, R) == (not c.any())
    high_ok = True
    for i in range(20):
        n = 1 + i % 3
        cfg = _cfg(3, 2.0, n, np.eye(n))
        R = build_r_matrix(cfg)
        c = rng.normal(size=n) + 1j * rng.normal(size=n)
        f = element_with_boundary(np.zeros(n), -c, cfg, R)
        accepted = friedrichs_domain_check(f, cfg, R) and np.any(f.c)
        # perturb the value at x_1 by a wavelet that does not vanish there
        x1 = cfg.points[0]
        idx = WaveletIndex(0, 1, covering_eps(0, x1, 3))
        bump = DomainElement(WaveletExpansion(3, {idx: 0.3}), np.zeros(n))
        rejected = not friedrichs_domain_check(f + bump, cfg, R)
        high_ok = high_ok and accepted and rejected and abs(wavelet_eval(idx, PadicRational(3, x1))) > 0
    criterion(10, low_ok and high_ok, f"alpha=0.8 predicate <=> c=0 on 20 elements: {low_ok}; alpha=2 gamma0=0 accepted, perturbed rejected: {high_ok}")
