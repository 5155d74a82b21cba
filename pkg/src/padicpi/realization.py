"""Finite-rank point interactions for D^alpha.

Elements of the adjoint domain are ``f = u + sum_j c_j h_j`` with ``u`` a
finite wavelet expansion and ``h_j`` the Green function at ``x_j``. The
boundary maps are ``Gamma_0 f = (u(x_k) + (R c)_k)_k`` and ``Gamma_1 f = -c``,
and the realization ``A_B`` is the restriction to ``B Gamma_0 f = Gamma_1 f``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NotInL2Error, RangeError, SingularEtaError
from .green import DeltaFunctional, GreenFunction, delta_pairing, diagonal_value, green_eval, pair_with_green
from .padic_core import PadicRational, check_prime, format_rational, parse_rational, to_fraction, vp
from .vladimirov import SpectralMultiplier, apply_spectral
from .wavelets import WaveletExpansion, WaveletIndex, covering_eps, wavelet_eval

MAX_POINTS = 64


def _complex_matrix(data, n: int, name: str) -> np.ndarray:
    m = np.array([[complex(*e) if isinstance(e, (list, tuple)) else complex(e) for e in row] for row in data], dtype=complex)
    if m.shape != (n, n):
        raise ValueError(f"{name} must be {n}x{n}, got shape {m.shape}")
    return m


def _encode_matrix(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


@dataclass
class InteractionConfig:
    p: int
    alpha: float
    points: tuple
    B: np.ndarray
    r: float = 0.0
    Y: np.ndarray | None = None

    def __post_init__(self):
        check_prime(self.p)
        self.alpha = float(self.alpha)
        if not self.alpha > 0.5:
            raise NotInL2Error(self.alpha)
        self.points = tuple(to_fraction(x) for x in self.points)
        n = len(self.points)
        if not 1 <= n <= MAX_POINTS:
            raise ValueError(f"need between 1 and {MAX_POINTS} points, got {n}")
        if len(set(self.points)) != n:
            raise ValueError("interaction points must be distinct")
        self.B = _complex_matrix(self.B, n, "B")
        if self.Y is not None:
            self.Y = _complex_matrix(self.Y, n, "Y")
        self.r = float(self.r)

    @property
    def n(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        d = {
            "p": self.p,
            "alpha": self.alpha,
            "points": [format_rational(x) for x in self.points],
            "B": _encode_matrix(self.B),
            "r": self.r,
        }
        if self.Y is not None:
            d["Y"] = _encode_matrix(self.Y)
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "InteractionConfig":
        return cls(
            int(d["p"]),
            float(d["alpha"]),
            tuple(parse_rational(str(x)) for x in d["points"]),
            d["B"],
            float(d.get("r", 0.0)),
            d.get("Y"),
        )

    @classmethod
    def from_json(cls, s: str) -> "InteractionConfig":
        return cls.from_dict(json.loads(s))

    def greens(self) -> list[GreenFunction]:
        return [GreenFunction(self.p, self.alpha, x) for x in self.points]


@dataclass
class DomainElement:
    """``f = u + sum_j c_j h_j``."""

    u: WaveletExpansion
    c: np.ndarray

    def __post_init__(self):
        if not self.u.is_finite:
            raise ValueError("regular part must be a finite expansion")
        self.c = np.asarray(self.c, dtype=complex)

    def __add__(self, other: "DomainElement") -> "DomainElement":
        return DomainElement(self.u + other.u, self.c + other.c)

    def scale(self, s) -> "DomainElement":
        return DomainElement(self.u.scale(s), self.c * s)


@dataclass
class BoundaryData:
    gamma0: np.ndarray
    gamma1: np.ndarray


@dataclass
class RMatrix:
    entries: np.ndarray
    provenance: list = field(default_factory=list)
    bounds: np.ndarray | None = None


def hermiticity_defect(m: np.ndarray) -> float:
    """``max |m - m^H|`` relative to ``max(1, max |m|)``."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - m.conj().T)) / max(1.0, float(np.max(np.abs(m)))))


def build_r_matrix(cfg: InteractionConfig, tol: float = 1e-12) -> RMatrix:
    n, p = cfg.n, cfg.p
    R = np.zeros((n, n), dtype=complex)
    bounds = np.zeros((n, n))
    prov = [["computed"] * n for _ in range(n)]
    greens = cfg.greens()
    for k in range(n):
        for j in range(n):
            if k == j:
                if cfg.alpha > 1:
                    R[k, k], bounds[k, k] = diagonal_value(p, cfg.alpha, tol)
                else:
                    R[k, k] = cfg.r
                    prov[k][k] = "regularized"
            else:
                R[k, j], bounds[k, j] = green_eval(greens[j], cfg.points[k], tol)
    defect = hermiticity_defect(R)
    if defect > 1e-10:
        raise ArithmeticError(f"R matrix not Hermitian (defect {defect})")
    return RMatrix(R, prov, bounds)


def _values_at_points(u: WaveletExpansion, cfg: InteractionConfig) -> np.ndarray:
    return np.array([delta_pairing(DeltaFunctional(cfg.p, x), u) for x in cfg.points], dtype=complex)


def gamma_maps(f: DomainElement, cfg: InteractionConfig, R: RMatrix) -> BoundaryData:
    if f.c.shape != (cfg.n,):
        raise ValueError(f"defect vector must have length {cfg.n}")
    g0 = _values_at_points(f.u, cfg) + R.entries @ f.c
    return BoundaryData(g0, -f.c)


def adjoint_apply(f: DomainElement, cfg: InteractionConfig) -> DomainElement:
    """``A* f = D^alpha u - sum c_j h_j``, returned in the same representation."""
    return DomainElement(apply_spectral(SpectralMultiplier(cfg.alpha), f.u), -f.c)


def _l2_inner(u: WaveletExpansion, v: WaveletExpansion) -> complex:
    total = 0j
    for idx, c in u.coeffs.items():
        d = v.coeffs.get(idx)
        if d is not None:
            total += complex(c) * complex(d).conjugate()
    return total


def inner_modulo_hh(f: DomainElement, g: DomainElement, cfg: InteractionConfig) -> complex:
    """``(f, g)`` without the ``(h_j, h_k)`` block.

    Those terms enter ``(A*f, g)`` and ``(f, A*g)`` identically and cancel in
    the Green identity, so only wavelet pairings are needed.
    """
    greens = cfg.greens()
    total = _l2_inner(f.u, g.u)
    for k, h in enumerate(greens):
        total += pair_with_green(f.u, h) * g.c[k].conjugate()
        total += f.c[k] * pair_with_green(g.u, h).conjugate()
    return total


def symmetry_defect(f: DomainElement, g: DomainElement, cfg: InteractionConfig) -> complex:
    """``(A*f, g) - (f, A*g)`` (signed, complex)."""
    return inner_modulo_hh(adjoint_apply(f, cfg), g, cfg) - inner_modulo_hh(f, adjoint_apply(g, cfg), cfg)


def _vec_inner(a: np.ndarray, b: np.ndarray) -> complex:
    return complex(np.sum(a * b.conj()))


def green_identity_defect(
    f: DomainElement, g: DomainElement, cfg: InteractionConfig, R: RMatrix | None = None, tol: float = 1e-12
) -> float:
    R = build_r_matrix(cfg, tol) if R is None else R
    lhs = symmetry_defect(f, g, cfg)
    bf, bg = gamma_maps(f, cfg, R), gamma_maps(g, cfg, R)
    rhs = _vec_inner(bf.gamma1, bg.gamma0) - _vec_inner(bf.gamma0, bg.gamma1)
    return abs(lhs - rhs)


def realization_domain_check(f: DomainElement, cfg: InteractionConfig, R: RMatrix, tol: float = 1e-10) -> bool:
    bd = gamma_maps(f, cfg, R)
    return float(np.max(np.abs(cfg.B @ bd.gamma0 - bd.gamma1))) <= tol


def _separating_level(cfg: InteractionConfig) -> int:
    vals = [vp(a - b, cfg.p) for i, a in enumerate(cfg.points) for b in cfg.points[i + 1 :]]
    if not vals:
        return 0
    # |x_i - x_j| = p^{-v} > p^{N0} for every pair
    return -int(max(vals)) - 1


def interpolating_expansion(values, cfg: InteractionConfig) -> WaveletExpansion:
    """Finite ``u`` with ``u(x_i) = values[i]``: one wavelet per point, disjoint supports."""
    p = cfg.p
    N0 = _separating_level(cfg)
    coeffs = {}
    for x, v in zip(cfg.points, values):
        v = complex(v)
        if v == 0:
            continue
        idx = WaveletIndex(N0, 1, covering_eps(N0, x, p))
        coeffs[idx] = v / wavelet_eval(idx, PadicRational(p, x))
    return WaveletExpansion(p, coeffs)


def element_with_boundary(a, b, cfg: InteractionConfig, R: RMatrix) -> DomainElement:
    """Element with ``Gamma_0 f = a`` and ``Gamma_1 f = b`` (surjectivity of the maps)."""
    c = -np.asarray(b, dtype=complex)
    u = interpolating_expansion(np.asarray(a, dtype=complex) - R.entries @ c, cfg)
    return DomainElement(u, c)


def construct_domain_element(c, cfg: InteractionConfig, R: RMatrix, rtol: float = 1e-10) -> DomainElement:
    """Element of ``D(A_B)`` with defect coefficients ``c``."""
    c = np.asarray(c, dtype=complex)
    v, *_ = np.linalg.lstsq(cfg.B, -c, rcond=None)
    resid = float(np.max(np.abs(cfg.B @ v + c))) if c.size else 0.0
    if resid > rtol * max(1.0, float(np.max(np.abs(c)))):
        raise RangeError(f"-c is outside the range of B (residual {resid:.3g})")
    return element_with_boundary(v, -c, cfg, R)


def is_self_adjoint(cfg: InteractionConfig, tol: float = 1e-12) -> bool:
    return hermiticity_defect(cfg.B) <= tol


def non_hermitian_witness(cfg: InteractionConfig, R: RMatrix) -> tuple[DomainElement, DomainElement]:
    """Pair in ``D(A_B)`` maximizing ``|((B - B^H) a, b)|`` over unit boundary values."""
    K = cfg.B - cfg.B.conj().T
    U, _, Vh = np.linalg.svd(K)
    a, b = Vh[0].conj(), U[:, 0]
    f = element_with_boundary(a, cfg.B @ a, cfg, R)
    g = element_with_boundary(b, cfg.B @ b, cfg, R)
    return f, g


@dataclass
class EtaReport:
    regime: str
    gamma0_defect: float
    gamma1_defect: float
    ry_defect: float
    ry_relation: bool
    identities_hold: bool


def eta_transform_check(cfg: InteractionConfig, R: RMatrix, tol: float = 1e-12, seed: int = 0, samples: int = 8) -> EtaReport:
    """Boundary behaviour of ``eta`` on the defect space (``u = 0``)."""
    if cfg.Y is None:
        raise ValueError("configuration has no Y matrix")
    rng = np.random.default_rng(seed)
    Y, Rm = cfg.Y, R.entries
    g0 = g1 = 0.0
    for _ in range(samples):
        c = rng.normal(size=cfg.n) + 1j * rng.normal(size=cfg.n)
        scale = max(1.0, float(np.max(np.abs(c))))
        g0 = max(g0, float(np.max(np.abs(Rm @ (Y @ c) - Y.conj().T @ (Rm @ c)))) / scale)
        # Gamma_1 of (0, Y c) against Y applied to Gamma_1 of (0, c)
        g1 = max(g1, float(np.max(np.abs(-(Y @ c) - Y @ (-c)))) / scale)
    ry = float(np.max(np.abs(Rm @ Y - Y.conj().T @ Rm))) / max(1.0, float(np.max(np.abs(Rm @ Y))))
    regime = "low" if cfg.alpha <= 1 else "high"
    ok = ry <= tol
    return EtaReport(regime, g0, g1, ry, ok, g0 <= tol * max(1.0, float(np.max(np.abs(Rm)))) and g1 <= tol)


@dataclass
class EtaVerdict:
    eta_self_adjoint: bool
    yb_defect: float
    ry_defect: float
    ry_required: bool
    failed: list

    def __bool__(self):
        return self.eta_self_adjoint


def _check_invertible(Y: np.ndarray) -> None:
    if np.linalg.matrix_rank(Y) < Y.shape[0] or np.linalg.cond(Y) > 1e12:
        raise SingularEtaError("Y is singular")


def is_eta_self_adjoint(cfg: InteractionConfig, R: RMatrix, tol: float = 1e-12) -> EtaVerdict:
    if cfg.Y is None:
        raise ValueError("configuration has no Y matrix")
    Y = cfg.Y
    _check_invertible(Y)
    yb = hermiticity_defect(Y @ cfg.B)
    ry = hermiticity_defect(R.entries @ Y)
    required = cfg.alpha <= 1
    failed = []
    if yb > tol:
        failed.append("YB not Hermitian")
    if required and ry > tol:
        failed.append("RY not Hermitian")
    return EtaVerdict(not failed, yb, ry, required, failed)


def friedrichs_domain_check(f: DomainElement, cfg: InteractionConfig, R: RMatrix, tol: float = 1e-10) -> bool:
    """Membership in the domain of the Friedrichs extension."""
    if cfg.alpha <= 1:
        return float(np.max(np.abs(f.c))) <= tol
    return float(np.max(np.abs(gamma_maps(f, cfg, R).gamma0))) <= tol


def random_expansion(p: int, rng: np.random.Generator, n_terms: int = 4, n_range=(-2, 3), eps_depth: int = 2) -> WaveletExpansion:
    """Random finite expansion (for property checks and the CLI)."""
    coeffs = {}
    for _ in range(n_terms):
        N = int(rng.integers(n_range[0], n_range[1] + 1))
        j = int(rng.integers(1, p))
        m = int(rng.integers(0, eps_depth + 1))
        eps = Fraction(int(rng.integers(0, p**m)), p**m)
        coeffs[WaveletIndex(N, j, eps)] = complex(rng.normal(), rng.normal())
    return WaveletExpansion(p, coeffs)
