from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from padicpi.errors import NotInL2Error, RangeError, SingularEtaError
from padicpi.green import diagonal_value, green_eval, GreenFunction
from padicpi.realization import (
    DomainElement,
    InteractionConfig,
    adjoint_apply,
    build_r_matrix,
    construct_domain_element,
    element_with_boundary,
    eta_transform_check,
    friedrichs_domain_check,
    gamma_maps,
    green_identity_defect,
    hermiticity_defect,
    interpolating_expansion,
    is_eta_self_adjoint,
    is_self_adjoint,
    non_hermitian_witness,
    random_expansion,
    realization_domain_check,
    symmetry_defect,
)
from padicpi.wavelets import WaveletExpansion, WaveletIndex, point_eval
from padicpi.padic_core import PadicRational


def cfg2(alpha=1.5, B=((1, 0), (0, 2)), Y=None, p=2):
    return InteractionConfig(p, alpha, (0, 1), B, 0.0, Y)


def test_config_validation_and_json():
    with pytest.raises(NotInL2Error):
        InteractionConfig(2, 0.5, (0,), [[1]])
    with pytest.raises(ValueError):
        InteractionConfig(2, 1.5, (0, 0), np.eye(2))
    with pytest.raises(ValueError):
        InteractionConfig(2, 1.5, (0, 1), np.eye(3))
    cfg = InteractionConfig(3, 0.8, (0, Fraction(1, 3)), [[1, [0, 1]], [[0, -1], 2]], 0.25, np.eye(2))
    back = InteractionConfig.from_json(cfg.to_json())
    assert back.points == cfg.points and back.r == 0.25
    assert np.array_equal(back.B, cfg.B) and np.array_equal(back.Y, cfg.Y)
    assert InteractionConfig.from_dict({"p": 2, "alpha": 0.8, "points": ["0"], "B": [[1]]}).r == 0.0


def test_r_matrix_examples():
    R = build_r_matrix(InteractionConfig(2, 2.0, (0,), [[1]]))
    assert R.entries[0, 0] == pytest.approx(diagonal_value(2, 2.0)[0])
    R = build_r_matrix(cfg2(alpha=0.8))
    assert R.entries[0, 0] == 0 and R.entries[1, 1] == 0
    assert R.provenance[0][0] == "regularized"
    assert R.entries[0, 1] == R.entries[1, 0]
    assert R.entries[0, 1].imag == 0
    assert R.entries[0, 1] == pytest.approx(green_eval(GreenFunction(2, 0.8, 0), 1)[0])


def test_gamma_map_examples():
    cfg = cfg2()
    R = build_r_matrix(cfg)
    u = WaveletExpansion(2, {WaveletIndex(1, 1, 0): 1.0, WaveletIndex(-1, 1, Fraction(1, 2)): 0.5j})
    bd = gamma_maps(DomainElement(u, np.zeros(2)), cfg, R)
    for k, x in enumerate(cfg.points):
        assert bd.gamma0[k] == pytest.approx(point_eval(u, PadicRational(2, x))[0])
    assert not bd.gamma1.any()
    bd = gamma_maps(DomainElement(WaveletExpansion(2), [1, 0]), cfg, R)
    assert np.allclose(bd.gamma0, R.entries[:, 0]) and np.allclose(bd.gamma1, [-1, 0])


def test_adjoint_examples():
    cfg = InteractionConfig(2, 2.0, (0,), [[1]])
    f = DomainElement(WaveletExpansion(2, {WaveletIndex(1, 1, 0): 1.0}), [0])
    g = adjoint_apply(f, cfg)
    assert g.u.coeffs == {WaveletIndex(1, 1, 0): 1.0}
    g = adjoint_apply(DomainElement(WaveletExpansion(2), [2 + 1j]), cfg)
    assert g.c[0] == -(2 + 1j)


def test_green_identity_examples():
    rng = np.random.default_rng(5)
    cfg = cfg2()
    R = build_r_matrix(cfg)
    f = DomainElement(random_expansion(2, rng), rng.normal(size=2) + 1j * rng.normal(size=2))
    assert green_identity_defect(f, f, cfg, R) <= 1e-10
    f0 = DomainElement(random_expansion(2, rng), np.zeros(2))
    g0 = DomainElement(random_expansion(2, rng), np.zeros(2))
    assert abs(symmetry_defect(f0, g0, cfg)) <= 1e-12


def test_construct_examples():
    cfg = InteractionConfig(2, 1.5, (0,), [[1]])
    R = build_r_matrix(cfg)
    f = construct_domain_element([-1], cfg, R)
    assert f.c[0] == -1
    bd = gamma_maps(f, cfg, R)
    assert bd.gamma0[0] == pytest.approx(1)
    assert point_eval(f.u, PadicRational(2, 0))[0] == pytest.approx(1 - R.entries[0, 0] * -1)
    assert realization_domain_check(f, cfg, R)
    assert not realization_domain_check(DomainElement(f.u, f.c + 0.1), cfg, R)
    zero = construct_domain_element([0], cfg, R)
    assert not zero.u.coeffs


def test_construct_range_error():
    cfg = InteractionConfig(2, 1.5, (0, 1), [[1, 0], [0, 0]])
    R = build_r_matrix(cfg)
    construct_domain_element([1, 0], cfg, R)
    with pytest.raises(RangeError):
        construct_domain_element([0, 1], cfg, R)


def test_separating_level_interpolates():
    cfg = InteractionConfig(3, 1.5, (0, 1, Fraction(1, 3), 9), np.eye(4))
    vals = [1, -2j, 0.5, 3]
    u = interpolating_expansion(vals, cfg)
    for x, v in zip(cfg.points, vals):
        assert point_eval(u, PadicRational(3, x))[0] == pytest.approx(v)


def test_self_adjoint_examples():
    assert is_self_adjoint(cfg2(B=[[1, 0], [0, 2]]))
    assert not is_self_adjoint(cfg2(B=[[0, 1], [0, 0]]))
    assert is_self_adjoint(cfg2(B=[[1, 1j], [-1j, 3]]))


def test_witness_breaks_symmetry():
    cfg = cfg2(B=[[0, 1], [0, 0]])
    R = build_r_matrix(cfg)
    f, g = non_hermitian_witness(cfg, R)
    assert realization_domain_check(f, cfg, R) and realization_domain_check(g, cfg, R)
    assert abs(symmetry_defect(f, g, cfg)) == pytest.approx(1.0, rel=1e-9)


def test_eta_examples():
    cfg = cfg2(alpha=0.8, Y=np.eye(2), B=[[1, 1j], [-1j, 3]])
    R = build_r_matrix(cfg)
    rep = eta_transform_check(cfg, R)
    assert rep.ry_relation and rep.identities_hold
    assert bool(is_eta_self_adjoint(cfg, R)) == is_self_adjoint(cfg)
    cfg = cfg2(alpha=0.8, Y=np.eye(2), B=[[0, 1], [0, 0]])
    assert not is_eta_self_adjoint(cfg, R) and not is_self_adjoint(cfg)
    with pytest.raises(SingularEtaError):
        is_eta_self_adjoint(cfg2(alpha=0.8, Y=[[1, 1], [1, 1]]), R)


@pytest.mark.parametrize("y11,y22", [(1.0, 1.0), (1.0, 2.0), (3.0, -1.0)])
def test_eta_relation_for_diagonal_y(y11, y22):
    cfg = cfg2(alpha=0.8, Y=np.diag([y11, y22]))
    R = build_r_matrix(cfg)
    r12 = R.entries[0, 1].real
    assert r12 != 0
    rep = eta_transform_check(cfg, R)
    Y = np.diag([y11, y22])
    direct = np.max(np.abs(R.entries @ Y - Y.T @ R.entries))
    assert rep.ry_relation == (y11 == y22)
    assert direct == pytest.approx(abs(r12 * (y22 - y11)))


def test_eta_genuinely_non_hermitian():
    Y = np.diag([1.0, 2.0])
    H = np.array([[1.0, 0.5], [0.5, -1.0]])
    cfg = cfg2(alpha=1.5, Y=Y, B=np.linalg.solve(Y, H))
    R = build_r_matrix(cfg)
    v = is_eta_self_adjoint(cfg, R)
    assert v and v.yb_defect <= 1e-12 and not v.ry_required
    assert not is_self_adjoint(cfg)
    # below alpha = 1 the same B needs RY Hermitian, which this diagonal Y breaks
    low = cfg2(alpha=0.8, Y=Y, B=cfg.B)
    v = is_eta_self_adjoint(low, build_r_matrix(low))
    assert not v and v.failed == ["RY not Hermitian"]


def test_friedrichs_examples():
    rng = np.random.default_rng(2)
    cfg = cfg2(alpha=0.8)
    R = build_r_matrix(cfg)
    u = random_expansion(2, rng)
    assert friedrichs_domain_check(DomainElement(u, [0, 0]), cfg, R)
    assert not friedrichs_domain_check(DomainElement(u, [1, 0]), cfg, R)
    cfg = cfg2(alpha=2.0)
    R = build_r_matrix(cfg)
    f = element_with_boundary([0, 0], [-1, 0.5j], cfg, R)
    assert friedrichs_domain_check(f, cfg, R)
    psi = WaveletExpansion(2, {WaveletIndex(1, 1, 0): 1.0})
    assert not friedrichs_domain_check(DomainElement(psi, [0, 0]), cfg, R)


def test_hermiticity_defect_is_relative():
    assert hermiticity_defect(np.array([[0, 1e6], [0, 0]])) == pytest.approx(1.0)
    assert hermiticity_defect(np.zeros((0, 0))) == 0.0


@given(st.sampled_from([2, 3]), st.sampled_from([0.8, 1.5]), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_green_identity_and_surjectivity(p, alpha, n, seed):
    rng = np.random.default_rng(seed)
    points = [Fraction(0), Fraction(1), Fraction(1, p), Fraction(p)][:n]
    cfg = InteractionConfig(p, alpha, points, np.eye(n))
    R = build_r_matrix(cfg)

    def vec():
        return rng.normal(size=n) + 1j * rng.normal(size=n)

    f = DomainElement(random_expansion(p, rng), vec())
    g = DomainElement(random_expansion(p, rng), vec())
    assert green_identity_defect(f, g, cfg, R) <= 1e-10
    a, b = vec(), vec()
    bd = gamma_maps(element_with_boundary(a, b, cfg, R), cfg, R)
    assert np.max(np.abs(bd.gamma0 - a)) <= 1e-10 and np.max(np.abs(bd.gamma1 - b)) <= 1e-10


@given(st.integers(0, 2**32 - 1))
def test_hermitian_b_gives_symmetric_realization(seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    cfg = cfg2(alpha=1.5, B=A + A.conj().T)
    R = build_r_matrix(cfg)
    f = construct_domain_element(rng.normal(size=2) + 0j, cfg, R)
    g = construct_domain_element(1j * rng.normal(size=2), cfg, R)
    assert realization_domain_check(f, cfg, R) and realization_domain_check(g, cfg, R)
    assert abs(symmetry_defect(f, g, cfg)) <= 1e-9
