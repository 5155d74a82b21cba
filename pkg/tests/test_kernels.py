import math
import os
import subprocess
import sys

import pytest

from padicpi import _pykernels, kernels
from padicpi.wavelets import gram_window_exact

BACKENDS = kernels.backends()


def test_backend_selection():
    assert kernels.BACKEND in ("cython", "python")
    assert "python" in BACKENDS


def test_pure_python_switch():
    env = dict(os.environ, PADICPI_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "from padicpi import kernels; print(kernels.BACKEND)"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "python"


def test_reduce_root_sum():
    # 1 + z + z^2 = 0 for the cube roots
    assert _pykernels.reduce_root_sum([0, 1, 2], 3, 3) == {}
    assert _pykernels.reduce_root_sum([0, 0, 0], 9, 3) == {0: 3}
    assert _pykernels.reduce_root_sum([2], 4, 2) == {0: -1}


@pytest.mark.parametrize("name", sorted(BACKENDS))
@pytest.mark.parametrize("p,lo,hi,R", [(2, -2, 2, 2), (3, -1, 1, 1)])
def test_exact_kernel_matches_reference(name, p, lo, hi, R):
    mod = BACKENDS[name]
    n_idx, n_ent, bad = mod.gram_exact_window(p, lo, hi, R)
    ref = gram_window_exact(p, lo, hi, R)
    assert bad == 0 and ref.exact_identity
    assert n_idx == ref.n_indices


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_backends_agree(name):
    mod = BACKENDS[name]
    for p in (2, 3):
        assert mod.gram_exact_window(p, -2, 2, 2) == _pykernels.gram_exact_window(p, -2, 2, 2)
        a = mod.gram_float_window(p, -2, 2, 2)
        b = _pykernels.gram_float_window(p, -2, 2, 2)
        assert a[:2] == b[:2]
        assert a[2] < 1e-13 and b[2] < 1e-13
    for p, alpha in ((2, 1.5), (3, 0.8), (5, 3.0)):
        assert mod.green_level_sum(p, alpha, -200, 200) == pytest.approx(
            _pykernels.green_level_sum(p, alpha, -200, 200), rel=1e-15
        )


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_green_level_sum_is_overflow_safe(name):
    mod = BACKENDS[name]
    s = mod.green_level_sum(2, 3.0, -2000, 2000)
    assert math.isfinite(s)
    closed = math.fsum(2.0**-N / (2.0 ** (3.0 * (1 - N)) + 1) for N in range(-40, 80))
    assert s == pytest.approx(closed, rel=1e-14)
