import os
import subprocess
import sys

import numpy as np
import pytest

from gausscalc import _accel


@pytest.mark.parametrize("dim", [1, 2, 3, 5, 7])
@pytest.mark.parametrize("mode", [_accel.GEOMETRIC, _accel.WEDGE, _accel.LEFT, _accel.RIGHT, _accel.SCALAR])
def test_numba_and_numpy_kernels_agree(dim, mode, rng):
    a = rng.normal(size=1 << dim)
    b = rng.normal(size=1 << dim)
    a[rng.random(a.size) < 0.3] = 0.0
    assert np.allclose(_accel.product_numba(a, b, mode), _accel.product_numpy(a, b, mode), atol=1e-12)


def test_zero_operand():
    z = np.zeros(8)
    assert not np.any(_accel.product_numpy(z, np.ones(8), _accel.GEOMETRIC))
    assert not np.any(_accel.product_numba(z, np.ones(8), _accel.GEOMETRIC))


def test_env_flag_selects_numpy_backend():
    env = dict(os.environ, GAUSSCALC_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c", "from gausscalc import _accel; print(_accel.backend())"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "numpy"


def test_default_backend_uses_numba_when_available():
    if "GAUSSCALC_DISABLE_NUMBA" in os.environ:
        pytest.skip("backend forced by environment")
    assert _accel.backend() == ("numba" if _accel.HAS_NUMBA else "numpy")
