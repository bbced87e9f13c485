import numpy as np
import pytest

from lorentz_mannheim import kernels, lorentz


@pytest.fixture
def data(rng):
    n = 257
    u, v = rng.standard_normal((2, n, 3))
    y = np.cumsum(rng.standard_normal((n, 3)), axis=0)
    a = np.sort(rng.uniform(0, 1, n))
    b = a + 0.01
    f = [np.exp(x) for x in (a, 0.75 * a + 0.25 * b, 0.5 * (a + b), 0.25 * a + 0.75 * b, b)]
    return u, v, y, f, a, b


@pytest.mark.parametrize("sig", ["ppm", "mpp"])
def test_backends_agree(data, sig):
    u, v, y, f, a, b = data
    g = lorentz.SIGNATURES[sig]
    P, Q = kernels.numpy_impl, kernels.numba_impl
    assert np.allclose(P["mdot"](u, v, g), Q["mdot"](u, v, g), rtol=1e-14, atol=1e-14)
    assert np.allclose(P["mcross"](u, v, g), Q["mcross"](u, v, g), rtol=1e-14, atol=1e-14)
    for k in (1, 2, 3):
        assert np.allclose(P["grid_derivative"](y, 0.01, k), Q["grid_derivative"](y, 0.01, k),
                           rtol=1e-12, equal_nan=True)
    for x, z in zip(P["simpson_panels"](*f, a, b), Q["simpson_panels"](*f, a, b)):
        assert np.allclose(x, z, rtol=1e-14)


def test_grid_derivative_exact_on_cubic():
    h = 0.1
    t = np.arange(20) * h
    y = np.column_stack([t ** 3, t ** 2, t])
    m = kernels.STENCIL_MARGIN
    d1 = kernels.grid_derivative(y, h, 1)
    d3 = kernels.grid_derivative(y, h, 3)
    assert np.allclose(d1[m:-m], np.column_stack([3 * t ** 2, 2 * t, 1 + 0 * t])[m:-m], atol=1e-10)
    assert np.allclose(d3[m:-m, 0], 6.0, atol=1e-8)
    assert np.all(np.isnan(d1[:m]))
    with pytest.raises(ValueError):
        kernels.grid_derivative(y, h, 4)


def test_simpson_exact_on_quartic_panel():
    a, b = np.array([0.0]), np.array([1.0])
    xs = [a, 0.25 + a, 0.5 + a, 0.75 + a, b]
    val, err = kernels.simpson_panels(*[x ** 4 for x in xs], a, b)
    assert val[0] == pytest.approx(0.2, abs=1e-15)


def test_backend_flag_value():
    assert kernels.backend() in ("numba", "numpy")
