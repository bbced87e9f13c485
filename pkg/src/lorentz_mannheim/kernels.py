"""Batch numeric kernels with a numba path and a numpy fallback.

Every public kernel here has two implementations with the same signature.
``_accel.HAVE_NUMBA`` picks one at import time; ``numpy_impl`` and
``numba_impl`` expose both for the benchmark and the equivalence tests.
"""
import numpy as np

from ._accel import HAVE_NUMBA, njit

# central difference weights, offsets -3..3
_W1 = np.array([0.0, 1.0, -8.0, 0.0, 8.0, -1.0, 0.0]) / 12.0
_W2 = np.array([0.0, -1.0, 16.0, -30.0, 16.0, -1.0, 0.0]) / 12.0
_W3 = np.array([1.0, -8.0, 13.0, 0.0, -13.0, 8.0, -1.0]) / 8.0
STENCIL_MARGIN = 3


# ---------------------------------------------------------------- numpy path

def _mdot_np(u, v, g):
    return u[:, 0] * v[:, 0] * g[0] + u[:, 1] * v[:, 1] * g[1] + u[:, 2] * v[:, 2] * g[2]


def _mcross_np(u, v, g):
    w = np.empty_like(u)
    w[:, 0] = g[0] * (u[:, 1] * v[:, 2] - u[:, 2] * v[:, 1])
    w[:, 1] = g[1] * (u[:, 2] * v[:, 0] - u[:, 0] * v[:, 2])
    w[:, 2] = g[2] * (u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0])
    return w


def _grid_derivative_np(y, h, order):
    n = y.shape[0]
    w = _W1 if order == 1 else _W2 if order == 2 else _W3
    out = np.full(y.shape, np.nan)
    m = STENCIL_MARGIN
    if n <= 2 * m:
        return out
    acc = np.zeros((n - 2 * m, y.shape[1]))
    for k in range(7):
        if w[k] != 0.0:
            acc += w[k] * y[k:n - 2 * m + k]
    out[m:n - m] = acc / h ** order
    return out


def _simpson_panels_np(fa, fl, fm, fr, fb, a, b):
    h = b - a
    coarse = h / 6.0 * (fa + 4.0 * fm + fb)
    fine = h / 12.0 * (fa + 4.0 * fl + 2.0 * fm + 4.0 * fr + fb)
    err = np.abs(fine - coarse) / 15.0
    return fine + (fine - coarse) / 15.0, err


# ---------------------------------------------------------------- numba path

@njit
def _mdot_nb(u, v, g):
    n = u.shape[0]
    out = np.empty(n)
    for i in range(n):
        out[i] = u[i, 0] * v[i, 0] * g[0] + u[i, 1] * v[i, 1] * g[1] + u[i, 2] * v[i, 2] * g[2]
    return out


@njit
def _mcross_nb(u, v, g):
    n = u.shape[0]
    w = np.empty((n, 3))
    for i in range(n):
        w[i, 0] = g[0] * (u[i, 1] * v[i, 2] - u[i, 2] * v[i, 1])
        w[i, 1] = g[1] * (u[i, 2] * v[i, 0] - u[i, 0] * v[i, 2])
        w[i, 2] = g[2] * (u[i, 0] * v[i, 1] - u[i, 1] * v[i, 0])
    return w


@njit
def _grid_derivative_core(y, h, w, order):
    n, d = y.shape
    out = np.full((n, d), np.nan)
    m = 3
    scale = h ** order
    for i in range(m, n - m):
        for j in range(d):
            acc = 0.0
            for k in range(7):
                acc += w[k] * y[i - m + k, j]
            out[i, j] = acc / scale
    return out


def _grid_derivative_nb(y, h, order):
    w = _W1 if order == 1 else _W2 if order == 2 else _W3
    return _grid_derivative_core(y, float(h), w, int(order))


@njit
def _simpson_panels_nb(fa, fl, fm, fr, fb, a, b):
    n = fa.shape[0]
    val = np.empty(n)
    err = np.empty(n)
    for i in range(n):
        h = b[i] - a[i]
        coarse = h / 6.0 * (fa[i] + 4.0 * fm[i] + fb[i])
        fine = h / 12.0 * (fa[i] + 4.0 * fl[i] + 2.0 * fm[i] + 4.0 * fr[i] + fb[i])
        err[i] = abs(fine - coarse) / 15.0
        val[i] = fine + (fine - coarse) / 15.0
    return val, err


numpy_impl = {
    "mdot": _mdot_np,
    "mcross": _mcross_np,
    "grid_derivative": _grid_derivative_np,
    "simpson_panels": _simpson_panels_np,
}
numba_impl = {
    "mdot": _mdot_nb,
    "mcross": _mcross_nb,
    "grid_derivative": _grid_derivative_nb,
    "simpson_panels": _simpson_panels_nb,
}

_active = numba_impl if HAVE_NUMBA else numpy_impl


def mdot_rows(u, v, g):
    """Row-wise metric inner product of two (n, 3) arrays."""
    return _active["mdot"](np.ascontiguousarray(u, dtype=float),
                           np.ascontiguousarray(v, dtype=float),
                           np.ascontiguousarray(g, dtype=float))


def mcross_rows(u, v, g):
    return _active["mcross"](np.ascontiguousarray(u, dtype=float),
                             np.ascontiguousarray(v, dtype=float),
                             np.ascontiguousarray(g, dtype=float))


def grid_derivative(y, h, order):
    """Central-difference derivative of uniformly spaced rows.

    Orders 1 and 2 use 5-point stencils, order 3 a 7-point stencil; all are
    fourth-order accurate. The first and last ``STENCIL_MARGIN`` rows are NaN.
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    return _active["grid_derivative"](np.ascontiguousarray(y, dtype=float), h, order)


def simpson_panels(fa, fl, fm, fr, fb, a, b):
    """Richardson-extrapolated composite Simpson value and error per panel."""
    args = [np.ascontiguousarray(x, dtype=float) for x in (fa, fl, fm, fr, fb, a, b)]
    return _active["simpson_panels"](*args)


def backend():
    return "numba" if HAVE_NUMBA else "numpy"
