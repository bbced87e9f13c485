"""Frenet apparatus of non-null curves.

Conventions (unified Frenet system)::

    T' = kappa N
    N' = -eps1 eps2 kappa T + tau B
    B' = eps1 tau N

with <T,T> = eps1, <N,N> = eps2, <B,B> = -eps1 eps2, N = T'/kappa and
B = T ^ N. Torsion is extracted twice, as <N', B>/<B, B> and from the B' row,
and the two must agree.
"""
from dataclasses import dataclass

import numpy as np

from . import lorentz
from .errors import FrenetConsistencyError, NullFrameVector, NotRegular, ZeroCurvature

TOL_KAPPA = 1e-8
TOL_TAU_CONSISTENCY = 1e-6


@dataclass(frozen=True)
class FrenetData:
    """Frame, curvature, torsion and signature signs.

    Scalar fields become arrays (and vectors gain a leading axis) when the
    apparatus is evaluated at several parameters at once.
    """

    s: object
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: object
    tau: object
    eps1: object
    eps2: object
    speed: object = None


def _dot(u, v):
    return lorentz.minkowski_dot(u, v)


def frenet_at_param(curve, t, tol_kappa=TOL_KAPPA, tol_null=lorentz.TOL_NULL, s=None):
    """Frenet data at curve parameter ``t`` (no arc-length inversion)."""
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t1 = np.atleast_1d(t)
    d1, d2, d3 = (np.atleast_2d(x) for x in curve.derivatives(t1))
    q1 = _dot(d1, d1)
    e1n = np.linalg.norm(d1, axis=-1)
    if np.any(e1n < 1e-14):
        raise NotRegular("velocity vanishes")
    if np.any(np.abs(q1) < tol_null * np.maximum(e1n ** 2, 1.0)):
        raise NullFrameVector("tangent is null")
    eps1 = np.where(q1 > 0, 1, -1)
    v = np.sqrt(np.abs(q1))
    T = d1 / v[:, None]
    v_t = eps1 * _dot(d1, d2) / v
    Ts = (d2 * v[:, None] - d1 * v_t[:, None]) / (v ** 3)[:, None]
    qT = _dot(Ts, Ts)
    eT = np.linalg.norm(Ts, axis=-1)
    kappa = np.sqrt(np.abs(qT))
    null_normal = (eT > tol_kappa) & (np.abs(qT) < tol_null * eT ** 2)
    if np.any(null_normal):
        raise NullFrameVector("principal normal is null")
    if np.any(kappa <= tol_kappa):
        raise ZeroCurvature(f"curvature {kappa.min():.3g} <= {tol_kappa:g}; frame undefined")
    eps2 = np.where(qT > 0, 1, -1)
    N = Ts / kappa[:, None]
    B = lorentz.lorentz_cross(T, N)

    # binormal derivative from W = a' ^ a'' (W = v^3 kappa B)
    W = lorentz.lorentz_cross(d1, d2)
    Wt = lorentz.lorentz_cross(d1, d3)
    qW = _dot(W, W)
    mW = np.sqrt(np.abs(qW))
    mW_t = np.sign(qW) * _dot(W, Wt) / mW
    Bw = W / mW[:, None]
    B_t = Wt / mW[:, None] - W * (mW_t / mW ** 2)[:, None]
    T_t = v[:, None] * Ts
    N_t = -eps1[:, None] * (lorentz.lorentz_cross(B_t, T) + lorentz.lorentz_cross(Bw, T_t))
    B_s = B_t / v[:, None]
    N_s = N_t / v[:, None]
    qB = _dot(B, B)
    tau_n = _dot(N_s, B) / qB
    tau_b = eps1 * eps2 * _dot(B_s, N)
    gap = np.abs(tau_n - tau_b)
    if np.any(gap > TOL_TAU_CONSISTENCY * np.maximum(1.0, np.abs(tau_n))):
        raise FrenetConsistencyError(f"torsion extractions disagree by {gap.max():.3g}")
    tau = tau_n

    if scalar:
        return FrenetData(s=None if s is None else float(s), T=T[0], N=N[0], B=B[0],
                          kappa=float(kappa[0]), tau=float(tau[0]), eps1=int(eps1[0]),
                          eps2=int(eps2[0]), speed=float(v[0]))
    return FrenetData(s=s, T=T, N=N, B=B, kappa=kappa, tau=tau, eps1=eps1, eps2=eps2, speed=v)


def frenet_apparatus(curve, amap, s, tol_kappa=TOL_KAPPA):
    """Frenet data at arc length ``s`` (scalar or array)."""
    t = amap.t_of_s(s)
    return frenet_at_param(curve, t, tol_kappa=tol_kappa, s=s)


def _frames(curve, amap, s):
    fd = frenet_apparatus(curve, amap, s)
    return np.stack([fd.T, fd.N, fd.B], axis=-2)


def frenet_residual(curve, amap, s, h=None):
    """Euclidean defects of the three Frenet equations at arc length ``s``.

    Frame derivatives are 5-point central differences in s with step
    ``h = 1e-4 * total length`` unless given. Returns ``(res_T, res_N, res_B)``
    for scalar ``s`` or an (n, 3) array.
    """
    s = np.asarray(s, dtype=float)
    scalar = s.ndim == 0
    s1 = np.atleast_1d(s)
    h = 1e-4 * amap.total if h is None else h
    fd = frenet_apparatus(curve, amap, s1)
    offs = np.array([-2.0, -1.0, 1.0, 2.0]) * h
    F = _frames(curve, amap, (s1[:, None] + offs).ravel()).reshape(s1.size, 4, 3, 3)
    dF = (F[:, 0] - 8 * F[:, 1] + 8 * F[:, 2] - F[:, 3]) / (12 * h)
    dT, dN, dB = dF[:, 0], dF[:, 1], dF[:, 2]
    k = fd.kappa[:, None]
    tau = fd.tau[:, None]
    e12 = (fd.eps1 * fd.eps2)[:, None]
    e1 = fd.eps1[:, None]
    rT = np.linalg.norm(dT - k * fd.N, axis=-1)
    rN = np.linalg.norm(dN - (-e12 * k * fd.T + tau * fd.B), axis=-1)
    rB = np.linalg.norm(dB - e1 * tau * fd.N, axis=-1)
    out = np.stack([rT, rN, rB], axis=-1)
    if scalar:
        return tuple(float(x) for x in out[0])
    return out


def curvature_at_param(curve, t):
    """kappa at curve parameter t without building a frame (0 on straight pieces)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    d1, d2 = np.atleast_2d(curve.d1(t)), np.atleast_2d(curve.d2(t))
    q1 = _dot(d1, d1)
    v = np.sqrt(np.abs(q1))
    if np.any(v < 1e-14):
        raise NotRegular("velocity vanishes")
    eps1 = np.sign(q1)
    v_t = eps1 * _dot(d1, d2) / v
    Ts = (d2 * v[:, None] - d1 * v_t[:, None]) / (v ** 3)[:, None]
    return np.sqrt(np.abs(_dot(Ts, Ts)))
