"""Vector algebra in Minkowski 3-space.

Vectors are plain numpy arrays with a trailing axis of length 3, so every
function here works on a single vector or on an (n, 3) stack.

The metric signature is a module-level setting. The default ``"ppm"`` means
(+, +, -), i.e. <u, v> = u1 v1 + u2 v2 - u3 v3; ``"mpp"`` means (-, +, +).
"""
import enum
import math

import numpy as np

from . import kernels
from .errors import ModeMismatch, NotUnit

SIGNATURES = {
    "ppm": np.array([1.0, 1.0, -1.0]),
    "mpp": np.array([-1.0, 1.0, 1.0]),
}
TOL_NULL = 1e-10
TOL_UNIT = 1e-8

_signature = "ppm"


def set_signature(name):
    global _signature
    if name not in SIGNATURES:
        raise ValueError(f"unknown signature {name!r}; expected one of {sorted(SIGNATURES)}")
    _signature = name


def get_signature():
    return _signature


def metric():
    return SIGNATURES[_signature].copy()


def timelike_axis():
    return int(np.flatnonzero(SIGNATURES[_signature] < 0)[0])


def from_ppm(v):
    """Map coordinates written for (+, +, -) into the active signature.

    The cyclic relabelling (x1, x2, x3) -> (x3, x1, x2) is an isometry onto
    (-, +, +) with determinant +1, so cross products and torsion signs are
    preserved.
    """
    v = np.asarray(v, dtype=float)
    if _signature == "ppm":
        return v
    return v[..., [2, 0, 1]]


class CausalClass(enum.Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    NULL = "null"


def mvec(x):
    v = np.asarray(x, dtype=float)
    if v.shape[-1:] != (3,):
        raise ValueError(f"expected trailing dimension 3, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector components must be finite")
    return v


def _rows(u, v):
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    shape = np.broadcast_shapes(u.shape, v.shape)
    u2 = np.broadcast_to(u, shape).reshape(-1, 3)
    v2 = np.broadcast_to(v, shape).reshape(-1, 3)
    return u2, v2, shape


def minkowski_dot(u, v):
    u2, v2, shape = _rows(u, v)
    out = kernels.mdot_rows(u2, v2, SIGNATURES[_signature])
    if len(shape) == 1:
        return float(out[0])
    return out.reshape(shape[:-1])


def norm_sq(v):
    return minkowski_dot(v, v)


def euclid_norm(v):
    return np.linalg.norm(np.asarray(v, dtype=float), axis=-1)


def lorentz_cross(u, v):
    """Metric-adjusted cross product: <u ^ v, w> = det(u, v, w) for every w."""
    u2, v2, shape = _rows(u, v)
    out = kernels.mcross_rows(u2, v2, SIGNATURES[_signature])
    return out.reshape(shape)


def causal_character(v, tol_null=TOL_NULL):
    if tol_null <= 0:
        raise ValueError("tol_null must be positive")
    q = norm_sq(mvec(v))
    if np.ndim(q) == 0:
        return _classify(q, tol_null)
    return [_classify(x, tol_null) for x in np.ravel(q)]


def _classify(q, tol):
    if q > tol:
        return CausalClass.SPACELIKE
    if q < -tol:
        return CausalClass.TIMELIKE
    return CausalClass.NULL


def sign_of(v, tol_null=TOL_NULL):
    """+1 for spacelike, -1 for timelike; ValueError for null."""
    c = causal_character(v, tol_null)
    if c is CausalClass.NULL:
        raise ValueError("null vector has no sign")
    return 1 if c is CausalClass.SPACELIKE else -1


def pair_angle(t1, t2, hyperbolic, normal=None, tol=TOL_UNIT):
    """Angle between unit tangents ``t1`` and ``t2``.

    ``t1`` is decomposed as ``a t2 + b n`` where ``n`` is ``normal`` (a unit
    vector orthogonal to ``t2``) or, when omitted, the unit vector of the
    plane span(t1, t2) orthogonal to ``t2`` oriented so that ``b >= 0``.

    Circular mode: phi = atan2(b, a), in (-pi, pi].
    Hyperbolic mode with t1, t2 of the same causal character: cosh(phi) = |a|,
    sinh(phi) = b * sign(a). With opposite characters the roles swap:
    cosh(phi) = |b|, sinh(phi) = a * sign(b).
    """
    t1 = mvec(t1)
    t2 = mvec(t2)
    q1, q2 = norm_sq(t1), norm_sq(t2)
    if abs(abs(q1) - 1.0) > tol or abs(abs(q2) - 1.0) > tol:
        raise NotUnit(f"tangents must be unit: <t1,t1>={q1:.3g}, <t2,t2>={q2:.3g}")
    e1 = 1.0 if q1 > 0 else -1.0
    e2 = 1.0 if q2 > 0 else -1.0
    a = e2 * minkowski_dot(t1, t2)
    rest = t1 - a * t2
    if normal is None:
        qr = norm_sq(rest)
        if euclid_norm(rest) < tol:
            b, en = 0.0, None
        else:
            if abs(qr) < TOL_NULL:
                raise ModeMismatch("tangents span a degenerate plane")
            en = 1.0 if qr > 0 else -1.0
            b = math.sqrt(abs(qr))
    else:
        n = mvec(normal)
        qn = norm_sq(n)
        if abs(abs(qn) - 1.0) > tol:
            raise NotUnit("normal must be unit")
        en = 1.0 if qn > 0 else -1.0
        b = en * minkowski_dot(t1, n)
    if en is None:
        en = -e2 if hyperbolic else e2
    plane_spacelike = e2 > 0 and en > 0
    if not hyperbolic:
        if not plane_spacelike:
            raise ModeMismatch("circular angle needs a spacelike tangent plane")
        return math.atan2(b, a)
    if plane_spacelike:
        raise ModeMismatch("hyperbolic angle needs a Lorentzian tangent plane")
    if e1 == e2:
        return math.asinh(b * (1.0 if a >= 0 else -1.0))
    return math.asinh(a * (1.0 if b >= 0 else -1.0))
