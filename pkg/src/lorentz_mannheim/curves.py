"""Curve representations and arc-length reparametrization.

A curve is any object with ``position``, ``d1``, ``d2``, ``d3`` (vectorized
over the parameter) and a ``domain`` tuple. Analytic families return exact
derivatives; :class:`SampledCurve` uses finite-difference stencils on a
uniform grid.
"""
import json
import math

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from . import kernels, lorentz
from .errors import (BadParams, NotRegular, NullVelocity, OutOfRange,
                     SpecError, TooFewSamples, UnknownFamily)

MIN_SAMPLES = 7


class Curve:
    name = "curve"
    domain = (0.0, 1.0)

    def position(self, t):
        raise NotImplementedError

    def d1(self, t):
        raise NotImplementedError

    def d2(self, t):
        raise NotImplementedError

    def d3(self, t):
        raise NotImplementedError

    def derivatives(self, t):
        return self.d1(t), self.d2(t), self.d3(t)

    def oracle(self, t):
        """Closed-form Frenet data, or None when the family has none."""
        return None

    def __repr__(self):
        return f"{type(self).__name__}(domain={self.domain})"


def _stack(*cols):
    return lorentz.from_ppm(np.stack(np.broadcast_arrays(*cols), axis=-1))


class _Helix(Curve):
    """(a cos t, a sin t, b t); shared by the two helices with axis along x3."""

    def __init__(self, a, b, domain=(0.0, 2 * math.pi)):
        self.a, self.b = float(a), float(b)
        self.domain = tuple(map(float, domain))

    def position(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(self.a * np.cos(t), self.a * np.sin(t), self.b * t)

    def d1(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(-self.a * np.sin(t), self.a * np.cos(t), self.b + 0 * t)

    def d2(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(-self.a * np.cos(t), -self.a * np.sin(t), 0 * t)

    def d3(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(self.a * np.sin(t), -self.a * np.cos(t), 0 * t)

    def _frame(self, t):
        a, b = self.a, self.b
        c = math.sqrt(abs(a * a - b * b))
        t = np.asarray(t, dtype=float)
        s, co = np.sin(t), np.cos(t)
        T = _stack(-a * s / c, a * co / c, b / c + 0 * t)
        N = _stack(-co, -s, 0 * t)
        B = _stack(b * s / c, -b * co / c, -a / c + 0 * t)
        return c, T, N, B


class TimelikeHelix(_Helix):
    name = "timelike_helix"

    def __init__(self, a, b, domain=(0.0, 2 * math.pi)):
        if not (a > 0 and b > a):
            raise BadParams("timelike_helix needs b > a > 0")
        super().__init__(a, b, domain)

    def oracle(self, t):
        c, T, N, B = self._frame(t)
        c2 = c * c
        return dict(speed=c, kappa=self.a / c2, tau=self.b / c2, eps1=-1, eps2=1, T=T, N=N, B=B)


class SpacelikeHelixSpacelikeNormal(_Helix):
    name = "spacelike_helix_spacelike_normal"

    def __init__(self, a, b, domain=(0.0, 2 * math.pi)):
        if not (b > 0 and a > b):
            raise BadParams("spacelike_helix_spacelike_normal needs a > b > 0")
        super().__init__(a, b, domain)

    def oracle(self, t):
        c, T, N, B = self._frame(t)
        c2 = c * c
        return dict(speed=c, kappa=self.a / c2, tau=-self.b / c2, eps1=1, eps2=1, T=T, N=N, B=B)


class SpacelikeHelixTimelikeNormal(Curve):
    """(b t, a sinh t, a cosh t): spacelike, principal normal timelike."""

    name = "spacelike_helix_timelike_normal"

    def __init__(self, a, b, domain=(0.0, 2.0)):
        if not (a > 0 and b > 0):
            raise BadParams("spacelike_helix_timelike_normal needs a > 0 and b > 0")
        self.a, self.b = float(a), float(b)
        self.domain = tuple(map(float, domain))

    def position(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(self.b * t, self.a * np.sinh(t), self.a * np.cosh(t))

    def d1(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(self.b + 0 * t, self.a * np.cosh(t), self.a * np.sinh(t))

    def d2(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(0 * t, self.a * np.sinh(t), self.a * np.cosh(t))

    def d3(self, t):
        t = np.asarray(t, dtype=float)
        return _stack(0 * t, self.a * np.cosh(t), self.a * np.sinh(t))

    def oracle(self, t):
        a, b = self.a, self.b
        c2 = a * a + b * b
        c = math.sqrt(c2)
        t = np.asarray(t, dtype=float)
        sh, ch = np.sinh(t), np.cosh(t)
        T = _stack(b / c + 0 * t, a * ch / c, a * sh / c)
        N = _stack(0 * t, sh, ch)
        B = _stack(a / c + 0 * t, -b * ch / c, -b * sh / c)
        return dict(speed=c, kappa=a / c2, tau=-b / c2, eps1=1, eps2=-1, T=T, N=N, B=B)


class Line(Curve):
    name = "line"

    def __init__(self, point, direction, domain=(0.0, 1.0)):
        self.point = lorentz.mvec(point)
        self.direction = lorentz.mvec(direction)
        if np.linalg.norm(self.direction) == 0:
            raise BadParams("line direction must be nonzero")
        self.domain = tuple(map(float, domain))

    def position(self, t):
        t = np.asarray(t, dtype=float)
        return self.point + t[..., None] * self.direction

    def d1(self, t):
        t = np.asarray(t, dtype=float)
        return np.broadcast_to(self.direction, t.shape + (3,)).copy()

    def d2(self, t):
        t = np.asarray(t, dtype=float)
        return np.zeros(t.shape + (3,))

    d3 = d2

    def oracle(self, t):
        t = np.asarray(t, dtype=float)
        q = lorentz.norm_sq(self.direction)
        return dict(speed=math.sqrt(abs(q)), kappa=0.0 * t, tau=0.0 * t,
                    eps1=1 if q > 0 else -1, eps2=None, T=None, N=None, B=None)


_GL_X, _GL_W = np.polynomial.legendre.leggauss(20)


class _Planar(Curve):
    """Plane curve parametrized by arc length with polynomial curvature.

    The turning angle is theta(s) = integral of kappa; the position integral
    of the tangent is closed-form for constant curvature and composite
    Gauss-Legendre otherwise.
    """

    def __init__(self, kappa, domain=(0.0, 1.0)):
        coeffs = np.atleast_1d(np.asarray(kappa, dtype=float))
        if coeffs.size == 0 or not np.all(np.isfinite(coeffs)):
            raise BadParams("curvature profile needs at least one finite coefficient")
        self.kappa_poly = np.polynomial.Polynomial(coeffs)
        self.theta_poly = self.kappa_poly.integ()
        self.domain = tuple(map(float, domain))
        ks = self.kappa_poly(np.linspace(*self.domain, 64))
        if np.any(ks <= 0):
            raise BadParams("curvature profile must stay positive on the domain")

    def _tangent_ppm(self, th):
        raise NotImplementedError

    def _normal_ppm(self, th):
        raise NotImplementedError

    def _integral_ppm(self, s):
        s = np.asarray(s, dtype=float)
        if self.kappa_poly.degree() == 0:
            return self._closed_integral(s, self.kappa_poly.coef[0])
        flat = s.ravel()
        out = np.zeros(flat.shape + (3,))
        for i, b in enumerate(flat):
            panels = max(1, int(math.ceil(abs(b) / 0.25)))
            edges = np.linspace(0.0, b, panels + 1)
            lo, hi = edges[:-1, None], edges[1:, None]
            nodes = 0.5 * (hi - lo) * _GL_X + 0.5 * (hi + lo)
            w = 0.5 * (hi - lo) * _GL_W
            vals = self._tangent_ppm(self.theta_poly(nodes))
            out[i] = np.einsum("pk,pkc->c", w, vals)
        return out.reshape(s.shape + (3,))

    def position(self, t):
        return lorentz.from_ppm(self._integral_ppm(t))

    def d1(self, t):
        t = np.asarray(t, dtype=float)
        return lorentz.from_ppm(self._tangent_ppm(self.theta_poly(t)))

    def d2(self, t):
        t = np.asarray(t, dtype=float)
        k = self.kappa_poly(t)[..., None]
        return lorentz.from_ppm(k * self._normal_ppm(self.theta_poly(t)))

    def d3(self, t):
        t = np.asarray(t, dtype=float)
        th = self.theta_poly(t)
        k = self.kappa_poly(t)[..., None]
        dk = self.kappa_poly.deriv()(t)[..., None]
        return lorentz.from_ppm(dk * self._normal_ppm(th) + k * k * self._normal_deriv_ppm(th))


class PlanarSpacelike(_Planar):
    """Spacelike plane curve in the x1 x2 plane (spacelike normal)."""

    name = "planar_spacelike"
    eps = (1, 1)

    def _tangent_ppm(self, th):
        return _raw(np.cos(th), np.sin(th), 0 * th)

    def _normal_ppm(self, th):
        return _raw(-np.sin(th), np.cos(th), 0 * th)

    def _normal_deriv_ppm(self, th):
        return _raw(-np.cos(th), -np.sin(th), 0 * th)

    def _closed_integral(self, s, k):
        return _raw(np.sin(k * s) / k, (1 - np.cos(k * s)) / k, 0 * s)

    def oracle(self, t):
        t = np.asarray(t, dtype=float)
        th = self.theta_poly(t)
        return dict(speed=1.0, kappa=self.kappa_poly(t), tau=0.0 * t, eps1=1, eps2=1,
                    T=lorentz.from_ppm(self._tangent_ppm(th)),
                    N=lorentz.from_ppm(self._normal_ppm(th)),
                    B=lorentz.from_ppm(_raw(0 * th, 0 * th, -1 + 0 * th)))


class PlanarTimelike(_Planar):
    """Timelike plane curve in the x1 x3 plane (spacelike normal)."""

    name = "planar_timelike"
    eps = (-1, 1)

    def _tangent_ppm(self, th):
        return _raw(np.sinh(th), 0 * th, np.cosh(th))

    def _normal_ppm(self, th):
        return _raw(np.cosh(th), 0 * th, np.sinh(th))

    def _normal_deriv_ppm(self, th):
        return _raw(np.sinh(th), 0 * th, np.cosh(th))

    def _closed_integral(self, s, k):
        return _raw((np.cosh(k * s) - 1) / k, 0 * s, np.sinh(k * s) / k)

    def oracle(self, t):
        t = np.asarray(t, dtype=float)
        th = self.theta_poly(t)
        return dict(speed=1.0, kappa=self.kappa_poly(t), tau=0.0 * t, eps1=-1, eps2=1,
                    T=lorentz.from_ppm(self._tangent_ppm(th)),
                    N=lorentz.from_ppm(self._normal_ppm(th)),
                    B=lorentz.from_ppm(_raw(0 * th, 1 + 0 * th, 0 * th)))


def _raw(*cols):
    return np.stack(np.broadcast_arrays(*cols), axis=-1)


def basis_frame(eps1, eps2):
    """A Frenet frame at the origin with <T,T> = eps1 and <N,N> = eps2."""
    ax = lorentz.timelike_axis()
    space = [i for i in range(3) if i != ax]
    e = np.eye(3)
    if eps1 < 0:
        T, N = e[ax], e[space[0]]
    elif eps2 < 0:
        T, N = e[space[0]], e[ax]
    else:
        T, N = e[space[0]], e[space[1]]
    return T, N, lorentz.lorentz_cross(T, N)


class IntrinsicCurve(Curve):
    """Arc-length curve defined by curvature and torsion functions.

    ``kappa_jet(s)`` and ``tau_jet(s)`` return ``(f, f', f'')``. The frame
    and position are integrated from the Frenet system with signs ``eps1``,
    ``eps2`` starting from :func:`basis_frame` at ``domain[0]``.
    """

    name = "intrinsic"

    def __init__(self, eps1, eps2, kappa_jet, tau_jet, domain, margin=None, rtol=1e-13):
        if eps1 < 0 and eps2 < 0:
            raise BadParams("a timelike curve cannot have a timelike normal")
        self.eps1, self.eps2 = int(eps1), int(eps2)
        self.kappa_jet, self.tau_jet = kappa_jet, tau_jet
        self.domain = tuple(map(float, domain))
        span = self.domain[1] - self.domain[0]
        if span <= 0:
            raise NotRegular("degenerate domain")
        self.margin = 0.05 * span if margin is None else margin
        T0, N0, B0 = basis_frame(eps1, eps2)
        y0 = np.concatenate([np.zeros(3), T0, N0, B0])
        e12 = self.eps1 * self.eps2
        e1 = self.eps1

        def rhs(s, y):
            k = self.kappa_jet(s)[0]
            tau = self.tau_jet(s)[0]
            T, N, B = y[3:6], y[6:9], y[9:12]
            return np.concatenate([T, k * N, -e12 * k * T + tau * B, e1 * tau * N])

        a, b = self.domain
        opts = dict(method="DOP853", rtol=rtol, atol=rtol, dense_output=True)
        self._fwd = solve_ivp(rhs, (a, b + self.margin), y0, **opts)
        self._bwd = solve_ivp(rhs, (a, a - self.margin), y0, **opts)
        if not (self._fwd.success and self._bwd.success):
            raise BadParams("frame integration failed")

    def _state(self, t):
        t = np.asarray(t, dtype=float)
        a, b = self.domain
        flat = t.ravel()
        if np.any(flat < a - self.margin - 1e-12) or np.any(flat > b + self.margin + 1e-12):
            raise OutOfRange("parameter outside the integrated range")
        out = np.empty((flat.size, 12))
        fwd = flat >= a
        if np.any(fwd):
            out[fwd] = self._fwd.sol(flat[fwd]).T
        if np.any(~fwd):
            out[~fwd] = self._bwd.sol(flat[~fwd]).T
        return out.reshape(t.shape + (12,))

    def frame(self, t):
        y = self._state(t)
        return y[..., 3:6], y[..., 6:9], y[..., 9:12]

    def position(self, t):
        return self._state(t)[..., 0:3]

    def d1(self, t):
        return self._state(t)[..., 3:6]

    def d2(self, t):
        k = self.kappa_jet(np.asarray(t, dtype=float))[0]
        return k[..., None] * self._state(t)[..., 6:9]

    def d3(self, t):
        t = np.asarray(t, dtype=float)
        k, dk, _ = self.kappa_jet(t)
        tau = self.tau_jet(t)[0]
        y = self._state(t)
        T, N, B = y[..., 3:6], y[..., 6:9], y[..., 9:12]
        e12 = self.eps1 * self.eps2
        return (dk[..., None] * N + k[..., None] * (-e12 * k[..., None] * T + tau[..., None] * B))

    def oracle(self, t):
        t = np.asarray(t, dtype=float)
        T, N, B = self.frame(t)
        return dict(speed=1.0, kappa=self.kappa_jet(t)[0], tau=self.tau_jet(t)[0],
                    eps1=self.eps1, eps2=self.eps2, T=None, N=None, B=None)


# Tangent sign pattern of the partner curve and the shape of
# p(s) = lambda * eps1~ * tau~(s), which must solve p' = -kappa~ (1 + eps1~ eps2~ p^2).
PARTNER_CASES = {
    1: (-1, 1, "tanh"),
    2: (1, -1, "coth"),
    3: (1, 1, "tan"),
    4: (1, -1, "tanh"),
    5: (-1, 1, "coth"),
}


def _riccati_jet(kind, k, c):
    def jet(s):
        x = c - k * np.asarray(s, dtype=float)
        if kind == "tanh":
            f = np.tanh(x)
            fp = 1 - f * f
        elif kind == "coth":
            f = 1.0 / np.tanh(x)
            fp = 1 - f * f
        else:
            f = np.tan(x)
            fp = 1 + f * f
        fpp = 2 * f * fp if kind == "tan" else -2 * f * fp
        return f, -k * fp, k * k * fpp
    return jet


class MannheimPartner(IntrinsicCurve):
    """A curve that admits a Mannheim curve at offset ``lam`` along its binormal.

    Constant curvature ``kappa``; torsion tau(s) = p(s) / (lam * eps1) with
    p(s) = tanh, coth or tan of (c - kappa s) depending on the case, which makes
    lam * eps1 * tau' = -kappa (1 + eps1 eps2 lam^2 tau^2) hold exactly.
    """

    name = "mannheim_partner"

    def __init__(self, case, lam, kappa, c, domain=(0.0, 2.0)):
        if case not in PARTNER_CASES:
            raise BadParams("case must be 1..5")
        if lam == 0 or kappa <= 0:
            raise BadParams("need lambda != 0 and kappa > 0")
        e1, e2, kind = PARTNER_CASES[case]
        self.case, self.lam, self.k, self.c, self.kind = int(case), float(lam), float(kappa), float(c), kind
        a, b = map(float, domain)
        margin = 0.05 * (b - a)
        x = self.c - self.k * np.array([a - margin, b + margin])
        if np.any(x <= 0.05) or (kind == "tan" and np.any(x >= math.pi / 2 - 0.05)):
            raise BadParams(f"c - kappa*s leaves the admissible range for {kind} on the domain")
        pj = _riccati_jet(kind, self.k, self.c)
        scale = 1.0 / (self.lam * e1)

        def tau_jet(s):
            return tuple(scale * v for v in pj(s))

        def kappa_jet(s):
            s = np.asarray(s, dtype=float)
            return self.k + 0 * s, 0 * s, 0 * s

        super().__init__(e1, e2, kappa_jet, tau_jet, (a, b), margin=margin)


class SampledCurve(Curve):
    """Curve known only at sample points.

    Non-uniform input is resampled to a uniform grid with a cubic spline.
    Derivatives at grid nodes come from :func:`kernels.grid_derivative`;
    between nodes they are interpolated with 6-point Lagrange polynomials.
    """

    name = "sampled"

    def __init__(self, t, points):
        t = np.asarray(t, dtype=float)
        pts = np.asarray(points, dtype=float)
        if t.ndim != 1 or pts.shape != (t.size, 3):
            raise SpecError("samples must be rows of (t, x, y, z)")
        if t.size < MIN_SAMPLES:
            raise TooFewSamples(f"need at least {MIN_SAMPLES} samples, got {t.size}")
        if not np.all(np.isfinite(pts)) or not np.all(np.isfinite(t)):
            raise SpecError("samples must be finite")
        dt = np.diff(t)
        if np.any(dt <= 0):
            raise SpecError("sample parameters must be strictly increasing")
        h = (t[-1] - t[0]) / (t.size - 1)
        if np.max(np.abs(dt - h)) > 1e-9 * h:
            grid = np.linspace(t[0], t[-1], t.size)
            pts = CubicSpline(t, pts, axis=0)(grid)
            t = grid
        self.t0, self.h, self.n = t[0], h, t.size
        self.grid = t
        self.values = [pts] + [kernels.grid_derivative(pts, h, k) for k in (1, 2, 3)]
        m = kernels.STENCIL_MARGIN
        self.window = min(6, self.n - 2 * m)
        self.domain = (t[m], t[self.n - 1 - m])

    def _interp(self, t, which):
        t = np.asarray(t, dtype=float)
        flat = t.ravel()
        lo, hi = self.domain
        tol = 1e-9 * self.h
        if np.any(flat < lo - tol) or np.any(flat > hi + tol):
            raise OutOfRange(f"parameter outside sampled range [{lo}, {hi}] minus stencil margin")
        m = kernels.STENCIL_MARGIN
        x = (flat - self.t0) / self.h
        nw = self.window
        j0 = np.clip(np.floor(x).astype(int) - (nw - 1) // 2, m, self.n - m - nw)
        u = x - j0
        w = np.ones((flat.size, nw))
        for k in range(nw):
            for q in range(nw):
                if q != k:
                    w[:, k] *= (u - q) / (k - q)
        vals = self.values[which]
        idx = j0[:, None] + np.arange(nw)
        out = np.einsum("nk,nkc->nc", w, vals[idx])
        return out.reshape(t.shape + (3,))

    def position(self, t):
        return self._interp(t, 0)

    def d1(self, t):
        return self._interp(t, 1)

    def d2(self, t):
        return self._interp(t, 2)

    def d3(self, t):
        return self._interp(t, 3)


def sampled_derivatives(samples, t, order):
    """Finite-difference derivative of sampled (t, x, y, z) rows at ``t``."""
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 4:
        raise SpecError("samples must be rows of (t, x, y, z)")
    curve = SampledCurve(samples[:, 0], samples[:, 1:])
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    return curve._interp(t, order)


FAMILIES = {
    "timelike_helix": (TimelikeHelix, ("a", "b")),
    "spacelike_helix_timelike_normal": (SpacelikeHelixTimelikeNormal, ("a", "b")),
    "spacelike_helix_spacelike_normal": (SpacelikeHelixSpacelikeNormal, ("a", "b")),
    "line": (Line, ("point", "direction")),
    "planar_spacelike": (PlanarSpacelike, ("kappa",)),
    "planar_timelike": (PlanarTimelike, ("kappa",)),
    "mannheim_partner": (MannheimPartner, ("case", "lambda", "kappa", "c")),
}


def make_family(name, params, domain=None):
    """Build a family evaluator from a parameter list or mapping."""
    if name not in FAMILIES:
        raise UnknownFamily(f"unknown family {name!r}; known: {sorted(FAMILIES)}")
    cls, names = FAMILIES[name]
    if isinstance(params, dict):
        unknown = set(params) - set(names)
        if unknown:
            raise BadParams(f"unexpected parameters for {name}: {sorted(unknown)}")
        try:
            args = [params[k] for k in names]
        except KeyError as exc:
            raise BadParams(f"missing parameter {exc.args[0]!r} for {name}") from None
    else:
        flat = list(params)
        if name == "line":
            if len(flat) != 6:
                raise BadParams("line takes point (3) and direction (3)")
            args = [flat[:3], flat[3:]]
        elif name.startswith("planar_"):
            args = [flat]
        else:
            if len(flat) != len(names):
                raise BadParams(f"{name} takes {len(names)} parameters {names}")
            args = flat
    if name == "mannheim_partner":
        args[0] = int(args[0])
    kwargs = {}
    if domain is not None:
        d = tuple(float(x) for x in domain)
        if len(d) != 2 or not d[1] > d[0]:
            raise NotRegular("domain must be [t_min, t_max] with t_min < t_max")
        kwargs["domain"] = d
    try:
        return cls(*args, **kwargs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SpecError):
            raise
        raise BadParams(str(exc)) from None


def curve_from_spec(spec):
    """Curve from a parsed curve-spec mapping (family form or samples form)."""
    if not isinstance(spec, dict):
        raise SpecError("curve spec must be a JSON object")
    if "samples" in spec:
        rows = np.asarray(spec["samples"], dtype=float)
        if rows.ndim != 2 or rows.shape[1] != 4:
            raise SpecError("samples must be rows of [t, x, y, z]")
        return SampledCurve(rows[:, 0], rows[:, 1:])
    if "family" not in spec:
        raise SpecError("curve spec needs 'family' or 'samples'")
    return make_family(spec["family"], spec.get("params", {}), spec.get("domain"))


def load_curve_spec(path):
    try:
        with open(path) as fh:
            spec = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError(f"cannot read curve spec {path}: {exc}") from None
    return curve_from_spec(spec)


# ------------------------------------------------------------- arc length

_GL10_X, _GL10_W = np.polynomial.legendre.leggauss(10)


def _gauss(f, a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    nodes = mid[..., None] + half[..., None] * _GL10_X
    return half * np.sum(f(nodes) * _GL10_W, axis=-1)


class MonotoneMap:
    """Monotone map u -> F(u) = integral of a positive rate from u_min.

    Built with adaptive composite Simpson; panels are bisected until the
    Richardson error estimate of each is below ``tol * width / span``. The
    inverse uses the panel table as a bracket and safeguarded Newton.
    """

    def __init__(self, rate, domain, tol=1e-10, initial_panels=32, max_levels=40):
        a, b = map(float, domain)
        if not b > a:
            raise NotRegular("degenerate domain")
        if tol <= 0:
            raise ValueError("tol must be positive")
        self.rate = rate
        self.domain = (a, b)
        self.tol = tol
        span = b - a
        lo = np.linspace(a, b, initial_panels + 1)
        hi = lo[1:]
        lo = lo[:-1]
        done_lo, done_hi, done_val, errs = [], [], [], []
        for _ in range(max_levels):
            h = hi - lo
            pts = np.stack([lo, lo + 0.25 * h, lo + 0.5 * h, lo + 0.75 * h, hi])
            f = rate(pts)
            val, err = kernels.simpson_panels(f[0], f[1], f[2], f[3], f[4], lo, hi)
            ok = err <= tol * h / span
            done_lo.append(lo[ok]); done_hi.append(hi[ok]); done_val.append(val[ok]); errs.append(err[ok])
            if np.all(ok):
                break
            mid = 0.5 * (lo[~ok] + hi[~ok])
            lo, hi = np.concatenate([lo[~ok], mid]), np.concatenate([mid, hi[~ok]])
        else:
            raise NotRegular("adaptive quadrature did not converge")
        lo = np.concatenate(done_lo)
        order = np.argsort(lo)
        self.edges = np.concatenate([lo[order], [b]])
        vals = np.concatenate(done_val)[order]
        self.cumulative = np.concatenate([[0.0], np.cumsum(vals)])
        self.total = float(self.cumulative[-1])
        self.error_estimate = float(np.sum(np.concatenate(errs)))

    def forward(self, u):
        u = np.asarray(u, dtype=float)
        flat = u.ravel()
        a, b = self.domain
        k = np.clip(np.searchsorted(self.edges, flat, side="right") - 1, 0, len(self.edges) - 2)
        base = np.where(flat < a, 0.0, np.where(flat > b, self.total, self.cumulative[k]))
        start = np.where(flat < a, a, np.where(flat > b, b, self.edges[k]))
        out = base + _gauss(self.rate, start, flat)
        return out.reshape(u.shape) if u.ndim else float(out[0])

    def inverse(self, s, tol=None):
        tol = self.tol if tol is None else tol
        s = np.asarray(s, dtype=float)
        flat = s.ravel().copy()
        a, b = self.domain
        k = np.clip(np.searchsorted(self.cumulative, flat, side="right") - 1, 0, len(self.edges) - 2)
        lo = np.where(flat < 0, a - (b - a), self.edges[k])
        hi = np.where(flat > self.total, b + (b - a), self.edges[k + 1])
        c0, c1 = self.cumulative[k], self.cumulative[k + 1]
        frac = np.clip((flat - c0) / np.where(c1 > c0, c1 - c0, 1.0), 0.0, 1.0)
        u = np.where((flat < 0) | (flat > self.total),
                     np.where(flat < 0, a, b) + (flat - np.clip(flat, 0, self.total)) / self.rate(np.where(flat < 0, a, b)),
                     lo + frac * (hi - lo))
        for _ in range(60):
            g = self.forward(u) - flat
            if np.all(np.abs(g) < 0.1 * tol):
                break
            lo = np.where(g < 0, np.maximum(lo, u), lo)
            hi = np.where(g > 0, np.minimum(hi, u), hi)
            step = u - g / self.rate(u)
            bad = (step <= lo) | (step >= hi) | ~np.isfinite(step)
            u = np.where(bad, 0.5 * (lo + hi), step)
        # converged within tol; two more Newton steps reach rounding level, which
        # keeps finite differences taken through the inverse clean
        for _ in range(2):
            step = u - (self.forward(u) - flat) / self.rate(u)
            u = np.where((step > lo) & (step < hi), step, u)
        return u.reshape(s.shape) if s.ndim else float(u[0])


def speed_function(curve, tol_null=lorentz.TOL_NULL):
    """sqrt|<a', a'>| with null and regularity checks at every node."""
    state = {}

    def rate(t):
        v = curve.d1(t)
        q = lorentz.norm_sq(v)
        if np.any(np.linalg.norm(v, axis=-1) < 1e-14):
            raise NotRegular("velocity vanishes")
        if np.any(np.abs(q) < tol_null):
            raise NullVelocity("velocity is null at a quadrature node")
        sgn = np.sign(q)
        if "sign" not in state:
            state["sign"] = sgn.ravel()[0]
        if np.any(sgn != state["sign"]):
            raise NullVelocity("velocity changes causal character on the domain")
        return np.sqrt(np.abs(q))

    return rate


class ArcLengthMap(MonotoneMap):
    """t <-> s for a curve, with s(t_min) = 0."""

    def __init__(self, curve, domain=None, tol=1e-10):
        self.curve = curve
        super().__init__(speed_function(curve), domain or curve.domain, tol=tol)

    def s_of_t(self, t):
        return self.forward(t)

    def t_of_s(self, s):
        return self.inverse(s)


def arclength_map(curve, domain=None, tol=1e-10):
    return ArcLengthMap(curve, domain, tol)
