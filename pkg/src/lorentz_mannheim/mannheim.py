"""Mannheim pairs of non-null curves.

Notation: ``gt`` (Gamma-tilde) is the conjugate curve beta(s*) parametrized by
its arc length s*, ``g`` (Gamma) is the curve alpha(s) with

    alpha = beta + lambda * B~

so that the principal normal of Gamma lies along the binormal of Gamma-tilde,
B~ = mu N with mu = +-1.

Offset curves are built from coefficient jets in the frame of the base curve:
if V = a T + b N + c B then

    V' = (a' - e1 e2 kappa b) T + (kappa a + b' + e1 tau c) N + (tau b + c') B

which gives alpha', alpha'', alpha''' exactly from kappa, tau and two of
their derivatives.
"""
from dataclasses import dataclass
from math import comb

import numpy as np

from . import frenet, lorentz
from .curves import ArcLengthMap, Curve, IntrinsicCurve, arclength_map
from .errors import (BadParams, DegeneratePair, DegenerateSpeed, DivisionDegenerate,
                     FrenetConsistencyError, ImaginarySpeed, NotMonotone, NotPlanar,
                     PairingError, UnlistedConfiguration, ZeroTorsion)

TOL_CONSTRUCT = 1e-10
TOL_TAU = 1e-8
TOL_DEN = 1e-12
TOL_SPEED = 1e-10
GRID = 257

# (eps1, eps2) of Gamma, then of Gamma-tilde
CASES = {
    1: ((-1, 1), (-1, 1)),
    2: ((-1, 1), (1, -1)),
    3: ((1, -1), (1, 1)),
    4: ((1, 1), (1, -1)),
    5: ((1, 1), (-1, 1)),
}
_BY_SIGNS = {v: k for k, v in CASES.items()}
HYPERBOLIC_CASES = (1, 2, 4, 5)


# ------------------------------------------------------------------ jets

def _jmul(f, g):
    """Leibniz product of two jets (rows are derivative orders)."""
    m = min(len(f), len(g))
    out = np.zeros((m,) + np.shape(f[0]))
    for j in range(m):
        for i in range(j + 1):
            out[j] = out[j] + comb(j, i) * f[i] * g[j - i]
    return out


def _frame_derivative(V, kj, tj, e1, e2):
    """Jet of V' from the jet of V = (a, b, c) in a Frenet frame."""
    a, b, c = V
    m = a.shape[0] - 1
    k, t = kj[:m], tj[:m]
    da = a[1:] - e1 * e2 * _jmul(k, b[:m])
    db = _jmul(k, a[:m]) + b[1:] + e1 * _jmul(t, c[:m])
    dc = _jmul(t, b[:m]) + c[1:]
    return np.stack([da, db, dc])


def _combine(coef, T, N, B):
    return coef[0][:, None] * T + coef[1][:, None] * N + coef[2][:, None] * B


def _fd_jet(f, s, h):
    """Value, first and second derivative of f at s by 5-point stencils."""
    pts = s[:, None] + h * np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    v = f(pts.ravel()).reshape(pts.shape)
    d1 = (v[:, 0] - 8 * v[:, 1] + 8 * v[:, 3] - v[:, 4]) / (12 * h)
    d2 = (-v[:, 0] + 16 * v[:, 1] - 30 * v[:, 2] + 16 * v[:, 3] - v[:, 4]) / (12 * h * h)
    return np.stack([v[:, 2], d1, d2])


# ---------------------------------------------------------- frame sources

class FrameSource:
    """Frenet data of a base curve as functions of its own arc length.

    Curves defined intrinsically supply exact curvature and torsion jets;
    any other curve goes through the arc-length map and the derivatives of
    kappa and tau come from 5-point differences with step ``h``.
    """

    def __init__(self, curve, amap=None, h=None):
        self.curve = curve
        self.exact = isinstance(curve, IntrinsicCurve)
        if self.exact:
            self.amap = None
            self.length = curve.domain[1] - curve.domain[0]
        else:
            self.amap = amap or arclength_map(curve)
            self.length = self.amap.total
        self.h = 2e-3 * self.length if h is None else h
        grid = np.linspace(0.0, self.length, 65)
        fd = self.frenet(grid)
        if np.ptp(fd.eps1) or np.ptp(fd.eps2):
            raise FrenetConsistencyError("causal character changes along the base curve")
        self.eps1, self.eps2 = int(fd.eps1[0]), int(fd.eps2[0])

    def t_of_s(self, s):
        s = np.asarray(s, dtype=float)
        if self.exact:
            return self.curve.domain[0] + s
        return self.amap.t_of_s(s)

    def position(self, s):
        return self.curve.position(self.t_of_s(s))

    def frenet(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return frenet.frenet_at_param(self.curve, self.t_of_s(s), s=s)

    def frame(self, s):
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if self.exact:
            return self.curve.frame(self.t_of_s(s))
        fd = self.frenet(s)
        return fd.T, fd.N, fd.B

    def jets(self, s):
        """(kappa, kappa', kappa'') and (tau, tau', tau'') at arc length s."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if self.exact:
            t = self.t_of_s(s)
            return np.stack(self.curve.kappa_jet(t)), np.stack(self.curve.tau_jet(t))
        kj = _fd_jet(lambda x: self.frenet(x).kappa, s, self.h)
        tj = _fd_jet(lambda x: self.frenet(x).tau, s, self.h)
        return kj, tj


def as_source(curve):
    return curve if isinstance(curve, FrameSource) else FrameSource(curve)


class OffsetCurve(Curve):
    """beta(s*) + V(s*) with V given by frame coefficients over a base curve.

    ``coeffs(s)`` returns an array of shape (3, 4, n): the jets (value and
    three derivatives) of the T, N, B coefficients. The curve parameter is
    the arc length s* of the base.
    """

    name = "offset"

    def __init__(self, source, coeffs):
        self.source = source
        self.coeffs = coeffs
        self.domain = (0.0, float(source.length))

    def _eval(self, u, upto):
        u = np.asarray(u, dtype=float)
        flat = np.atleast_1d(u).ravel()
        T, N, B = self.source.frame(flat)
        V = self.coeffs(flat)
        out = []
        if upto >= 0:
            out.append(self.source.position(flat).reshape(-1, 3) + _combine(V[:, 0], T, N, B))
        if upto >= 1:
            kj, tj = self.source.jets(flat)
            e1, e2 = self.source.eps1, self.source.eps2
            C = _frame_derivative(V, kj, tj, e1, e2)
            C[0, 0] += 1.0
            for _ in range(upto):
                out.append(_combine(C[:, 0], T, N, B))
                if C.shape[1] > 1:
                    C = _frame_derivative(C, kj, tj, e1, e2)
        shape = u.shape + (3,)
        return [x.reshape(shape) for x in out]

    def position(self, u):
        return self._eval(u, 0)[0]

    def d1(self, u):
        return self._eval(u, 1)[1]

    def d2(self, u):
        return self._eval(u, 2)[2]

    def d3(self, u):
        return self._eval(u, 3)[3]

    def derivatives(self, u):
        return tuple(self._eval(u, 3)[1:])


def binormal_offset(lam, profile=None):
    """Coefficient jets for V = lam * f(s) * B (f = 1 unless a profile is given).

    ``profile(s)`` must return (f, f', f'', f''').
    """
    def coeffs(s):
        z = np.zeros((4, s.size))
        if profile is None:
            c = np.zeros((4, s.size))
            c[0] = lam
        else:
            c = lam * np.stack([np.broadcast_to(x, s.shape) for x in profile(s)])
        return np.stack([z, z.copy(), c])
    return coeffs


def normal_offset(amount):
    """Coefficient jets for V = amount * N."""
    def coeffs(s):
        z = np.zeros((4, s.size))
        b = np.zeros((4, s.size))
        b[0] = amount
        return np.stack([z, b, z.copy()])
    return coeffs


# ------------------------------------------------------------- pair types

@dataclass(frozen=True)
class MannheimLink:
    """Pairing data; ``correspondence`` maps s* (of Gamma-tilde) to s (of Gamma)."""

    lam: float
    mu: int
    case_id: int
    phi: float
    correspondence: object
    source: FrameSource = None


@dataclass(frozen=True)
class PairSamples:
    s: np.ndarray
    s_star: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    g: frenet.FrenetData
    gt: frenet.FrenetData
    dsstar_ds: np.ndarray


def _eps_pair(x):
    if isinstance(x, frenet.FrenetData):
        e1, e2 = np.ravel(x.eps1), np.ravel(x.eps2)
        if np.ptp(e1) or np.ptp(e2):
            raise FrenetConsistencyError("signature signs vary along the curve")
        return int(e1[0]), int(e2[0])
    e1, e2 = x
    return int(e1), int(e2)


def classify_case(g, gt):
    """Case number 1..5 from the signature signs of Gamma and Gamma-tilde.

    Arguments are FrenetData (scalar or vectorized) or (eps1, eps2) pairs.
    """
    key = (_eps_pair(g), _eps_pair(gt))
    if key not in _BY_SIGNS:
        raise UnlistedConfiguration(f"sign pattern Gamma {key[0]}, Gamma~ {key[1]} is not one of the five cases")
    return _BY_SIGNS[key]


def construct_partner_curve(gt_curve, lam, mu=None, profile=None, tol=TOL_CONSTRUCT):
    """Gamma = Gamma~ + lam B~, returned with its MannheimLink.

    The curve parameter of the result is the arc length s* of Gamma-tilde;
    the link's correspondence maps s* to the arc length s of Gamma by
    integrating ds/ds* = sqrt|<alpha', alpha'>|. ``profile`` replaces the
    constant offset by lam * f(s*) (used for negative controls).
    """
    lam = float(lam)
    if not np.isfinite(lam) or lam == 0.0:
        raise BadParams("lambda must be finite and nonzero")
    if mu is not None and mu not in (1, -1):
        raise BadParams("mu must be +1 or -1")
    src = as_source(gt_curve)
    grid = np.linspace(0.0, src.length, GRID)
    tau = src.jets(grid)[1][0]
    if np.any(np.abs(tau) < TOL_TAU) or np.ptp(np.sign(tau)):
        raise ZeroTorsion(f"torsion of the base curve vanishes (min |tau| = {np.abs(tau).min():.3g})")
    f = 1.0 if profile is None else profile(grid)[0]
    p = lam * f * tau
    R = src.eps1 + src.eps2 * p * p
    if np.any(np.abs(R) < TOL_SPEED) or np.ptp(np.sign(R)):
        raise ImaginarySpeed(f"<alpha', alpha'> = eps1~ + eps2~ lam^2 tau~^2 reaches 0 (min |.| = {np.abs(R).min():.3g})")
    curve = OffsetCurve(src, binormal_offset(lam, profile))
    corr = ArcLengthMap(curve, tol=tol)
    fd0 = frenet.frenet_at_param(curve, 0.0)
    B0 = src.frame(np.array([0.0]))[2][0]
    mu_meas = _sign(lorentz.minkowski_dot(fd0.N, B0) / lorentz.minkowski_dot(B0, B0))
    if mu is not None and mu != mu_meas:
        raise PairingError(f"requested mu={mu} but the constructed normal gives mu={mu_meas}")
    case_id = classify_case((fd0.eps1, fd0.eps2), (src.eps1, src.eps2))
    fdt = src.frenet(np.array([0.0]))
    phi = lorentz.pair_angle(fd0.T, fdt.T[0], case_id != 3, normal=fdt.N[0])
    link = MannheimLink(lam=lam, mu=mu_meas, case_id=case_id, phi=phi, correspondence=corr, source=src)
    return curve, link


def _sign(x):
    return 1 if x >= 0 else -1


def sample_pair(curve, link, n=200):
    """PairSamples of a constructed pair at n points uniform in s*."""
    src = link.source
    u = np.linspace(0.0, src.length, n)
    s = link.correspondence.forward(u)
    g = frenet.frenet_at_param(curve, u, s=s)
    gt = src.frenet(u)
    return PairSamples(s=s, s_star=u, alpha=curve.position(u), beta=src.position(u),
                       g=g, gt=gt, dsstar_ds=1.0 / g.speed)


def sample_curves(g_curve, gt_curve, s, s_star, g_map=None, gt_map=None):
    """PairSamples of two independent curves at corresponding arc lengths."""
    s = np.asarray(s, dtype=float)
    s_star = np.asarray(s_star, dtype=float)
    g_map = g_map or arclength_map(g_curve)
    gt_map = gt_map or arclength_map(gt_curve)
    t = g_map.t_of_s(s)
    tt = gt_map.t_of_s(s_star)
    g = frenet.frenet_at_param(g_curve, t, s=s)
    gt = frenet.frenet_at_param(gt_curve, tt, s=s_star)
    return PairSamples(s=s, s_star=s_star, alpha=g_curve.position(t), beta=gt_curve.position(tt),
                       g=g, gt=gt, dsstar_ds=local_derivative(s, s_star))


def local_derivative(x, y, width=7):
    """dy/dx at every sample from a local polynomial through ``width`` neighbours."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    w = min(width, n)
    out = np.empty(n)
    for i in range(n):
        lo = min(max(i - w // 2, 0), n - w)
        xs = x[lo:lo + w] - x[i]
        scale = np.max(np.abs(xs)) or 1.0
        c = np.polyfit(xs / scale, y[lo:lo + w], w - 1)
        out[i] = c[-2] / scale
    return out


def pair_angles(ps, case_id):
    """Per-sample angle between T of Gamma and T of Gamma-tilde (sign from N~)."""
    hyp = case_id != 3
    return np.array([lorentz.pair_angle(ps.g.T[i], ps.gt.T[i], hyp, normal=ps.gt.N[i])
                     for i in range(ps.s.size)])


# ------------------------------------------------------------ formulas

def _case_signs(case_id):
    if case_id not in CASES:
        raise UnlistedConfiguration(f"unknown case {case_id!r}")
    return CASES[case_id]


def partner_torsion(kappa, tau, lam, mu, case_id, convention="stated"):
    """Torsion of Gamma-tilde from kappa, tau of Gamma.

    ``stated``: the case table (1: tau/(1-lam mu kappa), 2 and 3:
    -tau/(1-lam mu kappa), 4: -tau/(1+lam mu kappa), 5: tau/(1+lam mu kappa)).
    ``derived``: tau/(1 + eps1 eps2 lam mu kappa), which is what an actual
    pair satisfies in all five cases.
    """
    (e1, e2), (et1, _) = _case_signs(case_id)
    kappa = np.asarray(kappa, dtype=float)
    tau = np.asarray(tau, dtype=float)
    den = 1.0 + e1 * e2 * lam * mu * kappa
    if np.any(np.abs(den) < TOL_DEN):
        raise DegeneratePair(f"1 + eps1 eps2 lam mu kappa = {np.min(np.abs(den)):.3g} (pole)")
    num = tau if convention == "derived" else -et1 * tau
    out = num / den
    return float(out) if out.ndim == 0 else out


def lemma1_residuals(phi, kappa, tau, tau_t, lam, mu, case_id, dsstar_ds=None, convention="stated"):
    """Left-minus-right residuals of the angle identities.

    Returns a dict with res_i..res_iv (cases 1, 2, 4, 5) or res_v..res_viii
    (case 3) and, when ``dsstar_ds`` is given, the four speed relations
    rel_ds, rel_tau_t, rel_tau, rel_kappa.

    ``stated`` evaluates the identities exactly as stated. ``derived`` uses
    the forms an actual pair satisfies: mu drops out of (ii), (iv), (vi),
    (viii), and when the two tangents have opposite causal character
    (cases 2 and 5) cosh and sinh trade places.
    """
    (e1, e2), (et1, _) = _case_signs(case_id)
    phi = np.asarray(phi, dtype=float)
    D = 1.0 + e1 * e2 * lam * mu * np.asarray(kappa, dtype=float)
    sig = dsstar_ds
    out = {}
    if case_id == 3:
        C, S = np.cos(phi), np.sin(phi)
        if convention == "derived":
            out["res_v"] = S - lam * tau_t * C
            out["res_vi"] = D * S - lam * tau * C
            out["res_vii"] = C ** 2 - D
            out["res_viii"] = S ** 2 - lam ** 2 * tau * tau_t
        else:
            out["res_v"] = S - lam * tau_t * C
            out["res_vi"] = (1 - lam * mu * kappa) * S - lam * mu * tau * C
            out["res_vii"] = C ** 2 - (1 - lam * mu * kappa)
            out["res_viii"] = S ** 2 - lam ** 2 * mu * tau * tau_t
        if sig is not None:
            out["rel_ds"] = sig - C
            out["rel_tau_t"] = sig * lam * tau_t - S
            out["rel_tau"] = S - (lam if convention == "derived" else lam * mu) * tau / sig
            out["rel_kappa"] = C - D / sig
        return {k: np.abs(v) for k, v in out.items()}
    C, S = np.cosh(phi), np.sinh(phi)
    mixed = e1 != et1
    if convention == "derived" and mixed:
        out["res_i"] = C - lam * et1 * tau_t * S
        out["res_ii"] = D * C - lam * et1 * tau * S
        out["res_iii"] = S ** 2 + D
        out["res_iv"] = C ** 2 + lam ** 2 * tau * tau_t
        if sig is not None:
            out["rel_ds"] = sig - S
            out["rel_tau_t"] = sig * lam * et1 * tau_t - C
            out["rel_tau"] = C + lam * et1 * tau / sig
            out["rel_kappa"] = S + D / sig
    elif convention == "derived":
        out["res_i"] = S - lam * et1 * tau_t * C
        out["res_ii"] = D * S - lam * et1 * tau * C
        out["res_iii"] = C ** 2 - D
        out["res_iv"] = S ** 2 - lam ** 2 * tau * tau_t
        if sig is not None:
            out["rel_ds"] = sig - C
            out["rel_tau_t"] = sig * lam * et1 * tau_t - S
            out["rel_tau"] = S - lam * et1 * tau / sig
            out["rel_kappa"] = C - D / sig
    else:
        out["res_i"] = S - lam * et1 * tau_t * C
        out["res_ii"] = D * S + lam * mu * tau * C
        out["res_iii"] = C ** 2 - D
        out["res_iv"] = S ** 2 + lam ** 2 * mu * et1 * tau * tau_t
        if sig is not None:
            out["rel_ds"] = sig - C
            out["rel_tau_t"] = sig * lam * et1 * tau_t - S
            out["rel_tau"] = S + lam * mu * tau / sig
            out["rel_kappa"] = C - D / sig
    return {k: np.abs(v) for k, v in out.items()}


def iv_sign_violations(kappa, tau, tau_t, lam, mu, case_id):
    """Samples where the right side of (iv) / (viii) is negative (cannot be a square)."""
    (_, _), (et1, _) = _case_signs(case_id)
    if case_id == 3:
        rhs = lam ** 2 * mu * tau * tau_t
    else:
        rhs = -lam ** 2 * mu * et1 * tau * tau_t
    return int(np.sum(np.asarray(rhs) < 0))


def case3_degenerate_residual(tau, dsstar_ds, lam, mu):
    """Branch cos(phi) = 0 of case 3: tau of Gamma must equal -1/(sigma' lam mu)."""
    return np.abs(np.asarray(tau) * np.asarray(dsstar_ds) * lam * mu + 1.0)


def check_lemma1_identities(ps, lam, mu, case_id, convention="stated"):
    phi = pair_angles(ps, case_id)
    if case_id == 3 and np.all(np.abs(np.cos(phi)) < 1e-8):
        return phi, {"res_cos0": case3_degenerate_residual(ps.g.tau, ps.dsstar_ds, lam, mu)}
    return phi, lemma1_residuals(phi, ps.g.kappa, ps.g.tau, ps.gt.tau, lam, mu, case_id,
                                 dsstar_ds=ps.dsstar_ds, convention=convention)


def remark1_quantity(kappa, tau, tau_t, case_id, convention="stated"):
    (_, _), (et1, _) = _case_signs(case_id)
    kappa = np.asarray(kappa, dtype=float)
    tau_t = np.asarray(tau_t, dtype=float)
    den = kappa * tau_t
    if np.any(np.abs(den) < TOL_DEN):
        raise DivisionDegenerate(f"kappa * tau~ = {np.min(np.abs(den)):.3g}")
    if convention == "derived":
        return (tau_t - tau) / den
    if case_id == 3:
        return (tau + tau_t) / den
    return (et1 * tau + tau_t) / den


def check_remark1(kappa, tau, tau_t, case_id, tol=1e-6, convention="stated"):
    """(values, max deviation from the mean, passed)."""
    q = remark1_quantity(kappa, tau, tau_t, case_id, convention)
    dev = float(np.max(np.abs(q - np.mean(q))))
    return q, dev, dev < tol


def _unit_tangent(curve, t):
    v = np.atleast_2d(curve.d1(np.atleast_1d(t)))
    q = lorentz.minkowski_dot(v, v)
    return v / np.sqrt(np.abs(q))[:, None]


def check_orthogonality(alpha, beta, T_g, T_gt):
    """|<d, T>| and |<d, T~>| with d = alpha - beta, per sample."""
    d = np.atleast_2d(alpha) - np.atleast_2d(beta)
    return np.abs(lorentz.minkowski_dot(d, T_g)), np.abs(lorentz.minkowski_dot(d, T_gt))


def minkowski_distance(alpha, beta):
    d = np.atleast_2d(alpha) - np.atleast_2d(beta)
    return np.sqrt(np.abs(lorentz.minkowski_dot(d, d)))


@dataclass(frozen=True)
class Remark2Result:
    lhs: object
    rhs: bool
    verdict: str
    inner: np.ndarray


def check_remark2(g_curve, gt_curve, t_g, t_gt, tol=1e-6, tol_kappa=frenet.TOL_KAPPA):
    """Constant nonzero <T, T~>  <=>  Gamma a circular helix and Gamma~ straight.

    ``t_g`` and ``t_gt`` are corresponding curve parameters. ``lhs`` is None
    when <T, T~> vanishes everywhere (the hypothesis excludes that); the
    verdict is then "indeterminate".
    """
    t_g = np.atleast_1d(np.asarray(t_g, dtype=float))
    t_gt = np.atleast_1d(np.asarray(t_gt, dtype=float))
    inner = lorentz.minkowski_dot(_unit_tangent(g_curve, t_g), _unit_tangent(gt_curve, t_gt))
    kt = frenet.curvature_at_param(gt_curve, t_gt)
    straight = bool(np.all(kt < tol_kappa))
    if np.any(frenet.curvature_at_param(g_curve, t_g) < tol_kappa):
        helix = False  # straight somewhere, so not a circular helix
    else:
        fd = frenet.frenet_at_param(g_curve, t_g)
        helix = bool(np.ptp(fd.kappa) < tol * max(1.0, np.max(np.abs(fd.kappa)))
                     and np.ptp(fd.tau) < tol * max(1.0, np.max(np.abs(fd.tau))))
    rhs = helix and straight
    if np.max(np.abs(inner)) < 1e-8:
        return Remark2Result(None, rhs, "indeterminate", inner)
    lhs = bool(np.ptp(inner) < tol and np.min(np.abs(inner)) > tol)
    if lhs and rhs:
        verdict = "both"
    elif not lhs and not rhs:
        verdict = "neither"
    else:
        verdict = "lhs-only" if lhs else "rhs-only"
    return Remark2Result(lhs, rhs, verdict, inner)


# ------------------------------------------------------ planar conjugate

def construct_planar_conjugate(g_curve, lam, mu, tol_plane=1e-8):
    """beta = alpha - mu lam N for a plane curve alpha.

    The result is parametrized by the arc length of alpha. Its tangent is
    (1 + eps1 eps2 mu lam kappa) T, so that factor must stay away from 0.
    """
    lam = float(lam)
    if not np.isfinite(lam) or lam == 0.0:
        raise BadParams("lambda must be finite and nonzero")
    if mu not in (1, -1):
        raise BadParams("mu must be +1 or -1")
    src = as_source(g_curve)
    grid = np.linspace(0.0, src.length, GRID)
    kj, tj = src.jets(grid)
    if np.max(np.abs(tj[0])) > tol_plane:
        raise NotPlanar(f"torsion reaches {np.max(np.abs(tj[0])):.3g}")
    F = 1.0 + src.eps1 * src.eps2 * mu * lam * kj[0]
    if np.any(np.abs(F) < TOL_SPEED) or np.ptp(np.sign(F)):
        raise DegenerateSpeed(f"1 + eps1 eps2 mu lam kappa reaches 0 (min |.| = {np.abs(F).min():.3g})")
    return OffsetCurve(src, normal_offset(-mu * lam))


def check_planar_conjugate(g_curve, conj, n=200):
    """Torsion of the conjugate, tangent parallelism defect and planarity defect."""
    src = conj.source
    u = np.linspace(0.0, src.length, n)
    fd = frenet.frenet_at_param(conj, u)
    T = src.frame(u)[0]
    par = np.linalg.norm(lorentz.lorentz_cross(fd.T, T), axis=-1)
    B0 = src.frame(np.array([0.0]))[2][0]
    pts = conj.position(u)
    plane = np.abs(lorentz.minkowski_dot(pts - pts[0], B0))
    return np.abs(fd.tau), par, plane


# ---------------------------------------------------------- WM validator

@dataclass(frozen=True)
class WMResult:
    s: np.ndarray
    s_star: np.ndarray
    dsstar_ds: np.ndarray
    res_orth_g: np.ndarray
    res_orth_gt: np.ndarray
    Z: list
    N: list
    z_interior: bool
    n_interior: bool


def _runs(flag, x):
    out = []
    i, n = 0, flag.size
    while i < n:
        if flag[i]:
            j = i
            while j + 1 < n and flag[j + 1]:
                j += 1
            out.append((float(x[i]), float(x[j]), j - i + 1))
            i = j + 1
        else:
            i += 1
    return out


def correspondence_slope(s, s_star):
    """Central-difference ds*/ds over the samples (inf where s does not move)."""
    s = np.asarray(s, dtype=float)
    s_star = np.asarray(s_star, dtype=float)
    ds = np.empty_like(s)
    dst = np.empty_like(s)
    ds[1:-1], dst[1:-1] = s[2:] - s[:-2], s_star[2:] - s_star[:-2]
    ds[0], dst[0] = s[1] - s[0], s_star[1] - s_star[0]
    ds[-1], dst[-1] = s[-1] - s[-2], s_star[-1] - s_star[-2]
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(ds > 0, dst / np.where(ds > 0, ds, 1.0), np.inf)


def check_monotone(s, s_star):
    s = np.asarray(s, dtype=float)
    s_star = np.asarray(s_star, dtype=float)
    if s.shape != s_star.shape or s.ndim != 1 or s.size < 3:
        raise BadParams("correspondence needs two equal-length 1-d sample arrays (>= 3)")
    a, b = np.diff(s), np.diff(s_star)
    if np.any(a < 0) or np.any(b < 0) or np.any((a == 0) & (b == 0)):
        raise NotMonotone("correspondence samples must increase (flat runs allowed in one variable only)")


def wm_validate(g_curve, gt_curve, s, s_star, tol_zero=1e-6, g_map=None, gt_map=None):
    """Orthogonality of the joining line and sample-resolution Z, N estimates.

    Z collects runs where |ds*/ds| < tol_zero, N runs where |ds/ds*| < tol_zero.
    A set has interior at sample resolution when a run has two or more samples.
    """
    check_monotone(s, s_star)
    s = np.asarray(s, dtype=float)
    s_star = np.asarray(s_star, dtype=float)
    g_map = g_map or arclength_map(g_curve)
    gt_map = gt_map or arclength_map(gt_curve)
    t = g_map.t_of_s(s)
    tt = gt_map.t_of_s(s_star)
    rg, rgt = check_orthogonality(g_curve.position(t), gt_curve.position(tt),
                                  _unit_tangent(g_curve, t), _unit_tangent(gt_curve, tt))
    slope = correspondence_slope(s, s_star)
    with np.errstate(divide="ignore"):
        inv = np.where(slope > 0, 1.0 / np.where(slope > 0, slope, 1.0), np.inf)
    Z = _runs(np.abs(slope) < tol_zero, s)
    N = _runs(np.abs(inv) < tol_zero, s)
    return WMResult(s=s, s_star=s_star, dsstar_ds=slope, res_orth_g=rg, res_orth_gt=rgt,
                    Z=[(a, b) for a, b, _ in Z], N=[(a, b) for a, b, _ in N],
                    z_interior=any(k >= 2 for _, _, k in Z),
                    n_interior=any(k >= 2 for _, _, k in N))


# ---------------------------------------------------------------- sweep

def identity_closure(kappa, tau, lam, mu, case_id, convention="stated"):
    """cosh^2 - sinh^2 - 1 (cos^2 + sin^2 - 1 in case 3) implied by the squared identities.

    tau~ comes from :func:`partner_torsion`; a curve that really has a
    partner at offset lam makes this vanish.
    """
    (e1, e2), (et1, _) = _case_signs(case_id)
    tt = partner_torsion(kappa, tau, lam, mu, case_id, convention)
    D = 1.0 + e1 * e2 * lam * mu * np.asarray(kappa)
    if convention == "derived":
        sq = lam ** 2 * tau * tt
        return np.abs(D + sq - 1.0) if case_id == 3 else np.abs(D - sq - 1.0)
    if case_id == 3:
        return np.abs((1 - lam * mu * kappa) + lam ** 2 * mu * tau * tt - 1.0)
    return np.abs(D + lam ** 2 * mu * et1 * tau * tt - 1.0)


def torsion_sweep(kappa, tau, lams, mu, case_id, convention="stated", near=1e-3):
    """One row per lambda: tau~ extremes, closure residual, pole proximity."""
    (e1, e2), _ = _case_signs(case_id)
    rows = []
    for lam in lams:
        lam = float(lam)
        den = 1.0 + e1 * e2 * lam * mu * np.asarray(kappa)
        dmin = float(np.min(np.abs(den)))
        row = dict(lam=lam, min_den=dmin, degenerate=dmin < near or bool(np.ptp(np.sign(den))))
        try:
            tt = partner_torsion(kappa, tau, lam, mu, case_id, convention)
            row.update(tau_min=float(np.min(tt)), tau_max=float(np.max(tt)),
                       tau_absmax=float(np.max(np.abs(tt))),
                       closure=float(np.max(identity_closure(kappa, tau, lam, mu, case_id, convention))))
        except DegeneratePair:
            row.update(tau_min=np.nan, tau_max=np.nan, tau_absmax=np.inf, closure=np.nan, degenerate=True)
        rows.append(row)
    return rows
