import numpy as np
import pytest

from lorentz_mannheim import curves, frenet, lorentz
from lorentz_mannheim.errors import ZeroCurvature


def _apparatus(name, params, n=50):
    c = curves.make_family(name, params)
    m = curves.arclength_map(c)
    s = np.linspace(0, m.total, n)
    return c, m, s, frenet.frenet_apparatus(c, m, s)


def test_helix_constants():
    a, b = 1.0, 2.0
    _, _, _, fd = _apparatus("timelike_helix", [a, b])
    assert np.allclose(fd.kappa, a / (b * b - a * a), rtol=1e-6)
    assert np.ptp(fd.tau) < 1e-6
    assert np.all(fd.eps1 == -1) and np.all(fd.eps2 == 1)


@pytest.mark.parametrize("name", ["planar_spacelike", "planar_timelike"])
def test_planar_zero_torsion(name):
    _, _, _, fd = _apparatus(name, [1.0, 0.5])
    assert np.max(np.abs(fd.tau)) < 1e-8


def test_line_has_no_frame():
    c = curves.make_family("line", [0, 0, 0, 1, 0, 0])
    m = curves.arclength_map(c)
    with pytest.raises(ZeroCurvature):
        frenet.frenet_apparatus(c, m, 0.5)


@pytest.mark.parametrize("name,params", [
    ("timelike_helix", [1.0, 2.0]),
    ("spacelike_helix_timelike_normal", [1.0, 1.0]),
    ("spacelike_helix_spacelike_normal", [2.0, 1.0]),
])
def test_frame_orthonormal(name, params):
    _, _, _, fd = _apparatus(name, params)
    d = lorentz.minkowski_dot
    assert np.allclose(d(fd.T, fd.T), fd.eps1)
    assert np.allclose(d(fd.N, fd.N), fd.eps2)
    assert np.allclose(d(fd.B, fd.B), -fd.eps1 * fd.eps2)
    for u, v in ((fd.T, fd.N), (fd.T, fd.B), (fd.N, fd.B)):
        assert np.max(np.abs(d(u, v))) < 1e-12


def test_scalar_and_vector_agree():
    c, m, s, fd = _apparatus("timelike_helix", [1.0, 2.0], n=5)
    one = frenet.frenet_apparatus(c, m, s[2])
    assert one.kappa == pytest.approx(fd.kappa[2]) and np.allclose(one.B, fd.B[2])
    assert len(frenet.frenet_residual(c, m, s[2])) == 3


def test_signature_independent_invariants():
    out = []
    for sig in ("ppm", "mpp"):
        lorentz.set_signature(sig)
        _, _, _, fd = _apparatus("spacelike_helix_timelike_normal", [1.0, 1.0], n=10)
        out.append((fd.kappa, fd.tau, fd.eps1, fd.eps2))
    for x, y in zip(*out):
        assert np.allclose(x, y, rtol=1e-10)


def test_sampled_residual_converges():
    # helix sampled on a grid: halving the spacing shrinks the residual at least 8x
    c = curves.make_family("timelike_helix", [1.0, 2.0])
    res = []
    for h in (0.1, 0.05):
        t = np.arange(-1.0, 7.3 + h / 2, h)
        sc = curves.SampledCurve(t, c.position(t))
        m = curves.arclength_map(sc, domain=(0.0, 6.0))
        s = np.linspace(0.2 * m.total, 0.8 * m.total, 50)
        res.append(np.max(frenet.frenet_residual(sc, m, s, h=1e-3 * m.total)))
    print(f"sampled residuals h=0.1: {res[0]:.2e}  h=0.05: {res[1]:.2e}")
    assert res[0] / res[1] >= 8


def test_intrinsic_curve_frame_matches():
    gt = curves.MannheimPartner(1, 1.0, 0.5, 1.2)
    u = np.linspace(0.1, 1.9, 20)
    fd = frenet.frenet_at_param(gt, u)
    T, N, B = gt.frame(u)
    assert np.allclose(fd.T, T, atol=1e-9) and np.allclose(fd.N, N, atol=1e-9)
    assert np.allclose(fd.kappa, 0.5, rtol=1e-9)
    assert np.allclose(fd.tau, gt.tau_jet(u)[0], rtol=1e-8)
