import math

import numpy as np
import pytest

from lorentz_mannheim import curves, frenet, mannheim, report
from lorentz_mannheim.errors import (BadParams, DegeneratePair, DegenerateSpeed, DivisionDegenerate,
                                     ImaginarySpeed, NotMonotone, NotPlanar, PairingError,
                                     UnlistedConfiguration, ZeroTorsion)

from conftest import CASE_IDS, base_curve, built_pair


def test_classify_examples():
    assert mannheim.classify_case((-1, 1), (-1, 1)) == 1
    assert mannheim.classify_case((1, -1), (1, 1)) == 3
    with pytest.raises(UnlistedConfiguration):
        mannheim.classify_case((1, 1), (1, 1))


def test_classify_from_frenet_data():
    _, _, link, ps = built_pair(4)
    assert mannheim.classify_case(ps.g, ps.gt) == 4


def test_partner_torsion_examples():
    assert mannheim.partner_torsion(1.0, 1.0, 0.5, 1, 1) == pytest.approx(2.0)
    assert mannheim.partner_torsion(2.0, 1.0, 0.25, 1, 4) == pytest.approx(-1 / 1.5)
    for c in CASE_IDS:
        assert mannheim.partner_torsion(0.7, 0.0, 0.3, 1, c) == 0.0
    with pytest.raises(DegeneratePair):
        mannheim.partner_torsion(1.0, 1.0, 1.0, 1, 1)


@pytest.mark.parametrize("case", CASE_IDS)
def test_derived_convention_passes_everything(case):
    _, _, link, ps = built_pair(case)
    rep = report.pair_report(ps, link.lam, link.mu, case, convention="derived")
    failed = [v.name for v in rep.verdicts if not v.passed]
    assert not failed


@pytest.mark.parametrize("case", CASE_IDS)
def test_true_torsion_relation(case):
    _, _, link, ps = built_pair(case)
    pred = mannheim.partner_torsion(ps.g.kappa, ps.g.tau, link.lam, link.mu, case, "derived")
    assert np.max(np.abs(pred - ps.gt.tau) / np.abs(ps.gt.tau)) < 1e-8


@pytest.mark.parametrize("case", CASE_IDS)
def test_mu_and_signs(case):
    _, _, link, ps = built_pair(case)
    (e1, e2), (et1, et2) = mannheim.CASES[case]
    assert link.mu == et1  # lam > 0
    assert np.all(ps.g.eps1 == e1) and np.all(ps.g.eps2 == e2)
    assert np.all(ps.gt.eps1 == et1) and np.all(ps.gt.eps2 == et2)


def test_angle_varies_on_real_pairs():
    _, _, link, ps = built_pair(1)
    phi = mannheim.pair_angles(ps, 1)
    assert np.allclose(np.tanh(phi), link.lam * -1 * ps.gt.tau, atol=1e-9)
    assert np.ptp(phi) > 0.1


def test_negative_lambda_flips_identity_ii():
    gt = base_curve(1, lam=-1.0)
    g, link = mannheim.construct_partner_curve(gt, -1.0)
    ps = mannheim.sample_pair(g, link, 50)
    _, res = mannheim.check_lemma1_identities(ps, link.lam, link.mu, 1)
    assert max(np.max(res[k]) for k in ("res_i", "res_ii", "res_iii", "res_iv")) < 1e-6


def test_identity_iii_tiny_offset():
    kappa, tau, lam, mu = np.full(20, 0.8), np.full(20, 0.4), 1e-9, 1
    tt = mannheim.partner_torsion(kappa, tau, lam, mu, 1)
    phi = np.arcsinh(lam * -1 * tt)
    res = mannheim.lemma1_residuals(phi, kappa, tau, tt, lam, mu, 1)
    assert np.max(res["res_iii"]) < 1e-8
    assert np.max(np.abs(phi)) < 1e-8


def test_torsion_ratio_derived_invariant():
    for case in CASE_IDS:
        _, _, link, ps = built_pair(case)
        q = mannheim.remark1_quantity(ps.g.kappa, ps.g.tau, ps.gt.tau, case, "derived")
        (e1, e2), _ = mannheim.CASES[case]
        assert np.allclose(q, -e1 * e2 * link.lam * link.mu, atol=1e-8)
    with pytest.raises(DivisionDegenerate):
        mannheim.remark1_quantity([0.0], [1.0], [1.0], 1)


def test_construct_rejects():
    gt = base_curve(1)
    with pytest.raises(BadParams):
        mannheim.construct_partner_curve(gt, 0.0)
    with pytest.raises(PairingError):
        mannheim.construct_partner_curve(gt, 1.0, mu=1)
    plane = curves.make_family("planar_spacelike", [1.0])
    with pytest.raises(ZeroTorsion):
        mannheim.construct_partner_curve(plane, 0.3)


def test_imaginary_speed():
    c = curves.make_family("spacelike_helix_timelike_normal", [1.0, 1.0])
    m = curves.arclength_map(c)
    tau = frenet.frenet_apparatus(c, m, 0.3).tau
    with pytest.raises(ImaginarySpeed):
        mannheim.construct_partner_curve(c, 1.0 / abs(tau))


def test_helix_offset_is_not_fm():
    # a helix offset along its binormal keeps constant distance but N does not follow B~
    c = curves.make_family("timelike_helix", [1.0, 2.0])
    g, link = mannheim.construct_partner_curve(c, 0.3)
    ps = mannheim.sample_pair(g, link, 50)
    d = mannheim.minkowski_distance(ps.alpha, ps.beta)
    assert np.std(d) < 1e-8
    assert np.max(np.linalg.norm(ps.g.N - link.mu * ps.gt.B, axis=-1)) > 1e-2


def test_planar_conjugate_degenerate_speed():
    g = curves.make_family("planar_spacelike", [1.0, 0.5])
    fd0 = frenet.frenet_apparatus(g, curves.arclength_map(g), 0.5)
    lam = -fd0.eps1 * fd0.eps2 / fd0.kappa
    with pytest.raises(DegenerateSpeed):
        mannheim.construct_planar_conjugate(g, lam, 1)
    with pytest.raises(NotPlanar):
        mannheim.construct_planar_conjugate(curves.make_family("timelike_helix", [1.0, 2.0]), 0.1, 1)


def test_planar_timelike_conjugate():
    g = curves.make_family("planar_timelike", [1.0, 0.5])
    conj = mannheim.construct_planar_conjugate(g, 0.2, -1)
    tau, par, plane = mannheim.check_planar_conjugate(g, conj, 100)
    assert max(tau.max(), par.max(), plane.max()) < 1e-8


def test_helix_line_indeterminate_and_negative():
    g = curves.make_family("timelike_helix", [1.0, 2.0])
    t = np.linspace(0, 1, 20)
    line = curves.make_family("line", [0, 0, 0, 0, 1, 0])
    r = mannheim.check_remark2(g, line, t, t)
    assert r.rhs and not r.lhs  # helix and a line, but not its axis
    x_line = curves.make_family("line", [0, 0, 0, 1, 0, 0])
    r0 = mannheim.check_remark2(x_line, line, t, t)
    assert r0.verdict == "indeterminate" and r0.lhs is None


def test_wm_identical_curves_and_monotone():
    c = curves.make_family("timelike_helix", [1.0, 2.0])
    s = np.linspace(0, 5, 50)
    wm = mannheim.wm_validate(c, c, s, s)
    assert wm.Z == [] and wm.N == [] and np.max(wm.res_orth_g) == 0
    with pytest.raises(NotMonotone):
        mannheim.wm_validate(c, c, s, s[::-1])
    stall = s.copy()
    stall[10] = stall[9]
    with pytest.raises(NotMonotone):
        mannheim.check_monotone(stall, stall)


def test_wm_n_set():
    c = curves.make_family("timelike_helix", [1.0, 2.0])
    s_star = np.linspace(0, 8, 201)
    s = np.where(s_star < 2, s_star, np.where(s_star <= 3, 2.0, s_star - 1))
    wm = mannheim.wm_validate(c, c, s, s_star)
    assert wm.Z == [] and len(wm.N) == 1 and wm.n_interior


def test_sweep_rows():
    kappa = np.full(10, 1.0)
    tau = np.full(10, 1.4)
    rows = mannheim.torsion_sweep(kappa, tau, [0.2, 1.0, 1.5], 1, 1)
    assert rows[1]["degenerate"] and math.isinf(rows[1]["tau_absmax"])
    assert not rows[0]["degenerate"]
    assert rows[0]["tau_absmax"] == pytest.approx(1.4 / 0.8)


def test_derived_closure_on_real_pair():
    for case in CASE_IDS:
        _, _, link, ps = built_pair(case)
        c = mannheim.identity_closure(ps.g.kappa, ps.g.tau, link.lam, link.mu, case, "derived")
        assert np.max(c) < 1e-8
