import math

import numpy as np
import pytest

from lorentz_mannheim import curves, lorentz
from lorentz_mannheim.errors import (BadParams, NullVelocity, OutOfRange, SpecError,
                                     TooFewSamples, UnknownFamily)
from lorentz_mannheim.lorentz import CausalClass


def test_unknown_family_and_bad_params():
    with pytest.raises(UnknownFamily):
        curves.make_family("spiral", [1, 2])
    with pytest.raises(BadParams):
        curves.make_family("timelike_helix", [1.0])
    with pytest.raises(BadParams):
        curves.make_family("timelike_helix", [2.0, 1.0])  # needs b > a
    with pytest.raises(BadParams):
        curves.make_family("timelike_helix", {"a": 1.0, "c": 2.0})


def test_line_second_derivative_zero():
    c = curves.make_family("line", [1, 2, 3, 1, 0, 0])
    t = np.linspace(0, 1, 9)
    assert np.all(c.d2(t) == 0)


def test_timelike_helix_is_timelike():
    c = curves.make_family("timelike_helix", [1.0, 2.0])
    t = np.linspace(*c.domain, 100)
    assert all(k is CausalClass.TIMELIKE for k in lorentz.causal_character(c.d1(t)))


def test_spacelike_normal_oracle():
    c = curves.make_family("spacelike_helix_spacelike_normal", [2.0, 1.0])
    o = c.oracle(np.linspace(0, 1, 5))
    assert np.allclose(lorentz.minkowski_dot(o["N"], o["N"]), 1.0)


@pytest.mark.parametrize("name,params", [
    ("timelike_helix", [1.0, 2.0]),
    ("spacelike_helix_timelike_normal", [1.0, 1.0]),
    ("spacelike_helix_spacelike_normal", [2.0, 1.0]),
    ("planar_spacelike", [1.0, 0.5]),
    ("planar_timelike", [1.0, 0.5]),
])
def test_closed_form_derivatives_match_differences(name, params):
    c = curves.make_family(name, params)
    a, b = c.domain
    t = np.linspace(a + 0.1, b - 0.1, 11)
    h = 1e-4
    for lower, upper in ((c.position, c.d1), (c.d1, c.d2), (c.d2, c.d3)):
        fd = (lower(t + h) - lower(t - h)) / (2 * h)
        assert np.max(np.abs(fd - upper(t))) < 1e-6


def test_sampled_derivatives_polynomial():
    t = np.linspace(0, 2, 41)
    rows = np.column_stack([t, t, t ** 2, 0 * t])
    assert np.allclose(curves.sampled_derivatives(rows, 1.0, 1), [1, 2, 0], atol=1e-8)
    const = np.column_stack([t, 0 * t + 1, 0 * t + 2, 0 * t + 3])
    for k in (1, 2, 3):
        assert np.allclose(curves.sampled_derivatives(const, 1.0, k), 0, atol=1e-12)


def test_sampled_derivatives_trig():
    t = np.linspace(-1, 1, 81)
    rows = np.column_stack([t, np.sin(t), np.cos(t), t])
    assert np.allclose(curves.sampled_derivatives(rows, 0.0, 2), [0, -1, 0], atol=1e-6)


def test_sampled_nonuniform_and_errors():
    t = np.sort(np.random.default_rng(3).uniform(0, 2, 60))
    rows = np.column_stack([t, t, t ** 2, 0 * t])
    assert np.allclose(curves.sampled_derivatives(rows, 1.0, 1), [1, 2, 0], atol=1e-6)
    with pytest.raises(TooFewSamples):
        curves.SampledCurve(t[:5], rows[:5, 1:])
    with pytest.raises(SpecError):
        curves.SampledCurve(t[::-1], rows[:, 1:])
    with pytest.raises(OutOfRange):
        curves.sampled_derivatives(rows, 5.0, 1)


def test_arclength_line():
    c = curves.make_family("line", [0, 0, 0, 1, 0, 0], domain=(0, 2))
    assert curves.arclength_map(c).total == pytest.approx(2.0, abs=1e-12)


def test_arclength_helix_closed_form():
    a, b = 1.0, 2.0
    c = curves.make_family("timelike_helix", [a, b])
    T = c.domain[1]
    assert curves.arclength_map(c).total == pytest.approx(T * math.sqrt(b * b - a * a), rel=1e-12)


def test_arclength_round_trip():
    c = curves.make_family("spacelike_helix_timelike_normal", [1.0, 1.0])
    m = curves.arclength_map(c, tol=1e-10)
    t0 = np.random.default_rng(5).uniform(*c.domain, 50)
    assert np.max(np.abs(m.t_of_s(m.s_of_t(t0)) - t0)) < 10 * 1e-10


def test_null_curve_rejected():
    c = curves.make_family("line", [0, 0, 0, 1, 0, 1])
    with pytest.raises(NullVelocity):
        curves.arclength_map(c)


def test_partner_family_range_checks():
    with pytest.raises(BadParams):
        curves.MannheimPartner(6, 1.0, 0.5, 1.2)
    with pytest.raises(BadParams):
        curves.MannheimPartner(3, 1.0, 0.5, 1.6)  # tan argument reaches pi/2


def test_curve_from_spec_forms():
    c = curves.curve_from_spec({"family": "line", "params": [0, 0, 0, 1, 0, 0]})
    assert isinstance(c, curves.Line)
    t = np.linspace(0, 1, 10)
    s = curves.curve_from_spec({"samples": np.column_stack([t, t, 0 * t, 0 * t]).tolist()})
    assert isinstance(s, curves.SampledCurve)
    with pytest.raises(SpecError):
        curves.curve_from_spec({"params": []})
