import functools

import numpy as np
import pytest

from lorentz_mannheim import curves, lorentz, mannheim

CASE_IDS = [1, 2, 3, 4, 5]
LAM = 1.0
KAPPA = 0.5


def base_curve(case, lam=LAM):
    # coth cases start further from the pole to keep the frame boosts moderate
    c = 2.0 if case in (2, 5) else 1.2
    return curves.MannheimPartner(case, lam, KAPPA, c)


@functools.lru_cache(maxsize=None)
def built_pair(case, lam=LAM, n=200):
    gt = base_curve(case, lam)
    g, link = mannheim.construct_partner_curve(gt, lam)
    ps = mannheim.sample_pair(g, link, n)
    return gt, g, link, ps


@pytest.fixture(autouse=True)
def _reset_signature():
    yield
    lorentz.set_signature("ppm")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
