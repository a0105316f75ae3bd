import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specdyn import cheb, checks, lamplighter, selfsim
from specdyn.cheb import BandError
from specdyn.lamplighter import PoleFlag, Tag
from specdyn.plane import PlaneSpec
from specdyn.projgeom import normalize, proj_distance, random_points

rng = np.random.default_rng(5)
W = (1, 3, 0, -2)  # in L, outside E


def test_F_examples():
    assert lamplighter.F_lamp((1, 0, 0, 0)) == (1, 0, 0, 0)
    assert lamplighter.F_lamp((1, 1, 1, 1)) == (-2, 2, 0, 0)
    assert lamplighter.F_lamp((2, 1, 1, 1)) == (1, 2, 1, 1)


def test_Q_examples():
    assert lamplighter.Q_lamp((2, 1, 1, 1)) == normalize((1, 2, 1, 1))
    assert isinstance(lamplighter.Q_lamp((1, 1, 1, 1)), PoleFlag)
    z = (1 + 1j, 0.5, 0, 3)
    assert proj_distance(lamplighter.Q_lamp(z), (1.5 + 1j, 0, 0, 3)) < 1e-15


def test_Qn_delta_examples():
    z = (1 - 2j, 0.5, 0.3, 0.7)
    assert lamplighter.Qn_delta(z, 0) == normalize(z)
    assert lamplighter.Qn_delta((2, 1, 1, 1), 1) == normalize((1, 2, 1, 1))
    z = (1 + 1j, 0.5, 0, 3)
    for n in (1, 4, 9):
        assert proj_distance(lamplighter.Qn_delta(z, n), (1.5 + 1j, 0, 0, 3)) < 1e-15
    # G_1 = 0 here, so the second step hits the pole
    assert lamplighter.Qn_delta((2, 1, 1, 0.75), 2) == PoleFlag(1)
    with pytest.raises(ValueError):
        lamplighter.Qn_delta(z, -1)


def test_gamma_residual_examples():
    assert lamplighter.gamma_residual((1, 1, 5, 7), 0) == 0
    assert lamplighter.gamma_residual((2, 1, 1, 0.75), 1) == 0
    assert min(lamplighter.gamma_residuals(W, 50)) > 0.5
    with pytest.raises(ValueError):
        lamplighter.gamma_residual(W, -1)


def test_classify_examples():
    assert lamplighter.classify_E((3, 1, 1, 1)).tag is Tag.CRITICAL_VARIETY
    v = lamplighter.classify_E((1, 1, 1, 1))
    assert v.tag is Tag.BAND and v.tau2 == 0.25
    v = lamplighter.classify_E(W)
    assert v.tag is Tag.NOT_DETECTED and v.residual > 0.5
    assert lamplighter.classify_lower(W).tag is Tag.HYPERPLANE_L
    # G_1 = 4 * 0.2 - 4 * 0.2 = 0 with tau^2 = 5, off the band
    v = lamplighter.classify_E((2.1, 1.9, 1, 0.2))
    assert v.tag is Tag.GAMMA_CURVE and v.index == 1
    assert lamplighter.classify_E((2, 1, 1, 0.75)).tag is Tag.BAND  # on Gamma_1 too, band is tested first
    # degenerate band edge: z2 z3 = 0 needs z0 + z1 = 0
    assert lamplighter.classify_E((1, -1, 0, 1)).tag is Tag.BAND
    assert lamplighter.classify_E((1, 2, 0, 1)).tag is Tag.NOT_DETECTED
    with pytest.raises(ValueError):
        lamplighter.classify_E(W, 0)


def test_hyperplane_L():
    assert lamplighter.in_hyperplane_L(W)
    assert not lamplighter.in_hyperplane_L((1, 0, 0, 0))
    assert lamplighter.in_hyperplane_L((0, 0, 1, -1))


def test_ratio_limit_examples():
    assert lamplighter.ratio_limit_lamp((2, 1, 0, 5)) == 3
    with pytest.raises(BandError):
        lamplighter.ratio_limit_lamp((3, 1, 1, 1))
    z = (5, 1, 1, 1)
    assert abs(lamplighter.ratio_limit_lamp(z) - (3 + math.sqrt(5))) < 1e-14
    g = (cheb.G(201, z) / cheb.G(200, z)).value()
    assert abs(g - (3 + math.sqrt(5))) < 1e-8


def test_lower_member_examples():
    assert lamplighter.spectrum_lower_member(W)
    assert lamplighter.spectrum_lower_member((1, 1, 1, 1))
    assert not lamplighter.spectrum_lower_member((10, 0, 1, 1))


def test_lift_exponent_law_by_brute_force():
    name, res = checks.determine_exponent_law(rng)
    assert name == "2^(n-1-i)"
    assert res["2^(n-i)"] > 1e-3 > 1e-12 > res["2^(n-1-i)"]
    assert lamplighter.lift_exponents(3) == [4, 2, 1]
    for z in random_points(rng, 20):
        for n in range(1, 7):
            assert checks.lift_law_residual(tuple(z), n, lambda i, n: lamplighter.lift_exponents(n)[i]) < 1e-10


@pytest.mark.parametrize("n", range(6))
def test_constructed_gamma_points(n):
    for _ in range(20):
        v = lamplighter.classify_E(checks.lamp_gamma_point(rng, n))
        assert v.tag is Tag.GAMMA_CURVE and v.index == n


def test_constructed_components():
    for _ in range(50):
        assert lamplighter.classify_E(checks.lamp_critical_point(rng)).tag is Tag.CRITICAL_VARIETY
        assert lamplighter.classify_E(checks.lamp_band_point(rng, rng.uniform())).tag is Tag.BAND


@settings(max_examples=100, deadline=None)
@given(
    st.tuples(*[st.floats(-5, 5)] * 8).filter(lambda v: max(map(abs, v)) > 1e-3),
    st.builds(complex, st.floats(0.1, 10), st.floats(-10, 10)),
)
def test_projective_well_defined(v, lam):
    z = tuple(complex(v[2 * i], v[2 * i + 1]) for i in range(4))
    a = lamplighter.classify_E(z, 50)
    b = lamplighter.classify_E(tuple(lam * c for c in z), 50)
    assert (a.tag, a.index) == (b.tag, b.index)


def test_Q_matches_F_projectivization():
    for z in random_points(rng, 200):
        f = np.array(lamplighter.F_lamp(z))
        q = np.array(lamplighter.Q_lift(z, 1))
        assert np.allclose(f, (z[0] - z[1]) * q, rtol=1e-12, atol=1e-12 * np.max(np.abs(f)))


def test_explore_rows_and_csv(tmp_path):
    plane = PlaneSpec(W, (1, 0, 0, 0), (0, 1, 0, 0), (-0.5, 0.5), (-0.5, 0.5), (3, 3))
    rows = lamplighter.explore_conjecture(plane, 6)
    assert len(rows) == 9
    centre = rows[4]
    assert centre["s"] == 0 and centre["t"] == 0
    assert centre["lower_member"] and centre["sigma_min"] < 1e-10
    out = tmp_path / "x.csv"
    with open(out, "w", newline="") as fh:
        lamplighter.write_exploration_csv(rows, fh)
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(lamplighter.EXPLORE_HEADER) and len(lines) == 10
    with pytest.raises(selfsim.LevelTooLarge):
        lamplighter.explore_conjecture(plane, 13)


def test_sigma_resolvent_plane_bounded_below():
    # far from every component the pencil stays uniformly invertible
    for n in (2, 4, 6):
        assert lamplighter.pencil_sigma_min((10, 0, 0.1, 0.1), n) > 0.5
