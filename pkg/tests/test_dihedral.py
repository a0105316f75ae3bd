import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specdyn import checks, dihedral
from specdyn.cheb import BandError
from specdyn.dihedral import IndetLevel, Tag, TauSpecial
from specdyn.projgeom import IndeterminatePoint, normalize, orbit, proj_distance, random_points

rng = np.random.default_rng(11)


def test_F_examples():
    assert dihedral.F_dihedral((1, 0, 0, 0)) == (1, 0, 0, 0)
    assert dihedral.F_dihedral((1, 1, 3 + 1j, 3 + 1j)) == (0, 0, 0, 0)
    assert dihedral.F_dihedral((2, 1, 1, 0)) == (3, 2, 2, 1)
    # (2,1,0,0) maps to (3,0,0,0), the fixed point
    assert normalize(dihedral.F_dihedral((2, 1, 0, 0))).coords == (1, 0, 0, 0)


def test_tau_examples():
    assert dihedral.tau((1, 1, 1, 0)) == -0.5
    assert dihedral.tau((1, 1, 4, 4)) is TauSpecial.UNDEFINED_ON_E
    assert dihedral.tau((1, 0, 0, 0)) is TauSpecial.INFINITY


def test_classify_examples():
    v = dihedral.classify((1, 1, 1, 0))
    assert v.tag is Tag.SPECTRUM_BAND and v.tau == -0.5
    assert dihedral.classify((1, 1, 2j, 2j)).tag is Tag.EXTENDED_INDETERMINACY
    v = dihedral.classify((10, 1, 1, 0))
    assert v.tag is Tag.RESOLVENT and abs(v.tau - 49) < 1e-12
    assert dihedral.classify((1, 0, 0, 0)).tag is Tag.RESOLVENT


def test_indeterminacy_level():
    assert dihedral.indeterminacy_level((1, 1, 7, 7)) is IndetLevel.I1
    assert dihedral.indeterminacy_level((1, -1, 7, -7)) is IndetLevel.I1
    assert dihedral.indeterminacy_level((1, 7, 1, 7)) is IndetLevel.I2_ONLY
    assert dihedral.indeterminacy_level((1, 7, -1, -7)) is IndetLevel.I2_ONLY
    assert dihedral.indeterminacy_level((1, 0, 0, 0)) is IndetLevel.NOT_IN_E


@settings(max_examples=200)
@given(st.builds(complex, st.floats(-50, 50), st.floats(-50, 50)))
def test_E_families_agree_with_quadrics(zeta):
    for p in checks.dihedral_E_families(zeta):
        assert dihedral.in_E(p)
        assert dihedral.indeterminacy_level(p) is not IndetLevel.NOT_IN_E


def test_Fn_closed_examples():
    assert dihedral.Fn_closed((2, 1, 0, 0), 2).coords == (1, 0, 0, 0)
    for n in (2, 5, 9):
        assert dihedral.Fn_closed((1, 0, 0, 0), n).coords == (1, 0, 0, 0)
    z = tuple(random_points(rng, 1)[0])
    assert proj_distance(dihedral.Fn_closed(z, 4), orbit(dihedral.F_MAP, z, 4)[-1]) < 1e-8
    assert isinstance(dihedral.Fn_closed((1, 1, 2, 2), 3), IndeterminatePoint)
    assert proj_distance(dihedral.Fn_closed(z, 1), orbit(dihedral.F_MAP, z, 1)[-1]) < 1e-15
    assert isinstance(dihedral.Fn_closed((1, 1, 1, 1), 1), IndeterminatePoint)
    with pytest.raises(ValueError):
        dihedral.Fn_closed(z, 0)


def test_Fn_closed_deep_iterates_stay_finite():
    # T^k(tau) overflows double range long before n = 40; the closed form must not
    z = (1.3, 0.2, -0.7j, 0.4)
    p = dihedral.Fn_closed(z, 40)
    assert all(cmath.isfinite(c) for c in p.coords)


def _point_with_tau(t):
    # z = (1, 0, 0, z3) has tau = -(1 + z3^2) / (2 z3)
    return (1, 0, 0, -t + cmath.sqrt(t * t - 1))


def test_f_series_examples():
    z = _point_with_tau(2)
    assert abs(dihedral.f_partial(z, 0) - 1 / (2 * dihedral.tau(z))) < 1e-15
    assert abs(dihedral.f_partial(z, 30) - dihedral.f_limit(z)) < 1e-10
    assert abs(dihedral.f_limit(z) - (2 - math.sqrt(3))) < 1e-12
    assert abs(dihedral.f_limit(_point_with_tau(-2)) - (-2 + math.sqrt(3))) < 1e-12
    z = _point_with_tau(2j)
    assert abs(dihedral.f_partial(z, 60) - dihedral.f_limit(z)) < 1e-10
    w = 1.0
    z = _point_with_tau(math.cos(w))
    for n in (0, 3, 10):
        assert abs(dihedral.f_partial(z, n) - (math.cos(w) - math.sin(w) / math.tan(2 ** (n + 1) * w))) < 1e-9


def test_f_series_errors():
    with pytest.raises(BandError):
        dihedral.f_partial((1, 1, 1, 0), 3, strict=True)
    with pytest.raises(BandError):
        dihedral.f_limit((1, 1, 1, 0))
    with pytest.raises(BandError):
        dihedral.f_partial((1, 1, 2, 2), 3)
    assert dihedral.f_partial((1, 0, 0, 0), 5) == 0


def test_left_regular_symbol():
    assert dihedral.left_regular_symbol((1, 0, 0, 0), 0.7) == 1
    # vanishes where cos(theta) = tau = -1/2
    assert abs(dihedral.left_regular_symbol((1, 1, 1, 0), 2 * math.pi / 3)) < 1e-15
    thetas = np.linspace(0, math.pi, 1000)
    assert min(abs(dihedral.left_regular_symbol((10, 1, 1, 0), t)) for t in thetas) > 1


def test_symbol_min_locates_tau():
    for x in (-0.9, 0.0, 0.37, 1.0):
        z = checks.dihedral_band_point(rng, x)
        smin, theta = dihedral.symbol_min(z)
        assert smin < 1e-12 * max(abs(c) for c in z) ** 2
        assert abs(math.cos(theta) - x) < 1e-6


def test_classify_array_matches_scalar():
    pts = [tuple(z) for z in random_points(rng, 300)]
    pts += [checks.dihedral_band_point(rng, x) for x in rng.uniform(-1, 1, 100)]
    pts += [(1, 1, 3, 3), (1, 0, 0, 0)]
    z = np.array([normalize(p).coords for p in pts]).T
    codes, _, _, _ = dihedral.classify_array(z)
    assert [dihedral.classify(p).tag.code for p in pts] == codes.tolist()


@settings(max_examples=100)
@given(
    st.tuples(*[st.floats(-5, 5)] * 8).filter(lambda v: max(map(abs, v)) > 1e-3),
    st.builds(complex, st.floats(0.1, 10), st.floats(-10, 10)),
)
def test_projective_well_defined(v, lam):
    z = tuple(complex(v[2 * i], v[2 * i + 1]) for i in range(4))
    assert dihedral.classify(z).tag is dihedral.classify(tuple(lam * c for c in z)).tag
