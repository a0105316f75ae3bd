import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specdyn import dihedral
from specdyn.projgeom import (
    IndeterminatePoint,
    PencilPoint,
    ProjPoint,
    ZeroVector,
    apply_homog,
    iterate_lift_scaled,
    normalize,
    normalize_array,
    orbit,
    proj_distance,
    proj_equal,
    random_points,
)

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
cplx = st.builds(complex, finite, finite)
vec = st.tuples(cplx, cplx, cplx, cplx).filter(lambda v: max(abs(x) for x in v) > 1e-6)
# nonzero scalar with modulus in [1e-3, 1e3], built directly instead of filtered
scalar = st.builds(
    lambda e, a: 10.0**e * complex(math.cos(a), math.sin(a)),
    st.floats(-3, 3),
    st.floats(0, 2 * math.pi),
)


def test_normalize_examples():
    p = normalize((2, 0, 0, 0))
    assert p.coords == (1, 0, 0, 0) and p.chart == 0
    assert isinstance(normalize((0, 0, 0, 0)), ZeroVector)
    p = normalize((1 + 1j, 1 - 1j, 0, 0))
    assert p.chart == 0
    assert abs(p.coords[1] - (1 - 1j) / (1 + 1j)) < 1e-15


def test_pencil_point_rejects_nonfinite():
    with pytest.raises(ValueError):
        PencilPoint(1, math.nan, 0, 0)
    assert tuple(PencilPoint.from_reals([1, 2, 3, 4, 5, 6, 7, 8])) == (1 + 2j, 3 + 4j, 5 + 6j, 7 + 8j)


@given(vec)
def test_normalize_invariants(v):
    p = normalize(v)
    assert p.coords[p.chart] == 1
    assert all(abs(c) <= 1 + 1e-12 for c in p.coords)
    mods = [abs(x) for x in v]
    assert p.chart == mods.index(max(mods)) or math.isclose(mods[p.chart], max(mods), rel_tol=1e-15)
    assert normalize(p) == p  # idempotent, exactly


@given(vec, scalar)
def test_scaling_invariance(v, lam):
    a, b = normalize(v), normalize(tuple(lam * x for x in v))
    if a.chart == b.chart:
        assert max(abs(x - y) for x, y in zip(a.coords, b.coords)) < 1e-12
    else:
        # near-tie in modulus: charts may differ but the points agree
        assert proj_distance(a, b) < 1e-12


def test_distance_examples():
    p = normalize((1, 2j, 3, 4))
    assert proj_distance(p, p) == 0
    assert proj_distance((1, 0, 0, 0), (0, 1, 0, 0)) == 1
    assert abs(proj_distance((1, 0, 0, 0), (1, 1, 0, 0)) - 1 / math.sqrt(2)) < 1e-15
    assert proj_equal((1, 2, 3, 4), (2, 4, 6, 8))


@settings(max_examples=200)
@given(vec, vec, vec)
def test_triangle_inequality(p, q, r):
    assert proj_distance(p, r) <= proj_distance(p, q) + proj_distance(q, r) + 1e-10


def test_apply_homog_matches_lift():
    rng = np.random.default_rng(3)
    for v in random_points(rng, 10_000):
        a = apply_homog(dihedral.F_MAP, normalize(v))
        b = normalize(dihedral.F_dihedral(v))
        assert proj_distance(a, b) < 1e-10


def test_apply_homog_examples():
    assert apply_homog(dihedral.F_MAP, (1, 0, 0, 0)).coords == (1, 0, 0, 0)
    assert isinstance(apply_homog(dihedral.F_MAP, (1, 1, 5, 5)), IndeterminatePoint)
    # F(2,1,0,0) = (3,0,0,0)
    assert apply_homog(dihedral.F_MAP, (2, 1, 0, 0)).coords == (1, 0, 0, 0)


def test_orbit():
    assert orbit(dihedral.F_MAP, (1, 2, 3, 4), 0) == []
    assert orbit(dihedral.F_MAP, (1, 0, 0, 0), 3) == [normalize((1, 0, 0, 0))] * 3
    o = orbit(dihedral.F_MAP, (1, 1, 5, 5), 3)
    assert [p.step for p in o] == [1, 2, 3] and o[0].preimage is not None
    # I2 point: the second step vanishes
    o = orbit(dihedral.F_MAP, (1, 7, 1, 7), 3)
    assert isinstance(o[0], ProjPoint) and isinstance(o[1], IndeterminatePoint)


def test_normalize_array_matches_scalar():
    rng = np.random.default_rng(0)
    z = random_points(rng, 50).T
    arr = normalize_array(z)
    for k in range(50):
        assert np.allclose(arr[:, k], normalize(z[:, k]).as_array(), rtol=0, atol=1e-15)
    assert np.all(np.isnan(normalize_array(np.zeros((4, 2), complex))))


def test_iterate_lift_scaled():
    rng = np.random.default_rng(1)
    z = tuple(random_points(rng, 1)[0])
    v, ls = iterate_lift_scaled(dihedral.F_dihedral, z, 4)
    ref = z
    for _ in range(4):
        ref = dihedral.F_dihedral(ref)
    got = np.array(v) * math.exp(ls)
    assert np.allclose(got, ref, rtol=1e-12)
