"""Randomized verification suites.

Every check draws from its own PCG64 stream derived from ``(seed, check
index)``, so adding or reordering suites never perturbs another check.
Oracles are independent of the code under test wherever possible: mpmath
at high precision, trigonometric closed forms, brute force, or a grid
search over the left-regular symbol.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from typing import Callable

import mpmath
import numpy as np

from . import cheb, dihedral, lamplighter, selfsim
from .cheb import ScaledValue
from .projgeom import (
    IndeterminatePoint,
    ProjPoint,
    iterate_lift_scaled,
    normalize,
    orbit,
    proj_distance,
    random_points,
)

SUITES = ("chebyshev", "dihedral", "lamplighter", "selfsim")


@dataclass
class CheckResult:
    name: str
    samples: int
    worst: float
    tol: float
    passed: bool
    seconds: float = 0.0
    note: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.note})" if self.note else ""
        return f"{mark}  {self.name:<34} n={self.samples:<6} worst={self.worst:.3e} tol={self.tol:.1e} [{self.seconds:.2f}s]{extra}"


def _result(name, samples, worst, tol, note="", passed=None) -> CheckResult:
    worst = float(worst)
    ok = (worst < tol) if passed is None else passed
    return CheckResult(name, samples, worst, tol, bool(ok), note=note)


def _cz(rng: np.random.Generator, size=None):
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


# ---------------------------------------------------------------- point builders


def dihedral_band_point(rng: np.random.Generator, x: float) -> tuple[complex, ...]:
    """Random z whose symbol vanishes at cos(theta) = x, i.e. tau(z) = x.

    Solves ``z3^2 + 2 x z0 z3 + (z0^2 - z1^2 - z2^2 - 2 x z1 z2) = 0`` for z3.
    """
    z0, z1, z2 = (complex(v) for v in _cz(rng, 3))
    c = z0 * z0 - z1 * z1 - z2 * z2 - 2 * x * z1 * z2
    z3 = -x * z0 + cmath.sqrt(x * x * z0 * z0 - c)
    return (z0, z1, z2, z3)


def dihedral_E_families(zeta: complex) -> list[tuple[complex, ...]]:
    return [(1, 1, zeta, zeta), (1, -1, zeta, -zeta), (1, zeta, 1, zeta), (1, zeta, -1, -zeta)]


# the four families at zeta = infinity
DIHEDRAL_E_INFINITY = [(0, 0, 1, 1), (0, 0, 1, -1), (0, 1, 0, 1), (0, 1, 0, -1)]


def lamp_critical_point(rng) -> tuple[complex, ...]:
    z1, z2, z3 = (complex(v) for v in _cz(rng, 3))
    return (z1 + 2 * z2 * z3 / z1, z1, z2, z3)


def lamp_band_point(rng, x: float) -> tuple[complex, ...]:
    z1, z2, z3 = (complex(v) for v in _cz(rng, 3))
    s = cmath.sqrt(16 * x * z2 * z3)
    return (s - z1, z1, z2, z3)


def lamp_gamma_point(rng, n: int) -> tuple[complex, ...]:
    """A point with G_n = 0: ``z0 - z1 = y P_{n-1}(s, y) / P_n(s, y)``."""
    s, z2, z3 = (complex(v) for v in _cz(rng, 3))
    y = 4 * z2 * z3
    d0 = 0j if n == 0 else y * (cheb.P(n - 1, s, y) / cheb.P(n, s, y)).value()
    return ((s + d0) / 2, (s - d0) / 2, z2, z3)


# ---------------------------------------------------------------- determinant chain

GROUP_DATA = {
    "dihedral": (selfsim.DIHEDRAL, selfsim.DIHEDRAL_TEMPLATE, dihedral.F_dihedral),
    "lamplighter": (selfsim.LAMPLIGHTER, selfsim.LAMPLIGHTER_TEMPLATE, lamplighter.F_lamp),
}


@dataclass(frozen=True)
class DetChain:
    level: int
    high: ScaledValue | selfsim.SingularFlag  # level n+1 at z
    low: ScaledValue | selfsim.SingularFlag  # level n at F(z)
    scalar: ScaledValue  # level 0 at F^{n+1}(z)
    dev_low: float
    dev_scalar: float

    def agrees(self, tol: float) -> bool:
        sing = isinstance(self.high, selfsim.SingularFlag)
        if sing:
            return isinstance(self.low, selfsim.SingularFlag)
        return self.dev_low < tol and self.dev_scalar < tol


def det_chain(group: str, z, n: int) -> DetChain:
    """Level-(n+1) determinant at z, level-n at F(z), and the level-0 scalar at F^(n+1)(z)."""
    spec, template, fmap = GROUP_DATA[group]
    rep = selfsim.verify_det_recursion(spec, template, fmap, z, n)
    v, ls = iterate_lift_scaled(fmap, z, n + 1)
    sc = ScaledValue.make(selfsim.level0_scalar(template, v), 0.0)
    scalar = sc if sc.is_zero else ScaledValue.make(sc.mantissa, sc.log_scale + ls)
    if scalar.is_zero:
        # an exactly vanishing scalar is the level-0 form of a singular pencil
        dev = 0.0 if isinstance(rep.high, selfsim.SingularFlag) else math.inf
    else:
        dev = selfsim.compare_dets(rep.high, scalar).deviation
    return DetChain(n, rep.high, rep.low, scalar, rep.deviation, dev)


def _det_recursion_check(group: str, rng, samples: int, levels=range(1, 6), tol: float = 1e-6) -> CheckResult:
    worst = 0.0
    pts = random_points(rng, samples)
    for z in pts:
        for n in levels:
            c = det_chain(group, tuple(z), n)
            worst = max(worst, c.dev_low, c.dev_scalar)
    return _result(f"{group}.det_recursion", samples * len(levels), worst, tol)


# ---------------------------------------------------------------- chebyshev suite


def check_U_sum(rng, samples):
    """Recurrence P against the factorial sum evaluated in mpmath."""
    worst = 0.0
    with mpmath.workdps(60):
        for _ in range(samples):
            x, y = (complex(v) for v in _cz(rng, 2))
            mx, my = mpmath.mpc(x), mpmath.mpc(y)
            for n in (0, 1, 2, 7, 20, 40):
                ref = mpmath.fsum(
                    (-1) ** k * mpmath.binomial(n - k, k) * mx ** (n - 2 * k) * my**k for k in range(n // 2 + 1)
                )
                got = cheb.P(n, x, y).value()
                worst = max(worst, float(abs(got - ref) / max(abs(ref), mpmath.mpf(1e-300))))
    return _result("chebyshev.recurrence_vs_sum", samples, worst, 1e-8)


def check_U_trig(rng, samples):
    worst = 0.0
    for th in rng.uniform(0.01, math.pi - 0.01, samples):
        x = math.cos(th)
        for n in range(51):
            ref = math.sin((n + 1) * th) / math.sin(th)
            worst = max(worst, abs(cheb.U(n, x) - ref) / (n + 1))
    return _result("chebyshev.trig_form", samples, worst, 1e-9)


def check_U_endpoints(rng, samples):
    bad = sum(cheb.U(n, 1) != n + 1 or cheb.U(n, -1) != (-1) ** n * (n + 1) for n in range(51))
    return _result("chebyshev.endpoints", 51, bad, 0.5)


def check_interlacing(rng, samples):
    worst = 0.0
    ok = True
    for n in range(1, 51):
        a, b = cheb.U_zeros(n), cheb.U_zeros(n + 1)
        ok &= all(x < y for x, y in zip(a, a[1:]))
        # exactly one zero of U_n strictly between consecutive zeros of U_{n+1}
        ok &= all(sum(lo < x < hi for x in a) == 1 for lo, hi in zip(b, b[1:]))
        for x in a:
            worst = max(worst, abs(cheb.U(n, x)) / (n + 1) ** 2)
    return _result("chebyshev.zero_interlacing", 50, worst, 1e-12, passed=ok and worst < 1e-12)


def check_ratio_limit(rng, samples):
    worst = 0.0
    got = 0
    while got < samples:
        x = complex(2 * _cz(rng))
        if cheb.band_distance(x) <= 0.1:
            continue
        got += 1
        r = (cheb.P(200, 2 * x, 1) / cheb.P(201, 2 * x, 1)).value()
        worst = max(worst, abs(r - cheb.ratio_limit(x)))
    return _result("chebyshev.ratio_limit_n200", samples, worst, 1e-8)


def check_alpha_beta(rng, samples):
    worst = 0.0
    for _ in range(samples):
        a, b = (complex(v) for v in _cz(rng, 2))
        ma, mb = mpmath.mpc(a), mpmath.mpc(b)
        with mpmath.workdps(40):
            for n in range(31):
                ref = (ma ** (n + 1) - mb ** (n + 1)) / (ma - mb)
                got = cheb.P(n, a + b, a * b).value()
                worst = max(worst, float(abs(got - ref) / abs(ref)))
    return _result("chebyshev.alpha_beta_identity", samples, worst, 1e-8)


def check_G_closed(rng, samples):
    """Recurrence G against the square-root closed form with the principal branch."""
    worst = 0.0
    for z in random_points(rng, samples):
        r = cmath.sqrt(4 * z[2] * z[3])
        t = (z[0] + z[1]) / (2 * r)
        u_prev, u = 0j, 1 + 0j  # U_{k-1}, U_k
        for k in range(41):
            ref = (z[0] - z[1]) * r**k * u - r ** (k + 1) * u_prev
            got = cheb.G(k, z).value()
            worst = max(worst, abs(got - ref) / max(abs(got), abs(ref)))
            u_prev, u = u, 2 * t * u - u_prev
    return _result("lamplighter.G_closed_form", samples, worst, 1e-8)


# ---------------------------------------------------------------- dihedral suite


def check_semiconjugacy(rng, samples):
    worst = 0.0
    used = 0
    for z in random_points(rng, samples):
        t = dihedral.tau(z)
        if not isinstance(t, complex):
            continue
        t1 = dihedral.tau(dihedral.F_dihedral(z))
        if not isinstance(t1, complex):
            continue
        used += 1
        want = cheb.T_iter(t, 1)
        worst = max(worst, abs(t1 - want) / (1 + abs(want)))
    return _result("dihedral.semiconjugacy", used, worst, 1e-9)


def check_quadric_identities(rng, samples):
    worst = 0.0
    for z in random_points(rng, samples):
        p = normalize(z)
        z0, z1, z2, z3 = p.coords
        w0, w1, w2, w3 = dihedral.F_dihedral(p)
        D = z1 * z2 - z0 * z3
        s = z0**2 - z1**2 + z3**2 - z2**2
        pairs = [
            (w0**2 - w1**2, (z0**2 - z1**2) * s - D**2),
            (w3**2 - w2**2, (z3**2 - z2**2) * s - D**2),
            (w0**2 - w1**2 + w3**2 - w2**2, s**2 - 2 * D**2),
            (w0 * w2 - w1 * w3, (z0 * z2 - z1 * z3) * s),
            (w1 * w2 - w0 * w3, D**2),
        ]
        for a, b in pairs:
            worst = max(worst, abs(a - b) / max(abs(a), abs(b), 1.0))
    return _result("dihedral.quadric_identities", samples, worst, 1e-10)


def check_E_structure(rng, samples):
    """The four zeta-families are E, F^2 kills their lifts, generic points are not in E."""
    worst = 0.0
    bad = 0
    zetas = [complex(v) for v in _cz(rng, samples)]
    pts = [p for zeta in zetas for p in dihedral_E_families(zeta)] + DIHEDRAL_E_INFINITY
    for p in pts:
        if dihedral.classify(p).tag is not dihedral.Tag.EXTENDED_INDETERMINACY:
            bad += 1
        if dihedral.indeterminacy_level(p) is dihedral.IndetLevel.NOT_IN_E:
            bad += 1
        w = dihedral.F_dihedral(dihedral.F_dihedral(p))
        scale = max(abs(complex(c)) for c in p) ** 4
        worst = max(worst, max(abs(c) for c in w) / scale)
    for z in random_points(rng, 10 * samples):
        if dihedral.indeterminacy_level(z) is not dihedral.IndetLevel.NOT_IN_E:
            bad += 1
        if dihedral.classify(z).tag is dihedral.Tag.EXTENDED_INDETERMINACY:
            bad += 1
    note = f"{bad} misclassified" if bad else ""
    return _result("dihedral.E_structure", len(pts) + 10 * samples, worst, 1e-20, note, passed=(bad == 0 and worst < 1e-20))


def classifier_oracle_agrees(z, margin_band: float = 1e-6) -> tuple[bool, float]:
    """Compare classify with the symbol grid search; returns (agree or excused, margin)."""
    v = dihedral.classify(z)
    c = normalize(z).coords
    z0, z1, z2, z3 = c
    num = z0 * z0 + z3 * z3 - z1 * z1 - z2 * z2
    e = z0 * z3 - z1 * z2
    smin, _ = dihedral.symbol_min(c)
    oracle_band = smin < 1e-7 * (abs(num) + 2 * abs(e))
    is_band = v.tag is dihedral.Tag.SPECTRUM_BAND
    if v.tag is dihedral.Tag.EXTENDED_INDETERMINACY:
        return oracle_band, 0.0
    return (is_band == oracle_band) or v.margin < margin_band, v.margin


def check_classifier_oracle(rng, samples):
    pts = [tuple(z) for z in random_points(rng, samples)]
    pts += [dihedral_band_point(rng, x) for x in rng.uniform(-1, 1, samples)]
    bad = sum(not classifier_oracle_agrees(z)[0] for z in pts)
    band = sum(dihedral.classify(z).tag is dihedral.Tag.SPECTRUM_BAND for z in pts[samples:])
    note = f"{bad} disagreements; {band}/{samples} constructed points on the band"
    return _result("dihedral.classifier_vs_symbol", len(pts), bad, 0.5, note, passed=(bad == 0 and band == samples))


def check_Fn_closed(rng, samples):
    worst = 0.0
    n_deg = max(1, samples // 10)
    pts = [tuple(z) for z in random_points(rng, max(1, samples - n_deg))]
    for _ in range(n_deg):
        z0, z1, z2 = (complex(v) for v in _cz(rng, 3))
        pts.append((z0, z1, z2, z1 * z2 / z0))  # z1 z2 - z0 z3 = 0
    for z in pts:
        ref = orbit(dihedral.F_MAP, z, 6)
        for n in range(1, 7):
            got = dihedral.Fn_closed(z, n)
            want = ref[n - 1]
            if isinstance(got, IndeterminatePoint) or isinstance(want, IndeterminatePoint):
                worst = max(worst, 0.0 if type(got) is type(want) else math.inf)
                continue
            worst = max(worst, proj_distance(got, want))
    return _result("dihedral.Fn_closed_vs_orbit", len(pts), worst, 1e-8, f"{n_deg} on z1z2=z0z3")


def _non_dyadic_angles(rng, count, n_max=20, gap=1e-3):
    out = []
    while len(out) < count:
        w = float(rng.uniform(0.05, math.pi - 0.05))
        if all(abs(math.sin(2 ** (n + 1) * w)) > gap for n in range(n_max + 1)):
            out.append(w)
    return out


def check_f_series_band(rng, samples):
    """Partial sums against ``cos w - sin w cot(2^(n+1) w)`` at ``w = acos(tau)``."""
    worst = 0.0
    for w in _non_dyadic_angles(rng, samples):
        z = dihedral_band_point(rng, math.cos(w))
        t = dihedral.tau(z)
        with mpmath.workdps(50):
            ww = mpmath.acos(mpmath.mpc(t))
            for n in range(21):
                ref = mpmath.cos(ww) - mpmath.sin(ww) * mpmath.cot(2 ** (n + 1) * ww)
                got = dihedral.f_partial(z, n)
                worst = max(worst, float(abs(got - ref) / max(1, abs(ref))))
    return _result("dihedral.f_series_band", samples, worst, 1e-9)


def check_f_series_limit(rng, samples):
    worst = 0.0
    used = 0
    while used < samples:
        z = tuple(random_points(rng, 1)[0])
        t = dihedral.tau(z)
        if not isinstance(t, complex) or cheb.band_distance(t) < 1e-3:
            continue
        used += 1
        worst = max(worst, abs(dihedral.f_partial(z, 60) - dihedral.f_limit(z)))
    return _result("dihedral.f_series_limit", used, worst, 1e-9)


def check_dihedral_projective(rng, samples):
    bad = 0
    for z in random_points(rng, samples):
        lam = complex(_cz(rng)) * 10 ** rng.uniform(-8, 8)
        a, b = dihedral.classify(z), dihedral.classify(z * lam)
        bad += a.tag is not b.tag
    return _result("dihedral.projective_invariance", samples, bad, 0.5)


def check_dihedral_det(rng, samples):
    return _det_recursion_check("dihedral", rng, samples)


# ---------------------------------------------------------------- lamplighter suite


def check_lamp_det(rng, samples):
    return _det_recursion_check("lamplighter", rng, samples)


def check_Q_vs_F(rng, samples):
    worst = 0.0
    for z in random_points(rng, samples):
        f = lamplighter.F_lamp(z)
        d0 = z[0] - z[1]
        q = lamplighter.Q_lift(z, 1)
        for a, b in zip(f, q):
            worst = max(worst, abs(a - d0 * b) / max(abs(a), abs(d0 * b), 1e-300))
        qq = lamplighter.Q_lamp(z)
        worst = max(worst, proj_distance(qq, f) if isinstance(qq, ProjPoint) else math.inf)
    return _result("lamplighter.Q_vs_F", samples, worst, 1e-10)


def check_delta_recursion(rng, samples):
    worst = 0.0
    for z in random_points(rng, samples):
        cur = normalize(z)
        for n in range(1, 31):
            cur = lamplighter.Q_lamp(cur)
            if isinstance(cur, lamplighter.PoleFlag):
                break
            got = lamplighter.Qn_delta(z, n)
            if isinstance(got, lamplighter.PoleFlag):
                worst = math.inf
                break
            worst = max(worst, proj_distance(got, cur))
    return _result("lamplighter.delta_recursion_n30", samples, worst, 1e-8)


def lift_law_residual(z, n: int, exponent: Callable[[int, int], int]) -> float:
    f = np.array(lamplighter.F_lamp_iterate(z, n))
    q = np.array(lamplighter.Q_lift(z, n))
    d = lamplighter.deltas(z, n)
    factor = np.prod([d[i] ** exponent(i, n) for i in range(n)])
    return float(np.max(np.abs(f - factor * q)) / np.max(np.abs(f)))


EXPONENT_CANDIDATES = {
    "2^(n-i)": lambda i, n: 2 ** (n - i),
    "2^(n-1-i)": lambda i, n: 2 ** (n - 1 - i),
}


def determine_exponent_law(rng, samples: int = 20) -> tuple[str, dict[str, float]]:
    """Brute force over the candidate laws at n = 1, 2, 3."""
    pts = [tuple(z) for z in random_points(rng, samples)]
    res = {
        name: max(lift_law_residual(z, n, law) for z in pts for n in (1, 2, 3))
        for name, law in EXPONENT_CANDIDATES.items()
    }
    return min(res, key=res.get), res


def check_lift_exponent(rng, samples):
    name, res = determine_exponent_law(rng)
    law = EXPONENT_CANDIDATES[name]
    worst = 0.0
    for z in random_points(rng, samples):
        for n in range(1, 7):
            worst = max(worst, lift_law_residual(tuple(z), n, law))
    agrees = all(lamplighter.lift_exponents(n) == [law(i, n) for i in range(n)] for n in range(1, 7))
    note = f"brute force picks {name}; " + ", ".join(f"{k}: {v:.1e}" for k, v in res.items())
    return _result("lamplighter.lift_exponent_law", samples, worst, 1e-10, note, passed=agrees and worst < 1e-10)


def check_ratio_limit_lamp(rng, samples):
    """G_{n+1}/G_n at n = 200 against the dominant root, on points whose root ratio is at most 0.9."""
    worst = 0.0
    used = 0
    while used < samples:
        z = tuple(random_points(rng, 1)[0])
        s, y = z[0] + z[1], 4 * z[2] * z[3]
        r = cmath.sqrt(s * s - 4 * y)
        a, b = sorted(((s + r) / 2, (s - r) / 2), key=abs)[::-1]
        if abs(b) > 0.9 * abs(a):
            continue
        used += 1
        got = (cheb.G(201, z) / cheb.G(200, z)).value()
        want = lamplighter.ratio_limit_lamp(z)
        worst = max(worst, abs(got - want) / abs(want))
    return _result("lamplighter.ratio_limit_n200", used, worst, 1e-8)


def check_hyperplane_witnesses(rng, samples):
    notes = []
    ok = True
    w = (1, 3, 0, -2)
    v = lamplighter.classify_E(w, 200)
    floor = min(lamplighter.gamma_residuals(w, 200))
    ok &= lamplighter.in_hyperplane_L(w) and v.tag is lamplighter.Tag.NOT_DETECTED and floor > 0.1
    notes.append(f"[1:3:0:-2] residual floor {floor:.3f}")
    bad = 0
    T = lamplighter.Tag
    for _ in range(samples):
        bad += lamplighter.classify_E(lamp_critical_point(rng)).tag is not T.CRITICAL_VARIETY
        bad += lamplighter.classify_E(lamp_band_point(rng, float(rng.uniform(0, 1)))).tag is not T.BAND
        n = int(rng.integers(0, 6))
        g = lamplighter.classify_E(lamp_gamma_point(rng, n))
        bad += g.tag is not T.GAMMA_CURVE or g.index != n
    ok &= bad == 0
    notes.append(f"{bad} constructed points misclassified")
    return _result("lamplighter.hyperplane_witnesses", 3 * samples + 1, bad, 0.5, "; ".join(notes), passed=ok)


def check_lamp_projective(rng, samples):
    bad = 0
    for z in random_points(rng, samples):
        lam = complex(_cz(rng)) * 10 ** rng.uniform(-8, 8)
        a, b = lamplighter.classify_E(z), lamplighter.classify_E(z * lam)
        bad += a.tag is not b.tag or a.index != b.index
    return _result("lamplighter.projective_invariance", samples, bad, 0.5)


def check_lamp_array(rng, samples):
    """Vectorized classifier used by the renderer against the scalar one."""
    T = lamplighter.Tag
    pts = [tuple(z) for z in random_points(rng, samples)]
    pts += [lamp_critical_point(rng), lamp_band_point(rng, 0.3), lamp_gamma_point(rng, 3), (1, 3, 0, -2)]
    z = np.array([normalize(p).coords for p in pts]).T
    codes, index, _, _ = lamplighter.classify_E_array(z)
    bad = 0
    for k, p in enumerate(pts):
        v = lamplighter.classify_E(p)
        bad += v.tag.code != codes[k] or (v.tag is T.GAMMA_CURVE and v.index != index[k])
    return _result("lamplighter.array_matches_scalar", len(pts), bad, 0.5)


# ---------------------------------------------------------------- selfsim suite


def check_unitarity(rng, samples):
    bad = count = 0
    for spec in (selfsim.DIHEDRAL, selfsim.LAMPLIGHTER):
        for name in selfsim.generator_names(spec):
            for n in range(0, 9):
                m = selfsim.level_matrix(spec, name, n).entries
                bad += not np.array_equal(m @ m.conj().T, np.eye(2**n))
                count += 1
    return _result("selfsim.unitarity", count, bad, 0.5)


def check_relations(rng, samples):
    bad = 0
    D, L = selfsim.DIHEDRAL, selfsim.LAMPLIGHTER
    for n in range(0, 9):
        eye = np.eye(2**n)
        bad += not np.array_equal(selfsim.level_matrix(D, "a a", n).entries, eye)
        bad += not np.array_equal(selfsim.level_matrix(D, "t t", n).entries, eye)
        c1 = selfsim.level_matrix(L, "a^-1 b", n).entries
        c2 = selfsim.level_matrix(L, "b^-1 a", n).entries
        bad += not np.array_equal(c1, c2)
        bad += not np.array_equal(selfsim.level_matrix(L, "a a^-1", n).entries, eye)
    return _result("selfsim.group_relations", 9, bad, 0.5)


def check_logdet(rng, samples):
    worst = 0.0
    for _ in range(samples):
        k = int(rng.integers(1, 40))
        a = _cz(rng, (k, k))
        sign, logabs = np.linalg.slogdet(a)
        got = selfsim.log_det(a)
        ref = ScaledValue.from_polar(complex(sign), float(logabs))
        worst = max(worst, cheb.rel_deviation(got, ref))
    return _result("selfsim.log_det_vs_slogdet", samples, worst, 1e-10)


def check_schur(rng, samples):
    worst = 0.0
    for _ in range(samples):
        k = int(rng.integers(1, 12))
        A = np.diag(_cz(rng, k))
        C = np.diag(_cz(rng, k))
        B, D = _cz(rng, (k, k)), _cz(rng, (k, k))
        worst = max(worst, selfsim.schur_det_check(A, B, C, D).deviation)
    return _result("selfsim.schur_complement", samples, worst, 1e-9)


SUITE_CHECKS: dict[str, list[tuple[Callable, int]]] = {
    # (check, default sample count)
    "chebyshev": [
        (check_U_sum, 1000),
        (check_U_trig, 100),
        (check_U_endpoints, 1),
        (check_interlacing, 1),
        (check_ratio_limit, 100),
        (check_alpha_beta, 1000),
    ],
    "dihedral": [
        (check_semiconjugacy, 10000),
        (check_quadric_identities, 10000),
        (check_E_structure, 100),
        (check_classifier_oracle, 1000),
        (check_Fn_closed, 1000),
        (check_f_series_band, 100),
        (check_f_series_limit, 100),
        (check_dihedral_projective, 1000),
        (check_dihedral_det, 100),
    ],
    "lamplighter": [
        (check_G_closed, 1000),
        (check_lamp_det, 100),
        (check_Q_vs_F, 1000),
        (check_delta_recursion, 1000),
        (check_lift_exponent, 100),
        (check_ratio_limit_lamp, 100),
        (check_hyperplane_witnesses, 100),
        (check_lamp_projective, 1000),
        (check_lamp_array, 1000),
    ],
    "selfsim": [
        (check_unitarity, 1),
        (check_relations, 1),
        (check_logdet, 200),
        (check_schur, 200),
    ],
}


def check_rng(seed: int, suite: str, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64([seed, SUITES.index(suite), index]))


def run_check(suite: str, index: int, seed: int, samples: int | None = None) -> CheckResult:
    fn, default = SUITE_CHECKS[suite][index]
    n = default if samples is None or default == 1 else max(1, samples)
    t0 = time.perf_counter()
    res = fn(check_rng(seed, suite, index), n)
    res.seconds = time.perf_counter() - t0
    return res


def run_suite(suite: str, seed: int = 0, samples: int | None = None) -> list[CheckResult]:
    """Run one suite (or ``all``); ``samples`` overrides the per-check sample counts."""
    names = SUITES if suite == "all" else (suite,)
    out = []
    for name in names:
        if name not in SUITE_CHECKS:
            raise ValueError(f"unknown suite {suite!r}")
        out.extend(run_check(name, i, seed, samples) for i in range(len(SUITE_CHECKS[name])))
    return out
