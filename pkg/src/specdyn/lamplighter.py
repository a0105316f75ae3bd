"""Spectral dynamics of the lamplighter group.

Pencil ``z0 + z1 c + z2 (a + b) + z3 (a^-1 + b^-1)`` with ``c = a^-1 b``.
Its determinant recursion is driven by the quadratic map F below, whose
projectivization is the rational map Q.  Along Q-orbits z2, z3 and
``s = z0 + z1`` are constant, so everything reduces to the scalar
recursion ``delta_{k+1} = s - 4 z2 z3 / delta_k`` and the sequence G_n.
"""

from __future__ import annotations

import cmath
import csv
import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from . import cheb, selfsim
from .cheb import BandError, ScaledValue
from .plane import PlaneSpec
from .projgeom import HomogMap, ProjPoint, ZeroVector, as_coords, normalize, normalize_array

EPS_E = 1e-10
EPS_BAND = cheb.EPS_BAND
EPS_GAMMA = 1e-8
N_MAX = 200

F_MAP = HomogMap.from_tables(
    [
        {(0, 0): 1, (1, 1): -1, (2, 3): -2},
        {(2, 3): 2},
        {(0, 2): 1, (1, 2): -1},
        {(0, 3): 1, (1, 3): -1},
    ],
    name="F_lamplighter",
)


class Tag(enum.Enum):
    NOT_DETECTED = "NotDetected"
    CRITICAL_VARIETY = "CriticalVariety"
    BAND = "Band"
    GAMMA_CURVE = "GammaCurve"
    HYPERPLANE_L = "HyperplaneL"

    @property
    def code(self) -> int:
        return _CODES[self]


_CODES = {t: i for i, t in enumerate(Tag)}


@dataclass(frozen=True)
class LampVerdict:
    tag: Tag
    residual: float
    index: int | None = None  # n of the Gamma_n hit
    tau2: complex | None = None

    @property
    def in_E(self) -> bool:
        return self.tag in (Tag.CRITICAL_VARIETY, Tag.BAND, Tag.GAMMA_CURVE)


@dataclass(frozen=True)
class PoleFlag:
    """``z0 = z1`` with ``z2 z3 != 0`` at iterate ``step`` (0-based)."""

    step: int = 0


def _chart(z) -> tuple[complex, complex, complex, complex]:
    p = normalize(z)
    if isinstance(p, ZeroVector):
        raise ValueError("the zero vector is not a point of P^3")
    return p.coords


def F_lamp(z: Sequence[complex]) -> tuple[complex, complex, complex, complex]:
    """Lift ``(z0^2 - z1^2 - 2 z2 z3, 2 z2 z3, z2 (z0 - z1), z3 (z0 - z1))``."""
    z0, z1, z2, z3 = as_coords(z)
    d = z0 - z1
    w = 2 * z2 * z3
    return (z0 * z0 - z1 * z1 - w, w, z2 * d, z3 * d)


def Q_lamp(z, eps_e: float = EPS_E) -> ProjPoint | PoleFlag:
    z0, z1, z2, z3 = _chart(z)
    d = z0 - z1
    if z2 * z3 == 0:
        w = 0j
    elif abs(d) < eps_e:
        return PoleFlag(0)
    else:
        w = 2 * z2 * z3 / d
    return normalize((z0 + z1 - w, w, z2, z3))  # type: ignore[return-value]


def Q_iterate(z, n: int, eps_e: float = EPS_E) -> ProjPoint | PoleFlag:
    """``n`` applications of :func:`Q_lamp`, renormalizing each time."""
    cur: ProjPoint = normalize(z)  # type: ignore[assignment]
    for k in range(n):
        nxt = Q_lamp(cur, eps_e)
        if isinstance(nxt, PoleFlag):
            return PoleFlag(k)
        cur = nxt
    return cur


def _gamma_steps(c: Sequence[complex], n: int):
    """Yield ``(k, G_k, G_{k-1}, residual_k, log_scale)`` for k = 0..n.

    ``residual_k = |G_k| / max(|s G_{k-1}|, |y G_{k-2}|)`` measures how much
    cancellation produced G_k; it is scale-free and vanishes exactly on
    Gamma_k.  For k = 0 the reference is ``max(|z0|, |z1|)``.
    """
    z0, z1, z2, z3 = c
    s = z0 + z1
    y = 4 * z2 * z3
    ref0 = max(abs(z0), abs(z1))
    g0 = z0 - z1
    yield 0, g0, 1 + 0j, (abs(g0) / ref0 if ref0 else 0.0), 0.0
    pp, p, ls = 1 + 0j, g0, 0.0
    for k in range(1, n + 1):
        a, b = s * p, y * pp
        cur = a - b
        ref = max(abs(a), abs(b))
        r = abs(cur) / ref if ref else 0.0
        pp, p = p, cur
        m = max(abs(p), abs(pp))
        if m > 2.0**200 or 0 < m < 2.0**-200:
            _, e = math.frexp(m)
            pp = complex(math.ldexp(pp.real, -e), math.ldexp(pp.imag, -e))
            p = complex(math.ldexp(p.real, -e), math.ldexp(p.imag, -e))
            ls += e * cheb.LN2
        yield k, p, pp, r, ls


def gamma_residuals(z, n: int) -> list[float]:
    """Scale-free residuals of G_0..G_n on the chart representative."""
    return [r for _, _, _, r, _ in _gamma_steps(_chart(z), n)]


def gamma_residual(z, n: int) -> float:
    if n < 0:
        raise ValueError("n must be >= 0")
    return gamma_residuals(z, n)[-1]


def Qn_delta(z, n: int, eps_gamma: float = EPS_GAMMA) -> ProjPoint | PoleFlag:
    """``Q^n(z) = [(s + delta_n)/2 : (s - delta_n)/2 : z2 : z3]`` via ``delta_k = G_k / G_{k-1}``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    c = _chart(z)
    z0, z1, z2, z3 = c
    s = z0 + z1
    if n == 0:
        return normalize(c)  # type: ignore[return-value]
    if z2 * z3 == 0:
        delta = s
    else:
        delta = None
        for k, g, g_prev, r, _ in _gamma_steps(c, n):
            if k < n and r < eps_gamma:
                return PoleFlag(k)
            if k == n:
                delta = g / g_prev
    return normalize(((s + delta) / 2, (s - delta) / 2, z2, z3))  # type: ignore[return-value]


def deltas(z, n: int) -> list[complex]:
    """``delta_0..delta_n`` for the given lift (not renormalized)."""
    z0, z1, z2, z3 = as_coords(z)
    s = z0 + z1
    out = [z0 - z1]
    for _ in range(n):
        out.append(s - 4 * z2 * z3 / out[-1])
    return out


def lift_exponents(n: int) -> list[int]:
    """Exponents e_i in ``F^n(z) = prod_{i<n} delta_i^{e_i} * lift(Q^n(z))``."""
    return [2 ** (n - 1 - i) for i in range(n)]


def F_lamp_iterate(z, n: int) -> tuple[complex, ...]:
    """Plain lift of ``F^n(z)`` (no renormalization)."""
    v = as_coords(z)
    for _ in range(n):
        v = F_lamp(v)
    return v


def Q_lift(z, n: int) -> tuple[complex, complex, complex, complex]:
    """The lift ``[(s + delta_n)/2, (s - delta_n)/2, z2, z3]`` of ``Q^n(z)``."""
    z0, z1, z2, z3 = as_coords(z)
    s = z0 + z1
    d = deltas(z, n)[-1]
    return ((s + d) / 2, (s - d) / 2, z2, z3)


def tau_squared(z) -> complex | None:
    """``(z0 + z1)^2 / (16 z2 z3)``, or None when z2 z3 = 0."""
    z0, z1, z2, z3 = _chart(z)
    den = 16 * z2 * z3
    if den == 0:
        return None
    return (z0 + z1) ** 2 / den


def _in_unit_interval(x: complex, eps: float) -> bool:
    return abs(x.imag) <= eps and -eps <= x.real <= 1.0 + eps


def critical_residual(z) -> float:
    z0, z1, z2, z3 = _chart(z)
    return abs((z0 - z1) * z1 - 2 * z2 * z3)


def in_band(z, eps_e: float = EPS_E, eps_band: float = EPS_BAND) -> bool:
    z0, z1, z2, z3 = _chart(z)
    t2 = tau_squared(z)
    if t2 is not None and _in_unit_interval(t2, eps_band):
        return True
    return abs(z2 * z3) < eps_e and abs(z0 + z1) < eps_e


def in_hyperplane_L(z, eps_e: float = EPS_E) -> bool:
    z0, z1, z2, z3 = _chart(z)
    return abs(z0 + z1 + 2 * z2 + 2 * z3) < eps_e


def classify_E(
    z,
    N_max: int = N_MAX,
    eps_e: float = EPS_E,
    eps_band: float = EPS_BAND,
    eps_gamma: float = EPS_GAMMA,
) -> LampVerdict:
    """Test the three components of the extended indeterminacy set in order.

    NotDetected is one-sided: it means no component was within tolerance,
    with Gamma_n swept only up to ``N_max``.  Its residual is the smallest
    Gamma residual seen.
    """
    if N_max < 1:
        raise ValueError("N_max must be >= 1")
    c = _chart(z)
    t2 = tau_squared(c)
    crit = critical_residual(c)
    if crit < eps_e:
        return LampVerdict(Tag.CRITICAL_VARIETY, crit, None, t2)
    if in_band(c, eps_e, eps_band):
        dist = 0.0 if t2 is None else abs(t2.imag) + max(0.0, -t2.real, t2.real - 1.0)
        return LampVerdict(Tag.BAND, dist, None, t2)
    best = math.inf
    for k, _, _, r, _ in _gamma_steps(c, N_max):
        if r < eps_gamma:
            return LampVerdict(Tag.GAMMA_CURVE, r, k, t2)
        best = min(best, r)
    return LampVerdict(Tag.NOT_DETECTED, best, None, t2)


def spectrum_lower_member(z, N_max: int = N_MAX, **tol) -> bool:
    """Membership in the certified part ``phi(L) u E`` of the spectrum."""
    eps_e = tol.get("eps_e", EPS_E)
    return in_hyperplane_L(z, eps_e) or classify_E(z, N_max, **tol).tag is not Tag.NOT_DETECTED


def classify_lower(z, N_max: int = N_MAX, **tol) -> LampVerdict:
    """Like :func:`classify_E`, but reports HyperplaneL for undetected points of L."""
    v = classify_E(z, N_max, **tol)
    if v.tag is Tag.NOT_DETECTED:
        c = _chart(z)
        r = abs(c[0] + c[1] + 2 * c[2] + 2 * c[3])
        if r < tol.get("eps_e", EPS_E):
            return LampVerdict(Tag.HYPERPLANE_L, r, None, v.tau2)
    return v


def ratio_limit_lamp(z, eps_e: float = EPS_E, eps_band: float = EPS_BAND) -> complex:
    """Dominant root of ``x^2 - (z0 + z1) x + 4 z2 z3``, the limit of G_{n+1}/G_n.

    Homogeneous of degree one, so it is evaluated on the lift as given.
    """
    if in_band(z, eps_e, eps_band):
        raise BandError("point lies in the band component")
    z0, z1, z2, z3 = as_coords(z)
    s = z0 + z1
    r = cmath.sqrt(s * s - 16 * z2 * z3)
    a, b = (s + r) / 2, (s - r) / 2
    return a if abs(a) >= abs(b) else b


# vectorized forms for the renderer, z of shape (4, ...) and chart-normalized


def classify_E_array(
    z: np.ndarray,
    N_max: int = N_MAX,
    eps_e: float = EPS_E,
    eps_band: float = EPS_BAND,
    eps_gamma: float = EPS_GAMMA,
):
    """Return ``(codes, index, residual, tau2)``; codes follow ``Tag.code``."""
    z0, z1, z2, z3 = z
    s = z0 + z1
    y = 4 * z2 * z3
    crit = np.abs((z0 - z1) * z1 - 2 * z2 * z3)
    with np.errstate(divide="ignore", invalid="ignore"):
        t2 = np.where(y != 0, s * s / np.where(y != 0, 4 * y, 1), np.nan)
    band = (np.isfinite(t2) & (np.abs(t2.imag) <= eps_band) & (t2.real >= -eps_band) & (t2.real <= 1 + eps_band)) | (
        (np.abs(z2 * z3) < eps_e) & (np.abs(s) < eps_e)
    )
    ref0 = np.maximum(np.abs(z0), np.abs(z1))
    g0 = z0 - z1
    with np.errstate(divide="ignore", invalid="ignore"):
        r0 = np.where(ref0 > 0, np.abs(g0) / np.where(ref0 > 0, ref0, 1), 0.0)
    index = np.where(r0 < eps_gamma, 0, -1)
    best = r0.copy()
    pp = np.ones_like(g0)
    p = g0.copy()
    for k in range(1, N_max + 1):
        a = s * p
        b = y * pp
        cur = a - b
        ref = np.maximum(np.abs(a), np.abs(b))
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(ref > 0, np.abs(cur) / np.where(ref > 0, ref, 1), 0.0)
        hit = (index < 0) & (r < eps_gamma)
        index = np.where(hit, k, index)
        best = np.where(index < 0, np.minimum(best, r), best)
        pp, p = p, cur
        m = np.maximum(np.abs(p), np.abs(pp))
        big = (m > 2.0**200) | ((m > 0) & (m < 2.0**-200))
        if big.any():
            _, e = np.frexp(np.where(big, m, 1.0))
            scale = np.ldexp(1.0, -e)
            p = p * scale
            pp = pp * scale
    is_crit = crit < eps_e
    is_band = ~is_crit & band
    is_gamma = ~is_crit & ~is_band & (index >= 0)
    codes = np.full(z0.shape, Tag.NOT_DETECTED.code, dtype=np.uint8)
    codes[is_crit] = Tag.CRITICAL_VARIETY.code
    codes[is_band] = Tag.BAND.code
    codes[is_gamma] = Tag.GAMMA_CURVE.code
    residual = np.where(is_crit, crit, np.where(is_band, 0.0, best))
    return codes, np.where(is_gamma, index, -1), residual, t2


def pencil_terms(z: Sequence[complex]):
    return selfsim.template_terms(selfsim.LAMPLIGHTER_TEMPLATE, z)


def pencil_sigma_min(z, level: int) -> float:
    """Smallest singular value of the level-n pencil at the chart representative."""
    return selfsim.min_singular(selfsim.pencil_matrix(selfsim.LAMPLIGHTER, pencil_terms(_chart(z)), level))


EXPLORE_HEADER = [
    "s", "t",
    "z0re", "z0im", "z1re", "z1im", "z2re", "z2im", "z3re", "z3im",
    "sigma_min", "lower_member", "verdict", "residual",
]  # fmt: skip


def explore_conjecture(plane: PlaneSpec, level: int, N_max: int = N_MAX, **tol) -> list[dict]:
    """Tabulate sigma_min of the level-n pencil next to the certified membership test.

    Reporting only: the table is meant for inspection and asserts nothing.
    """
    if level > selfsim.N_MAX:
        raise selfsim.LevelTooLarge(f"level {level} exceeds n_max={selfsim.N_MAX}")
    rows = []
    svals, tvals = plane.s_values(), plane.t_values()
    for i, t in enumerate(tvals):
        for j, s in enumerate(svals):
            raw = plane.point(i, j)
            p = normalize(raw)
            if isinstance(p, ZeroVector):
                continue
            c = p.coords
            v = classify_lower(c, N_max, **tol)
            rows.append(
                {
                    "s": float(s),
                    "t": float(t),
                    "coords": c,
                    "sigma_min": pencil_sigma_min(c, level),
                    "lower_member": v.tag is not Tag.NOT_DETECTED,
                    "verdict": v.tag.value,
                    "residual": v.residual,
                }
            )
    return rows


def write_exploration_csv(rows: Iterable[dict], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(EXPLORE_HEADER)
    for r in rows:
        coords = [x for c in r["coords"] for x in (repr(c.real), repr(c.imag))]
        w.writerow(
            [repr(r["s"]), repr(r["t"]), *coords, repr(r["sigma_min"]), str(r["lower_member"]).lower(), r["verdict"], repr(r["residual"])]
        )


__all__ = [
    "F_MAP", "Tag", "LampVerdict", "PoleFlag", "F_lamp", "Q_lamp", "Q_iterate", "Qn_delta",
    "gamma_residual", "gamma_residuals", "classify_E", "classify_lower", "in_hyperplane_L",
    "ratio_limit_lamp", "spectrum_lower_member", "explore_conjecture", "write_exploration_csv",
    "lift_exponents", "tau_squared", "normalize_array",
]  # fmt: skip
