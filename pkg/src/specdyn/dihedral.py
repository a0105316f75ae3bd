"""Spectral dynamics of the infinite dihedral group.

The pencil is ``z0 + z1 a + z2 t + z3 at``.  Its spectrum is the union over
x in [-1, 1] of the quadrics ``z0^2 + z3^2 - z1^2 - z2^2 + 2x(z0 z3 - z1 z2) = 0``,
which is also the Julia set of the quadratic map F below.  Membership is
decided through the semi-conjugacy ``tau(F(z)) = T(tau(z))``.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import cheb
from .cheb import BandError, ScaledValue
from .projgeom import (
    HomogMap,
    IndeterminatePoint,
    ProjPoint,
    ZeroVector,
    as_coords,
    normalize,
)

EPS_E = 1e-10
EPS_BAND = cheb.EPS_BAND
GRID = 2048

F_MAP = HomogMap.from_tables(
    [
        {(0, 0): 1, (1, 1): -1},
        {(0, 2): 1, (1, 3): -1},
        {(0, 2): 1, (1, 3): -1},
        {(2, 2): 1, (3, 3): -1},
    ],
    name="F_dihedral",
)


class Tag(enum.Enum):
    RESOLVENT = "Resolvent"
    SPECTRUM_BAND = "SpectrumBand"
    EXTENDED_INDETERMINACY = "ExtendedIndeterminacy"

    @property
    def code(self) -> int:
        return _CODES[self]


_CODES = {Tag.RESOLVENT: 0, Tag.SPECTRUM_BAND: 1, Tag.EXTENDED_INDETERMINACY: 2}


class TauSpecial(enum.Enum):
    INFINITY = "inf"  # denominator zero, numerator not
    UNDEFINED_ON_E = "undefined"


class IndetLevel(enum.Enum):
    I1 = "I1"
    I2_ONLY = "I2_only"
    NOT_IN_E = "NotInE"


@dataclass(frozen=True)
class DihedralVerdict:
    tag: Tag
    tau: complex | TauSpecial
    margin: float


def _chart(z) -> tuple[complex, complex, complex, complex]:
    p = normalize(z)
    if isinstance(p, ZeroVector):
        raise ValueError("the zero vector is not a point of P^3")
    return p.coords


def F_dihedral(z: Sequence[complex]) -> tuple[complex, complex, complex, complex]:
    """Lift ``(z0^2 - z1^2, z0 z2 - z1 z3, z0 z2 - z1 z3, z2^2 - z3^2)``."""
    z0, z1, z2, z3 = as_coords(z)
    mid = z0 * z2 - z1 * z3
    return (z0 * z0 - z1 * z1, mid, mid, z2 * z2 - z3 * z3)


def quadric_residuals(z) -> tuple[float, float]:
    """``|z0 z3 - z1 z2|`` and ``|z0^2 + z3^2 - z1^2 - z2^2|`` on the chart representative."""
    z0, z1, z2, z3 = _chart(z)
    return abs(z0 * z3 - z1 * z2), abs(z0 * z0 + z3 * z3 - z1 * z1 - z2 * z2)


def in_E(z, eps_e: float = EPS_E) -> bool:
    r1, r2 = quadric_residuals(z)
    return r1 < eps_e and r2 < eps_e


def tau(z, eps_e: float = EPS_E) -> complex | TauSpecial:
    """``(z0^2 + z3^2 - z1^2 - z2^2) / (2 (z1 z2 - z0 z3))``."""
    if in_E(z, eps_e):
        return TauSpecial.UNDEFINED_ON_E
    z0, z1, z2, z3 = _chart(z)
    num = z0 * z0 + z3 * z3 - z1 * z1 - z2 * z2
    den = 2 * (z1 * z2 - z0 * z3)
    if den == 0:
        return TauSpecial.INFINITY
    return num / den


def classify(z, eps_e: float = EPS_E, eps_band: float = EPS_BAND) -> DihedralVerdict:
    r1, r2 = quadric_residuals(z)
    if r1 < eps_e and r2 < eps_e:
        return DihedralVerdict(Tag.EXTENDED_INDETERMINACY, TauSpecial.UNDEFINED_ON_E, max(r1, r2))
    t = tau(z, eps_e)
    if t is TauSpecial.INFINITY:
        return DihedralVerdict(Tag.RESOLVENT, t, math.inf)
    assert isinstance(t, complex)
    tag = Tag.SPECTRUM_BAND if cheb.on_band(t, eps_band) else Tag.RESOLVENT
    return DihedralVerdict(tag, t, cheb.band_distance(t))


def indeterminacy_level(z, eps: float = EPS_E) -> IndetLevel:
    z0, z1, z2, z3 = _chart(z)
    close = lambda a, b: abs(a - b) < eps  # noqa: E731
    if (close(z0, z1) and close(z2, z3)) or (close(z0, -z1) and close(z2, -z3)):
        return IndetLevel.I1
    if (close(z0, z2) and close(z1, z3)) or (close(z0, -z2) and close(z1, -z3)):
        return IndetLevel.I2_ONLY
    return IndetLevel.NOT_IN_E


def Fn_closed(z, n: int, eps_e: float = EPS_E) -> ProjPoint | IndeterminatePoint:
    """``F^n(z)`` for ``n >= 1`` from the closed form, no iteration of F.

    Off ``{z1 z2 = z0 z3}`` write ``D = z1 z2 - z0 z3`` and ``m = n - 2``.  The
    iterate is, up to the common factor ``D^(2^(m+1) - 1)``,

        [Pm (z0^2 - z1^2) - A D : Pm (z0 z2 - z1 z3) : same : Pm (z2^2 - z3^2) + A D]

    with ``Pm = 2^(m+1) prod_{k<=m} T^k(tau)`` and
    ``A = sum_{k=1}^{m+1} 2^(m+1-k) prod_{j=k}^{m} T^j(tau)``; both are
    carried as ScaledValues.  On ``D = 0`` the iterate is
    ``F(z) * s^(2^(m+1) - 1)`` with ``s = z0^2 - z1^2 + z3^2 - z2^2``.
    """
    if n < 1:
        raise ValueError("closed form needs n >= 1")
    m = n - 2
    c = _chart(z)
    z0, z1, z2, z3 = c
    D = z1 * z2 - z0 * z3
    lift0 = F_dihedral(c)
    if n == 1:
        # m = -1: Pm = 1 and A = 0
        img = normalize(lift0)
        return IndeterminatePoint(1, normalize(c)) if isinstance(img, ZeroVector) else img  # type: ignore[arg-type]
    if in_E(c, eps_e):
        # F^2 vanishes identically on E
        return IndeterminatePoint(1 if isinstance(normalize(lift0), ZeroVector) else 2, normalize(c))  # type: ignore[arg-type]
    if D == 0:
        # the factor s^(2^(m+1) - 1) is projectively invisible, and s != 0 off E
        return normalize(lift0)  # type: ignore[return-value]
    t = ScaledValue.make((z0 * z0 + z3 * z3 - z1 * z1 - z2 * z2) / (2 * D))
    iterates = [t]
    for _ in range(m):
        iterates.append(2 * iterates[-1] * iterates[-1] - 1)
    acc = ScaledValue.make(1.0)  # term for k = m+1
    A = acc
    for k in range(m, 0, -1):
        acc = 2 * iterates[k] * acc
        A = A + acc
    Pm = 2 * iterates[0] * acc
    AD = A * D
    comps = [
        Pm * lift0[0] - AD,
        Pm * lift0[1],
        Pm * lift0[2],
        Pm * lift0[3] + AD,
    ]
    top = max(v.log_scale for v in comps if not v.is_zero) if any(not v.is_zero for v in comps) else None
    if top is None:
        return IndeterminatePoint(n, normalize(c))  # type: ignore[arg-type]
    raw = [0j if v.is_zero else v.mantissa * math.exp(max(v.log_scale - top, -745.0)) for v in comps]
    img = normalize(raw)
    if isinstance(img, ZeroVector):
        return IndeterminatePoint(n, normalize(c))  # type: ignore[arg-type]
    return img


def f_partial(z, n: int, strict: bool = False, eps_band: float = EPS_BAND) -> complex:
    """``sum_{k=1}^{n+1} 1 / (2^k prod_{j<k} T^j(tau))``.

    Accumulated in extended precision: on the band the doubling map loses a
    bit per step, so double precision is not enough for n around 20.
    """
    t = tau(z)
    if t is TauSpecial.INFINITY:
        return 0j
    if isinstance(t, TauSpecial):
        raise BandError(f"tau is {t.value}")
    if strict and cheb.on_band(t, eps_band):
        raise BandError(f"tau = {t} lies on [-1, 1]")
    x = np.clongdouble(t)
    prod = np.clongdouble(1)
    total = np.clongdouble(0)
    for _ in range(n + 1):
        prod = prod * 2 * x
        if not np.isfinite(prod) or abs(prod) > 1e300:
            break  # remaining terms vanish in double precision
        total += 1 / prod
        x = 2 * x * x - 1
    return complex(total)


def f_limit(z, eps_band: float = EPS_BAND) -> complex:
    """Limit of :func:`f_partial`, ``tau -/+ i sqrt(1 - tau^2)``.

    The sign is chosen by comparison with the partial sum at n = 60.
    """
    t = tau(z)
    if isinstance(t, TauSpecial):
        raise BandError(f"tau is {t.value}")
    if cheb.on_band(t, eps_band):
        raise BandError(f"tau = {t} lies on [-1, 1]")
    r = 1j * cmath.sqrt(1 - t * t)
    ref = f_partial(z, 60)
    a, b = t - r, t + r
    return a if abs(a - ref) <= abs(b - ref) else b


def left_regular_symbol(z, theta: float) -> complex:
    """Determinant of the 2x2 symbol of the pencil in the left regular representation."""
    z0, z1, z2, z3 = as_coords(z)
    return z0 * z0 + z3 * z3 - z1 * z1 - z2 * z2 + 2 * math.cos(theta) * (z0 * z3 - z1 * z2)


def symbol_min(z, grid: int = GRID, refine: bool = True) -> tuple[float, float]:
    """Minimum of ``|left_regular_symbol(z, .)|`` over [0, pi], and where it occurs.

    A uniform grid, then golden-section search around the best node; the
    modulus is unimodal in theta on [0, pi] because the symbol is affine in
    cos(theta).
    """
    c = as_coords(z)
    thetas = np.linspace(0.0, math.pi, grid)
    z0, z1, z2, z3 = c
    vals = np.abs(z0 * z0 + z3 * z3 - z1 * z1 - z2 * z2 + 2 * np.cos(thetas) * (z0 * z3 - z1 * z2))
    i = int(np.argmin(vals))
    best, where = float(vals[i]), float(thetas[i])
    if not refine:
        return best, where
    lo, hi = thetas[max(i - 1, 0)], thetas[min(i + 1, grid - 1)]
    f = lambda th: abs(left_regular_symbol(c, th))  # noqa: E731
    g = (math.sqrt(5) - 1) / 2
    a, b = lo + (1 - g) * (hi - lo), lo + g * (hi - lo)
    fa, fb = f(a), f(b)
    for _ in range(80):
        if fa <= fb:
            hi, b, fb = b, a, fa
            a = lo + (1 - g) * (hi - lo)
            fa = f(a)
        else:
            lo, a, fa = a, b, fb
            b = lo + g * (hi - lo)
            fb = f(b)
    for th, v in ((a, fa), (b, fb)):
        if v < best:
            best, where = v, th
    return best, where


# vectorized forms used by the renderer; one column per point, shape (4, ...)


def classify_array(z: np.ndarray, eps_e: float = EPS_E, eps_band: float = EPS_BAND):
    """Return ``(codes, tau, margin, residual)`` arrays for chart-normalized ``z``."""
    z0, z1, z2, z3 = z
    num = z0 * z0 + z3 * z3 - z1 * z1 - z2 * z2
    e = z0 * z3 - z1 * z2
    res = np.maximum(np.abs(e), np.abs(num))
    in_e = (np.abs(e) < eps_e) & (np.abs(num) < eps_e)
    den = -2 * e
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(den != 0, num / np.where(den != 0, den, 1), np.inf)
    finite = np.isfinite(t)
    band = finite & (np.abs(t.imag) <= eps_band) & (t.real >= -1 - eps_band) & (t.real <= 1 + eps_band)
    dx = np.where(finite, np.maximum(np.abs(t.real) - 1.0, 0.0), np.inf)
    margin = np.where(finite, np.hypot(dx, np.where(finite, t.imag, 0.0)), np.inf)
    codes = np.where(in_e, 2, np.where(band, 1, 0)).astype(np.uint8)
    margin = np.where(in_e, res, margin)
    return codes, t, margin, res
