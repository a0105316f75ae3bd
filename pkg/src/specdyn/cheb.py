"""Chebyshev machinery: the doubling map T, second-kind polynomials U_n,
the bivariate family P_n and the lamplighter sequence G_n.

Every polynomial family is evaluated by its three-term recurrence.  Values
that can leave double range are carried as :class:`ScaledValue`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

EPS_BAND = 1e-9
LN2 = math.log(2.0)
ESCAPE = 1e150  # |x| beyond which 2x^2 - 1 would overflow
COMPLEX_INF = complex(math.inf, 0.0)

# renormalize a recurrence pair once it drifts this far from 1
_HI = 2.0**200
_LO = 2.0**-200


class BandError(ValueError):
    """Argument lies on the cut [-1, 1] (or its lamplighter analogue)."""


def _ldexp_c(z: complex, k: int) -> complex:
    return complex(math.ldexp(z.real, k), math.ldexp(z.imag, k))


@dataclass(frozen=True)
class ScaledValue:
    """``mantissa * exp(log_scale)`` with ``0.5 <= |mantissa| < 2`` unless zero.

    Build through :meth:`make`, which restores the mantissa invariant.
    """

    mantissa: complex
    log_scale: float = 0.0

    @classmethod
    def make(cls, mantissa: complex, log_scale: float = 0.0) -> "ScaledValue":
        m = complex(mantissa)
        if m == 0:
            return cls(0j, 0.0)
        if not (math.isfinite(m.real) and math.isfinite(m.imag) and math.isfinite(log_scale)):
            raise OverflowError(f"non-finite scaled value {m!r} e^{log_scale}")
        _, k = math.frexp(max(abs(m.real), abs(m.imag)))
        return cls(_ldexp_c(m, -k), log_scale + k * LN2)

    @classmethod
    def from_polar(cls, unit: complex, log_abs: float) -> "ScaledValue":
        """Value ``unit * exp(log_abs)`` for a unit-modulus ``unit``."""
        if log_abs == -math.inf:
            return cls(0j, 0.0)
        return cls.make(unit, log_abs)

    @property
    def is_zero(self) -> bool:
        return self.mantissa == 0

    def value(self) -> complex:
        """Plain complex value; may overflow to inf or underflow to 0."""
        if self.is_zero:
            return 0j
        if self.log_scale > 709.0:
            return complex(
                math.copysign(math.inf, self.mantissa.real) if self.mantissa.real else 0.0,
                math.copysign(math.inf, self.mantissa.imag) if self.mantissa.imag else 0.0,
            )
        return self.mantissa * math.exp(self.log_scale)

    def log_abs(self) -> float:
        if self.is_zero:
            return -math.inf
        return math.log(abs(self.mantissa)) + self.log_scale

    def log(self) -> complex:
        """Principal complex logarithm."""
        if self.is_zero:
            raise ValueError("log of zero")
        return cmath.log(self.mantissa) + self.log_scale

    def __abs__(self) -> float:
        if self.is_zero:
            return 0.0
        return abs(self.mantissa) * math.exp(min(self.log_scale, 709.0))

    def __mul__(self, other) -> "ScaledValue":
        if not isinstance(other, ScaledValue):
            other = ScaledValue.make(other)
        if self.is_zero or other.is_zero:
            return ScaledValue(0j, 0.0)
        return ScaledValue.make(self.mantissa * other.mantissa, self.log_scale + other.log_scale)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ScaledValue":
        if not isinstance(other, ScaledValue):
            other = ScaledValue.make(other)
        if other.is_zero:
            raise ZeroDivisionError("ScaledValue division by zero")
        if self.is_zero:
            return self
        return ScaledValue.make(self.mantissa / other.mantissa, self.log_scale - other.log_scale)

    def __neg__(self) -> "ScaledValue":
        return ScaledValue(-self.mantissa, self.log_scale)

    def __add__(self, other) -> "ScaledValue":
        if not isinstance(other, ScaledValue):
            other = ScaledValue.make(other)
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        big, small = (self, other) if self.log_scale >= other.log_scale else (other, self)
        d = small.log_scale - big.log_scale
        return ScaledValue.make(big.mantissa + small.mantissa * math.exp(max(d, -745.0)), big.log_scale)

    __radd__ = __add__

    def __sub__(self, other) -> "ScaledValue":
        if not isinstance(other, ScaledValue):
            other = ScaledValue.make(other)
        return self + (-other)

    def __rsub__(self, other) -> "ScaledValue":
        return ScaledValue.make(other) - self

    def __pow__(self, k: int) -> "ScaledValue":
        if k < 0:
            return ScaledValue.make(1.0) / (self ** (-k))
        if self.is_zero:
            return ScaledValue.make(1.0) if k == 0 else self
        # square-and-multiply keeps the mantissa bounded at every step
        result = ScaledValue.make(1.0)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def rel_deviation(a: ScaledValue, b: ScaledValue) -> float:
    """``|a - b| / max(|a|, |b|)``, computed without leaving the log scale."""
    if a.is_zero and b.is_zero:
        return 0.0
    big = a if a.log_abs() >= b.log_abs() else b
    diff = a - b
    if diff.is_zero:
        return 0.0
    return math.exp(diff.log_abs() - big.log_abs())


def on_band(x: complex, eps: float = EPS_BAND) -> bool:
    """True when ``x`` lies within ``eps`` of the real segment [-1, 1]."""
    return abs(x.imag) <= eps and -1.0 - eps <= x.real <= 1.0 + eps


def band_distance(x: complex) -> float:
    """Euclidean distance from ``x`` to [-1, 1] (inf for infinite x)."""
    if not (math.isfinite(x.real) and math.isfinite(x.imag)):
        return math.inf
    r = x.real
    dx = 0.0 if -1.0 <= r <= 1.0 else (abs(r) - 1.0)
    return math.hypot(dx, x.imag)


def T_iter(x: complex, n: int) -> complex:
    """``n``-fold iterate of ``T(z) = 2z^2 - 1``; escaping orbits return ``COMPLEX_INF``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    z = complex(x)
    for _ in range(n):
        if abs(z) > ESCAPE:
            return COMPLEX_INF
        z = 2.0 * z * z - 1.0
    if abs(z) > ESCAPE * ESCAPE or not math.isfinite(abs(z)):
        return COMPLEX_INF
    return z


def U(n: int, x: complex) -> complex:
    """Second-kind Chebyshev polynomial ``U_n(x)``."""
    if n < 0:
        raise ValueError("n must be >= 0")
    prev, cur = 0, 1
    for _ in range(n):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def U_zeros(n: int) -> list[float]:
    """The ``n`` zeros ``cos(k*pi/(n+1))``, ascending.

    Written as ``sin(pi*m/(2(n+1)))`` with odd/even integer ``m`` so that the
    table is exactly antisymmetric and the middle zero is exactly 0.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return [math.sin(math.pi * m / (2 * (n + 1))) for m in range(-(n - 1), n, 2)]


def ratio_limit(x: complex, eps: float = EPS_BAND) -> complex:
    """``lim U_n(x)/U_{n+1}(x) = x - sqrt(x^2 - 1)``, the root of modulus < 1."""
    x = complex(x)
    if on_band(x, eps):
        raise BandError(f"{x} lies on [-1, 1]")
    r = x - cmath.sqrt(x * x - 1)
    if abs(r) > 1:
        r = x + cmath.sqrt(x * x - 1)
    return r


def _recurrence(a: complex, b: complex, y0: complex, y_prev: complex, n: int):
    """Iterate ``y_{k+1} = a y_k - b y_{k-1}``.

    Yields ``(k, y_{k-1}, y_k, log_scale)`` for k = 0..n, where both
    values share the scale ``exp(log_scale)``.
    """
    prev, cur, ls = complex(y_prev), complex(y0), 0.0
    yield 0, prev, cur, ls
    for k in range(1, n + 1):
        prev, cur = cur, a * cur - b * prev
        m = max(abs(cur), abs(prev))
        if m > _HI or (0 < m < _LO):
            _, e = math.frexp(m)
            prev, cur = _ldexp_c(prev, -e), _ldexp_c(cur, -e)
            ls += e * LN2
        yield k, prev, cur, ls


def P(n: int, x: complex, y: complex) -> ScaledValue:
    """``P_n(x, y) = y^{n/2} U_n(x / (2 sqrt(y)))``, branch-free.

    Recurrence ``P_{n+1} = x P_n - y P_{n-1}`` with ``P_0 = 1``, ``P_1 = x``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    *_, (_, _, cur, ls) = _recurrence(complex(x), complex(y), 1.0, 0.0, n)
    return ScaledValue.make(cur, ls)


def G(n: int, z: Sequence[complex]) -> ScaledValue:
    """Lamplighter sequence ``G_{n+1} = (z0+z1) G_n - 4 z2 z3 G_{n-1}``.

    Seeds are ``G_0 = z0 - z1`` and ``G_{-1} = H_0 = 1``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    z0, z1, z2, z3 = (complex(v) for v in z)
    *_, (_, _, cur, ls) = _recurrence(z0 + z1, 4 * z2 * z3, z0 - z1, 1.0, n)
    return ScaledValue.make(cur, ls)


def G_sequence(n: int, z: Sequence[complex]) -> list[ScaledValue]:
    """``[G_0, ..., G_n]``."""
    z0, z1, z2, z3 = (complex(v) for v in z)
    return [ScaledValue.make(cur, ls) for _, _, cur, ls in _recurrence(z0 + z1, 4 * z2 * z3, z0 - z1, 1.0, n)]


def P_sum(n: int, x: complex, y: complex) -> complex:
    """Explicit alternating sum for ``P_n``; used only as a cross-check."""
    return sum(
        (-1) ** k * math.comb(n - k, k) * x ** (n - 2 * k) * y**k for k in range(n // 2 + 1)
    )


def U_array(n: int, x: np.ndarray) -> np.ndarray:
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    for _ in range(n):
        prev, cur = cur, 2 * x * cur - prev
    return cur
