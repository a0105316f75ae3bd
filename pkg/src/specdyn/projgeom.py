"""Points of complex projective 3-space and homogeneous quadratic maps on it."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence, Union

import numpy as np

EPS_ZERO = 1e-300
EPS_NORM = 1e-12
EPS_PROJ = 1e-10

_SHRINK = 1.0 - 2.0**-52


@dataclass(frozen=True)
class PencilPoint:
    """Four complex coefficients ``(z0, z1, z2, z3)`` of a pencil."""

    z0: complex
    z1: complex
    z2: complex
    z3: complex

    def __post_init__(self):
        for name in ("z0", "z1", "z2", "z3"):
            v = complex(getattr(self, name))
            if not (math.isfinite(v.real) and math.isfinite(v.imag)):
                raise ValueError(f"{name} is not finite: {v!r}")
            object.__setattr__(self, name, v)

    def __iter__(self):
        return iter((self.z0, self.z1, self.z2, self.z3))

    def __getitem__(self, i):
        return (self.z0, self.z1, self.z2, self.z3)[i]

    def __len__(self):
        return 4

    @classmethod
    def from_reals(cls, values: Sequence[float]) -> "PencilPoint":
        """Build from 8 reals (re/im interleaved) or 4 reals."""
        if len(values) == 8:
            return cls(*(complex(values[2 * i], values[2 * i + 1]) for i in range(4)))
        if len(values) == 4:
            return cls(*(complex(v) for v in values))
        raise ValueError("expected 4 or 8 real numbers")


@dataclass(frozen=True)
class ZeroVector:
    """The lift is (numerically) the zero vector: no projective point."""


@dataclass(frozen=True)
class ProjPoint:
    """Chart-normalized representative: ``coords[chart] == 1`` and all moduli <= 1."""

    coords: tuple[complex, complex, complex, complex]
    chart: int

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return 4

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)


@dataclass(frozen=True)
class IndeterminatePoint:
    """Marker for an orbit that hit the indeterminacy set.

    ``step`` is the 1-based iterate that vanished; ``preimage`` is the last
    well-defined point (or None for entries after the first hit).
    """

    step: int
    preimage: ProjPoint | None = None


Coords = Union[PencilPoint, ProjPoint, Sequence[complex]]


def as_coords(z: Coords) -> tuple[complex, complex, complex, complex]:
    if isinstance(z, ProjPoint):
        return z.coords
    c = tuple(complex(v) for v in z)
    if len(c) != 4:
        raise ValueError(f"expected 4 coordinates, got {len(c)}")
    return c  # type: ignore[return-value]


def normalize(raw: Coords, eps_zero: float = EPS_ZERO) -> ProjPoint | ZeroVector:
    """Scale ``raw`` so its largest coordinate (lowest index on ties) equals 1."""
    c = as_coords(raw)
    mods = [abs(v) for v in c]
    top = max(mods)
    if not top >= eps_zero:  # also catches NaN
        return ZeroVector()
    chart = mods.index(top)
    pivot = c[chart]
    out = []
    for i, v in enumerate(c):
        if i == chart:
            out.append(1 + 0j)
            continue
        w = v if pivot == 1 else v / pivot
        # keep the chart stable under re-normalization despite rounding
        while (abs(w) >= 1.0) if i < chart else (abs(w) > 1.0):
            w = complex(w.real * _SHRINK, w.imag * _SHRINK)
        out.append(w)
    return ProjPoint(tuple(out), chart)  # type: ignore[arg-type]


def proj_distance(p: Coords, q: Coords) -> float:
    """Chordal Fubini-Study distance, ``sin`` of the angle between the lines.

    Computed through the Lagrange identity so that nearby points keep full
    relative accuracy.
    """
    a = as_coords(p)
    b = as_coords(q)
    na = math.sqrt(sum(abs(v) ** 2 for v in a))
    nb = math.sqrt(sum(abs(v) ** 2 for v in b))
    if na == 0.0 or nb == 0.0:
        raise ValueError("zero vector has no projective class")
    a = [v / na for v in a]
    b = [v / nb for v in b]
    acc = 0.0
    for i in range(4):
        for j in range(i + 1, 4):
            acc += abs(a[i] * b[j] - a[j] * b[i]) ** 2
    return min(1.0, math.sqrt(acc))


def proj_equal(p: Coords, q: Coords, eps: float = EPS_PROJ) -> bool:
    return proj_distance(p, q) < eps


Monomial = tuple[int, int]


@dataclass(frozen=True)
class HomogMap:
    """Four homogeneous quadratic forms, each a ``{(i, j): coeff}`` table (i <= j)."""

    components: tuple[tuple[tuple[Monomial, complex], ...], ...]
    name: str = ""
    _tensor: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.components) != 4:
            raise ValueError("a map on P^3 needs four components")
        t = np.zeros((4, 4, 4), dtype=complex)
        for k, comp in enumerate(self.components):
            for (i, j), c in comp:
                if not (0 <= i <= j <= 3):
                    raise ValueError(f"bad monomial index {(i, j)}")
                t[k, i, j] += c
        t.setflags(write=False)
        object.__setattr__(self, "_tensor", t)

    @classmethod
    def from_tables(cls, tables: Iterable[Mapping[Monomial, complex]], name: str = "") -> "HomogMap":
        comps = tuple(tuple(sorted((tuple(sorted(m)), complex(c)) for m, c in t.items())) for t in tables)
        return cls(comps, name)  # type: ignore[arg-type]

    @property
    def degree(self) -> int:
        return 2

    def lift(self, z: Coords) -> tuple[complex, complex, complex, complex]:
        c = as_coords(z)
        out = []
        for comp in self.components:
            out.append(sum((coef * c[i] * c[j] for (i, j), coef in comp), 0j))
        return tuple(out)  # type: ignore[return-value]

    def lift_array(self, z: np.ndarray) -> np.ndarray:
        """Vectorized lift; ``z`` has shape (4, ...)."""
        return np.einsum("kij,i...,j...->k...", self._tensor, z, z)


def apply_homog(m: HomogMap, p: Coords, eps_zero: float = EPS_ZERO) -> ProjPoint | IndeterminatePoint:
    """Image of ``p`` under ``m``, evaluated on the chart representative of ``p``."""
    q = p if isinstance(p, ProjPoint) else normalize(p, eps_zero)
    if isinstance(q, ZeroVector):
        raise ValueError("cannot map the zero vector")
    img = normalize(m.lift(q), eps_zero)
    if isinstance(img, ZeroVector):
        return IndeterminatePoint(1, q)
    return img


def orbit(m: HomogMap, p: Coords, n: int, eps_zero: float = EPS_ZERO) -> list[ProjPoint | IndeterminatePoint]:
    """The first ``n`` iterates ``m(p), m^2(p), ...``, renormalized at each step."""
    if n < 0:
        raise ValueError("n must be >= 0")
    out: list[ProjPoint | IndeterminatePoint] = []
    cur = p if isinstance(p, ProjPoint) else normalize(p, eps_zero)
    if isinstance(cur, ZeroVector):
        raise ValueError("cannot iterate the zero vector")
    for k in range(1, n + 1):
        nxt = apply_homog(m, cur, eps_zero)
        if isinstance(nxt, IndeterminatePoint):
            out.append(IndeterminatePoint(k, cur))
            out.extend(IndeterminatePoint(j) for j in range(k + 1, n + 1))
            break
        out.append(nxt)
        cur = nxt
    return out


def normalize_array(z: np.ndarray) -> np.ndarray:
    """Vectorized chart normalization of a (4, ...) array; zero columns become NaN."""
    mods = np.abs(z)
    chart = np.argmax(mods, axis=0)
    pivot = np.take_along_axis(z, chart[None, ...], axis=0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = z / pivot
    out[:, (np.max(mods, axis=0) < EPS_ZERO)] = np.nan
    return out


def random_points(rng: np.random.Generator, count: int) -> np.ndarray:
    """``count`` points with i.i.d. standard complex Gaussian coordinates, shape (count, 4)."""
    return rng.standard_normal((count, 4)) + 1j * rng.standard_normal((count, 4))


def iterate_lift_scaled(
    fn: Callable[[Sequence[complex]], Sequence[complex]], z: Coords, n: int
) -> tuple[tuple[complex, complex, complex, complex], float]:
    """``n`` applications of a quadratic lift, returning ``(v, log_scale)`` with
    ``fn^n(z) = v * exp(log_scale)``; ``v`` is rescaled by powers of two."""
    v = as_coords(z)
    ls = 0.0
    for _ in range(n):
        v = tuple(complex(x) for x in fn(v))  # type: ignore[assignment]
        ls *= 2.0
        m = max(abs(x) for x in v)
        if m == 0:
            return v, 0.0
        _, e = math.frexp(m)
        v = tuple(complex(math.ldexp(x.real, -e), math.ldexp(x.imag, -e)) for x in v)  # type: ignore[assignment]
        ls += e * math.log(2.0)
    return v, ls
