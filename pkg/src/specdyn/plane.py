"""Real two-parameter slices ``z(s, t) = base + s*u + t*v`` of P^3."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_RESOLUTION = 16384


@dataclass(frozen=True)
class PlaneSpec:
    base: tuple[complex, complex, complex, complex]
    dir_u: tuple[complex, complex, complex, complex]
    dir_v: tuple[complex, complex, complex, complex]
    s_range: tuple[float, float] = (-1.0, 1.0)
    t_range: tuple[float, float] = (-1.0, 1.0)
    resolution: tuple[int, int] = (256, 256)  # (width, height)

    def __post_init__(self):
        for name in ("base", "dir_u", "dir_v"):
            v = tuple(complex(x) for x in getattr(self, name))
            if len(v) != 4:
                raise ValueError(f"{name} needs 4 coordinates")
            object.__setattr__(self, name, v)
        if not any(self.dir_u) and not any(self.dir_v):
            raise ValueError("dir_u and dir_v are both zero")
        w, h = (int(x) for x in self.resolution)
        if not (1 <= w <= MAX_RESOLUTION and 1 <= h <= MAX_RESOLUTION):
            raise ValueError(f"resolution must be within 1..{MAX_RESOLUTION} per axis")
        object.__setattr__(self, "resolution", (w, h))
        object.__setattr__(self, "s_range", tuple(float(x) for x in self.s_range))
        object.__setattr__(self, "t_range", tuple(float(x) for x in self.t_range))

    @property
    def width(self) -> int:
        return self.resolution[0]

    @property
    def height(self) -> int:
        return self.resolution[1]

    def s_values(self) -> np.ndarray:
        return np.linspace(self.s_range[0], self.s_range[1], self.width)

    def t_values(self) -> np.ndarray:
        """Row 0 is the top of the image, i.e. the largest t."""
        return np.linspace(self.t_range[1], self.t_range[0], self.height)

    def points(self, rows: slice = slice(None)) -> np.ndarray:
        """Raw lifts for the selected image rows, shape (4, nrows, width)."""
        s = self.s_values()[None, :]
        t = self.t_values()[rows][:, None]
        b, u, v = (np.array(x, dtype=complex)[:, None, None] for x in (self.base, self.dir_u, self.dir_v))
        return b + s[None] * u + t[None] * v

    def point(self, row: int, col: int) -> tuple[complex, complex, complex, complex]:
        z = self.points(slice(row, row + 1))[:, 0, col]
        return tuple(complex(x) for x in z)  # type: ignore[return-value]
