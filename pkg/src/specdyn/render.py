"""Pixel-grid classification of planar slices and PGM/PPM/CSV writers.

Rows are cut into fixed-size chunks independent of the worker count, each
chunk is a pure function of the plane and the tolerances, and the chunks
are reassembled in order, so the output does not depend on scheduling.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import BinaryIO, TextIO

import numpy as np

from . import dihedral, lamplighter, selfsim
from .plane import PlaneSpec
from .projgeom import normalize_array

CHUNK_ROWS = 16
GROUPS = ("dihedral", "lamplighter")
CHANNELS = {
    "dihedral": ("margin", "residual", "sigma"),
    "lamplighter": ("residual", "sigma"),
}

DIHEDRAL_TAGS = [t.value for t in sorted(dihedral.Tag, key=lambda t: t.code)]
LAMPLIGHTER_TAGS = [t.value for t in sorted(lamplighter.Tag, key=lambda t: t.code)]

# fixed RGB per verdict code
PALETTES = {
    "dihedral": {
        0: (24, 24, 48),  # Resolvent
        1: (240, 200, 60),  # SpectrumBand
        2: (220, 40, 40),  # ExtendedIndeterminacy
    },
    "lamplighter": {
        0: (24, 24, 48),  # NotDetected
        1: (220, 40, 40),  # CriticalVariety
        2: (240, 200, 60),  # Band
        3: (60, 180, 240),  # GammaCurve
        4: (120, 220, 120),  # HyperplaneL
    },
}
UNDEFINED_RGB = (255, 255, 255)  # pixel whose lift is the zero vector


@dataclass(frozen=True)
class Tolerances:
    eps_e: float = dihedral.EPS_E
    eps_band: float = dihedral.EPS_BAND
    eps_gamma: float = lamplighter.EPS_GAMMA
    gamma_nmax: int = lamplighter.N_MAX

    def as_dict(self) -> dict:
        return {
            "eps_e": self.eps_e,
            "eps_band": self.eps_band,
            "eps_gamma": self.eps_gamma,
            "gamma_nmax": self.gamma_nmax,
        }


@dataclass(frozen=True)
class RenderOutput:
    group: str
    channel: str
    plane: PlaneSpec
    codes: np.ndarray = field(repr=False)  # uint8 (height, width); 255 = undefined pixel
    scalar: np.ndarray = field(repr=False)  # float64 (height, width)

    def tag_names(self) -> list[str]:
        return DIHEDRAL_TAGS if self.group == "dihedral" else LAMPLIGHTER_TAGS

    def counts(self) -> dict[str, int]:
        names = self.tag_names()
        vals, cnt = np.unique(self.codes, return_counts=True)
        return {(names[v] if v < len(names) else "Undefined"): int(c) for v, c in zip(vals, cnt)}


def _sigma(group: str, z: np.ndarray, level: int) -> np.ndarray:
    spec, template = (
        (selfsim.DIHEDRAL, selfsim.DIHEDRAL_TEMPLATE)
        if group == "dihedral"
        else (selfsim.LAMPLIGHTER, selfsim.LAMPLIGHTER_TEMPLATE)
    )
    out = np.full(z.shape[1:], np.nan)
    for idx in np.ndindex(*z.shape[1:]):
        c = z[(slice(None), *idx)]
        if np.all(np.isfinite(c)):
            m = selfsim.pencil_matrix(spec, selfsim.template_terms(template, c.tolist()), level)
            out[idx] = selfsim.min_singular(m)
    return out


def _chunk(group: str, channel: str, plane: PlaneSpec, rows: slice, tol: Tolerances, level: int, mark_l: bool):
    z = normalize_array(plane.points(rows))
    bad = ~np.all(np.isfinite(z), axis=0)
    zz = np.where(bad[None], 0, z)
    if group == "dihedral":
        codes, _, margin, res = dihedral.classify_array(zz, tol.eps_e, tol.eps_band)
        if channel == "margin":
            scalar = np.log1p(margin)
        elif channel == "residual":
            scalar = res
        else:
            scalar = _sigma(group, z, level)
    else:
        codes, _, res, _ = lamplighter.classify_E_array(zz, tol.gamma_nmax, tol.eps_e, tol.eps_band, tol.eps_gamma)
        if mark_l:
            z0, z1, z2, z3 = zz
            in_l = np.abs(z0 + z1 + 2 * z2 + 2 * z3) < tol.eps_e
            undetected = codes == lamplighter.Tag.NOT_DETECTED.code
            codes = np.where(undetected & in_l, lamplighter.Tag.HYPERPLANE_L.code, codes)
        scalar = res if channel == "residual" else _sigma(group, z, level)
    codes = np.where(bad, 255, codes).astype(np.uint8)
    scalar = np.where(bad, np.nan, scalar).astype(np.float64)
    return codes, scalar


def render(
    group: str,
    plane: PlaneSpec,
    channel: str | None = None,
    workers: int = 1,
    tol: Tolerances = Tolerances(),
    level: int = 3,
    mark_l: bool = False,
) -> RenderOutput:
    """Classify every pixel of ``plane`` and evaluate the scalar channel.

    ``sigma`` is the smallest singular value of the level-``level`` pencil;
    ``margin`` is ``log1p`` of the distance of tau to [-1, 1]; ``residual``
    is the E residual (dihedral) or the smallest Gamma residual (lamplighter).
    Lamplighter pixels carry the E verdict; with ``mark_l`` undetected points
    of the hyperplane L are recoloured HyperplaneL.
    """
    if group not in GROUPS:
        raise ValueError(f"unknown group {group!r}")
    channel = channel or CHANNELS[group][0]
    if channel not in CHANNELS[group]:
        raise ValueError(f"channel {channel!r} not available for {group}")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if channel == "sigma" and level > selfsim.N_MAX:
        raise selfsim.LevelTooLarge(f"level {level} exceeds n_max={selfsim.N_MAX}")
    h = plane.height
    chunks = [slice(r, min(r + CHUNK_ROWS, h)) for r in range(0, h, CHUNK_ROWS)]

    def job(rows):
        return _chunk(group, channel, plane, rows, tol, level, mark_l)

    if workers == 1:
        parts = [job(c) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(job, chunks))
    codes = np.concatenate([p[0] for p in parts], axis=0)
    scalar = np.concatenate([p[1] for p in parts], axis=0)
    return RenderOutput(group, channel, plane, codes, scalar)


def to_gray(scalar: np.ndarray) -> np.ndarray:
    """Min-max scale finite values to 0..255; non-finite pixels become 255."""
    finite = np.isfinite(scalar)
    out = np.full(scalar.shape, 255, dtype=np.uint8)
    if not finite.any():
        return out
    lo, hi = float(scalar[finite].min()), float(scalar[finite].max())
    if hi > lo:
        out[finite] = np.rint((scalar[finite] - lo) / (hi - lo) * 255.0).astype(np.uint8)
    else:
        out[finite] = 0
    return out


def to_rgb(out: RenderOutput) -> np.ndarray:
    lut = np.zeros((256, 3), dtype=np.uint8)
    lut[:] = UNDEFINED_RGB
    for code, rgb in PALETTES[out.group].items():
        lut[code] = rgb
    return lut[out.codes]


def write_pgm(out: RenderOutput, fh: BinaryIO) -> None:
    g = to_gray(out.scalar)
    fh.write(b"P5\n%d %d\n255\n" % (g.shape[1], g.shape[0]))
    fh.write(np.ascontiguousarray(g).tobytes())


def write_ppm(out: RenderOutput, fh: BinaryIO) -> None:
    rgb = to_rgb(out)
    fh.write(b"P6\n%d %d\n255\n" % (rgb.shape[1], rgb.shape[0]))
    fh.write(np.ascontiguousarray(rgb).tobytes())


CSV_HEADER = ["row", "col", "s", "t", "code", "verdict"]  # then the channel name


def write_csv(out: RenderOutput, fh: TextIO) -> None:
    names = out.tag_names()
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_HEADER + [out.channel])
    svals, tvals = out.plane.s_values(), out.plane.t_values()
    for i, t in enumerate(tvals.tolist()):
        for j, s in enumerate(svals.tolist()):
            code = int(out.codes[i, j])
            w.writerow([i, j, repr(s), repr(t), code, names[code] if code < len(names) else "Undefined", repr(float(out.scalar[i, j]))])


WRITERS = {"pgm": ("wb", write_pgm), "ppm": ("wb", write_ppm), "csv": ("w", write_csv)}


def save(out: RenderOutput, path: str, fmt: str) -> None:
    mode, fn = WRITERS[fmt]
    kw = {"encoding": "utf-8", "newline": ""} if mode == "w" else {}
    with open(path, mode, **kw) as fh:
        fn(out, fh)
