"""Matplotlib figures for rendered slices and conjecture explorations."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.patches import Patch  # noqa: E402

from .plane import PlaneSpec  # noqa: E402
from .render import PALETTES, RenderOutput, to_rgb  # noqa: E402

STYLE = {
    "font.size": 9,
    "axes.labelsize": 9,
    "legend.fontsize": 7,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "savefig.dpi": 150,
}


def _extent(plane: PlaneSpec):
    return (*plane.s_range, *plane.t_range)


def render_figure(out: RenderOutput, path: str) -> None:
    """Verdict map next to the scalar channel, both in (s, t) coordinates."""
    names = out.tag_names()
    with plt.rc_context(STYLE):
        fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9, 4), constrained_layout=True)
        ax0.imshow(to_rgb(out), extent=_extent(out.plane), origin="upper", interpolation="nearest")
        ax0.set_title(f"{out.group} verdicts")
        present = set(np.unique(out.codes).tolist())
        handles = [
            Patch(color=np.array(rgb) / 255.0, label=names[code])
            for code, rgb in PALETTES[out.group].items()
            if code in present
        ]
        if handles:
            ax0.legend(handles=handles, loc="upper right", framealpha=0.8)
        data = np.ma.masked_invalid(out.scalar)
        im = ax1.imshow(data, extent=_extent(out.plane), origin="upper", cmap="viridis", interpolation="nearest")
        ax1.set_title(out.channel)
        fig.colorbar(im, ax=ax1, shrink=0.85)
        for ax in (ax0, ax1):
            ax.set_xlabel("s")
            ax.set_ylabel("t")
        fig.savefig(path)
        plt.close(fig)


def explore_figure(rows: list[dict], plane: PlaneSpec, level: int, path: str) -> None:
    """log10 of sigma_min over the slice, with certified members marked."""
    w, h = plane.width, plane.height
    sig = np.full((h, w), np.nan)
    member = np.zeros((h, w), dtype=bool)
    s_index = {float(s): j for j, s in enumerate(plane.s_values())}
    t_index = {float(t): i for i, t in enumerate(plane.t_values())}
    for r in rows:
        i, j = t_index[r["t"]], s_index[r["s"]]
        sig[i, j] = r["sigma_min"]
        member[i, j] = r["lower_member"]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 4), constrained_layout=True)
        with np.errstate(divide="ignore"):
            im = ax.imshow(
                np.ma.masked_invalid(np.log10(sig)),
                extent=_extent(plane),
                origin="upper",
                cmap="magma",
                interpolation="nearest",
            )
        fig.colorbar(im, ax=ax, label=r"$\log_{10}\sigma_{\min}$")
        ii, jj = np.nonzero(member)
        if ii.size:
            ax.scatter(plane.s_values()[jj], plane.t_values()[ii], s=6, c="cyan", marker="s", label="certified member")
            ax.legend(loc="upper right")
        ax.set_title(f"level {level} pencil")
        ax.set_xlabel("s")
        ax.set_ylabel("t")
        fig.savefig(path)
        plt.close(fig)
