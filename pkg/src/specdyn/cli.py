"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 I/O error.  Negative values must be attached with ``=``, for example
``--rpoint=-1,2,0,1``.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Sequence

from . import __version__, checks, cheb, dihedral, lamplighter, render, selfsim
from .plane import PlaneSpec
from .projgeom import IndeterminatePoint, PencilPoint, ProjPoint, normalize, orbit

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3
RNG_NAME = "numpy PCG64"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- parsing helpers


def _floats(text: str, what: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{what}: expected comma-separated numbers, got {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise UsageError(f"{what}: values must be finite")
    return vals


def _quad(text: str, what: str) -> tuple[complex, ...]:
    """4 reals or 8 interleaved re/im reals."""
    vals = _floats(text, what)
    try:
        return tuple(PencilPoint.from_reals(vals))
    except ValueError as e:
        raise UsageError(f"{what}: {e}") from None


def _point(args) -> tuple[complex, ...]:
    if (args.point is None) == (args.rpoint is None):
        raise UsageError("give exactly one of --point or --rpoint")
    z = _quad(args.point, "--point") if args.point is not None else _quad(args.rpoint, "--rpoint")
    if all(c == 0 for c in z):
        raise UsageError("the zero vector is not a point of P^3")
    return z


def _range(text: str, what: str) -> tuple[float, float]:
    v = _floats(text, what)
    if len(v) != 2 or not v[0] < v[1]:
        raise UsageError(f"{what}: expected lo,hi with lo < hi")
    return v[0], v[1]


def _size(text: str) -> tuple[int, int]:
    try:
        w, h = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise UsageError(f"--size: expected WIDTHxHEIGHT, got {text!r}") from None
    return w, h


def _plane(args) -> PlaneSpec:
    try:
        return PlaneSpec(
            _quad(args.base, "--base"),
            _quad(args.u, "--u"),
            _quad(args.v, "--v"),
            _range(args.s_range, "--s-range"),
            _range(args.t_range, "--t-range"),
            _size(args.size),
        )
    except ValueError as e:
        raise UsageError(str(e)) from None


def _tol(args) -> render.Tolerances:
    if args.gamma_nmax < 1:
        raise UsageError("--gamma-nmax must be >= 1")
    for name in ("eps_band", "eps_e", "eps_gamma"):
        if not getattr(args, name) >= 0:
            raise UsageError(f"--{name.replace('_', '-')} must be >= 0")
    return render.Tolerances(args.eps_e, args.eps_band, args.eps_gamma, args.gamma_nmax)


def _num(x):
    """JSON-safe real: non-finite values become strings."""
    x = float(x)
    return x if math.isfinite(x) else str(x)


def _cnum(z) -> list:
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def _point_text(coords) -> str:
    return ",".join(f"{v!r}" for c in coords for v in (c.real, c.imag))


def _emit(obj) -> None:
    print(json.dumps(obj, allow_nan=False))


# ---------------------------------------------------------------- commands


def cmd_verify(args) -> int:
    print(f"suite={args.suite} seed={args.seed} rng={RNG_NAME} samples={args.samples or 'default'}")
    failed = 0
    total = 0
    for name in checks.SUITES if args.suite == "all" else (args.suite,):
        for i in range(len(checks.SUITE_CHECKS[name])):
            res = checks.run_check(name, i, args.seed, args.samples)
            print(res.line(), flush=True)
            failed += not res.passed
            total += 1
    print(f"{total - failed}/{total} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def _classify_dihedral(z, tol: render.Tolerances) -> dict:
    v = dihedral.classify(z, tol.eps_e, tol.eps_band)
    r1, r2 = dihedral.quadric_residuals(z)
    t = v.tau.value if isinstance(v.tau, dihedral.TauSpecial) else _cnum(v.tau)
    return {
        "group": "dihedral",
        "verdict": v.tag.value,
        "tau": t,
        "margin": _num(v.margin),
        "residuals": {"z0z3-z1z2": r1, "z0^2+z3^2-z1^2-z2^2": r2},
        "indeterminacy": dihedral.indeterminacy_level(z, tol.eps_e).value,
        "tolerances": {"eps_e": tol.eps_e, "eps_band": tol.eps_band},
    }


def _classify_lamp(z, tol: render.Tolerances) -> dict:
    kw = dict(eps_e=tol.eps_e, eps_band=tol.eps_band, eps_gamma=tol.eps_gamma)
    v = lamplighter.classify_E(z, tol.gamma_nmax, **kw)
    in_l = lamplighter.in_hyperplane_L(z, tol.eps_e)
    return {
        "group": "lamplighter",
        "verdict": v.tag.value,
        "in_L": in_l,
        "lower_member": in_l or v.tag is not lamplighter.Tag.NOT_DETECTED,
        "gamma_index": v.index,
        "residual": _num(v.residual),
        "tau2": None if v.tau2 is None else _cnum(v.tau2),
        "critical_residual": _num(lamplighter.critical_residual(z)),
        "tolerances": tol.as_dict(),
    }


def cmd_classify(args) -> int:
    z = _point(args)
    tol = _tol(args)
    _emit(_classify_dihedral(z, tol) if args.group == "dihedral" else _classify_lamp(z, tol))
    return EXIT_OK


def _orbit_rows(group: str, z, n: int, tol: render.Tolerances) -> list[dict]:
    rows = []
    if group == "dihedral":
        for k, p in enumerate(orbit(dihedral.F_MAP, z, n), start=1):
            if isinstance(p, IndeterminatePoint):
                rows.append({"step": k, "indeterminate": True, "point": None, "tau": None})
                continue
            t = dihedral.tau(p, tol.eps_e)
            rows.append(
                {
                    "step": k,
                    "indeterminate": False,
                    "point": p.coords,
                    "tau": t.value if isinstance(t, dihedral.TauSpecial) else _cnum(t),
                }
            )
        return rows
    cur = normalize(z)
    stopped = False
    for k in range(1, n + 1):
        nxt = None if stopped else lamplighter.Q_lamp(cur, tol.eps_e)
        if nxt is None or isinstance(nxt, lamplighter.PoleFlag):
            stopped = True
            rows.append({"step": k, "indeterminate": True, "point": None, "delta": None})
            continue
        cur = nxt
        rows.append({"step": k, "indeterminate": False, "point": cur.coords, "delta": _cnum(cur[0] - cur[1])})
    return rows


def cmd_orbit(args) -> int:
    z = _point(args)
    tol = _tol(args)
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    rows = _orbit_rows(args.group, z, args.n, tol)
    side = "tau" if args.group == "dihedral" else "delta"
    if args.format == "json":
        for r in rows:
            out = dict(r)
            out["point"] = None if r["point"] is None else _point_text(r["point"])
            _emit(out)
    else:
        w = csv.writer(sys.stdout, lineterminator="\n")
        w.writerow(["step", "indeterminate", "z0re", "z0im", "z1re", "z1im", "z2re", "z2im", "z3re", "z3im", f"{side}re", f"{side}im"])
        for r in rows:
            coords = ["" for _ in range(8)] if r["point"] is None else _point_text(r["point"]).split(",")
            s = r[side]
            sv = ["", ""] if s is None else ([s, ""] if isinstance(s, str) else [repr(s[0]), repr(s[1])])
            w.writerow([r["step"], str(r["indeterminate"]).lower(), *coords, *sv])
    return EXIT_OK


def _fmt_det(d) -> str:
    if isinstance(d, selfsim.SingularFlag):
        return f"singular (min pivot {d.min_pivot:.3e}, scale {d.scale:.3e})"
    if d.is_zero:
        return "0"
    lg = d.log()
    return f"log|det| = {lg.real:.15g}, arg = {lg.imag:.15g}"


def cmd_detcheck(args) -> int:
    z = _point(args)
    if not 0 <= args.level <= selfsim.N_MAX - 1:
        raise UsageError(f"--level must be within 0..{selfsim.N_MAX - 1}")
    c = checks.det_chain(args.group, z, args.level)
    n = args.level
    print(f"group={args.group} level={n} point={_point_text(z)}")
    rows = [
        (f"level {n + 1} pencil at z", _fmt_det(c.high)),
        (f"level {n} pencil at F(z)", _fmt_det(c.low)),
        (f"level 0 scalar at F^{n + 1}(z)", _fmt_det(c.scalar)),
        (f"deviation (level {n + 1} vs {n})", f"{c.dev_low:.3e}"),
        (f"deviation (level {n + 1} vs 0)", f"{c.dev_scalar:.3e}"),
    ]
    width = max(len(k) for k, _ in rows) + 2
    for k, v in rows:
        print(f"{k + ':':<{width}}{v}")
    if isinstance(c.high, selfsim.SingularFlag) and isinstance(c.low, selfsim.SingularFlag):
        print("both sides singular: agreement")
    return EXIT_OK


def cmd_render(args) -> int:
    plane = _plane(args)
    tol = _tol(args)
    if args.workers < 1:
        raise UsageError("--workers must be >= 1")
    try:
        out = render.render(args.group, plane, args.channel, args.workers, tol, args.level, args.mark_l)
    except (ValueError, selfsim.LevelTooLarge) as e:
        raise UsageError(str(e)) from None
    fmt = args.format or args.out.rsplit(".", 1)[-1].lower()
    if fmt not in render.WRITERS:
        raise UsageError(f"unknown format {fmt!r}; use pgm, ppm or csv")
    _write(lambda: render.save(out, args.out, fmt), args.out)
    if args.figure:
        from . import plotting

        _write(lambda: plotting.render_figure(out, args.figure), args.figure)
    _emit({"out": args.out, "format": fmt, "channel": out.channel, "counts": out.counts(), "tolerances": tol.as_dict()})
    return EXIT_OK


def cmd_zeros(args) -> int:
    if not 1 <= args.n <= 10_000:
        raise UsageError("--n must be within 1..10000")
    for x in cheb.U_zeros(args.n):
        print(format(x, ".17g"))
    return EXIT_OK


def cmd_explore(args) -> int:
    plane = _plane(args)
    tol = _tol(args)
    kw = dict(eps_e=tol.eps_e, eps_band=tol.eps_band, eps_gamma=tol.eps_gamma)
    try:
        rows = lamplighter.explore_conjecture(plane, args.level, tol.gamma_nmax, **kw)
    except selfsim.LevelTooLarge as e:
        raise UsageError(str(e)) from None

    def write():
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            lamplighter.write_exploration_csv(rows, fh)

    _write(write, args.out)
    if args.figure:
        from . import plotting

        _write(lambda: plotting.explore_figure(rows, plane, args.level, args.figure), args.figure)
    members = sum(r["lower_member"] for r in rows)
    _emit({"out": args.out, "rows": len(rows), "lower_members": members, "level": args.level, "tolerances": tol.as_dict()})
    return EXIT_OK


def cmd_matrix(args) -> int:
    spec = selfsim.DIHEDRAL if args.group == "dihedral" else selfsim.LAMPLIGHTER
    try:
        if args.word is not None:
            m = selfsim.level_matrix(spec, args.word, args.level)
        else:
            z = _point(args)
            template = checks.GROUP_DATA[args.group][1]
            m = selfsim.pencil_matrix(spec, selfsim.template_terms(template, z), args.level)
    except (KeyError, ValueError) as e:
        raise UsageError(str(e)) from None
    if args.out is None:
        selfsim.write_matrix_csv(m, sys.stdout)
    else:

        def write():
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                selfsim.write_matrix_csv(m, fh)

        _write(write, args.out)
    return EXIT_OK


class IOFailure(Exception):
    pass


def _write(fn, path: str) -> None:
    try:
        fn()
    except OSError as e:
        raise IOFailure(f"{path}: {e.strerror or e}") from None


# ---------------------------------------------------------------- parser


def _add_point(p) -> None:
    p.add_argument("--point", help="re0,im0,re1,im1,re2,im2,re3,im3")
    p.add_argument("--rpoint", help="real point a,b,c,d")


def _add_group(p) -> None:
    p.add_argument("--group", choices=("dihedral", "lamplighter"), required=True)


def _add_plane(p) -> None:
    p.add_argument("--base", required=True, help="4 or 8 reals")
    p.add_argument("--u", required=True, help="first direction, 4 or 8 reals")
    p.add_argument("--v", required=True, help="second direction, 4 or 8 reals")
    p.add_argument("--s-range", default="-1,1")
    p.add_argument("--t-range", default="-1,1")
    p.add_argument("--size", default="256x256", help="WIDTHxHEIGHT")


def build_parser() -> argparse.ArgumentParser:
    tol = argparse.ArgumentParser(add_help=False)
    g = tol.add_argument_group("tolerances")
    g.add_argument("--eps-band", type=float, default=cheb.EPS_BAND)
    g.add_argument("--eps-e", type=float, default=dihedral.EPS_E)
    g.add_argument("--gamma-nmax", type=int, default=lamplighter.N_MAX)
    g.add_argument("--eps-gamma", type=float, default=lamplighter.EPS_GAMMA)

    ap = argparse.ArgumentParser(prog="specdyn", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run randomized invariant suites")
    p.add_argument("--suite", choices=(*checks.SUITES, "all"), default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None, help="override per-check sample counts")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("classify", parents=[tol], help="classify one point")
    _add_group(p)
    _add_point(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("orbit", parents=[tol], help="iterate the rational map")
    _add_group(p)
    _add_point(p)
    p.add_argument("--n", type=int, default=5)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(fn=cmd_orbit)

    p = sub.add_parser("detcheck", help="compare pencil determinants across levels")
    _add_group(p)
    _add_point(p)
    p.add_argument("--level", type=int, default=3)
    p.set_defaults(fn=cmd_detcheck)

    p = sub.add_parser("render", parents=[tol], help="classify a planar slice into an image or CSV")
    _add_group(p)
    _add_plane(p)
    p.add_argument("--channel", default=None, help="margin, residual or sigma")
    p.add_argument("--level", type=int, default=3, help="pencil level for the sigma channel")
    p.add_argument("--format", choices=tuple(render.WRITERS), default=None, help="default: from --out suffix")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--mark-l", action="store_true", help="recolour undetected points of L (lamplighter)")
    p.add_argument("--figure", default=None, help="also save a matplotlib PNG")
    p.set_defaults(fn=cmd_render)

    p = sub.add_parser("zeros", help="zeros of U_n, one per line")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_zeros)

    p = sub.add_parser("explore", parents=[tol], help="sigma_min of the lamplighter pencil over a slice")
    _add_plane(p)
    p.add_argument("--level", type=int, default=4)
    p.add_argument("--out", required=True)
    p.add_argument("--figure", default=None, help="also save a matplotlib PNG")
    p.set_defaults(fn=cmd_explore, size="32x32")

    p = sub.add_parser("matrix", help="export a level matrix or pencil as CSV")
    _add_group(p)
    _add_point(p)
    p.add_argument("--word", default=None, help="group word, e.g. 'a^-1 b'")
    p.add_argument("--level", type=int, default=2)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_matrix)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args)
    except UsageError as e:
        print(f"{ap.prog} {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except IOFailure as e:
        print(f"{ap.prog} {args.command}: I/O error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
