"""Acceptance criteria, one test each, at the stated sample counts and tolerances.

Every test records a ``PASS``/``FAIL`` line that is printed in the terminal
summary (and to stdout, visible with ``-s``).
"""

import io
import time

from conftest import ACCEPTANCE_LINES
from specdyn import render
from specdyn.checks import run_check
from specdyn.plane import PlaneSpec

SEED = 0


def record(k: int, title: str, results, budget: float | None = None, extra_ok: bool = True, extra: str = ""):
    seconds = sum(r.seconds for r in results)
    ok = all(r.passed for r in results) and extra_ok and (budget is None or seconds < budget)
    detail = "; ".join(f"{r.name} worst={r.worst:.2e} tol={r.tol:.0e}" + (f" ({r.note})" if r.note else "") for r in results)
    timing = f"{seconds:.2f}s" + (f" < {budget:g}s" if budget is not None else "")
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {title} [{timing}] {detail}{extra}"
    ACCEPTANCE_LINES[k] = line
    print(line)
    assert ok, line


def checks(*spec):
    return [run_check(suite, index, SEED) for suite, index in spec]


def test_criterion_01_semiconjugacy():
    record(1, "tau(F(z)) = T(tau(z)) on 1e4 points", checks(("dihedral", 0)), budget=1.0)


def test_criterion_02_dihedral_det_recursion():
    record(2, "dihedral determinant chain, n = 1..5", checks(("dihedral", 8)), budget=30.0)


def test_criterion_03_lamplighter_det_recursion():
    record(3, "lamplighter determinant chain, n = 1..5", checks(("lamplighter", 1)), budget=30.0)


def test_criterion_04_closed_iterates():
    record(4, "Fn_closed against iteration, n <= 6", checks(("dihedral", 4)))


def test_criterion_05_indeterminacy():
    record(5, "extended indeterminacy families", checks(("dihedral", 2)))


def test_criterion_06_classifier_oracle():
    record(6, "classify against symbol grid minimum", checks(("dihedral", 3)))


def test_criterion_07_f_series():
    record(7, "f-series partial sums and limit", checks(("dihedral", 5), ("dihedral", 6)))


def test_criterion_08_chebyshev():
    record(8, "chebyshev suite", checks(*[("chebyshev", i) for i in range(6)]))


def test_criterion_09_g_machinery():
    record(9, "G closed form, delta recursion, lift exponents", checks(("lamplighter", 0), ("lamplighter", 3), ("lamplighter", 4)))


def test_criterion_10_witnesses():
    record(10, "[1:3:0:-2] and constructed E points", checks(("lamplighter", 6)))


class _Timed:
    def __init__(self, name, seconds, passed, note):
        self.name, self.seconds, self.passed, self.note = name, seconds, passed, note
        self.worst, self.tol = 0.0, 0.0


def test_criterion_11_render_determinism():
    plane = PlaneSpec((0, 0, 1, 0), (1, 0, 0, 0), (0, 1, 0, 0), (-3, 3), (-3, 3), (256, 256))
    t0 = time.perf_counter()
    blobs = {}
    for w in (1, 4, 8):
        buf = io.BytesIO()
        render.write_pgm(render.render("dihedral", plane, workers=w), buf)
        blobs[w] = buf.getvalue()
    seconds = time.perf_counter() - t0
    same = blobs[1] == blobs[4] == blobs[8]
    res = _Timed("render.pgm_1_4_8_workers", seconds, same, "byte-identical" if same else "bytes differ")
    record(11, "256x256 dihedral PGM across 1, 4, 8 workers", [res], budget=10.0)

