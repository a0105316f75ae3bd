"""Wreath recursions on the binary tree and their level-n matrices.

A recursion is written one generator per line::

    a = (a, b) s      # sections (a, b), then swap the two subtrees
    b = (a, b)
    t = e             # identity
    x = s             # bare swap

Level-n matrices are 2^n x 2^n permutation matrices built by the block
recursion ``g_n = diag(M(g_0), M(g_1))`` or, with a swap,
``[[0, M(g_0)], [M(g_1), 0]]``.
"""

from __future__ import annotations

import io
import re
import threading
import warnings
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence, TextIO, Union

import numpy as np
import scipy.linalg

from .cheb import ScaledValue, rel_deviation

N_MAX = 12
EPS_PIVOT = 1e-12
IDENTITY = "e"
SWAP = "s"
INV = "^-1"


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {msg}")
        self.line = line
        self.col = col


class ValidationError(ValueError):
    pass


class LevelTooLarge(ValueError):
    pass


class CommutationError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    sections: tuple[str, str]
    swap: bool


@dataclass(frozen=True)
class WreathSpec:
    """Generator table closed under sections and inverses.

    Inverse generators are stored under ``name + "^-1"``.
    """

    table: tuple[tuple[str, Generator], ...]
    names: tuple[str, ...]  # generators as written, without inverses
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, compare=False, hash=False, repr=False)

    def __getitem__(self, name: str) -> Generator:
        for k, g in self.table:
            if k == name:
                return g
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(k == name for k, _ in self.table)

    def permutations(self, n: int) -> dict[str, np.ndarray]:
        """Column index of the nonzero entry in each row, for every generator at level n."""
        with self._lock:
            if n in self._cache:
                return self._cache[n]
        if n == 0:
            perms = {k: np.zeros(1, dtype=np.int64) for k, _ in self.table}
        else:
            below = self.permutations(n - 1)
            h = 1 << (n - 1)
            ident = np.arange(h, dtype=np.int64)
            perms = {}
            for k, g in self.table:
                p0 = ident if g.sections[0] == IDENTITY else below[g.sections[0]]
                p1 = ident if g.sections[1] == IDENTITY else below[g.sections[1]]
                if g.swap:
                    perms[k] = np.concatenate([p0 + h, p1])
                else:
                    perms[k] = np.concatenate([p0, p1 + h])
        for p in perms.values():
            p.setflags(write=False)
        with self._lock:
            self._cache.setdefault(n, perms)
            return self._cache[n]


def inverse_name(name: str) -> str:
    if name == IDENTITY:
        return IDENTITY
    return name[: -len(INV)] if name.endswith(INV) else name + INV


_NAME = r"[A-Za-z_][A-Za-z0-9_]*"
_LINE = re.compile(rf"^\s*(?P<name>{_NAME})\s*=\s*(?P<rhs>.*?)\s*$")
_TUPLE = re.compile(rf"^\(\s*(?P<secs>[^()]*)\)\s*(?P<swap>{SWAP})?$")


def parse_wreath(text: str) -> WreathSpec:
    """Parse the wreath DSL into a validated :class:`WreathSpec`."""
    gens: dict[str, Generator] = {}
    order: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        m = _LINE.match(line)
        if not m:
            col = len(line) - len(line.lstrip()) + 1
            raise ParseError("expected 'name = rhs'", lineno, col)
        name = m.group("name")
        rhs = m.group("rhs")
        rhs_col = m.start("rhs") + 1
        if name in (IDENTITY, SWAP):
            raise ParseError(f"'{name}' is reserved", lineno, m.start("name") + 1)
        if name in gens:
            raise ParseError(f"generator '{name}' defined twice", lineno, m.start("name") + 1)
        if rhs == IDENTITY:
            g = Generator((IDENTITY, IDENTITY), False)
        elif rhs == SWAP:
            g = Generator((IDENTITY, IDENTITY), True)
        else:
            t = _TUPLE.match(rhs)
            if not t:
                raise ParseError(f"cannot parse right-hand side {rhs!r}", lineno, rhs_col)
            secs = [s.strip() for s in t.group("secs").split(",")]
            for s in secs:
                if not re.fullmatch(_NAME, s):
                    raise ParseError(f"bad section name {s!r}", lineno, rhs_col + 1)
            if len(secs) != 2:
                raise ValidationError(f"line {lineno}: only the binary tree is supported, got {len(secs)} sections")
            g = Generator((secs[0], secs[1]), bool(t.group("swap")))
        gens[name] = g
        order.append(name)
    if not gens:
        raise ValidationError("no generators defined")
    for name, g in gens.items():
        for s in g.sections:
            if s != IDENTITY and s not in gens:
                raise ValidationError(f"section '{s}' of '{name}' is not defined")
    table = dict(gens)
    for name, g in gens.items():
        s0, s1 = (inverse_name(s) for s in g.sections)
        table[inverse_name(name)] = Generator((s1, s0) if g.swap else (s0, s1), g.swap)
    return WreathSpec(tuple(table.items()), tuple(order))


DIHEDRAL_TEXT = """\
# infinite dihedral group
a = s
t = (a, t)
"""

LAMPLIGHTER_TEXT = """\
# lamplighter group as a 2-state automaton
a = (a, b) s
b = (a, b)
"""

DIHEDRAL = parse_wreath(DIHEDRAL_TEXT)
LAMPLIGHTER = parse_wreath(LAMPLIGHTER_TEXT)

Word = tuple[tuple[str, int], ...]
WordLike = Union[str, Sequence[tuple[str, int]]]


def parse_word(w: WordLike) -> Word:
    """``"a^-1 b"`` / ``"a*t"`` / ``""`` (identity) -> ``(("a", -1), ("b", 1))``."""
    if not isinstance(w, str):
        return tuple((str(g), int(e)) for g, e in w)
    out = []
    for tok in re.split(r"[\s*·]+", w.strip()):
        if not tok or tok == IDENTITY:
            continue
        m = re.fullmatch(rf"({_NAME})(\^(-?1))?", tok)
        if not m:
            raise ValueError(f"bad word token {tok!r}")
        out.append((m.group(1), int(m.group(3) or 1)))
    return tuple(out)


@dataclass(frozen=True)
class LevelMatrix:
    n: int
    entries: np.ndarray

    def __post_init__(self):
        self.entries.setflags(write=False)


def _check_level(n: int, n_max: int) -> None:
    if n < 0:
        raise ValueError("level must be >= 0")
    if n > n_max:
        raise LevelTooLarge(f"level {n} exceeds n_max={n_max}")


def word_permutation(spec: WreathSpec, w: WordLike, n: int, n_max: int = N_MAX) -> np.ndarray:
    _check_level(n, n_max)
    perms = spec.permutations(n)
    p = np.arange(1 << n, dtype=np.int64)
    for g, e in parse_word(w):
        key = g if e == 1 else inverse_name(g)
        if e not in (1, -1) or key not in spec:
            raise ValidationError(f"unknown generator {g}^{e}")
        # row i of (A B) has its entry in column pB[pA[i]]
        p = perms[key][p]
    return p


def level_matrix(spec: WreathSpec, w: WordLike, n: int, n_max: int = N_MAX) -> LevelMatrix:
    """Dense level-n matrix of a word, generators multiplied left to right."""
    p = word_permutation(spec, w, n, n_max)
    m = np.zeros((1 << n, 1 << n), dtype=complex)
    m[np.arange(1 << n), p] = 1.0
    return LevelMatrix(n, m)


Terms = Sequence[tuple[complex, WordLike]]


def pencil_matrix(spec: WreathSpec, terms: Terms, n: int, n_max: int = N_MAX) -> LevelMatrix:
    """``sum coeff_i * level_matrix(word_i)``; an empty word is the identity."""
    _check_level(n, n_max)
    size = 1 << n
    m = np.zeros((size, size), dtype=complex)
    rows = np.arange(size)
    for coeff, w in terms:
        np.add.at(m, (rows, word_permutation(spec, w, n, n_max)), complex(coeff))
    return LevelMatrix(n, m)


@dataclass(frozen=True)
class SingularFlag:
    """LU met a pivot below ``EPS_PIVOT`` times the largest entry."""

    min_pivot: float
    scale: float


def log_det(m: LevelMatrix | np.ndarray, eps_pivot: float = EPS_PIVOT) -> ScaledValue | SingularFlag:
    """Determinant through LU with partial pivoting (LAPACK getrf)."""
    a = m.entries if isinstance(m, LevelMatrix) else np.asarray(m, dtype=complex)
    scale = float(np.max(np.abs(a))) if a.size else 0.0
    if scale == 0.0:
        return SingularFlag(0.0, 0.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    d = np.diag(lu)
    mods = np.abs(d)
    if mods.min() < eps_pivot * scale:
        return SingularFlag(float(mods.min()), scale)
    swaps = int(np.count_nonzero(piv != np.arange(len(piv))))
    unit = complex(np.prod(d / mods)) * (-1) ** swaps
    return ScaledValue.from_polar(unit, float(np.sum(np.log(mods))))


def min_singular(m: LevelMatrix | np.ndarray) -> float:
    a = m.entries if isinstance(m, LevelMatrix) else np.asarray(m, dtype=complex)
    return float(np.linalg.svd(a, compute_uv=False)[-1])


@dataclass(frozen=True)
class DetComparison:
    left: ScaledValue | SingularFlag
    right: ScaledValue | SingularFlag
    deviation: float

    @property
    def both_singular(self) -> bool:
        return isinstance(self.left, SingularFlag) and isinstance(self.right, SingularFlag)

    def agrees(self, tol: float) -> bool:
        return self.both_singular or self.deviation < tol


def compare_dets(a: ScaledValue | SingularFlag, b: ScaledValue | SingularFlag) -> DetComparison:
    if isinstance(a, SingularFlag) and isinstance(b, SingularFlag):
        return DetComparison(a, b, 0.0)
    if isinstance(a, SingularFlag) or isinstance(b, SingularFlag):
        return DetComparison(a, b, float("inf"))
    return DetComparison(a, b, rel_deviation(a, b))


def schur_det_check(A, B, C, D, tol: float = 1e-10) -> DetComparison:
    """Compare ``det [[A, B], [C, D]]`` with ``det(AD - CB)`` for commuting A, C."""
    A, B, C, D = (np.asarray(x.entries if isinstance(x, LevelMatrix) else x, dtype=complex) for x in (A, B, C, D))
    comm = np.linalg.norm(A @ C - C @ A)
    if comm > tol * max(1.0, np.linalg.norm(A) * np.linalg.norm(C)):
        raise CommutationError(f"||AC - CA|| = {comm:.3e}")
    return compare_dets(log_det(np.block([[A, B], [C, D]])), log_det(A @ D - C @ B))


# pencil templates: (coordinate index, word)
Template = Sequence[tuple[int, str]]
DIHEDRAL_TEMPLATE: Template = ((0, ""), (1, "a"), (2, "t"), (3, "a t"))
LAMPLIGHTER_TEMPLATE: Template = ((0, ""), (1, "a^-1 b"), (2, "a"), (2, "b"), (3, "a^-1"), (3, "b^-1"))


def template_terms(template: Template, z: Sequence[complex]) -> list[tuple[complex, str]]:
    zs = list(z)
    return [(zs[i], w) for i, w in template]


def level0_scalar(template: Template, z: Sequence[complex]) -> complex:
    """The 1x1 pencil: every word acts as 1 at level 0."""
    zs = list(z)
    return sum((zs[i] for i, _ in template), 0j)


@dataclass(frozen=True)
class RecursionReport:
    n: int
    high: ScaledValue | SingularFlag  # level n+1 at z
    low: ScaledValue | SingularFlag  # level n at map(z)
    deviation: float

    def agrees(self, tol: float = 1e-6) -> bool:
        both = isinstance(self.high, SingularFlag) and isinstance(self.low, SingularFlag)
        return both or self.deviation < tol


def verify_det_recursion(
    spec: WreathSpec,
    template: Template,
    symbolic_map: Callable[[Sequence[complex]], Sequence[complex]],
    z: Sequence[complex],
    n: int,
    n_max: int = N_MAX,
) -> RecursionReport:
    """Level-(n+1) pencil determinant at z against level-n at ``symbolic_map(z)``."""
    if n > n_max - 1:
        raise LevelTooLarge(f"level {n + 1} exceeds n_max={n_max}")
    hi = log_det(pencil_matrix(spec, template_terms(template, z), n + 1, n_max))
    lo = log_det(pencil_matrix(spec, template_terms(template, symbolic_map(z)), n, n_max))
    c = compare_dets(hi, lo)
    return RecursionReport(n, hi, lo, c.deviation)


def write_matrix_csv(m: LevelMatrix | np.ndarray, out: TextIO) -> None:
    """Row-major CSV, each entry as a ``re,im`` pair."""
    a = m.entries if isinstance(m, LevelMatrix) else np.asarray(m, dtype=complex)
    for row in a:
        out.write(",".join(f"{v.real!r},{v.imag!r}" for v in row.tolist()))
        out.write("\n")


def matrix_to_csv(m: LevelMatrix | np.ndarray) -> str:
    buf = io.StringIO()
    write_matrix_csv(m, buf)
    return buf.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    rows = []
    for line in text.strip().splitlines():
        vals = [float(x) for x in line.split(",")]
        rows.append([complex(vals[i], vals[i + 1]) for i in range(0, len(vals), 2)])
    return np.array(rows, dtype=complex)


def generator_names(spec: WreathSpec) -> Iterable[str]:
    return (k for k, _ in spec.table)
