"""Exact integer/rational linear algebra.

Scalars are :class:`fractions.Fraction` and Python ``int``; an integer matrix is
a tuple of row tuples.  Nothing in here touches floating point.

The main entry points are :func:`smith_normal_form`, which returns the full
decomposition ``U @ A @ V == D``, and :func:`solve_congruence`, which describes
the solution set of ``A x = b (mod Z^m)`` for ``x`` on the torus ``(Q/Z)^n``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

IntMatrix = tuple[tuple[int, ...], ...]
RatVector = tuple[Fraction, ...]

__all__ = [
    "CongruenceSolution",
    "IntMatrix",
    "SNFDecomposition",
    "as_fraction",
    "as_int_matrix",
    "determinant",
    "hermite_normal_form",
    "identity",
    "integer_kernel",
    "matmul",
    "matvec",
    "mod1",
    "reduce_point",
    "saturate",
    "smith_normal_form",
    "solve_congruence",
    "transpose",
    "unimodular_inverse",
]


def as_fraction(x) -> Fraction:
    """Parse an int, Fraction or string such as ``"1/2"`` into a Fraction.

    Floats are refused: every rational in this package must be bit-exact.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass a string like '1/2'")
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def mod1(v: Iterable) -> RatVector:
    """Reduce every entry into ``[0, 1)``."""
    return tuple(as_fraction(x) % 1 for x in v)


def as_int_matrix(rows) -> IntMatrix:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if not out or not out[0]:
        raise ValueError("matrix must have positive dimensions")
    width = len(out[0])
    if any(len(r) != width for r in out):
        raise ValueError("ragged matrix")
    for row, src in zip(out, rows):
        for a, b in zip(row, src):
            if a != b:
                raise ValueError(f"non-integer entry {b!r}")
    return out


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(a):
    return tuple(zip(*a))


def matmul(a, b):
    if len(a[0]) != len(b):
        raise ValueError(f"shape mismatch: {len(a)}x{len(a[0])} @ {len(b)}x{len(b[0])}")
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a, v):
    if len(a[0]) != len(v):
        raise ValueError("shape mismatch in matrix-vector product")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def determinant(a) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    m = [[Fraction(x) for x in row] for row in a]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] / m[c][c]
            if f:
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return det


def unimodular_inverse(a) -> IntMatrix:
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        m[c], m[piv] = m[piv], m[c]
        p = m[c][c]
        m[c] = [x / p for x in m[c]]
        for r in range(n):
            if r != c and m[r][c] != 0:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    inv = [row[n:] for row in m]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


@dataclass(frozen=True)
class SNFDecomposition:
    U: IntMatrix
    D: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i][i] for i in range(min(len(self.D), len(self.D[0]))))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(a) -> SNFDecomposition:
    """Smith normal form with transforms: ``U @ A @ V == D``.

    ``D`` is diagonal with non-negative entries ``d1 | d2 | ...``, and ``U``,
    ``V`` are unimodular.
    """
    a = as_int_matrix(a)
    m, n = len(a), len(a[0])
    A = [list(r) for r in a]
    U = [list(r) for r in identity(m)]
    V = [list(r) for r in identity(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        for M in (A, U):
            M[dst] = [x + k * y for x, y in zip(M[dst], M[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for M in (A, V):
            for row in M:
                row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            nonzero = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not nonzero:
                break
            _, pi, pj = min(nonzero)
            if pi != t:
                swap_rows(t, pi)
            if pj != t:
                swap_cols(t, pj)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]

    return SNFDecomposition(
        U=tuple(map(tuple, U)), D=tuple(map(tuple, A)), V=tuple(map(tuple, V))
    )


def hermite_normal_form(rows: Sequence[Sequence[int]], n: int | None = None) -> IntMatrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped.  Pivots are positive and entries above a pivot lie
    in ``[0, pivot)``, so the result is a canonical basis of the lattice.
    """
    M = [list(map(int, r)) for r in rows]
    if n is None:
        if not M:
            raise ValueError("need n for an empty row list")
        n = len(M[0])
    out: list[list[int]] = []
    r = 0
    for c in range(n):
        # Euclid down column c among rows r..
        while True:
            live = [i for i in range(r, len(M)) if M[i][c]]
            if len(live) <= 1:
                break
            i0 = min(live, key=lambda i: abs(M[i][c]))
            for i in live:
                if i != i0:
                    q = M[i][c] // M[i0][c]
                    M[i] = [x - q * y for x, y in zip(M[i], M[i0])]
        live = [i for i in range(r, len(M)) if M[i][c]]
        if not live:
            continue
        i0 = live[0]
        M[r], M[i0] = M[i0], M[r]
        if M[r][c] < 0:
            M[r] = [-x for x in M[r]]
        for i in range(r):
            q = M[i][c] // M[r][c]
            if q:
                M[i] = [x - q * y for x, y in zip(M[i], M[r])]
        r += 1
    out = [row for row in M[:r]]
    return tuple(map(tuple, out))


def _pivots(h: IntMatrix) -> list[int]:
    return [next(j for j, x in enumerate(row) if x) for row in h]


def saturate(rows: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """HNF basis of ``span_R(rows) ∩ Z^n``."""
    rows = [tuple(r) for r in rows if any(r)]
    if not rows:
        return ()
    snf = smith_normal_form(rows)
    vinv = unimodular_inverse(snf.V)
    return hermite_normal_form(vinv[: snf.rank], n)


def integer_kernel(rows: Sequence[Sequence[int]], n: int) -> IntMatrix:
    """HNF basis of ``{x in Z^n : r . x = 0 for every r in rows}``."""
    rows = [tuple(r) for r in rows if any(r)]
    if not rows:
        return identity(n)
    snf = smith_normal_form(rows)
    cols = transpose(snf.V)
    return hermite_normal_form(cols[snf.rank:], n)


def reduce_point(p: Sequence, lattice: IntMatrix) -> RatVector:
    """Canonical representative of ``p + span_R(lattice)`` modulo ``Z^n``.

    ``lattice`` must be a saturated HNF basis.  Coordinates at pivot columns
    are cleared, the rest reduced into ``[0, 1)``, and the remaining finite
    ambiguity (pivots larger than one) is broken lexicographically.
    """
    p = [as_fraction(x) for x in p]
    if not lattice:
        return mod1(p)
    piv = _pivots(lattice)
    for row, c in zip(lattice, piv):
        t = p[c] / row[c]
        if t:
            p = [x - t * y for x, y in zip(p, row)]
    base = mod1(p)
    diag = [row[c] for row, c in zip(lattice, piv)]
    if all(d == 1 for d in diag):
        return base
    hc = [[Fraction(row[c]) for c in piv] for row in lattice]
    k = len(piv)
    best = None
    for m in itertools.product(*(range(d) for d in diag)):
        # solve t @ hc == m (upper triangular)
        t = [Fraction(0)] * k
        for j in range(k):
            acc = Fraction(m[j]) - sum(t[i] * hc[i][j] for i in range(j))
            t[j] = acc / hc[j][j]
        cand = mod1(
            b + sum(ti * row[idx] for ti, row in zip(t, lattice))
            for idx, b in enumerate(base)
        )
        if best is None or cand < best:
            best = cand
    return best


@dataclass(frozen=True)
class CongruenceSolution:
    """Solution set of ``A x = b (mod Z^m)``: disjoint affine subtori.

    Each representative in ``points`` is a basepoint; the shared ``directions``
    lattice (saturated, HNF) spans every component.  ``points == ()`` means
    the system has no solution.
    """

    points: tuple[RatVector, ...]
    directions: IntMatrix
    n: int

    @property
    def empty(self) -> bool:
        return not self.points

    def __len__(self) -> int:
        return len(self.points)


def solve_congruence(a, b: Sequence) -> CongruenceSolution:
    a = as_int_matrix(a)
    m, n = len(a), len(a[0])
    b = [as_fraction(x) for x in b]
    if len(b) != m:
        raise ValueError(f"dimension mismatch: A has {m} rows, b has {len(b)} entries")
    snf = smith_normal_form(a)
    # With x = V y:  D y = U b  (mod 1).
    c = matvec(snf.U, b)
    diag = snf.diagonal
    free: list[int] = []
    choices: list[list[Fraction]] = []
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d == 0 and c[i] % 1 != 0:
            return CongruenceSolution(points=(), directions=(), n=n)
    for j in range(n):
        d = diag[j] if j < len(diag) else 0
        if d == 0:
            free.append(j)
            choices.append([Fraction(0)])
        else:
            choices.append([(c[j] + k) / d for k in range(d)])
    vcols = transpose(snf.V)
    directions = hermite_normal_form([vcols[j] for j in free], n) if free else ()
    pts = {reduce_point(matvec(snf.V, y), directions) for y in itertools.product(*choices)}
    return CongruenceSolution(points=tuple(sorted(pts)), directions=directions, n=n)


def lcm_denominator(values: Iterable) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, as_fraction(v).denominator)
    return out
