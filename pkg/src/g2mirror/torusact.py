"""Affine automorphisms of the torus ``T^n = R^n / Z^n`` and their fixed loci.

Composition convention, used everywhere: ``(g ∘ h)(x) = g(h(x))``, and the
word ``"beta*gamma"`` names ``beta ∘ gamma``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels
from .exactalg import (
    IntMatrix,
    RatVector,
    as_fraction,
    as_int_matrix,
    determinant,
    hermite_normal_form,
    identity,
    integer_kernel,
    lcm_denominator,
    matmul,
    matvec,
    mod1,
    reduce_point,
    saturate,
    solve_congruence,
    transpose,
    unimodular_inverse,
)

DEFAULT_GROUP_CAP = 1024
GENERIC_SLICE_VALUE = Fraction(1, 16)


@dataclass(frozen=True)
class AffineTorusMap:
    """``x -> linear @ x + shift (mod 1)`` with ``linear`` in ``GL(n, Z)``."""

    linear: IntMatrix
    shift: RatVector
    name: str = ""

    def __post_init__(self):
        lin = as_int_matrix(self.linear)
        if len(lin) != len(lin[0]):
            raise ValueError("linear part must be square")
        if len(self.shift) != len(lin):
            raise ValueError("shift length does not match the linear part")
        if abs(determinant(lin)) != 1:
            raise ValueError(f"{self.name or 'map'}: linear part is not invertible over Z")
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "shift", mod1(self.shift))

    @classmethod
    def diagonal(cls, signs: Sequence[int], shift: Sequence = None, name: str = "") -> "AffineTorusMap":
        n = len(signs)
        lin = tuple(tuple(int(signs[i]) if i == j else 0 for j in range(n)) for i in range(n))
        return cls(lin, tuple(shift) if shift is not None else (0,) * n, name)

    @classmethod
    def identity(cls, n: int) -> "AffineTorusMap":
        return cls(identity(n), (0,) * n, "identity")

    @property
    def n(self) -> int:
        return len(self.linear)

    @property
    def key(self) -> tuple:
        return (self.linear, self.shift)

    def is_identity(self) -> bool:
        return self.linear == identity(self.n) and not any(self.shift)

    def __call__(self, x: Sequence) -> RatVector:
        x = [as_fraction(c) for c in x]
        return mod1(a + b for a, b in zip(matvec(self.linear, x), self.shift))

    def lift(self, x: Sequence) -> tuple[Fraction, ...]:
        """Image without reduction mod 1 (used for direction vectors)."""
        return tuple(a + b for a, b in zip(matvec(self.linear, x), self.shift))

    def inverse(self) -> "AffineTorusMap":
        inv = unimodular_inverse(self.linear)
        return AffineTorusMap(inv, tuple(-c for c in matvec(inv, self.shift)), f"{self.name}^-1")

    def is_diagonal(self) -> bool:
        return all(self.linear[i][j] == 0 for i in range(self.n) for j in range(self.n) if i != j)

    def signs(self) -> tuple[int, ...]:
        if not self.is_diagonal():
            raise ValueError(f"{self.name}: linear part is not diagonal")
        return tuple(self.linear[i][i] for i in range(self.n))

    def describe(self, labels: Sequence[int] | None = None) -> tuple[str, ...]:
        """Per-coordinate action, e.g. ``("x1", "-x2", "-x6 + 1/2")``."""
        labels = tuple(labels or range(1, self.n + 1))
        out = []
        for i in range(self.n):
            terms = []
            for j, c in enumerate(self.linear[i]):
                if c:
                    mag = "" if abs(c) == 1 else f"{abs(c)}"
                    terms.append(("-" if c < 0 else "+") + f"{mag}x{labels[j]}")
            s = " ".join(terms).lstrip("+")
            if self.shift[i]:
                s += f" + {self.shift[i]}"
            out.append(s)
        return tuple(out)

    def to_dict(self) -> dict:
        return {"name": self.name, "action": list(self.describe())}


def compose(g: AffineTorusMap, h: AffineTorusMap, name: str | None = None) -> AffineTorusMap:
    """``g ∘ h``: first ``h``, then ``g``."""
    if g.n != h.n:
        raise ValueError(f"dimension mismatch: {g.n} vs {h.n}")
    lin = matmul(g.linear, h.linear)
    shift = tuple(a + b for a, b in zip(matvec(g.linear, h.shift), g.shift))
    if name is None:
        parts = [p for p in (g.name, h.name) if p and p != "identity"]
        name = "*".join(parts) if parts else "identity"
    return AffineTorusMap(lin, shift, name)


class GroupTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class FiniteActionGroup:
    elements: tuple[AffineTorusMap, ...]
    generators: tuple[str, ...]
    axes: tuple[int, ...] = ()  # original coordinate labels, 1..n by default

    def __post_init__(self):
        if not self.axes:
            object.__setattr__(self, "axes", tuple(range(1, self.n + 1)))
        if len(self.axes) != self.n:
            raise ValueError("axis labels do not match the torus dimension")

    @property
    def n(self) -> int:
        return self.elements[0].n

    def position(self, axis: int) -> int:
        """0-based position of an original coordinate label."""
        try:
            return self.axes.index(int(axis))
        except ValueError:
            raise ValueError(f"coordinate x{axis} is not part of this torus {self.axes}") from None

    @property
    def order(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.elements)

    def generator_maps(self) -> tuple[AffineTorusMap, ...]:
        return tuple(self.element(n) for n in self.generators)

    def element(self, word: str) -> AffineTorusMap:
        """Look up an element by name or by a ``*``-separated word in the generators."""
        word = word.strip()
        for g in self.elements:
            if g.name == word:
                return g
        if word in ("identity", "id", "1", "e"):
            return self.elements[0]
        gens = {g.name: g for g in self.elements if g.name in self.generators}
        result = AffineTorusMap.identity(self.n)
        for part in word.split("*"):
            part = part.strip()
            if part not in gens:
                raise KeyError(f"unknown group element {word!r}")
            result = compose(result, gens[part])
        for g in self.elements:
            if g.key == result.key:
                return g
        raise KeyError(f"{word!r} does not evaluate to a group element")  # pragma: no cover

    def contains(self, g: AffineTorusMap) -> bool:
        return any(h.key == g.key for h in self.elements)

    def is_abelian(self) -> bool:
        return all(compose(g, h).key == compose(h, g).key for g in self.elements for h in self.elements)

    def element_order(self, g: AffineTorusMap) -> int:
        x, k = g, 1
        while not x.is_identity():
            x = compose(x, g)
            k += 1
            if k > self.order:
                raise ArithmeticError("element order exceeds group order")
        return k

    def exponent(self) -> int:
        out = 1
        for g in self.elements:
            out = math.lcm(out, self.element_order(g))
        return out

    def is_closed(self) -> bool:
        keys = {g.key for g in self.elements}
        return all(compose(g, h).key in keys for g in self.elements for h in self.elements) and all(
            g.inverse().key in keys for g in self.elements
        )


def generate_group(gens: Sequence[AffineTorusMap], cap: int = DEFAULT_GROUP_CAP) -> FiniteActionGroup:
    """Breadth-first closure under right multiplication by generators."""
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].n
    if any(g.n != n for g in gens):
        raise ValueError("generators act on tori of different dimension")
    ident = AffineTorusMap.identity(n)
    seen = {ident.key: ident}
    order = [ident]
    queue = deque([ident])
    while queue:
        g = queue.popleft()
        for s in gens:
            h = compose(g, s)
            if h.key not in seen:
                seen[h.key] = h
                order.append(h)
                queue.append(h)
                if len(order) > cap:
                    raise GroupTooLarge(f"group exceeds the cap of {cap} elements")
    names = tuple(g.name for g in gens if not g.is_identity())
    return FiniteActionGroup(tuple(order), names)


# subtori ----------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class AffineSubtorus:
    """``basepoint + span_R(directions)`` in ``T^n``, always in canonical form."""

    basepoint: RatVector
    directions: IntMatrix = field(default=())
    n: int = 0

    @classmethod
    def make(cls, basepoint: Sequence, directions: Iterable[Sequence[int]] = ()) -> "AffineSubtorus":
        p = tuple(as_fraction(x) for x in basepoint)
        n = len(p)
        lat = saturate([tuple(d) for d in directions], n)
        return cls(reduce_point(p, lat), lat, n)

    @property
    def dim(self) -> int:
        return len(self.directions)

    def canonical(self) -> "AffineSubtorus":
        return AffineSubtorus.make(self.basepoint, self.directions)

    def annihilator(self) -> IntMatrix:
        return integer_kernel(self.directions, self.n) if self.directions else identity(self.n)

    def contains(self, x: Sequence) -> bool:
        w = self.annihilator()
        diff = [as_fraction(a) - b for a, b in zip(x, self.basepoint)]
        return all(v.denominator == 1 for v in matvec(w, diff)) if w else True

    def axes(self, labels: Sequence[int] | None = None) -> tuple[int, ...] | None:
        """Coordinate labels when the direction lattice is spanned by axes."""
        labels = labels or range(1, self.n + 1)
        out = []
        for d in self.directions:
            nz = [i for i, c in enumerate(d) if c]
            if len(nz) != 1 or abs(d[nz[0]]) != 1:
                return None
            out.append(labels[nz[0]])
        return tuple(sorted(out))

    def label(self, labels: Sequence[int] | None = None) -> str:
        """Readable name such as ``T3_123 at (x4=0, x5=1/2, ...)``.

        ``labels`` renames the coordinates (for tori that are slices).
        """
        labels = tuple(labels or range(1, self.n + 1))
        axes = self.axes(labels)
        free = set(axes or ())
        coords = ", ".join(
            f"x{labels[i]}={c}" for i, c in enumerate(self.basepoint) if labels[i] not in free
        )
        if axes is None:
            return f"({coords}) + span{[list(d) for d in self.directions]}"
        if not axes:
            return f"point({coords})"
        return f"T{len(axes)}_{''.join(map(str, axes))} at ({coords})"

    def to_dict(self, labels: Sequence[int] | None = None) -> dict:
        return {
            "basepoint": [str(c) for c in self.basepoint],
            "directions": [list(d) for d in self.directions],
            "dim": self.dim,
            "label": self.label(labels),
        }


def whole_torus(n: int) -> AffineSubtorus:
    return AffineSubtorus.make((0,) * n, identity(n))


def fixed_set(g: AffineTorusMap) -> tuple[AffineSubtorus, ...]:
    """Components of ``{x : g(x) = x}``; empty when ``g`` acts freely."""
    n = g.n
    a = tuple(tuple(g.linear[i][j] - (i == j) for j in range(n)) for i in range(n))
    sol = solve_congruence(a, [-s for s in g.shift])
    comps = {AffineSubtorus(p, sol.directions, n) for p in sol.points}
    return tuple(sorted(comps))


def are_disjoint(S: AffineSubtorus, T: AffineSubtorus) -> bool:
    """True iff ``S`` and ``T`` share no point.

    They meet iff ``p_T - p_S`` lies in ``span_R(dirs_S ∪ dirs_T) + Z^n``,
    i.e. iff the integer annihilator of the joint span maps it into ``Z``.
    """
    if S.n != T.n:
        raise ValueError("subtori live in tori of different dimension")
    joint = list(S.directions) + list(T.directions)
    w = integer_kernel(joint, S.n) if joint else identity(S.n)
    if not w:
        return False  # joint directions span R^n
    diff = [a - b for a, b in zip(T.basepoint, S.basepoint)]
    return any(v.denominator != 1 for v in matvec(w, diff))


def act_on_subtorus(g: AffineTorusMap, S: AffineSubtorus) -> AffineSubtorus:
    if g.n != S.n:
        raise ValueError("dimension mismatch")
    dirs = [matvec(g.linear, d) for d in S.directions]
    return AffineSubtorus.make(g(S.basepoint), dirs)


class NotInvariant(ValueError):
    pass


def orbit_census(G: FiniteActionGroup, components: Sequence[AffineSubtorus]) -> tuple[tuple[AffineSubtorus, ...], ...]:
    """Partition ``components`` into ``G``-orbits (deterministic order)."""
    comps = sorted(set(components))
    index = set(comps)
    seen: set[AffineSubtorus] = set()
    orbits = []
    for c in comps:
        if c in seen:
            continue
        orbit = set()
        for g in G:
            img = act_on_subtorus(g, c)
            if img not in index:
                raise NotInvariant(f"{g.name} maps {c.label()} outside the component list")
            orbit.add(img)
        seen |= orbit
        orbits.append(tuple(sorted(orbit)))
    return tuple(orbits)


# slices and factors -------------------------------------------------------------


def restrict_to_slice(G: FiniteActionGroup, fixed: Mapping[int, object]) -> FiniteActionGroup:
    """Induced action on the coordinate slice ``{x_i = c_i}``.

    Keeps the elements that map the slice into itself and restricts them to
    the free coordinates (1-based ``fixed`` keys), with the fixed values
    folded into the shift.
    """
    n = G.n
    if not fixed:
        raise ValueError("slice must fix at least one coordinate")
    fixed = {G.position(i): as_fraction(c) for i, c in fixed.items()}
    fidx = sorted(fixed)
    free = [i for i in range(n) if i not in fidx]
    if not free:
        raise ValueError("slice fixes every coordinate")
    cvec = [fixed.get(i, Fraction(0)) for i in range(n)]
    kept: dict[tuple, AffineTorusMap] = {}
    for g in G:
        if any(g.linear[i][j] for i in fidx for j in free):
            continue
        image = g.lift(cvec)
        if any((image[i] - cvec[i]) % 1 for i in fidx):
            continue
        lin = tuple(tuple(g.linear[i][j] for j in free) for i in free)
        shift = tuple(image[i] for i in free)
        h = AffineTorusMap(lin, shift, g.name)
        kept.setdefault(h.key, h)
    elems = list(kept.values())
    ident = next(h for h in elems if h.is_identity())
    elems = [ident] + [h for h in elems if h is not ident]
    gens = tuple(name for name in G.generators if any(h.name == name for h in elems))
    axes = tuple(G.axes[i] for i in free)
    induced = FiniteActionGroup(tuple(elems), gens, axes)
    spanned = generate_group(induced.generator_maps()).order if gens else 1
    if spanned != induced.order:
        # the generators of G lying in the stabiliser do not span it
        induced = FiniteActionGroup(induced.elements, tuple(h.name for h in elems[1:]), axes)
    if not induced.is_closed():
        raise ArithmeticError("restricted maps do not form a group")
    return induced


def project_to_factor(G: FiniteActionGroup, keep: Sequence[int]) -> FiniteActionGroup:
    """Induced action on the quotient torus of the ``keep`` coordinates.

    Every element must map the kept coordinates among themselves, i.e. their
    rows may only involve kept columns.
    """
    n = G.n
    if not keep:
        raise ValueError("empty coordinate list")
    kidx = sorted(G.position(i) for i in keep)
    rest = [j for j in range(n) if j not in kidx]
    images: dict[tuple, AffineTorusMap] = {}
    for g in G:
        if any(g.linear[i][j] for i in kidx for j in rest):
            raise NotInvariant(f"{g.name} mixes the kept coordinates with the others")
        lin = tuple(tuple(g.linear[i][j] for j in kidx) for i in kidx)
        h = AffineTorusMap(lin, tuple(g.shift[i] for i in kidx), g.name)
        images.setdefault(h.key, h)
    elems = list(images.values())
    ident = next(h for h in elems if h.is_identity())
    elems = [ident] + [h for h in elems if h is not ident]
    gens = tuple(name for name in G.generators if any(h.name == name for h in elems))
    out = FiniteActionGroup(tuple(elems), gens, tuple(G.axes[i] for i in kidx))
    if not out.is_closed():
        raise ArithmeticError("projected maps do not form a group")
    return out


def restrict_map(g: AffineTorusMap, keep: Sequence[int]) -> AffineTorusMap:
    """Action of a single map on the factor torus of the ``keep`` coordinates."""
    kidx = sorted(int(i) - 1 for i in keep)
    rest = [j for j in range(g.n) if j not in kidx]
    if any(g.linear[i][j] for i in kidx for j in rest):
        raise NotInvariant(f"{g.name} mixes the kept coordinates with the others")
    lin = tuple(tuple(g.linear[i][j] for j in kidx) for i in kidx)
    return AffineTorusMap(lin, tuple(g.shift[i] for i in kidx), g.name)


# brute-force oracle -------------------------------------------------------------


@dataclass(frozen=True)
class OracleComparison:
    element: str
    q: int
    grid_points: int
    fixed_points_on_grid: int
    agree: bool
    mismatches: int
    backend: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _int_array(rows) -> np.ndarray:
    arr = np.array([[int(x) for x in r] for r in rows], dtype=object)
    if arr.size and np.abs(arr).max() >= 2**62:
        raise OverflowError("entries too large for the integer grid kernel")
    return arr.astype(np.int64)


def grid_fixed_mask(g: AffineTorusMap, q: int, backend: str | None = None) -> np.ndarray:
    """Oracle: which grid points ``k/q`` satisfy ``g(x) = x``."""
    scaled = [s * q for s in g.shift]
    if any(s.denominator != 1 for s in scaled):
        # shift not on the grid: g(x) - x is never on it either
        return np.zeros(q**g.n, dtype=bool)
    return _kernels.fixed_mask(_int_array(g.linear), np.array([int(s) for s in scaled], dtype=np.int64), q, backend)


def grid_subtorus_mask(S: AffineSubtorus, q: int, backend: str | None = None) -> np.ndarray:
    """Grid points of ``k/q`` lying on ``S``, via its integer annihilator."""
    w = S.annihilator() if S.directions else identity(S.n)
    if S.dim == S.n:
        return np.ones(q**S.n, dtype=bool)
    wp = matvec(w, S.basepoint)
    modulus = lcm_denominator(list(wp) + [Fraction(1, q)])
    offset = [int(v * modulus) % modulus for v in wp]
    return _kernels.subtorus_mask(_int_array(w), np.array(offset, dtype=np.int64), modulus // q, modulus, S.n, q, backend)


def oracle_compare(g: AffineTorusMap, q: int = 4, components: Sequence[AffineSubtorus] | None = None,
                   backend: str | None = None) -> OracleComparison:
    """Compare the congruence solver with brute force on the ``1/q`` grid."""
    if q < 2:
        raise ValueError("grid denominator must be at least 2")
    comps = fixed_set(g) if components is None else components
    brute = grid_fixed_mask(g, q, backend)
    solver = np.zeros_like(brute)
    for c in comps:
        solver |= grid_subtorus_mask(c, q, backend)
    mism = int(np.count_nonzero(brute != solver))
    return OracleComparison(g.name, q, int(brute.size), int(brute.sum()), mism == 0, mism,
                            backend or _kernels.BACKEND)
