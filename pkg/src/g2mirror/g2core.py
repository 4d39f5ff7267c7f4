"""The standard G2 structure on R^7 and its calibrated planes."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Sequence

from .exterior import KForm, Vector, contract, evaluate, format_form, hodge_star, inner, parse_form, wedge
from .report import Check

PHI0_TEXT = "+1*e123 +1*e145 +1*e167 +1*e246 -1*e257 -1*e347 -1*e356"


@dataclass(frozen=True)
class G2Structure:
    phi: KForm
    star_phi: KForm = field(init=False)

    def __post_init__(self):
        if self.phi.n != 7 or self.phi.degree != 3:
            raise ValueError("a G2 structure needs a 3-form on R^7")
        object.__setattr__(self, "star_phi", hodge_star(self.phi))

    @classmethod
    def standard(cls) -> "G2Structure":
        return cls(parse_form(PHI0_TEXT, 7, 3))


STANDARD = G2Structure.standard()
PHI0 = STANDARD.phi
STAR_PHI0 = STANDARD.star_phi


def _vec7(u) -> Vector:
    u = Vector(u)
    if len(u) != 7:
        raise ValueError(f"expected a vector in R^7, got length {len(u)}")
    return u


def cross(u, v, g2: G2Structure = STANDARD) -> Vector:
    """``u × v``, defined by ``<u × v, w> = phi(u, v, w)``."""
    one = contract(_vec7(v), contract(_vec7(u), g2.phi))
    return Vector(one[(i,)] for i in range(1, 8))


def chi(u, v, w, g2: G2Structure = STANDARD) -> Vector:
    """Vector-valued 3-form with ``<chi(u, v, w), z> = *phi(u, v, w, z)``."""
    one = contract(_vec7(w), contract(_vec7(v), contract(_vec7(u), g2.star_phi)))
    return Vector(one[(i,)] for i in range(1, 8))


class NotOrthonormal(ValueError):
    pass


@dataclass(frozen=True)
class CoordinatePlane:
    """An exactly orthonormal frame spanning a subspace of R^7."""

    vectors: tuple[Vector, ...]

    def __post_init__(self):
        vs = tuple(_vec7(v) for v in self.vectors)
        object.__setattr__(self, "vectors", vs)
        for i, a in enumerate(vs):
            for j, b in enumerate(vs):
                if inner(a, b) != (1 if i == j else 0):
                    raise NotOrthonormal(f"frame vectors {i + 1} and {j + 1} are not orthonormal")

    @classmethod
    def coordinate(cls, indices: Sequence[int]) -> "CoordinatePlane":
        return cls(tuple(Vector.basis(i, 7) for i in indices))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    @property
    def indices(self) -> tuple[int, ...] | None:
        """Sorted axis labels if every frame vector is ``± e_i``, else None."""
        out = []
        for v in self.vectors:
            nz = [i for i, c in enumerate(v) if c]
            if len(nz) != 1:
                return None
            out.append(nz[0] + 1)
        return tuple(sorted(out))

    def contains(self, v) -> bool:
        v = _vec7(v)
        proj = Vector.zero(7)
        for b in self.vectors:
            proj = proj + b * inner(v, b)
        return proj == v

    def is_orthogonal_to(self, v) -> bool:
        return all(inner(v, b) == 0 for b in self.vectors)

    def label(self) -> str:
        idx = self.indices
        if idx is None:
            return "span(" + ", ".join(str(tuple(str(c) for c in v)) for v in self.vectors) + ")"
        return "span(" + ",".join(f"e{i}" for i in idx) + ")"


class Associativity(NamedTuple):
    associative: bool
    sign: int  # orientation of the frame: phi(u, v, w) = sign * vol, 0 if not calibrated
    phi_value: Fraction


class CalibrationMismatch(AssertionError):
    """The volume and chi criteria for associativity disagree."""


def is_associative(plane: CoordinatePlane, g2: G2Structure = STANDARD) -> Associativity:
    if plane.dim != 3:
        raise ValueError("associativity is a property of 3-planes")
    u, v, w = plane.vectors
    val = evaluate(g2.phi, u, v, w)
    by_volume = abs(val) == 1
    by_chi = chi(u, v, w, g2).is_zero()
    if by_volume != by_chi:
        raise CalibrationMismatch(f"{plane.label()}: phi = {val} but chi zero = {by_chi}")
    return Associativity(by_volume, int(val) if by_volume else 0, val)


def is_coassociative(plane: CoordinatePlane, g2: G2Structure = STANDARD) -> bool:
    if plane.dim != 4:
        raise ValueError("coassociativity is a property of 4-planes")
    return all(evaluate(g2.phi, *t) == 0 for t in itertools.combinations(plane.vectors, 3))


@dataclass(frozen=True)
class PlaneCensus:
    associative: tuple[tuple[int, ...], ...]
    associative_signs: tuple[int, ...]
    coassociative: tuple[tuple[int, ...], ...]
    scanned: tuple[int, int]

    def complementary(self) -> bool:
        full = set(range(1, 8))
        comps = {tuple(sorted(full - set(t))) for t in self.associative}
        return comps == set(self.coassociative)


def enumerate_calibrated_coordinate_planes(g2: G2Structure = STANDARD) -> PlaneCensus:
    assoc, signs, coassoc = [], [], []
    triples = list(itertools.combinations(range(1, 8), 3))
    quads = list(itertools.combinations(range(1, 8), 4))
    for t in triples:
        res = is_associative(CoordinatePlane.coordinate(t), g2)
        if res.associative:
            assoc.append(t)
            signs.append(res.sign)
    for q in quads:
        if is_coassociative(CoordinatePlane.coordinate(q), g2):
            coassoc.append(q)
    return PlaneCensus(tuple(assoc), tuple(signs), tuple(coassoc), (len(triples), len(quads)))


def _rational_sqrt(x: Fraction) -> Fraction | None:
    x = Fraction(x)
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def orthogonal_complement(plane: CoordinatePlane) -> CoordinatePlane:
    """Rational orthonormal frame of the complement, when one exists.

    Coordinate planes get the complementary axes.  Otherwise Gram-Schmidt runs
    over the standard basis and any non-square norm is rejected.
    """
    idx = plane.indices
    if idx is not None:
        return CoordinatePlane.coordinate([i for i in range(1, 8) if i not in idx])
    frame = list(plane.vectors)
    extra: list[Vector] = []
    for i in range(1, 8):
        w = Vector.basis(i, 7)
        for b in frame + extra:
            w = w - b * inner(w, b)
        n2 = w.norm2()
        if n2 == 0:
            continue
        r = _rational_sqrt(n2)
        if r is None:
            raise NotOrthonormal("complement has no rational orthonormal frame along the standard basis")
        extra.append(w * (1 / r))
    return CoordinatePlane(tuple(extra))


@dataclass(frozen=True)
class Splitting:
    E: CoordinatePlane
    V: CoordinatePlane


def associative_splitting(u, v, g2: G2Structure = STANDARD) -> Splitting:
    """``R^7 = E ⊕ V`` with ``E = <u, v, u × v>`` associative."""
    u, v = _vec7(u), _vec7(v)
    if inner(u, u) != 1 or inner(v, v) != 1 or inner(u, v) != 0:
        raise NotOrthonormal("u, v must be orthonormal")
    w = cross(u, v, g2)
    if w.norm2() != 1:
        raise ValueError("u × v is degenerate")
    E = CoordinatePlane((u, v, w))
    if not is_associative(E, g2).associative:
        raise CalibrationMismatch("span(u, v, u × v) failed the associativity test")
    V = orthogonal_complement(E)
    if not is_coassociative(V, g2):
        raise CalibrationMismatch("complement of an associative plane is not coassociative")
    return Splitting(E, V)


# identity suite -------------------------------------------------------------------


def random_rational(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_form(rng: random.Random, n: int = 7, degree: int | None = None, max_terms: int = 3) -> KForm:
    """A small random form with rational coefficients."""
    if degree is None:
        degree = rng.randint(0, 4)
    blades = list(itertools.combinations(range(1, n + 1), degree))
    picks = rng.sample(blades, min(len(blades), rng.randint(1, max_terms)))
    return KForm(n, degree, {b: random_rational(rng) for b in picks})


def random_vector(rng: random.Random, n: int = 7) -> Vector:
    return Vector(random_rational(rng) for _ in range(n))


def identity_suite(samples: int = 1000, seed: int = 0, g2: G2Structure = STANDARD) -> list[Check]:
    """Exact algebraic identities of the exterior algebra and the cross product.

    ``** = id`` is checked on every basis blade (linearity covers the rest);
    the others on ``samples`` seeded random inputs.  Returns report checks.
    """
    rng = random.Random(seed)
    checks = []

    bad = None
    for k in range(8):
        for blade in itertools.combinations(range(1, 8), k):
            e = KForm.blade(blade, 7)
            if hodge_star(hodge_star(e)) != e:
                bad = blade
                break
        if bad is not None:
            break
    checks.append(Check.test("** = id on all degrees", bad is None, "Hodge star is an involution on R^7",
                             witness={"blade": bad}))

    anti = leib = None
    for _ in range(samples):
        a, b = random_form(rng, degree=rng.randint(0, 3)), random_form(rng, degree=rng.randint(1, 3))
        if anti is None and a ^ b != (b ^ a) * (-1) ** (a.degree * b.degree):
            anti = (format_form(a), format_form(b))
        v = random_vector(rng)
        lhs = contract(v, a ^ b)
        if a.degree == 0:
            rhs = a ^ contract(v, b)
        else:
            rhs = (contract(v, a) ^ b) + (a ^ contract(v, b)) * (-1) ** a.degree
        if leib is None and lhs != rhs:
            leib = (format_form(a), format_form(b), list(map(str, v)))
    checks.append(Check.test("wedge anticommutativity", anti is None, "a ∧ b = (-1)^pq b ∧ a",
                             witness={"samples": samples, "counterexample": anti}))
    checks.append(Check.test("contraction Leibniz rule", leib is None,
                             "interior product is an antiderivation",
                             witness={"samples": samples, "counterexample": leib}))

    lag = None
    for _ in range(samples):
        u, v = random_vector(rng), random_vector(rng)
        w = cross(u, v, g2)
        if w.norm2() != u.norm2() * v.norm2() - inner(u, v) ** 2 and lag is None:
            lag = (list(map(str, u)), list(map(str, v)))
    checks.append(Check.test("|u × v|^2 = |u|^2 |v|^2 - <u,v>^2", lag is None, "cross product induced by phi0",
                             witness={"samples": samples, "counterexample": lag}))

    top = wedge(g2.phi, g2.star_phi)
    checks.append(Check.test("phi0 ∧ *phi0 = 7 vol", top == KForm.volume(7) * 7, "phi0 ∧ *phi0 = 7 vol",
                             witness={"phi0": format_form(g2.phi), "star_phi0": format_form(g2.star_phi)}))
    census = enumerate_calibrated_coordinate_planes(g2)
    checks.append(Check.test("7 associative + 7 coassociative coordinate planes",
                             len(census.associative) == 7 and len(census.coassociative) == 7
                             and census.complementary(),
                             "the seven terms of phi0 are the associative coordinate planes",
                             witness={"associative": census.associative, "signs": census.associative_signs,
                                      "coassociative": census.coassociative}))
    return checks
