"""Almost Calabi-Yau data induced on a hyperplane ``xi^⊥`` of the G2 space.

For a unit vector ``xi`` in R^7::

    omega = xi ⌟ phi          J(X) = X × xi
    Re Omega = phi|            Im Omega = (xi ⌟ *phi)|

restricted to ``xi^⊥``.  :func:`verify` certifies every identity exactly.  The
signs relating ``omega`` to ``J`` and ``Omega`` to ``J`` are detected rather
than assumed, and must not depend on ``xi``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactalg import determinant, matmul, transpose
from .exterior import (
    ComplexKForm,
    KForm,
    Vector,
    contract,
    evaluate,
    format_form,
    hodge_star,
    inner,
    lie_derivative_flat,
    pullback,
    wedge,
    wedge_all,
)
from .g2core import STANDARD, CoordinatePlane, G2Structure, cross, is_associative, is_coassociative, orthogonal_complement
from .report import Check

Matrix = tuple[tuple[Fraction, ...], ...]


class NonUnitVector(ValueError):
    pass


class MembershipError(ValueError):
    pass


def _unit7(xi) -> Vector:
    xi = Vector(xi)
    if len(xi) != 7:
        raise ValueError("xi must live in R^7")
    if xi.norm2() != 1:
        raise NonUnitVector(f"|xi|^2 = {xi.norm2()} is not 1; rescale to a rational unit vector")
    return xi


def hyperplane_basis(xi: Vector) -> tuple[Vector, ...]:
    """Rational orthonormal basis of ``xi^⊥`` with ``basis ∧ xi`` positive.

    The Householder reflection carrying ``e_k`` to ``xi`` is rational and
    orthogonal, so its other columns span ``xi^⊥``.  ``k`` is the axis of the
    largest ``|xi_i|``.
    """
    n = len(xi)
    k = max(range(n), key=lambda i: (abs(xi[i]), -i))
    w = [xi[i] - (1 if i == k else 0) for i in range(n)]
    ww = sum(x * x for x in w)
    cols = []
    for j in range(n):
        if j == k:
            continue
        col = [Fraction(int(i == j)) for i in range(n)]
        if ww:
            f = 2 * w[j] / ww
            col = [c - f * wi for c, wi in zip(col, w)]
        cols.append(Vector(col))
    if determinant(transpose(cols + [xi])) < 0:
        cols[-1] = -cols[-1]
    return tuple(cols)


@dataclass(frozen=True)
class CYData:
    """Hyperplane data; forms with ``_h`` live on R^6 in the ``basis`` coordinates."""

    xi: Vector
    basis: tuple[Vector, ...]
    omega: KForm          # xi ⌟ phi on R^7
    omega_h: KForm
    J: Matrix             # J in the hyperplane basis (columns are images)
    Omega: ComplexKForm   # on R^6
    star_phi_h: KForm     # *phi restricted to the hyperplane

    @property
    def embedding(self) -> Matrix:
        """7x6 matrix whose columns are the hyperplane basis."""
        return transpose(self.basis)

    def J_ambient(self, x) -> Vector:
        return cross(x, self.xi)

    def label(self) -> str:
        """``T6_123567``-style name when ``xi`` is a coordinate axis."""
        axis = _axis(self.xi)
        if axis is None:
            return "X_xi"
        return "T6_" + "".join(str(i) for i in range(1, 8) if i != axis[0])


def _axis(v) -> tuple[int, int] | None:
    nz = [i for i, c in enumerate(v) if c]
    if len(nz) == 1 and abs(v[nz[0]]) == 1:
        return nz[0] + 1, int(v[nz[0]])
    return None


def extract(xi, g2: G2Structure = STANDARD) -> CYData:
    xi = _unit7(xi)
    basis = hyperplane_basis(xi)
    emb = transpose(basis)
    omega = contract(xi, g2.phi)
    J = tuple(
        tuple(inner(bi, cross(bj, xi, g2)) for bj in basis) for bi in basis
    )
    for bj in basis:
        if inner(cross(bj, xi, g2), xi) != 0:
            raise ArithmeticError("J does not preserve the hyperplane")
    minus_id = tuple(tuple(Fraction(-int(i == j)) for j in range(6)) for i in range(6))
    if matmul(J, J) != minus_id:
        raise ArithmeticError(f"J^2 != -1 for xi = {xi}")
    Omega = ComplexKForm(pullback(emb, g2.phi), pullback(emb, contract(xi, g2.star_phi)))
    return CYData(
        xi=xi,
        basis=basis,
        omega=omega,
        omega_h=pullback(emb, omega),
        J=J,
        Omega=Omega,
        star_phi_h=pullback(emb, g2.star_phi),
    )


def _local(i: int) -> Vector:
    return Vector.basis(i + 1, 6)


def _apply(M: Matrix, v: Sequence) -> Vector:
    return Vector(sum(M[i][j] * v[j] for j in range(len(v))) for i in range(len(M)))


@dataclass(frozen=True)
class Verification:
    checks: tuple[Check, ...]
    compat_sign: int | None   # s with omega(u, Jv) = s <u, v>
    type_sign: int | None     # sigma with Omega(Ju, v, w) = sigma i Omega(u, v, w)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)


def detect_compat_sign(data: CYData) -> tuple[int | None, tuple | None]:
    """Global ``s`` with ``omega(u, Jv) = s <u, v>``, or a failing basis pair."""
    s = None
    for i, j in itertools.product(range(6), repeat=2):
        val = evaluate(data.omega_h, _local(i), _apply(data.J, _local(j)))
        if i != j:
            if val != 0:
                return None, (i + 1, j + 1, val)
            continue
        if s is None and val in (1, -1):
            s = int(val)
        if val != s:
            return None, (i + 1, j + 1, val)
    return s, None


def detect_type_sign(data: CYData) -> tuple[int | None, tuple | None]:
    """Global ``sigma`` with ``Omega(Ju, v, w) = sigma * i * Omega(u, v, w)``.

    Componentwise: ``Re(J..) = -sigma Im`` and ``Im(J..) = sigma Re``.
    """
    re, im = data.Omega.real, data.Omega.imag
    sigma = None
    for a in range(6):
        u = _local(a)
        Ju = _apply(data.J, u)
        for b, c in itertools.combinations(range(6), 2):
            v, w = _local(b), _local(c)
            lhs = (evaluate(re, Ju, v, w), evaluate(im, Ju, v, w))
            rhs = (evaluate(re, u, v, w), evaluate(im, u, v, w))
            if rhs == (0, 0):
                if lhs != (0, 0):
                    return None, (a + 1, b + 1, c + 1)
                continue
            cand = next((t for t in (1, -1) if lhs == (-t * rhs[1], t * rhs[0])), None)
            if cand is None or (sigma is not None and cand != sigma):
                return None, (a + 1, b + 1, c + 1)
            sigma = cand
    return sigma, None


def verify(data: CYData, g2: G2Structure = STANDARD) -> Verification:
    checks: list[Check] = []
    J = data.J
    ident = tuple(tuple(Fraction(int(i == j)) for j in range(6)) for i in range(6))
    neg = tuple(tuple(-x for x in row) for row in ident)

    checks.append(Check.test("J^2 = -id", matmul(J, J) == neg, "J_xi is an almost complex structure"))

    gram = matmul(transpose(J), J)
    bad = next(((i + 1, j + 1) for i in range(6) for j in range(6) if gram[i][j] != ident[i][j]), None)
    checks.append(Check.test("<Ju, Jv> = <u, v>", bad is None, "J_xi is metric invariant", witness=bad))

    top = wedge_all(data.omega_h, data.omega_h, data.omega_h)
    checks.append(Check.test("omega^3 != 0", not top.is_zero(), "omega_xi is nondegenerate",
                             witness=format_form(top)))

    s, wit = detect_compat_sign(data)
    checks.append(Check.test("omega(u, Jv) = s <u, v>", s is not None, "J_xi compatible with omega_xi",
                             witness={"s": s} if s is not None else {"basis_pair": wit}))

    bad = None
    for trip in itertools.combinations(range(6), 3):
        direct = evaluate(g2.phi, *(data.basis[i] for i in trip))
        if direct != data.Omega.real[tuple(i + 1 for i in trip)]:
            bad = tuple(i + 1 for i in trip)
            break
    checks.append(Check.test("Re Omega = phi|", bad is None, "phi restricted to X_xi equals Re Omega_xi",
                             witness=bad))

    star6 = hodge_star(data.omega_h)
    ok = data.star_phi_h == star6
    checks.append(Check.test(
        "*phi| = star_6 omega", ok, "*phi restricted to X_xi equals the 6-dimensional star of omega_xi",
        witness=None if ok else {"restricted": format_form(data.star_phi_h), "star": format_form(star6)},
    ))

    sigma, wit = detect_type_sign(data)
    checks.append(Check.test("Omega(Ju, v, w) = sigma i Omega(u, v, w)", sigma is not None,
                             "Omega_xi is a (3,0)-form",
                             witness={"sigma": sigma} if sigma is not None else {"triple": wit}))

    nonvanishing = not wedge(data.Omega.real, data.Omega.imag).is_zero()
    checks.append(Check.test("Re Omega ∧ Im Omega != 0", nonvanishing,
                             "Omega_xi is non-vanishing"))

    zero_types = wedge(data.Omega.real, data.omega_h).is_zero() and wedge(data.Omega.imag, data.omega_h).is_zero()
    checks.append(Check.test("Omega ∧ omega = 0", zero_types, "omega_xi is of type (1,1) relative to Omega_xi"))

    lie_phi = lie_derivative_flat(data.xi, g2.phi)
    lie_star = lie_derivative_flat(data.xi, g2.star_phi)
    checks.append(Check.test(
        "flat Lie derivatives vanish", lie_phi.is_zero() and lie_star.is_zero(),
        "L_xi phi = L_xi *phi = 0 in the flat model, so d omega_xi = 0 and J_xi is integrable",
        detail="constant-coefficient model: closedness and co-closedness hold identically",
    ))
    return Verification(tuple(checks), s, sigma)


@dataclass(frozen=True)
class ComplexChart:
    """Pairs ``(a, b, sign)`` meaning ``z = x_a + sign * i * x_b``."""

    pairs: tuple[tuple[int, int, int], ...]

    def formulas(self, letter: str = "z") -> tuple[str, ...]:
        return tuple(
            f"{letter}{k} = x{a} {'+' if s > 0 else '-'} i x{b}"
            for k, (a, b, s) in enumerate(self.pairs, start=1)
        )

    def to_dict(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "formulas": list(self.formulas())}


def j_table(data: CYData) -> dict[int, tuple[int, int]] | None:
    """Axis table ``a -> (b, eps)`` with ``J e_a = eps * e_b``; None if not axis-aligned."""
    axis = _axis(data.xi)
    if axis is None:
        return None
    out = {}
    for a in range(1, 8):
        if a == axis[0]:
            continue
        img = _axis(data.J_ambient(Vector.basis(a, 7)))
        if img is None:
            return None
        out[a] = img
    return out


def format_j_table(data: CYData) -> tuple[str, ...] | None:
    table = j_table(data)
    if table is None:
        return None
    return tuple(f"e{a} -> {'-' if eps < 0 else ''}e{b}" for a, (b, eps) in table.items())


CHART_CONVENTION = -1


def complex_coordinates(data: CYData, convention: int = CHART_CONVENTION) -> ComplexChart | None:
    """Axis-aligned complex chart, or None when ``J`` mixes the axes.

    Chart functions satisfy ``dz ∘ J = convention * i * dz``.  For
    ``J e_a = eps e_b`` that gives ``z = x_a + convention * eps * i * x_b``.
    The default ``-1`` is the convention of the classical ``T^7`` charts;
    compare with :func:`chart_type` to see how ``Omega`` sits in it.
    """
    if convention not in (1, -1):
        raise ValueError("convention must be +1 or -1")
    table = j_table(data)
    if table is None:
        return None
    used: set[int] = set()
    pairs = []
    for a in sorted(table):
        if a in used:
            continue
        b, eps = table[a]
        used.update((a, b))
        pairs.append((a, b, convention * eps))
    return ComplexChart(tuple(pairs))


def chart_type(sigma: int, convention: int = CHART_CONVENTION) -> str:
    """Bidegree of ``Omega`` in chart coordinates of the given convention."""
    return "(3,0)" if sigma == convention else "(0,3)"


@dataclass(frozen=True)
class Holomorphy:
    kind: str                       # "holomorphic" | "antiholomorphic" | "neither"
    omega_sign: int | None          # L* omega = omega_sign * omega
    Omega_factor: str | None        # L* Omega = c * Omega, c in {1, -1, i, -i}
    chart_action: tuple[int, ...] | None   # real multiplier on each chart coordinate

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "omega_sign": self.omega_sign,
            "Omega_factor": self.Omega_factor,
            "chart_action": None if self.chart_action is None else list(self.chart_action),
        }


def holomorphy_type(L: Sequence[Sequence], data: CYData) -> Holomorphy:
    L = tuple(tuple(Fraction(x) for x in row) for row in L)
    if len(L) != 7 or any(len(r) != 7 for r in L):
        raise ValueError("L must be 7x7")
    for b in data.basis:
        if inner(_apply(L, b), data.xi) != 0:
            raise ValueError("L does not preserve the hyperplane xi^⊥")
    Lh = tuple(tuple(inner(bi, _apply(L, bj)) for bj in data.basis) for bi in data.basis)
    LJ, JL = matmul(Lh, data.J), matmul(data.J, Lh)
    if LJ == JL:
        kind = "holomorphic"
    elif LJ == tuple(tuple(-x for x in row) for row in JL):
        kind = "antiholomorphic"
    else:
        kind = "neither"

    pw = pullback(Lh, data.omega_h)
    omega_sign = 1 if pw == data.omega_h else -1 if pw == -data.omega_h else None

    re, im = data.Omega.real, data.Omega.imag
    pre, pim = pullback(Lh, re), pullback(Lh, im)
    factor = None
    for name, (a, b) in {"1": (1, 0), "-1": (-1, 0), "i": (0, 1), "-i": (0, -1)}.items():
        if pre == re * a - im * b and pim == re * b + im * a:
            factor = name
            break

    action = None
    chart = complex_coordinates(data)
    if chart is not None:
        mults = []
        for a, b, _ in chart.pairs:
            ea, eb = Vector.basis(a, 7), Vector.basis(b, 7)
            la, lb = _apply(L, ea), _apply(L, eb)
            lam = la[a - 1]
            if la != ea * lam or lb != eb * lam or abs(lam) != 1:
                mults = None
                break
            mults.append(int(lam))
        action = tuple(mults) if mults is not None else None
    return Holomorphy(kind, omega_sign, factor, action)


@dataclass(frozen=True)
class DualPairReport:
    E: CoordinatePlane
    V: CoordinatePlane
    xi: Vector
    xi_prime: Vector
    data: CYData
    data_prime: CYData
    verification: Verification
    verification_prime: Verification

    @property
    def ok(self) -> bool:
        return self.verification.ok and self.verification_prime.ok and self.signs_agree

    @property
    def signs_agree(self) -> bool:
        v, w = self.verification, self.verification_prime
        return (v.compat_sign, v.type_sign) == (w.compat_sign, w.type_sign)

    def to_dict(self) -> dict:
        out = {}
        for key, data, ver, letter in (
            ("xi", self.data, self.verification, "z"),
            ("xi_prime", self.data_prime, self.verification_prime, "w"),
        ):
            chart = complex_coordinates(data)
            out[key] = {
                "vector": list(data.xi),
                "submanifold": data.label(),
                "J_table": format_j_table(data),
                "chart": None if chart is None else list(chart.formulas(letter)),
                "signs": {"s": ver.compat_sign, "sigma": ver.type_sign},
                "Omega_type_in_chart": None if chart is None or ver.type_sign is None
                else chart_type(ver.type_sign),
                "omega": format_form(data.omega),
            }
        out["E"] = self.E.label()
        out["V"] = self.V.label()
        out["xi_in_V"] = True
        out["xi_prime_in_E"] = True
        return out


def dual_pair(E: CoordinatePlane, xi, xi_prime, g2: G2Structure = STANDARD) -> DualPairReport:
    if E.dim != 3 or not is_associative(E, g2).associative:
        raise MembershipError("E must be an associative 3-plane")
    V = orthogonal_complement(E)
    if not is_coassociative(V, g2):
        raise MembershipError("complement of E is not coassociative")
    xi, xi_prime = _unit7(xi), _unit7(xi_prime)
    if not E.is_orthogonal_to(xi):
        raise MembershipError(f"xi = {xi} does not lie in V = E^⊥")
    if not E.contains(xi_prime):
        raise MembershipError(f"xi' = {xi_prime} does not lie in E")
    d, dp = extract(xi, g2), extract(xi_prime, g2)
    return DualPairReport(E, V, xi, xi_prime, d, dp, verify(d, g2), verify(dp, g2))
