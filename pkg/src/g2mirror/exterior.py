"""Constant-coefficient exterior algebra on R^n over Q.

A :class:`KForm` is a finite sum of basis blades ``e^I`` (``I`` a strictly
increasing tuple of 1-based indices) with Fraction coefficients.  The metric is
the standard Euclidean one and ``e^1 ∧ ... ∧ e^n`` is positively oriented.

Vectors are :class:`Vector` tuples of Fractions.  Contraction inserts into the
first slot: ``(v ⌟ a)(w2, ..., wk) = a(v, w2, ..., wk)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactalg import as_fraction, determinant

Blade = tuple[int, ...]

MAX_DIM = 12


def _perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (0 if there is a repeat)."""
    if len(set(seq)) != len(seq):
        return 0
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    return -1 if inv % 2 else 1


class Vector(tuple):
    """An exact vector of R^n; supports ``+``, ``-`` and scalar ``*``."""

    def __new__(cls, comps: Iterable = ()):
        return super().__new__(cls, (as_fraction(c) for c in comps))

    @classmethod
    def basis(cls, i: int, n: int = 7) -> "Vector":
        if not 1 <= i <= n:
            raise ValueError(f"basis index {i} out of range 1..{n}")
        return cls(int(j == i - 1) for j in range(n))

    @classmethod
    def zero(cls, n: int = 7) -> "Vector":
        return cls([0] * n)

    @property
    def n(self) -> int:
        return len(self)

    def __add__(self, other):
        _check_len(self, other)
        return Vector(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        _check_len(self, other)
        return Vector(a - b for a, b in zip(self, other))

    def __neg__(self):
        return Vector(-a for a in self)

    def __mul__(self, k):
        k = as_fraction(k)
        return Vector(k * a for a in self)

    __rmul__ = __mul__

    def dot(self, other) -> Fraction:
        _check_len(self, other)
        return sum((a * b for a, b in zip(self, other)), Fraction(0))

    def norm2(self) -> Fraction:
        return self.dot(self)

    def is_zero(self) -> bool:
        return not any(self)

    def __repr__(self) -> str:
        return "Vector(" + ", ".join(str(c) for c in self) + ")"


def _check_len(u, v):
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")


def inner(u: Sequence, v: Sequence) -> Fraction:
    _check_len(u, v)
    return sum((as_fraction(a) * as_fraction(b) for a, b in zip(u, v)), Fraction(0))


class KForm:
    """Alternating k-form on R^n with exact rational coefficients.

    Immutable; zero coefficients are never stored.
    """

    __slots__ = ("n", "degree", "_terms", "_hash")

    def __init__(self, n: int, degree: int, terms: Mapping[Blade, object] | None = None):
        if not 1 <= n <= MAX_DIM:
            raise ValueError(f"ambient dimension must be in 1..{MAX_DIM}, got {n}")
        if degree < 0:
            raise ValueError("negative degree")
        clean: dict[Blade, Fraction] = {}
        for blade, coef in (terms or {}).items():
            blade = tuple(blade)
            if len(blade) != degree:
                raise ValueError(f"blade {blade} has wrong degree for a {degree}-form")
            if any(not 1 <= i <= n for i in blade):
                raise ValueError(f"blade {blade} out of range for n={n}")
            if any(blade[i] >= blade[i + 1] for i in range(len(blade) - 1)):
                raise ValueError(f"blade {blade} is not strictly increasing")
            c = as_fraction(coef)
            if c:
                clean[blade] = clean.get(blade, Fraction(0)) + c
        self.n = n
        self.degree = degree
        self._terms = {b: c for b, c in sorted(clean.items()) if c}
        self._hash = None

    # construction helpers ------------------------------------------------

    @classmethod
    def from_unsorted(cls, n: int, degree: int, items: Iterable[tuple[Sequence[int], object]]):
        """Build from possibly unsorted / repeated index tuples, applying signs."""
        acc: dict[Blade, Fraction] = {}
        for idx, coef in items:
            s = _perm_sign(idx)
            if s:
                key = tuple(sorted(idx))
                acc[key] = acc.get(key, Fraction(0)) + s * as_fraction(coef)
        return cls(n, degree, acc)

    @classmethod
    def blade(cls, indices: Sequence[int], n: int = 7, coef=1) -> "KForm":
        return cls.from_unsorted(n, len(indices), [(tuple(indices), coef)])

    @classmethod
    def scalar(cls, c, n: int = 7) -> "KForm":
        return cls(n, 0, {(): c})

    @classmethod
    def zero(cls, n: int, degree: int) -> "KForm":
        return cls(n, degree)

    @classmethod
    def volume(cls, n: int = 7) -> "KForm":
        return cls(n, n, {tuple(range(1, n + 1)): 1})

    @classmethod
    def one_form(cls, v: Sequence) -> "KForm":
        """The metric dual of a vector."""
        return cls(len(v), 1, {(i + 1,): c for i, c in enumerate(v)})

    # mapping-ish access ----------------------------------------------------

    @property
    def terms(self) -> dict[Blade, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __getitem__(self, blade: Sequence[int]) -> Fraction:
        blade = tuple(blade)
        s = _perm_sign(blade)
        if not s:
            return Fraction(0)
        return s * self._terms.get(tuple(sorted(blade)), Fraction(0))

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # arithmetic ------------------------------------------------------------

    def _same_space(self, other: "KForm"):
        if not isinstance(other, KForm):
            raise TypeError(f"expected KForm, got {type(other).__name__}")
        if other.n != self.n:
            raise ValueError(f"dimension mismatch: n={self.n} vs n={other.n}")

    def __add__(self, other: "KForm") -> "KForm":
        self._same_space(other)
        if other.degree != self.degree:
            raise ValueError("cannot add forms of different degree")
        acc = dict(self._terms)
        for b, c in other._terms.items():
            acc[b] = acc.get(b, Fraction(0)) + c
        return KForm(self.n, self.degree, acc)

    def __neg__(self) -> "KForm":
        return KForm(self.n, self.degree, {b: -c for b, c in self._terms.items()})

    def __sub__(self, other: "KForm") -> "KForm":
        return self + (-other)

    def __mul__(self, k) -> "KForm":
        if isinstance(k, KForm):
            raise TypeError("use wedge() or ^ for the exterior product")
        k = as_fraction(k)
        return KForm(self.n, self.degree, {b: k * c for b, c in self._terms.items()})

    __rmul__ = __mul__

    def __xor__(self, other: "KForm") -> "KForm":
        return wedge(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, KForm):
            return NotImplemented
        return (self.n, self.degree, self._terms) == (other.n, other.degree, other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.degree, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"KForm(n={self.n}, degree={self.degree}, {format_form(self)!r})"

    def __str__(self) -> str:
        return format_form(self)


@dataclass(frozen=True)
class ComplexKForm:
    real: KForm
    imag: KForm

    def __post_init__(self):
        if (self.real.n, self.real.degree) != (self.imag.n, self.imag.degree):
            raise ValueError("real and imaginary parts must share degree and dimension")

    @property
    def degree(self) -> int:
        return self.real.degree

    @property
    def n(self) -> int:
        return self.real.n

    def evaluate(self, *vectors) -> tuple[Fraction, Fraction]:
        """Real and imaginary parts of the value."""
        return evaluate(self.real, *vectors), evaluate(self.imag, *vectors)


# operations -----------------------------------------------------------------


def wedge(a: KForm, b: KForm) -> KForm:
    a._same_space(b)
    acc: dict[Blade, Fraction] = {}
    for ia, ca in a.items():
        for ib, cb in b.items():
            idx = ia + ib
            s = _perm_sign(idx)
            if s:
                key = tuple(sorted(idx))
                acc[key] = acc.get(key, Fraction(0)) + s * ca * cb
    return KForm(a.n, a.degree + b.degree, acc)


def wedge_all(*forms: KForm) -> KForm:
    out = forms[0]
    for f in forms[1:]:
        out = wedge(out, f)
    return out


def contract(v: Sequence, a: KForm) -> KForm:
    """Interior product ``v ⌟ a`` (insertion into the first slot)."""
    if a.degree == 0:
        raise ValueError("cannot contract a vector into a 0-form")
    _check_len(v, range(a.n))
    v = [as_fraction(x) for x in v]
    acc: dict[Blade, Fraction] = {}
    for blade, c in a.items():
        for pos, i in enumerate(blade):
            vi = v[i - 1]
            if vi:
                rest = blade[:pos] + blade[pos + 1:]
                sign = -1 if pos % 2 else 1
                acc[rest] = acc.get(rest, Fraction(0)) + sign * vi * c
    return KForm(a.n, a.degree - 1, acc)


def complement_sign(blade: Blade, n: int) -> tuple[int, Blade]:
    comp = tuple(i for i in range(1, n + 1) if i not in blade)
    return _perm_sign(blade + comp), comp


def hodge_star(a: KForm) -> KForm:
    """Euclidean Hodge star: ``*(e^I) = sign(I, I^c) e^{I^c}``."""
    acc = {}
    for blade, c in a.items():
        s, comp = complement_sign(blade, a.n)
        acc[comp] = s * c
    return KForm(a.n, a.n - a.degree, acc)


def form_inner(a: KForm, b: KForm) -> Fraction:
    """Pointwise inner product of forms (basis blades orthonormal)."""
    a._same_space(b)
    if a.degree != b.degree:
        raise ValueError("inner product of forms of different degree")
    return sum((c * b._terms.get(bl, 0) for bl, c in a.items()), Fraction(0))


def pullback(L: Sequence[Sequence], a: KForm) -> KForm:
    """Pullback along the linear map ``L``: ``(L* a)(v...) = a(L v, ...)``.

    ``L`` is an ``n x m`` matrix (rows index the target ``R^n`` of ``a``); a
    rectangular ``L`` restricts ``a`` to the image of ``R^m``.
    """
    rows = [[as_fraction(x) for x in r] for r in L]
    if len(rows) != a.n:
        raise ValueError(f"dimension mismatch: L has {len(rows)} rows, form lives on R^{a.n}")
    m = len(rows[0])
    k = a.degree
    acc: dict[Blade, Fraction] = {}
    for src in itertools.combinations(range(1, m + 1), k):
        total = Fraction(0)
        for blade, c in a.items():
            minor = [[rows[i - 1][j - 1] for j in src] for i in blade]
            total += c * (determinant(minor) if k else 1)
        if total:
            acc[src] = total
    return KForm(m, k, acc)


def evaluate(a: KForm, *vectors: Sequence) -> Fraction:
    """Evaluate ``a(v1, ..., vk)``."""
    if len(vectors) != a.degree:
        raise ValueError(f"a {a.degree}-form needs {a.degree} vectors, got {len(vectors)}")
    if a.degree == 0:
        return a._terms.get((), Fraction(0))
    vs = [[as_fraction(x) for x in v] for v in vectors]
    for v in vs:
        _check_len(v, range(a.n))
    total = Fraction(0)
    for blade, c in a.items():
        total += c * determinant([[v[i - 1] for v in vs] for i in blade])
    return total


def exterior_derivative_constant(a: KForm) -> KForm:
    """``d`` of a constant-coefficient form, which is always zero."""
    return KForm.zero(a.n, a.degree + 1)


def lie_derivative_flat(v: Sequence, a: KForm) -> KForm:
    """Cartan formula ``d(v ⌟ a) + v ⌟ da`` for a constant field and form."""
    second = contract(v, exterior_derivative_constant(a))
    if a.degree == 0:
        return second
    return exterior_derivative_constant(contract(v, a)) + second


# text format -------------------------------------------------------------------

_TERM = re.compile(r"([+-])\s*([0-9]+(?:/[0-9]+)?)\s*\*\s*e([0-9.]*)")


def _blade_label(blade: Blade, n: int) -> str:
    if n <= 9:
        return "".join(str(i) for i in blade)
    return ".".join(str(i) for i in blade)


def format_form(a: KForm) -> str:
    """Signed monomial list, e.g. ``+1*e123 +1*e145 -1*e257``; ``0`` if zero."""
    if a.is_zero():
        return "0"
    parts = []
    for blade, c in a.items():
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign}{abs(c)}*e{_blade_label(blade, a.n)}")
    return " ".join(parts)


def parse_form(text: str, n: int = 7, degree: int | None = None) -> KForm:
    """Inverse of :func:`format_form`."""
    text = text.strip()
    if text == "0":
        if degree is None:
            raise ValueError("degree required to parse the zero form")
        return KForm.zero(n, degree)
    pos = 0
    items = []
    for m in _TERM.finditer(text):
        if text[pos:m.start()].strip():
            raise ValueError(f"unparseable text near {text[pos:m.start()]!r}")
        pos = m.end()
        sign, coef, label = m.groups()
        if n <= 9:
            if "." in label:
                raise ValueError(f"unexpected separator in {label!r} for n={n}")
            idx = tuple(int(ch) for ch in label)
        else:
            idx = tuple(int(p) for p in label.split(".")) if label else ()
        c = Fraction(coef) * (-1 if sign == "-" else 1)
        items.append((idx, c))
    if text[pos:].strip() or not items:
        raise ValueError(f"unparseable form text {text!r}")
    degrees = {len(i) for i, _ in items}
    if len(degrees) != 1:
        raise ValueError("mixed-degree form text")
    k = degrees.pop()
    if degree is not None and k != degree:
        raise ValueError(f"expected degree {degree}, parsed {k}")
    return KForm.from_unsorted(n, k, items)
