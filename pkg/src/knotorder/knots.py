"""Seifert matrices and the abelian invariants read off from them.

Conventions used throughout:

* The Alexander polynomial is det(V - t V^T) with powers of t divided out
  and the leading coefficient made positive.
* H_1 of the double branched cover is the cokernel of V + V^T, with the
  generators coming from the Smith form of that matrix.
* The linking form is -(V + V^T)^(-1) read mod 1 on those generators.
* For the two-bridge knot K(p, q) the generator of Z_p links itself q/p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (
    FiniteAbelianGroup,
    IntMatrix,
    IntPolynomial,
    cokernel,
    inverse_fraction,
    smith_normal_form,
)
from .errors import InvalidBridgeParams, InvalidSeifertMatrix, SingularPresentation

__all__ = [
    "SeifertMatrix",
    "LinkingForm",
    "Character",
    "TwoBridgeKnot",
    "alexander_polynomial",
    "twisted_double_seifert",
    "twisted_double_polynomial",
    "two_bridge",
    "double_cover_homology",
    "linking_form",
    "primary_part",
    "character_of",
    "FiniteAbelianGroup",
]


class SeifertMatrix:
    """Square integer matrix V with det(V - V^T) = 1."""

    __slots__ = ("V",)

    def __init__(self, V: IntMatrix | Sequence[Sequence[int]]):
        try:
            m = V if isinstance(V, IntMatrix) else IntMatrix(V)
        except (TypeError, ValueError) as exc:
            raise InvalidSeifertMatrix(f"not an integer matrix: {exc}") from None
        if not m.is_square:
            raise InvalidSeifertMatrix(f"Seifert matrix must be square, got {m.rows}x{m.cols}")
        skew = (m - m.T).det()
        if skew != 1:
            raise InvalidSeifertMatrix(f"det(V - V^T) = 1 violated (got {skew})")
        self.V = m

    @property
    def size(self) -> int:
        return self.V.rows

    @property
    def genus(self) -> int:
        return self.V.rows // 2

    def symmetrized(self) -> IntMatrix:
        return self.V + self.V.T

    def tolist(self) -> list[list[int]]:
        return self.V.tolist()

    def __eq__(self, other):
        return isinstance(other, SeifertMatrix) and self.V == other.V

    def __hash__(self):
        return hash(self.V)

    def __repr__(self):
        return f"SeifertMatrix({self.V.tolist()!r})"


def _as_seifert(V) -> SeifertMatrix:
    return V if isinstance(V, SeifertMatrix) else SeifertMatrix(V)


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> IntPolynomial:
    # Newton divided differences; the result has integer coefficients here
    n = len(xs)
    coef = [Fraction(y) for y in ys]
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    poly = [Fraction(0)] * n
    basis = [Fraction(1)]
    for k in range(n):
        for i, b in enumerate(basis):
            poly[i] += coef[k] * b
        # basis *= (t - xs[k])
        nxt = [Fraction(0)] * (len(basis) + 1)
        for i, b in enumerate(basis):
            nxt[i + 1] += b
            nxt[i] -= xs[k] * b
        basis = nxt
    if any(c.denominator != 1 for c in poly):
        raise ArithmeticError("interpolated polynomial is not integral")
    return IntPolynomial(tuple(int(c) for c in poly))


def alexander_polynomial(V) -> IntPolynomial:
    """det(V - t V^T), normalized.

    The determinant is sampled at 2g + 1 integer points and interpolated
    exactly, which avoids polynomial-entry elimination.
    """
    S = _as_seifert(V)
    m, mt = S.V, S.V.T
    xs = list(range(S.size + 1))
    ys = [(m - mt.scale(x)).det() for x in xs]
    return _interpolate(xs, ys).normalized()


def twisted_double_seifert(a: int) -> SeifertMatrix:
    return SeifertMatrix([[a, 1], [0, -1]])


def twisted_double_polynomial(a: int) -> IntPolynomial:
    """The un-normalized companion a t^2 - (2a+1) t + a, whose value at -1 is 4a+1."""
    return IntPolynomial((a, -(2 * a + 1), a))


def double_cover_homology(V) -> FiniteAbelianGroup:
    S = _as_seifert(V)
    try:
        return cokernel(S.symmetrized())
    except SingularPresentation:  # pragma: no cover - det(V+V^T) = Delta(-1) is odd
        raise AssertionError("V + V^T singular for a valid Seifert matrix") from None


def primary_part(G: FiniteAbelianGroup, p: int) -> FiniteAbelianGroup:
    return G.primary_part(p)


def _frac_mod1(x: Fraction) -> Fraction:
    return x - math.floor(x)


@dataclass(frozen=True)
class LinkingForm:
    """Symmetric Q/Z-valued pairing on a finite abelian group.

    ``gram[i][j]`` is the pairing of the i-th and j-th invariant-factor
    generators, stored in [0, 1). Elements are coordinate tuples with
    respect to those generators.
    """

    carrier: FiniteAbelianGroup
    gram: tuple[tuple[Fraction, ...], ...]
    generators: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        g = tuple(tuple(_frac_mod1(Fraction(x)) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        r = self.carrier.rank
        if len(g) != r or any(len(row) != r for row in g):
            raise ValueError("gram matrix does not match the carrier's rank")

    def pair(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        total = Fraction(0)
        for i, xi in enumerate(x):
            if xi:
                row = self.gram[i]
                for j, yj in enumerate(y):
                    if yj:
                        total += xi * yj * row[j]
        return _frac_mod1(total)

    def is_symmetric(self) -> bool:
        n = len(self.gram)
        return all(self.gram[i][j] == self.gram[j][i] for i in range(n) for j in range(n))

    def is_well_defined(self) -> bool:
        """d_i * beta(g_i, g_j) is an integer for all i, j."""
        ds = self.carrier.invariant_factors
        return all((ds[i] * self.gram[i][j]).denominator == 1 for i in range(len(ds)) for j in range(len(ds)))

    def is_nonsingular(self) -> bool:
        """True when x -> beta(x, -) is a bijection onto Hom(H, Q/Z).

        The adjoint is the map Z^r -> (+) Z_{d_j} given by the integer
        matrix C_ij = d_j beta(g_i, g_j). Both sides have |H| elements, so
        it suffices that rows of C together with d_j e_j span Z^r.
        """
        ds = self.carrier.invariant_factors
        r = len(ds)
        if r == 0:
            return True
        rows = [[int(self.gram[i][j] * ds[j]) for j in range(r)] for i in range(r)]
        rows += [[ds[j] if j == i else 0 for j in range(r)] for i in range(r)]
        return all(d == 1 for d in smith_normal_form(rows).diagonal)

    def element_order(self, x: Sequence[int]) -> int:
        out = 1
        for xi, d in zip(x, self.carrier.invariant_factors):
            k = d // math.gcd(xi, d)
            out = out * k // math.gcd(out, k)
        return out

    def elements(self):
        """Iterate over all elements as coordinate tuples (small groups only)."""
        from itertools import product

        return product(*(range(d) for d in self.carrier.invariant_factors))


def linking_form(V) -> LinkingForm:
    S = _as_seifert(V)
    A = S.symmetrized()
    if A.rows == 0:
        return LinkingForm(FiniteAbelianGroup(), ())
    snf = smith_normal_form(A)
    diag = snf.diagonal
    keep = [i for i, d in enumerate(diag) if d > 1]
    W = snf.W
    AW = A @ W
    WtAW = W.T @ AW
    gram = tuple(
        tuple(Fraction(-WtAW[i, j], diag[i] * diag[j]) for j in keep) for i in keep
    )
    # generator i in original coordinates is U^{-1} e_i = A W e_i / d_i
    gens = tuple(tuple(AW[r, i] // diag[i] for r in range(A.rows)) for i in keep)
    return LinkingForm(FiniteAbelianGroup(tuple(diag[i] for i in keep)), gram, gens)


@dataclass(frozen=True)
class Character:
    """Homomorphism H -> Z_modulus, y -> beta(x, y), for a fixed element x."""

    modulus: int
    values: tuple[int, ...]
    self_linking: Fraction

    def __call__(self, y: Sequence[int]) -> int:
        return sum(v * yi for v, yi in zip(self.values, y)) % self.modulus

    @property
    def is_trivial(self) -> bool:
        return self.modulus == 1

    @property
    def is_onto(self) -> bool:
        return math.gcd(self.modulus, *self.values) == 1 if self.values else self.modulus == 1


def character_of(x: Sequence[int], form: LinkingForm) -> Character:
    """Linking with x, valued in Z_k where k is the order of x.

    ``self_linking`` is beta(x, x); x and -x give the same value.
    """
    x = tuple(xi % d for xi, d in zip(x, form.carrier.invariant_factors))
    order = form.element_order(x)
    values = []
    for j in range(form.carrier.rank):
        ej = tuple(int(i == j) for i in range(form.carrier.rank))
        v = form.pair(x, ej) * order
        assert v.denominator == 1
        values.append(int(v) % order)
    return Character(order, tuple(values), form.pair(x, x))


@dataclass(frozen=True)
class TwoBridgeKnot:
    """K(p, q): double branched cover is the lens space L(p, q), H_1 = Z_p."""

    p: int
    q: int

    @property
    def homology(self) -> FiniteAbelianGroup:
        return FiniteAbelianGroup((self.p,))

    @property
    def linking_form(self) -> LinkingForm:
        return LinkingForm(self.homology, ((Fraction(self.q, self.p),),))


def two_bridge(p: int, q: int) -> TwoBridgeKnot:
    if p < 3 or p % 2 == 0:
        raise InvalidBridgeParams(f"p must be odd and >= 3, got {p}")
    if not 0 < q < p:
        raise InvalidBridgeParams(f"need 0 < q < p, got q={q}")
    if math.gcd(p, q) != 1:
        raise InvalidBridgeParams(f"gcd(p, q) = {math.gcd(p, q)} != 1")
    return TwoBridgeKnot(p, q)
