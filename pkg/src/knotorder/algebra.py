"""Exact integer linear algebra and integer polynomials.

Matrices and polynomials hold Python ints only. Nothing here touches
floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import SingularPresentation, ZeroPolynomial
from .numtheory import factorize


class IntMatrix:
    """Immutable dense integer matrix, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, data: Iterable[Iterable[int]] = (), cols: int | None = None):
        entries = tuple(tuple(_as_int(x) for x in row) for row in data)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        if any(len(r) != cols for r in entries):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "rows", len(entries))
        object.__setattr__(self, "cols", cols)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(([int(i == j) for j in range(n)] for i in range(n)), cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(([0] * cols for _ in range(rows)), cols=cols)

    @classmethod
    def diagonal(cls, diag: Sequence[int]) -> "IntMatrix":
        n = len(diag)
        return cls(([diag[i] if i == j else 0 for j in range(n)] for i in range(n)), cols=n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self.entries]!r})"

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(zip(*self.entries), cols=self.rows) if self.rows else IntMatrix.zeros(self.cols, 0)

    T = property(transpose)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return IntMatrix(
            ([a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)),
            cols=self.cols,
        )

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(([-a for a in r] for r in self.entries), cols=self.cols)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self + (-other)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(
            ([sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.entries),
            cols=other.cols,
        )

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(([k * a for a in r] for r in self.entries), cols=self.cols)

    def det(self) -> int:
        return determinant(self.entries)


def _as_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    raise TypeError(f"non-integer entry {x!r}")


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    a = [list(r) for r in rows]
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse_fraction(m: IntMatrix) -> list[list[Fraction]]:
    """Exact inverse over Q by Gauss-Jordan; raises SingularPresentation."""
    n = m.rows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m.entries)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise SingularPresentation("matrix is singular")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


@dataclass(frozen=True)
class SNFResult:
    """``U @ M @ W == D`` with D diagonal, d_i >= 0, d_i | d_(i+1)."""

    D: IntMatrix
    U: IntMatrix
    W: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.shape)))


def smith_normal_form(m: IntMatrix | Sequence[Sequence[int]]) -> SNFResult:
    """Smith normal form with unimodular transforms.

    Pivot rule: the entry of least nonzero absolute value in the active
    block, ties broken by lowest (row, column). The transforms are
    accumulated by applying the same row (column) operations to an
    identity matrix.
    """
    if not isinstance(m, IntMatrix):
        m = IntMatrix(m)
    rows, cols = m.shape
    a = m.tolist()
    u = IntMatrix.identity(rows).tolist()
    w = IntMatrix.identity(cols).tolist()

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in w:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, k):
        # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for r in a:
            r[dst] += k * r[src]
        for r in w:
            r[dst] += k * r[src]

    for t in range(min(rows, cols)):
        while True:
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    v = a[i][j]
                    if v and (best is None or abs(v) < best[0]):
                        best = (abs(v), i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            piv = a[t][t]
            clean = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // piv))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // piv))
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % piv),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return SNFResult(IntMatrix(a, cols=cols), IntMatrix(u, cols=rows), IntMatrix(w, cols=cols))


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Finite abelian group by invariant factors d_1 | d_2 | ... with d_i >= 2."""

    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        fs = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", fs)
        if any(d < 2 for d in fs):
            raise ValueError(f"invariant factors must be >= 2: {fs}")
        if any(b % a for a, b in zip(fs, fs[1:])):
            raise ValueError(f"invariant factors must form a divisibility chain: {fs}")

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "FiniteAbelianGroup":
        """Normalize an arbitrary direct sum of cyclic groups."""
        by_prime: dict[int, list[int]] = {}
        for n in orders:
            if n < 1:
                raise ValueError("cyclic orders must be positive")
            for p, e in factorize(n).pairs:
                by_prime.setdefault(p, []).append(p**e)
        width = max((len(v) for v in by_prime.values()), default=0)
        factors = [1] * width
        for powers in by_prime.values():
            powers.sort()
            for i, q in enumerate(powers):
                factors[width - len(powers) + i] *= q
        return cls(tuple(factors))

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariant_factors) <= 1

    def primary_decomposition(self) -> dict[int, list[int]]:
        """Map each prime p to the ascending list of p-power cyclic orders."""
        out: dict[int, list[int]] = {}
        for d in self.invariant_factors:
            for p, e in factorize(d).pairs:
                out.setdefault(p, []).append(p**e)
        return {p: sorted(v) for p, v in sorted(out.items())}

    def primary_orders(self) -> list[int]:
        return [q for qs in self.primary_decomposition().values() for q in qs]

    def primary_part(self, p: int) -> "FiniteAbelianGroup":
        return FiniteAbelianGroup(tuple(self.primary_decomposition().get(p, [])))

    def __str__(self) -> str:
        if self.is_trivial:
            return "0"
        return " + ".join(f"Z_{d}" for d in self.invariant_factors)


def cokernel(m: IntMatrix | Sequence[Sequence[int]]) -> FiniteAbelianGroup:
    """Z^n / M Z^n for a square nonsingular M."""
    if not isinstance(m, IntMatrix):
        m = IntMatrix(m)
    if not m.is_square:
        raise ValueError("cokernel needs a square presentation")
    if m.det() == 0:
        raise SingularPresentation("presentation matrix has determinant 0")
    snf = smith_normal_form(m)
    return FiniteAbelianGroup(tuple(d for d in snf.diagonal if d > 1))


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients in ascending degree, trailing zeros trimmed."""

    coeffs: tuple[int, ...] = field(default=())

    def __post_init__(self):
        cs = [_as_int(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def from_descending(cls, coeffs: Sequence[int]) -> "IntPolynomial":
        return cls(tuple(reversed(coeffs)))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> "IntPolynomial":
        return cls((0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "IntPolynomial":
        return IntPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntPolynomial":
        if isinstance(other, int):
            return IntPolynomial(tuple(other * c for c in self.coeffs))
        if not self.coeffs or not other.coeffs:
            return IntPolynomial()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    __rmul__ = __mul__

    def normalized(self) -> "IntPolynomial":
        """Divide out powers of t and make the leading coefficient positive."""
        cs = list(self.coeffs)
        while cs and cs[0] == 0:
            cs.pop(0)
        if cs and cs[-1] < 0:
            cs = [-c for c in cs]
        return IntPolynomial(tuple(cs))

    def discriminant_quadratic(self) -> int:
        if self.degree != 2:
            raise ValueError("not a quadratic")
        c, b, a = self.coeffs
        return b * b - 4 * a * c

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            body = str(mag) if (mag != 1 or k == 0) else ""
            term = body + mono
            if not terms:
                terms.append(("-" if c < 0 else "") + term)
            else:
                terms.append(("- " if c < 0 else "+ ") + term)
        return " ".join(terms)


def poly_eval(f: IntPolynomial, x: int) -> int:
    return f(x)


def sylvester_matrix(f: IntPolynomial, g: IntPolynomial) -> IntMatrix:
    """Sylvester matrix with f's shifted coefficient rows on top."""
    m, n = f.degree, g.degree
    size = m + n
    fd = list(reversed(f.coeffs))
    gd = list(reversed(g.coeffs))
    rows = []
    for i in range(n):
        rows.append([0] * i + fd + [0] * (size - i - m - 1))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (size - i - n - 1))
    return IntMatrix(rows, cols=size)


def poly_resultant(f: IntPolynomial, g: IntPolynomial) -> int:
    """Res(f, g) as the determinant of the Sylvester matrix."""
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant with the zero polynomial")
    return sylvester_matrix(f, g).det()


def _frac_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    # ascending coefficient lists, b nonzero with nonzero leading coefficient
    a = a[:]
    while len(a) >= len(b) and a:
        k = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= k * c
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def poly_resultant_euclid(f: IntPolynomial, g: IntPolynomial) -> int:
    """Res(f, g) through the Euclidean remainder sequence over Q.

    Independent route to the same value as :func:`poly_resultant`, using
    Res(f, g) = (-1)^(mn) lc(g)^(m - deg r) Res(g, r) with r = f mod g.
    """
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("resultant with the zero polynomial")
    a = [Fraction(c) for c in f.coeffs]
    b = [Fraction(c) for c in g.coeffs]
    acc = Fraction(1)
    while True:
        m, n = len(a) - 1, len(b) - 1
        if n == 0:
            return int(acc * b[0] ** m)
        r = _frac_rem(a, b)
        if not r:
            return 0
        if (m * n) % 2:
            acc = -acc
        acc *= b[-1] ** (m - (len(r) - 1))
        a, b = b, r
