"""Replay of the infinite-order argument on a concrete metabolizer.

Casson-Gordon invariants are never evaluated. They are formal symbols
t^alpha in the group ring Z[Z_q], one per character class, and a level is
"resolved" once the relations force a nonzero integer multiple of its
symbol to vanish. The chain runs from level n-1 down to (n-1)/2 and ends at
a character onto Z_{p^((n+1)/2)}, whose invariant cannot vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .algebra import IntPolynomial, inverse_fraction, IntMatrix, poly_resultant
from .errors import ReplayFailure, UnresolvedDependency, ZeroPolynomial
from .metabolizers import MetabolizerNF, PrimaryForm, valuation, verify_structure
from .numtheory import discrete_log, primitive_root, unit_group_order


@dataclass(frozen=True)
class GroupRingElement:
    """Element of Z[Z_q]: ``coeffs[j]`` is the coefficient of t^j."""

    q: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        if self.q < 1 or len(cs) != self.q:
            raise ValueError(f"need exactly q = {self.q} coefficients, got {len(cs)}")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_exponents(cls, q: int, exponents: Iterable[int], constant: int = 0) -> "GroupRingElement":
        cs = [0] * q
        cs[0] += constant
        for a in exponents:
            cs[a % q] += 1
        return cls(q, tuple(cs))

    @classmethod
    def one(cls, q: int) -> "GroupRingElement":
        return cls.from_exponents(q, (), 1)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "GroupRingElement") -> "GroupRingElement":
        self._same_ring(other)
        return GroupRingElement(self.q, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other) -> "GroupRingElement":
        if isinstance(other, int):
            return GroupRingElement(self.q, tuple(other * c for c in self.coeffs))
        self._same_ring(other)
        q = self.q
        out = [0] * q
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[(i + j) % q] += a * b
        return GroupRingElement(q, tuple(out))

    __rmul__ = __mul__

    def shift(self, alpha: int) -> "GroupRingElement":
        """Multiply by t^alpha."""
        q = self.q
        return GroupRingElement(q, tuple(self.coeffs[(j - alpha) % q] for j in range(q)))

    def _same_ring(self, other):
        if self.q != other.q:
            raise ValueError(f"Z[Z_{self.q}] vs Z[Z_{other.q}]")

    def to_polynomial(self) -> IntPolynomial:
        return IntPolynomial(self.coeffs)

    def circulant(self) -> IntMatrix:
        """Matrix of multiplication by self, acting on coefficient columns."""
        q = self.q
        return IntMatrix(([self.coeffs[(i - j) % q] for j in range(q)] for i in range(q)), cols=q)

    def __str__(self) -> str:
        return str(self.to_polynomial()) if not self.is_zero() else "0"


def level_vector(L: MetabolizerNF, l: int) -> tuple[int, ...]:
    """A vector of L whose first S_l staircase entries are all p^l.

    Rows of level i <= l are scaled by p^(l-i), the S_l x S_l pivot block
    is cleared to p^l times the identity, and the rows are summed. The
    result is in staircase coordinates (use ``L.from_staircase`` to map
    back). Every entry is divisible by p^l.
    """
    p, n = L.p, L.n
    if not 0 <= l <= n - 1:
        raise ValueError(f"level must lie in [0, {n - 1}], got {l}")
    mod = L.modulus
    pl = p**l
    st = L.staircase()
    vals = [v for _, v in L.pivots]
    m = L.S(l)
    rows = [[x * p ** (l - vals[s]) % mod for x in st[s]] for s in range(m)]
    for s in range(m):
        for t in range(s + 1, m):
            e = rows[s][t]
            if e:
                assert e % pl == 0
                f = e // pl
                rows[s] = [(a - f * b) % mod for a, b in zip(rows[s], rows[t])]
    total = [sum(col) % mod for col in zip(*rows)] if rows else [0] * L.d
    return tuple(total)


def relation_of(
    vec: Sequence[int],
    l: int,
    p: int,
    n: int,
    g: int,
    resolved: Iterable[int] = (),
) -> GroupRingElement:
    """Group-ring relation imposed by a level-l vector.

    An entry c p^l with c a unit contributes t^alpha, where alpha is the
    discrete log of c to base g in Z_{p^(n-l)}, reduced mod
    q_l = p^(n-l-1)(p-1)/2 (x and -x carry the same invariant). Zero
    entries are trivial characters. Entries of higher valuation s must
    have their level s in ``resolved``.
    """
    mod = p**n
    m = p ** (n - l)
    q = unit_group_order(p, n - l) // 2
    resolved = set(resolved)
    gm = g % m
    coeffs = [0] * q
    for x in vec:
        x %= mod
        if x == 0:
            continue
        v = valuation(x, p, n)
        if v < l:
            raise ValueError(f"entry {x} is not divisible by p^{l}")
        if v > l:
            if v not in resolved:
                raise UnresolvedDependency(f"entry {x} needs level {v}, resolved so far: {sorted(resolved)}")
            continue
        c = (x // p**l) % m
        coeffs[discrete_log(gm, c, m) % q] += 1
    return GroupRingElement(q, tuple(coeffs))


def _cyclic_modulus(q: int) -> IntPolynomial:
    return IntPolynomial((-1,) + (0,) * (q - 1) + (1,))


def coprime_certificate(f: GroupRingElement) -> int:
    """Res(f, t^q - 1), a nonzero integer in the ideal (f) when f is coprime to t^q - 1.

    Returns 0 when f vanishes at some q-th root of unity; callers treat
    that as failure.
    """
    if f.is_zero():
        raise ZeroPolynomial("relation is zero")
    return poly_resultant(f.to_polynomial(), _cyclic_modulus(f.q))


def ideal_witness(f: GroupRingElement) -> tuple[int, GroupRingElement]:
    """(N, a) with a * f = N in Z[Z_q], N = det of multiplication by f.

    Checks directly that the ideal (f) contains the nonzero integer N,
    without going through resultant theory. Raises ValueError when
    multiplication by f is singular.
    """
    C = f.circulant()
    N = C.det()
    if N == 0:
        raise ValueError(f"{f} is a zero divisor in Z[Z_{f.q}]")
    inv = inverse_fraction(C)
    col = [inv[i][0] * N for i in range(f.q)]
    assert all(isinstance(x, Fraction) and x.denominator == 1 for x in col)
    a = GroupRingElement(f.q, tuple(int(x) for x in col))
    assert a * f == GroupRingElement.from_exponents(f.q, (), N)
    return N, a


@dataclass(frozen=True)
class LevelRecord:
    level: int
    q: int
    vector: tuple[int, ...]
    vector_original: tuple[int, ...]
    relation: GroupRingElement
    resultant: int
    ideal_integer: int
    cofactor: GroupRingElement
    resolved_before: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "q": self.q,
            "vector": list(self.vector),
            "vector_original": list(self.vector_original),
            "relation": list(self.relation.coeffs),
            "relation_str": str(self.relation),
            "resultant": self.resultant,
            "N": self.ideal_integer,
            "cofactor": list(self.cofactor.coeffs),
            "resolved_before": list(self.resolved_before),
        }


@dataclass(frozen=True)
class Certificate:
    p: int
    n: int
    k: int
    eps: tuple[int, ...]
    metabolizer: MetabolizerNF
    generator: int
    levels: tuple[LevelRecord, ...]
    final_level: int
    final_target_exponent: int
    conclusion: str = field(default="")

    @property
    def valid(self) -> bool:
        expected = list(range(self.n - 1, (self.n - 1) // 2 - 1, -1))
        return (
            [r.level for r in self.levels] == expected
            and all(r.resultant != 0 and r.ideal_integer != 0 for r in self.levels)
            and 2 * self.final_target_exponent > self.n
        )

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "k": self.k,
            "eps": list(self.eps),
            "metabolizer": [list(r) for r in self.metabolizer.rows],
            "profile": list(self.metabolizer.profile),
            "primitive_root": self.generator,
            "levels": [r.to_json() for r in self.levels],
            "final_level": self.final_level,
            "final_character_onto": f"Z_{self.p}^{self.final_target_exponent}",
            "valid": self.valid,
            "conclusion": self.conclusion,
        }


def replay(F: PrimaryForm, L: MetabolizerNF) -> Certificate:
    """Run the descending induction on one metabolizer of (Z_{p^n})^{4k}."""
    p, n, d = F.p, F.n, F.d
    if n % 2 == 0:
        raise ValueError("replay needs n odd")
    if p % 4 != 3:
        raise ValueError("replay needs p = 3 mod 4")
    if d % 4:
        raise ValueError("replay needs d = 4k")
    verify_structure(L, F)  # raises NotAMetabolizer
    g = primitive_root(p, n)
    resolved: list[int] = []
    records = []
    for l in range(n - 1, (n - 1) // 2 - 1, -1):
        vec = level_vector(L, l)
        orig = L.from_staircase(vec)
        assert L.contains(orig), "level vector escaped the metabolizer"
        f = relation_of(vec, l, p, n, g, resolved)
        q = unit_group_order(p, n - l) // 2
        assert f.q == q and q % 2 == 1
        res = coprime_certificate(f)
        if res == 0:
            raise ReplayFailure(f"relation {f} shares a root with t^{q} - 1 at level {l}", level=l, relation=f)
        N, cof = ideal_witness(f)
        assert abs(N) == abs(res)
        records.append(LevelRecord(l, q, vec, orig, f, res, N, cof, tuple(resolved)))
        resolved.append(l)
    final = (n - 1) // 2
    target = n - final
    conclusion = (
        f"sigma(K, chi_(p^{final})) = 0, but that character maps onto Z_({p}^{target}) "
        f"with {target} > {n}/2, so the invariant cannot vanish: no metabolizer of this "
        f"shape can come from a knot of finite order {d}"
    )
    return Certificate(p, n, d // 4, F.eps, L, g, tuple(records), final, target, conclusion)
