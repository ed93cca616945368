"""Verdicts: which obstruction rules fire for a knot.

Each rule returns its witness data, and the combined verdict records the
rule label that produced every conclusion. Nothing here ever claims a
knot has finite concordance order: an empty result means the rules are
silent, and the verdict says "unresolved".
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .algebra import FiniteAbelianGroup, IntPolynomial
from .errors import NotAKnotPolynomial, NotQuadratic
from .knots import (
    SeifertMatrix,
    alexander_polynomial,
    double_cover_homology,
    twisted_double_polynomial,
)
from .numtheory import factorize, is_perfect_square

THEOREM_1_2 = "Theorem 1.2"
COROLLARY_1_3 = "Corollary 1.3"
COROLLARY_4_1 = "Corollary 4.1"
COROLLARY_4_2 = "Corollary 4.2"
THEOREM_4_3 = "Theorem 4.3"
COROLLARY_4_4 = "Corollary 4.4"
COROLLARY_4_5 = "Corollary 4.5"


class OrderKind(str, enum.Enum):
    SLICE = "slice"
    ORDER2 = "order2"
    ORDER4 = "order4"
    INFINITE = "infinite"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class AlgebraicOrder:
    """Order in Levine's algebraic concordance group.

    For ORDER4, ``witnesses`` holds every (p, a) with p = 3 mod 4 dividing
    |Delta(1) Delta(-1)| to the odd power a.
    """

    kind: OrderKind
    witnesses: tuple[tuple[int, int], ...] = ()
    rule: str = THEOREM_4_3
    clause: str = ""

    def __post_init__(self):
        for p, a in self.witnesses:
            if p % 4 != 3 or a % 2 == 0:
                raise ValueError(f"bad order-4 witness ({p}, {a})")
        if self.kind is OrderKind.ORDER4 and not self.witnesses:
            raise ValueError("order 4 needs a witness")

    @property
    def witness_prime(self) -> int | None:
        return self.witnesses[0][0] if self.witnesses else None

    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "rule": self.rule,
            "clause": self.clause,
            "witnesses": [list(w) for w in self.witnesses],
        }


def _odd_3mod4(n: int) -> tuple[tuple[int, int], ...]:
    """(p, e) for each prime p = 3 mod 4 with odd exponent e in |n|."""
    return tuple((p, e) for p, e in factorize(abs(n)).pairs if p % 4 == 3 and e % 2 == 1)


def theorem_1_2_gate(G: FiniteAbelianGroup) -> list[tuple[int, int]]:
    """Primes p = 3 mod 4 whose p-primary part of G is Z_{p^n} with n odd."""
    out = []
    for p, powers in G.primary_decomposition().items():
        if p % 4 != 3 or len(powers) != 1:
            continue
        n = factorize(powers[0]).exponent(p)
        if n % 2 == 1:
            out.append((p, n))
    return out


def classify_quadratic(delta: IntPolynomial) -> AlgebraicOrder:
    if delta.degree != 2:
        raise NotQuadratic(f"degree {delta.degree} polynomial {delta}")
    at1, atm1 = delta(1), delta(-1)
    if at1 not in (1, -1):
        raise NotAKnotPolynomial(f"Delta(1) = {at1}, expected +-1")
    prod = at1 * atm1
    if prod > 0:
        return AlgebraicOrder(OrderKind.INFINITE, clause="(a)")
    # finite order branch
    if is_perfect_square(delta.discriminant_quadratic()):
        return AlgebraicOrder(OrderKind.SLICE, clause="(b)")
    wit = _odd_3mod4(prod)
    if wit:
        return AlgebraicOrder(OrderKind.ORDER4, wit, clause="(c)")
    return AlgebraicOrder(OrderKind.ORDER2, clause="(c)")


def classify_twisted_double(a: int) -> AlgebraicOrder:
    """Corollary 4.4's four-way split for the a-twisted double.

    a = 0 gives the unknot, reported as slice.
    """
    m = 4 * a + 1
    if a < 0:
        res = AlgebraicOrder(OrderKind.INFINITE, rule=COROLLARY_4_4, clause="(a)")
    elif a == 0:
        return AlgebraicOrder(OrderKind.SLICE, rule=COROLLARY_4_4, clause="unknot")
    elif is_perfect_square(m):
        res = AlgebraicOrder(OrderKind.SLICE, rule=COROLLARY_4_4, clause="(b)")
    elif _odd_3mod4(m):
        res = AlgebraicOrder(OrderKind.ORDER4, _odd_3mod4(m), rule=COROLLARY_4_4, clause="(d)")
    else:
        res = AlgebraicOrder(OrderKind.ORDER2, rule=COROLLARY_4_4, clause="(c)")
    check = classify_quadratic(twisted_double_polynomial(a).normalized())
    assert (check.kind, check.witnesses) == (res.kind, res.witnesses), (a, check, res)
    return res


def corollary_1_3(n: int, hp_cyclic: bool = True) -> int | None:
    """Witness prime for a knot with Delta = n t^2 - (2n+1) t + n and H_p cyclic."""
    if n < 1:
        raise ValueError("Corollary 1.3 needs n >= 1")
    if not hp_cyclic:
        return None
    wit = _odd_3mod4(4 * n + 1)
    return wit[0][0] if wit else None


def corollary_4_1(delta_at_minus1: int, unknotting_number_one: bool) -> int | None:
    """Witness prime when the caller vouches that u(K) = 1."""
    if not unknotting_number_one:
        return None
    wit = _odd_3mod4(delta_at_minus1)
    return wit[0][0] if wit else None


def corollary_4_2(p: int) -> int | None:
    if p < 3 or p % 2 == 0:
        raise ValueError(f"two-bridge determinant must be odd and >= 3, got {p}")
    wit = _odd_3mod4(p)
    return wit[0][0] if wit else None


class Status(str, enum.Enum):
    INFINITE = "infinite"
    UNRESOLVED = "unresolved"
    SLICE = "slice"


@dataclass(frozen=True)
class RuleResult:
    rule: str
    applies: bool
    detail: str = ""
    witnesses: tuple = ()

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "applies": self.applies,
            "detail": self.detail,
            "witnesses": [list(w) if isinstance(w, tuple) else w for w in self.witnesses],
        }


@dataclass(frozen=True)
class ConcordanceVerdict:
    status: Status
    algebraic: AlgebraicOrder
    rules: tuple[RuleResult, ...] = field(default=())
    reason: str = ""

    def __post_init__(self):
        if self.status is Status.INFINITE and not any(r.applies for r in self.rules):
            raise ValueError("infinite-order verdict without a firing rule")

    @property
    def infinite_order(self) -> bool:
        return self.status is Status.INFINITE

    def fired(self) -> list[RuleResult]:
        return [r for r in self.rules if r.applies]

    def to_json(self) -> dict:
        return {
            "status": self.status.value,
            "infinite_order": self.infinite_order,
            "reason": self.reason,
            "algebraic_order": self.algebraic.to_json(),
            "rules": [r.to_json() for r in self.rules],
        }


def full_verdict(V) -> ConcordanceVerdict:
    """Run every rule that applies to a Seifert matrix.

    Infinite order is reported when Theorem 1.2 fires, or when the knot
    already has infinite order in the algebraic concordance group (the map
    to that group is a homomorphism, so finite order would survive it).
    """
    S = V if isinstance(V, SeifertMatrix) else SeifertMatrix(V)
    if S.size == 0:
        return ConcordanceVerdict(
            Status.SLICE,
            AlgebraicOrder(OrderKind.SLICE, clause="empty Seifert form"),
            (),
            "genus 0 Seifert surface: the unknot",
        )
    H = double_cover_homology(S)
    delta = alexander_polynomial(S)
    gate = theorem_1_2_gate(H)
    rules = [
        RuleResult(
            THEOREM_1_2,
            bool(gate),
            f"H_1 = {H}" if gate else f"no p = 3 mod 4 with cyclic odd-exponent H_p in {H}",
            tuple(gate),
        )
    ]
    if delta.degree == 2:
        alg = classify_quadratic(delta)
        rules.append(RuleResult(THEOREM_4_3, alg.kind is OrderKind.INFINITE, f"clause {alg.clause}: {alg.kind.value}", alg.witnesses))
    else:
        alg = AlgebraicOrder(OrderKind.INDETERMINATE, clause="Delta not quadratic")
    if gate or alg.kind is OrderKind.INFINITE:
        labels = ", ".join(r.rule for r in rules if r.applies)
        return ConcordanceVerdict(Status.INFINITE, alg, tuple(rules), f"infinite order via {labels}")
    return ConcordanceVerdict(
        Status.UNRESOLVED, alg, tuple(rules), "concordance order unresolved by this toolkit"
    )


def double_verdict(a: int) -> ConcordanceVerdict:
    """Corollaries 4.4 and 4.5 for the a-twisted double."""
    alg = classify_twisted_double(a)
    if a == 0:
        return ConcordanceVerdict(Status.SLICE, alg, (), "a = 0 twisted double is the unknot")
    H = FiniteAbelianGroup.from_cyclic_orders([abs(4 * a + 1)])
    gate = theorem_1_2_gate(H)
    rules = [
        RuleResult(COROLLARY_4_4, alg.kind is OrderKind.INFINITE, f"clause {alg.clause}: {alg.kind.value}", alg.witnesses),
        RuleResult(COROLLARY_4_5, alg.kind is OrderKind.ORDER4, "order 4 in the algebraic group", alg.witnesses),
        RuleResult(THEOREM_1_2, bool(gate), f"H_1 = {H}", tuple(gate)),
    ]
    if any(r.applies for r in rules):
        labels = ", ".join(r.rule for r in rules if r.applies)
        return ConcordanceVerdict(Status.INFINITE, alg, tuple(rules), f"infinite order via {labels}")
    reason = "concordance order unresolved by this toolkit"
    if alg.kind is OrderKind.SLICE and a == 2:
        reason = "algebraically slice; K_2 is slice when K is unknotted"
    elif alg.kind is OrderKind.SLICE:
        reason = "algebraically slice; " + reason
    return ConcordanceVerdict(Status.UNRESOLVED, alg, tuple(rules), reason)
