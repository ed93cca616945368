"""Metabolizers of diagonal linking forms on (Z_{p^n})^d.

A subgroup is stored in a canonical staircase form computed by
:func:`normal_form`:

* pivots are chosen greedily by least p-adic valuation, then lowest
  column, so valuations along the rows never decrease;
* each pivot row is scaled to have exactly p^v in its pivot column;
* every other row has 0 in that column if it came later, or a residue in
  [0, p^v) if it came earlier.

This form depends only on the subgroup, not on the generators, which is
what makes duplicate-free enumeration possible: :func:`enumerate_metabolizers`
walks candidate staircases and keeps the ones that are their own normal
form.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .algebra import FiniteAbelianGroup, smith_normal_form
from .errors import BudgetExceeded, NotAMetabolizer
from .numtheory import is_prime

DEFAULT_BUDGET = 10**8


def valuation(x: int, p: int, n: int) -> int:
    """p-adic valuation of x as an element of Z/p^n; 0 has valuation n."""
    x %= p**n
    if x == 0:
        return n
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@dataclass(frozen=True)
class PrimaryForm:
    """beta(x, y) = sum(eps_i x_i y_i) / p^n on (Z_{p^n})^d."""

    p: int
    n: int
    d: int
    eps: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "eps", tuple(int(e) for e in self.eps))
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.d < 1:
            raise ValueError("d must be positive")
        if len(self.eps) != self.d:
            raise ValueError(f"need {self.d} form coefficients, got {len(self.eps)}")
        if any(e % self.p == 0 for e in self.eps):
            raise ValueError(f"form coefficients must be units mod {self.p}: {self.eps}")

    @classmethod
    def alternating(cls, p: int, n: int, d: int) -> "PrimaryForm":
        return cls(p, n, d, tuple(1 if i % 2 == 0 else -1 for i in range(d)))

    @property
    def modulus(self) -> int:
        return self.p**self.n

    @property
    def order(self) -> int:
        return self.p ** (self.n * self.d)

    def pair_numerator(self, x: Sequence[int], y: Sequence[int]) -> int:
        return sum(e * a * b for e, a, b in zip(self.eps, x, y)) % self.modulus

    def pair(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        return Fraction(self.pair_numerator(x, y), self.modulus)

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(self.modulus), repeat=self.d)


@dataclass(frozen=True)
class MetabolizerNF:
    """Canonical staircase generators of a subgroup of (Z_{p^n})^d.

    ``rows`` are in the original coordinates. ``pivots[s]`` is the
    (column, valuation) of row s. :meth:`staircase` permutes columns so
    pivots come first, which is the shape of the worked example with
    1, p, p, p, p^2, p^2, p^2 down the diagonal.
    """

    p: int
    n: int
    d: int
    rows: tuple[tuple[int, ...], ...]
    pivots: tuple[tuple[int, int], ...]

    @property
    def modulus(self) -> int:
        return self.p**self.n

    @property
    def columns(self) -> tuple[int, ...]:
        piv = [c for c, _ in self.pivots]
        return tuple(piv + [c for c in range(self.d) if c not in piv])

    def staircase(self) -> tuple[tuple[int, ...], ...]:
        cols = self.columns
        return tuple(tuple(r[c] for c in cols) for r in self.rows)

    def to_staircase(self, vec: Sequence[int]) -> tuple[int, ...]:
        return tuple(vec[c] for c in self.columns)

    def from_staircase(self, vec: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.d
        for pos, c in enumerate(self.columns):
            out[c] = vec[pos]
        return tuple(out)

    @property
    def profile(self) -> tuple[int, ...]:
        """k_i = number of rows whose pivot is p^i, for i = 0..n-1."""
        k = [0] * self.n
        for _, v in self.pivots:
            k[v] += 1
        return tuple(k)

    def S(self, i: int) -> int:
        """Partial sum k_0 + ... + k_i, with S(-1) = 0."""
        return sum(self.profile[: i + 1]) if i >= 0 else 0

    @property
    def order(self) -> int:
        return self.p ** sum(self.n - v for _, v in self.pivots)

    @property
    def key(self) -> tuple:
        return self.rows

    def span(self) -> frozenset[tuple[int, ...]]:
        """All elements of the subgroup; only for small instances."""
        mod = self.modulus
        elems = {tuple([0] * self.d)}
        for (c, v), r in zip(self.pivots, self.rows):
            mult = [tuple(k * x % mod for x in r) for k in range(self.p ** (self.n - v))]
            elems = {tuple((a + b) % mod for a, b in zip(e, m)) for e in elems for m in mult}
        return frozenset(elems)

    def contains(self, vec: Sequence[int]) -> bool:
        """Membership by reducing against the staircase rows."""
        mod = self.modulus
        x = [a % mod for a in vec]
        for (c, v), r in zip(self.pivots, self.rows):
            pv = self.p**v
            if x[c] % pv:
                return False
            f = x[c] // pv
            x = [(a - f * b) % mod for a, b in zip(x, r)]
        return not any(x)

    def check_staircase(self) -> bool:
        """Zeros before the pivot block, p^i on the diagonal, p^i | the rest."""
        st = self.staircase()
        vals = [v for _, v in self.pivots]
        for s, row in enumerate(st):
            v = vals[s]
            level_end = sum(1 for w in vals if w <= v)  # S_v
            for pos in range(level_end):
                want = self.p**v if pos == s else 0
                if row[pos] % self.modulus != want % self.modulus:
                    return False
            if any(x % (self.p**v) for x in row):
                return False
        return vals == sorted(vals)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "d": self.d,
            "rows": [list(r) for r in self.rows],
            "pivots": [list(pv) for pv in self.pivots],
            "profile": list(self.profile),
            "staircase": [list(r) for r in self.staircase()],
        }


def normal_form(gens: Iterable[Sequence[int]], p: int, n: int, d: int | None = None) -> MetabolizerNF:
    """Canonical staircase generators for the subgroup spanned by ``gens``."""
    mod = p**n
    rows = [[x % mod for x in g] for g in gens]
    if d is None:
        if not rows:
            raise ValueError("need d when there are no generators")
        d = len(rows[0])
    if any(len(r) != d for r in rows):
        raise ValueError("generator length mismatch")
    active = [r for r in rows if any(r)]
    done: list[list[int]] = []
    pivots: list[tuple[int, int]] = []
    used: set[int] = set()
    while active:
        best = None
        for c in range(d):
            if c in used:
                continue
            for ri, r in enumerate(active):
                v = valuation(r[c], p, n)
                if v < n and (best is None or (v, c, ri) < best):
                    best = (v, c, ri)
        if best is None:
            break
        v, c, ri = best
        pv = p**v
        piv = active.pop(ri)
        inv = pow(piv[c] // pv, -1, mod)
        piv = [x * inv % mod for x in piv]
        nxt = []
        for r in active:
            f = r[c] // pv
            if f:
                r = [(a - f * b) % mod for a, b in zip(r, piv)]
            if any(r):
                nxt.append(r)
        active = nxt
        for i, r in enumerate(done):
            f = r[c] // pv
            if f:
                done[i] = [(a - f * b) % mod for a, b in zip(r, piv)]
        done.append(piv)
        pivots.append((c, v))
        used.add(c)
    return MetabolizerNF(p, n, d, tuple(tuple(r) for r in done), tuple(pivots))


def subgroup_structure(gens: Sequence[Sequence[int]], p: int, n: int, d: int) -> tuple[FiniteAbelianGroup, FiniteAbelianGroup]:
    """(L, H/L) as abstract groups, from the Smith form of [gens; p^n I].

    If the row lattice of that matrix has elementary divisors delta_i,
    then L = (+) Z_{p^n / delta_i} and H/L = (+) Z_{delta_i}.
    """
    mod = p**n
    mat = [list(g) for g in gens] + [[mod if i == j else 0 for j in range(d)] for i in range(d)]
    diag = smith_normal_form(mat).diagonal
    sub = FiniteAbelianGroup.from_cyclic_orders([mod // x for x in diag])
    quo = FiniteAbelianGroup.from_cyclic_orders(list(diag))
    return sub, quo


@dataclass(frozen=True)
class StructureReport:
    order_ok: bool
    isotropic_ok: bool
    staircase_ok: bool
    row_count_ok: bool
    symmetric_profile_ok: bool
    half_rank_ok: bool | None
    quotient_iso_ok: bool
    subgroup: FiniteAbelianGroup
    quotient: FiniteAbelianGroup
    profile: tuple[int, ...]

    @property
    def passed(self) -> bool:
        flags = [
            self.order_ok,
            self.isotropic_ok,
            self.staircase_ok,
            self.row_count_ok,
            self.symmetric_profile_ok,
            self.quotient_iso_ok,
        ]
        if self.half_rank_ok is not None:
            flags.append(self.half_rank_ok)
        return all(flags)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "order": self.order_ok,
            "isotropic": self.isotropic_ok,
            "staircase": self.staircase_ok,
            "row_count": self.row_count_ok,
            "symmetric_profile": self.symmetric_profile_ok,
            "half_rank": self.half_rank_ok,
            "quotient_iso": self.quotient_iso_ok,
            "subgroup": list(self.subgroup.invariant_factors),
            "quotient": list(self.quotient.invariant_factors),
            "profile": list(self.profile),
        }


def is_isotropic(L: MetabolizerNF, F: PrimaryForm) -> bool:
    return all(F.pair_numerator(x, y) == 0 for x, y in itertools.combinations_with_replacement(L.rows, 2))


def verify_structure(L: MetabolizerNF, F: PrimaryForm) -> StructureReport:
    """Check a metabolizer against the structural facts it must satisfy.

    Raises NotAMetabolizer when |L|^2 != |H| or beta(L, L) != 0. The
    remaining checks are reported, not raised: the staircase shape,
    sum k_i = d - k_0, k_i = k_{n-i} for i >= 1, S_{(n-1)/2} = d/2 for
    odd n, and H/L isomorphic to L.
    """
    if (L.p, L.n, L.d) != (F.p, F.n, F.d):
        raise NotAMetabolizer("subgroup and form live on different groups")
    if L.order**2 != F.order:
        raise NotAMetabolizer(f"|L|^2 = {L.order ** 2} but |H| = {F.order}")
    if not is_isotropic(L, F):
        raise NotAMetabolizer("linking form does not vanish on L")
    k = L.profile
    n = L.n
    sym = all(k[i] == k[n - i] for i in range(1, n))
    half = L.S((n - 1) // 2) * 2 == L.d if n % 2 == 1 else None
    sub, quo = subgroup_structure(L.rows, L.p, L.n, L.d)
    return StructureReport(
        order_ok=sub.order**2 == F.order,
        isotropic_ok=True,
        staircase_ok=L.check_staircase() and normal_form(L.rows, L.p, L.n, L.d) == L,
        row_count_ok=len(L.rows) == L.d - k[0],
        symmetric_profile_ok=sym,
        half_rank_ok=half,
        quotient_iso_ok=sub == quo,
        subgroup=sub,
        quotient=quo,
        profile=k,
    )


def pivot_patterns(n: int, d: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Every pivot layout whose subgroup would have order p^(nd/2).

    A layout is a tuple of (column, valuation) with valuations
    nondecreasing and, within one valuation, columns increasing.
    """
    target = n * d
    if target % 2:
        return
    target //= 2

    def profiles(i: int, remaining: int, cols_left: int):
        if remaining == 0:
            yield ()
            return
        if i >= n:
            return
        for k in range(min(cols_left, remaining // (n - i)), -1, -1):
            for rest in profiles(i + 1, remaining - k * (n - i), cols_left - k):
                yield (k,) + rest

    for prof in profiles(0, target, d):
        prof = prof + (0,) * (n - len(prof))

        def place(i: int, free: tuple[int, ...]):
            if i == n:
                yield ()
                return
            for cols in itertools.combinations(free, prof[i]):
                rest_free = tuple(c for c in free if c not in cols)
                for tail in place(i + 1, rest_free):
                    yield tuple((c, i) for c in cols) + tail

        yield from place(0, tuple(range(d)))


def _row_choices(F: PrimaryForm, pattern, s: int) -> list[range | tuple[int, ...]]:
    p, n, mod = F.p, F.n, F.modulus
    c_s, v_s = pattern[s]
    pos_of = {c: t for t, (c, _) in enumerate(pattern)}
    choices = []
    for c in range(F.d):
        t = pos_of.get(c)
        if t == s:
            choices.append((p**v_s,))
        elif t is not None and t < s:
            choices.append((0,))
        elif t is not None:
            choices.append(range(0, p ** pattern[t][1], p**v_s))
        else:
            choices.append(range(0, mod, p**v_s))
    # a row from the span of rows >= u cannot reach valuation v_u in a
    # column left of c_u that was still free when pivot u was picked
    for u in range(s + 1):
        c_u, v_u = pattern[u]
        if v_u != v_s:
            continue
        earlier = {pattern[w][0] for w in range(u)}
        for c in range(c_u):
            if c in earlier:
                continue
            choices[c] = tuple(x for x in choices[c] if valuation(x, p, n) > v_u)
    return choices


def _search(F: PrimaryForm, pattern) -> list[MetabolizerNF]:
    out: list[MetabolizerNF] = []
    choice_sets = [_row_choices(F, pattern, s) for s in range(len(pattern))]

    def rec(s: int, rows: list[tuple[int, ...]]):
        if s == len(pattern):
            cand = MetabolizerNF(F.p, F.n, F.d, tuple(rows), tuple(pattern))
            if normal_form(rows, F.p, F.n, F.d) == cand:
                out.append(cand)
            return
        for row in itertools.product(*choice_sets[s]):
            if F.pair_numerator(row, row):
                continue
            if any(F.pair_numerator(row, r) for r in rows):
                continue
            rows.append(row)
            rec(s + 1, rows)
            rows.pop()

    rec(0, [])
    return out


def _search_task(args):
    return _search(*args)


def check_budget(F: PrimaryForm, budget: int = DEFAULT_BUDGET, override: bool = False) -> None:
    if F.order > budget and not override:
        raise BudgetExceeded(
            f"|H| = {F.p}^{F.n * F.d} exceeds the enumeration budget {budget}",
            bound=budget,
            value=F.order,
        )


def enumerate_metabolizers(
    F: PrimaryForm,
    budget: int = DEFAULT_BUDGET,
    override: bool = False,
    jobs: int = 1,
) -> list[MetabolizerNF]:
    """All metabolizers of F in canonical form, sorted by their rows.

    The candidate space is split by pivot layout. Layouts are independent,
    so ``jobs > 1`` farms them out to worker processes; the final sort
    makes the output identical either way.
    """
    if (F.n * F.d) % 2:
        raise ValueError("n*d must be even for |L|^2 = |H| to be possible")
    check_budget(F, budget, override)
    tasks = [(F, pat) for pat in pivot_patterns(F.n, F.d)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_search_task, tasks))
    else:
        parts = [_search(*t) for t in tasks]
    found = [L for part in parts for L in part]
    found.sort(key=lambda L: L.key)
    return found


def isotropic_subgroups_oracle(F: PrimaryForm) -> set[frozenset]:
    """Every isotropic subgroup, found by closing under one generator at a time.

    This never looks at staircases, so it serves as an independent check on
    :func:`enumerate_metabolizers` for tiny groups.
    """
    mod = F.modulus
    elems = list(F.elements())
    zero = tuple([0] * F.d)
    iso_elems = [x for x in elems if F.pair_numerator(x, x) == 0]

    def close(S: frozenset, x) -> frozenset:
        out = set(S)
        mult = [tuple(k * a % mod for a in x) for k in range(mod)]
        for s in S:
            for m in mult:
                out.add(tuple((a + b) % mod for a, b in zip(s, m)))
        return frozenset(out)

    start = frozenset([zero])
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for S in frontier:
            for x in iso_elems:
                if x in S or any(F.pair_numerator(x, s) for s in S):
                    continue
                T = close(S, x)
                if T not in seen:
                    seen.add(T)
                    nxt.append(T)
        frontier = nxt
    return seen


def metabolizers_oracle(F: PrimaryForm) -> set[frozenset]:
    target = math.isqrt(F.order)
    if target * target != F.order:
        return set()
    return {S for S in isotropic_subgroups_oracle(F) if len(S) == target}
