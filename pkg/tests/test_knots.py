from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from knotorder.algebra import FiniteAbelianGroup, IntMatrix, IntPolynomial
from knotorder.errors import InvalidBridgeParams, InvalidSeifertMatrix
from knotorder.knots import (
    SeifertMatrix,
    alexander_polynomial,
    character_of,
    double_cover_homology,
    linking_form,
    primary_part,
    twisted_double_polynomial,
    twisted_double_seifert,
    two_bridge,
)

from oracles import cokernel_by_enumeration

TREFOIL = [[-1, 1], [0, -1]]
FIGURE_EIGHT = [[1, 1], [0, -1]]
COUNTER = [[21, 53], [52, 21]]

T = sympy.Symbol("t")


@st.composite
def seifert_matrices(draw, max_genus=3):
    """P^T (J + S) P with J the upper symplectic block, S symmetric, P unimodular."""
    g = draw(st.integers(1, max_genus))
    n = 2 * g
    sym = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            sym[i][j] = sym[j][i] = draw(st.integers(-4, 4))
    V0 = [row[:] for row in sym]
    for i in range(0, n, 2):
        V0[i][i + 1] += 1
    P = IntMatrix.identity(n)
    for _ in range(draw(st.integers(0, 4))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        if i != j:
            E = [[int(r == c) for c in range(n)] for r in range(n)]
            E[i][j] = draw(st.integers(-2, 2))
            P = P @ IntMatrix(E)
    return (P.T @ IntMatrix(V0) @ P).tolist()


def sympy_alexander(V):
    M = sympy.Matrix(V)
    return sympy.expand((M - T * M.T).det())


# -- Seifert matrices and Alexander polynomials -------------------------------


def test_constructor_accepts_and_rejects():
    SeifertMatrix(TREFOIL)
    SeifertMatrix(COUNTER)
    SeifertMatrix([])
    with pytest.raises(InvalidSeifertMatrix, match=r"det\(V - V\^T\) = 1 violated"):
        SeifertMatrix([[1, 1], [1, 1]])
    with pytest.raises(InvalidSeifertMatrix):
        SeifertMatrix([[1, 2, 3], [4, 5, 6]])
    with pytest.raises(InvalidSeifertMatrix, match="violated"):
        # det(V - V^T) = 4
        SeifertMatrix([[0, 2], [0, 0]])
    with pytest.raises(InvalidSeifertMatrix, match="violated"):
        # odd size: the skew part is singular
        SeifertMatrix([[1]])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=2), min_size=2, max_size=2))
def test_constructor_matches_skew_determinant(V):
    skew = sympy.Matrix(V) - sympy.Matrix(V).T
    if skew.det() == 1:
        SeifertMatrix(V)
    else:
        with pytest.raises(InvalidSeifertMatrix):
            SeifertMatrix(V)


def test_alexander_examples():
    assert alexander_polynomial(COUNTER) == IntPolynomial.from_descending([2315, -4631, 2315])
    assert alexander_polynomial(twisted_double_seifert(5)) == IntPolynomial.from_descending([5, -11, 5])
    assert alexander_polynomial([]) == IntPolynomial((1,))
    assert alexander_polynomial(TREFOIL) == IntPolynomial((1, -1, 1))
    assert alexander_polynomial(FIGURE_EIGHT) == IntPolynomial((1, -3, 1))


def test_twisted_double_examples():
    assert twisted_double_seifert(1).tolist() == [[1, 1], [0, -1]]
    V0 = twisted_double_seifert(0)
    assert V0.tolist() == [[0, 1], [0, -1]]
    assert twisted_double_polynomial(0)(-1) == 1
    assert double_cover_homology(V0).is_trivial
    assert twisted_double_polynomial(-1)(-1) == -3
    assert double_cover_homology(twisted_double_seifert(-1)) == FiniteAbelianGroup((3,))


@pytest.mark.parametrize("a", range(-10, 11))
def test_twisted_double_identity(a):
    expected = IntPolynomial.from_descending([a, -(2 * a + 1), a])
    assert twisted_double_polynomial(a) == expected
    got = alexander_polynomial(twisted_double_seifert(a))
    assert got == expected.normalized()
    assert double_cover_homology(twisted_double_seifert(a)).order == abs(4 * a + 1)


@settings(max_examples=60, deadline=None)
@given(seifert_matrices())
def test_alexander_against_sympy_and_homology_order(V):
    delta = alexander_polynomial(V)
    ref = sympy.Poly(sympy_alexander(V), T)
    # strip powers of t and fix the sign, then compare
    coeffs = [int(c) for c in reversed(ref.all_coeffs())]
    while coeffs and coeffs[0] == 0:
        coeffs.pop(0)
    if coeffs[-1] < 0:
        coeffs = [-c for c in coeffs]
    assert list(delta.coeffs) == coeffs
    assert delta(1) in (1, -1)
    assert double_cover_homology(V).order == abs(delta(-1))


# -- homology and linking forms ---------------------------------------------


def test_homology_examples():
    H = double_cover_homology(COUNTER)
    assert H.primary_decomposition() == {3: [3, 9], 7: [7, 49]}
    assert primary_part(H, 3).invariant_factors == (3, 9)
    assert primary_part(H, 7).invariant_factors == (7, 49)
    assert primary_part(FiniteAbelianGroup((21,)), 7) == FiniteAbelianGroup((7,))
    assert primary_part(FiniteAbelianGroup((441,)), 5).is_trivial
    assert double_cover_homology([]).is_trivial
    assert double_cover_homology(TREFOIL) == FiniteAbelianGroup((3,))


def test_linking_form_examples():
    f = linking_form(TREFOIL)
    assert f.carrier.invariant_factors == (3,)
    assert f.gram == ((Fraction(2, 3),),)
    e = linking_form([])
    assert e.carrier.is_trivial and e.gram == ()
    f8 = linking_form(FIGURE_EIGHT)
    assert f8.carrier.invariant_factors == (5,)
    assert f8.gram[0][0] in (Fraction(2, 5), Fraction(3, 5))


def _check_form_against_inverse(V):
    """Gram entries must equal -g_i^T A^{-1} g_j mod 1 on the reported generators."""
    A = sympy.Matrix(V) + sympy.Matrix(V).T
    Ainv = A.inv()
    form = linking_form(V)
    gens = [sympy.Matrix(g) for g in form.generators]
    for i, gi in enumerate(gens):
        for j, gj in enumerate(gens):
            val = -(gi.T * Ainv * gj)[0, 0]
            val = Fraction(int(sympy.numer(val)), int(sympy.denom(val)))
            assert (val - form.gram[i][j]).denominator == 1
    return form


def test_counterexample_form_against_inverse():
    form = _check_form_against_inverse(COUNTER)
    assert form.is_symmetric() and form.is_nonsingular() and form.is_well_defined()


@settings(max_examples=60, deadline=None)
@given(seifert_matrices())
def test_linking_form_symmetric_nonsingular(V):
    form = _check_form_against_inverse(V)
    assert form.is_symmetric()
    assert form.is_well_defined()
    assert form.is_nonsingular()
    assert form.carrier == double_cover_homology(V)


@settings(max_examples=40, deadline=None)
@given(seifert_matrices(max_genus=1))
def test_linking_form_nonsingular_by_enumeration(V):
    form = linking_form(V)
    if form.carrier.order > 400:
        return
    A = (IntMatrix(V) + IntMatrix(V).T).tolist()
    assert sorted(form.carrier.invariant_factors) == cokernel_by_enumeration(A)
    elems = list(form.elements())
    # nonsingular: no nonzero x pairs trivially with everything
    for x in elems:
        if any(x):
            assert any(form.pair(x, y) != 0 for y in elems)


def test_nonsingular_detects_degenerate_form():
    from knotorder.knots import LinkingForm

    bad = LinkingForm(FiniteAbelianGroup((3, 3)), ((Fraction(1, 3), 0), (0, 0)))
    assert not bad.is_nonsingular()
    good = LinkingForm(FiniteAbelianGroup((3, 3)), ((Fraction(1, 3), 0), (0, Fraction(2, 3))))
    assert good.is_nonsingular()


# -- characters ------------------------------------------------------------


def test_character_examples():
    form = linking_form(TREFOIL)
    chi0 = character_of((0,), form)
    assert chi0.is_trivial
    chi = character_of((1,), form)
    assert chi.modulus == 3 and chi.is_onto
    assert chi.self_linking == Fraction(2, 3)
    assert character_of((2,), form).self_linking == chi.self_linking


@settings(max_examples=40, deadline=None)
@given(seifert_matrices(max_genus=2), st.data())
def test_character_negation_and_linearity(V, data):
    form = linking_form(V)
    ds = form.carrier.invariant_factors
    x = tuple(data.draw(st.integers(0, d - 1)) for d in ds)
    y = tuple(data.draw(st.integers(0, d - 1)) for d in ds)
    chi = character_of(x, form)
    assert character_of(tuple(-a for a in x), form).self_linking == chi.self_linking
    assert Fraction(chi(y), chi.modulus) == form.pair(x, y)


# -- two-bridge knots ------------------------------------------------------


def test_two_bridge_examples():
    assert two_bridge(3, 1).homology == double_cover_homology(TREFOIL)
    assert two_bridge(5, 3).homology == double_cover_homology(twisted_double_seifert(1))
    a = 3
    K = two_bridge(4 * a + 1, 2 * a)
    assert K.homology == FiniteAbelianGroup((13,))
    assert K.linking_form.gram == ((Fraction(6, 13),),)


@pytest.mark.parametrize("p,q", [(4, 1), (1, 0), (9, 3), (7, 0), (7, 7), (-3, 1)])
def test_two_bridge_rejects(p, q):
    with pytest.raises(InvalidBridgeParams):
        two_bridge(p, q)
