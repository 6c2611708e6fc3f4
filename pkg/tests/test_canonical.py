from fractions import Fraction
from math import factorial

import pytest
import sympy

from permblades.canonical import (
    CanonicalElement, IntPolynomial, NeedMoreTerms, blade_count, blade_row,
    canonical_census, canonical_elements, canonical_gamma_fn, canonical_product_fn,
    change_of_basis, conjecture_check, diagonal_numerator, diagonal_term,
    expand_canonical_product, expansion_fn, gamma_set_report, graduated, graduated_fn,
    graduated_rank, necklace_check, plate_count, plate_row, quotient_relations_report,
    straighten, u_b, u_b_inverse, unstraighten, verify_unitriangular,
)
from permblades.indicator import ConeFunction, convolve, eval_at, functions_equal
from permblades.osp import OSP, enumerate_standard_osps, lex_sequence, necklace
from permblades.plates import plate_cone

P = OSP.parse
E = CanonicalElement.parse

SHUFFLE_TERMS = {
    **{P(s): 1 for s in ["1|2|3|4|5", "1|2|4|3|5", "1|2|4|5|3",
                         "1|4|2|3|5", "1|4|2|5|3", "1|4|5|2|3"]},
    **{P(s): -1 for s in ["1|2|4|3,5", "1|2|3,4|5", "1|4|2|3,5",
                          "1|4|2,5|3", "1|2,4|3|5", "1|2,4|5|3"]},
    P("1|2,4|3,5"): 1,
}


def test_graduated_level_sets():
    g = graduated_fn("1|2|3", 3)
    assert eval_at(g, (0, 0, 0)) == 3
    assert eval_at(g, (1, -1, 0)) == 2
    assert eval_at(g, plate_cone("1|2|3", 3).relint_point()) == 1
    assert functions_equal(graduated_fn("1,2,3", 3), ConeFunction.everything(3))


def test_graduated_requires_standard():
    assert graduated("1|2|3", 3).label == P("1|2|3")
    with pytest.raises(ValueError):
        graduated("2|1|3", 3)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_graduated_independent(n):
    size, r = graduated_rank(n)
    assert size == r == necklace(n)


def test_u_b_examples():
    assert u_b(P("3|4|5|1|2")) == E("1|2|3|4|5")
    assert u_b(P("1|5|4|3|2")) == E("1|2;1|3;1|4;1|5")
    assert u_b(P("1,2,3,4,5")) == E("1,2,3,4,5")
    assert u_b(P("1|2,3,4|5|6,7")) == E("1|2,3,4|5|6,7")


def test_canonical_element_validation():
    with pytest.raises(ValueError):
        E("1|3|2;1|4")  # first part is not 2-standard
    with pytest.raises(ValueError):
        E("1|2;3|4")  # different first blocks
    e = E("1|4|5;1|2|3")
    assert str(e) == "{1|2|3; 1|4|5}"
    assert e.block_count == 5 and e.dimension(5) == 2


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_u_b_is_bijection(n):
    std = enumerate_standard_osps(n)
    images = [u_b(s) for s in std]
    assert len(set(images)) == len(std)
    assert set(images) == set(canonical_elements(n))
    for s, e in zip(std, images):
        assert u_b_inverse(e) == s


def test_shuffle_expansion_exact():
    assert expand_canonical_product(E("1|2|3;1|4|5")) == SHUFFLE_TERMS


def test_shuffle_expansion_matches_convolution():
    e = E("1|2|3;1|4|5")
    direct = convolve(graduated_fn("1|2|3", 5), graduated_fn("1|4|5", 5))
    assert functions_equal(expansion_fn(SHUFFLE_TERMS, 5), direct)
    assert functions_equal(canonical_product_fn(e, 5), direct)


def test_single_part_expansion():
    assert expand_canonical_product(E("1|2,4|3|5")) == {P("1|2,4|3|5"): 1}


@pytest.mark.parametrize("text", ["1|2;1|3", "1|2;1|3;1|4", "1|2,3;1|4", "1|2|5;1|3|4",
                                  "1,2|3;1,2|4|5", "1|2|4;1|3|5", "1|2;1|3,4|5"])
def test_expansion_matches_convolution_spot(text):
    e = E(text)
    n = max(max(p.support) for p in e.parts)
    direct = ConeFunction.one(n)
    for p in e.parts:
        direct = convolve(direct, graduated_fn(p, n))
    assert functions_equal(expansion_fn(expand_canonical_product(e), n), direct)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_unitriangular(n):
    assert verify_unitriangular(n)
    labels, cols = change_of_basis(n)
    assert labels == sorted(labels, key=lex_sequence)
    for s in labels:
        for u in cols[s]:
            assert u == s or lex_sequence(u) < lex_sequence(s)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_straighten_round_trip(n):
    for s in enumerate_standard_osps(n):
        assert unstraighten(straighten(s)) == {s: 1}


def test_straighten_as_functions():
    coords = straighten("1|3|2")
    assert coords == {E("1|2,3"): 1, E("1|2;1|3"): 1, E("1|2|3"): -1}
    total = ConeFunction.zero(3)
    for e, c in coords.items():
        total = total + canonical_product_fn(e, 3) * c
    assert functions_equal(total, graduated_fn("1|3|2", 3))


def test_straighten_fixed_point():
    assert straighten("1|2|3|4|5") == {E("1|2|3|4|5"): 1}


def test_blade_rows():
    rows = [blade_row(n) for n in range(1, 7)]
    assert rows == [[1], [1, 1], [1, 4, 1], [1, 15, 9, 1], [1, 66, 66, 16, 1],
                    [1, 365, 500, 190, 25, 1]]


def test_plate_rows():
    rows = [plate_row(n) for n in range(1, 7)]
    assert rows == [[1], [2, 1], [6, 6, 1], [26, 36, 12, 1], [150, 250, 120, 20, 1],
                    [1082, 2040, 1230, 300, 30, 1]]


def test_row_sums_are_necklaces():
    for n in range(1, 13):
        assert sum(blade_row(n)) == necklace(n)
        assert sum(plate_row(n)) == sum(1 for _ in range(1)) * _fubini(n)


def _fubini(n):
    # ordered set partitions of {1..n}: the number of distinct plates
    a = [1]
    for m in range(1, n + 1):
        a.append(sum(sympy.binomial(m, i) * a[m - i] for i in range(1, m + 1)))
    return int(a[n])


def test_count_domain():
    with pytest.raises(ValueError):
        blade_count(3, 4)
    with pytest.raises(ValueError):
        plate_count(3, 0)


def test_census():
    assert canonical_census(3) == {0: 1, 1: 4, 2: 1}
    assert canonical_census(4) == {0: 1, 1: 9, 2: 15, 3: 1}
    for n in range(1, 7):
        c = canonical_census(n)
        assert [c.get(n - k, 0) for k in range(1, n + 1)] == blade_row(n)


def test_new_two_part_elements_n5():
    pairs = {e for e in canonical_elements(5)
             if len(e.parts) == 2 and all(len(p) == 3 for p in e.parts)}
    assert pairs == {E("1|2|3;1|4|5"), E("1|2|4;1|3|5"), E("1|2|5;1|3|4")}


def test_necklace_check():
    for n in range(1, 6):
        assert necklace_check(n)


def test_numerators():
    expected = {
        0: [1], 1: [1, 1], 2: [1, 10, 1], 3: [1, 59, 59, 1], 4: [1, 356, 966, 356, 1],
        5: [1, 2517, 12602, 12602, 2517, 1],
        6: [1, 21246, 161967, 298852, 161967, 21246, 1],
    }
    for d, coeffs in expected.items():
        assert list(diagonal_numerator(d).coefficients) == coeffs
    assert str(diagonal_numerator(2)) == "x^2+10x+1"


def _sympy_numerator(d, terms):
    x = sympy.symbols("x")
    series = sum(diagonal_term(d, m) * x ** m for m in range(terms))
    prod = sympy.expand(series * (1 - x) ** (2 * d + 1))
    poly = sympy.Poly(prod, x)
    coeffs = [int(poly.coeff_monomial(x ** i)) for i in range(terms)]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@pytest.mark.parametrize("d", range(0, 8))
def test_numerator_against_series_oracle(d):
    assert list(diagonal_numerator(d).coefficients) == _sympy_numerator(d, 2 * d + 4)


def test_need_more_terms():
    with pytest.raises(NeedMoreTerms):
        diagonal_numerator(3, terms=5)
    assert diagonal_numerator(3, terms=8) == diagonal_numerator(3, terms=12)


def test_conjecture_report():
    rep = conjecture_check(10)
    assert [r["d"] for r in rep] == list(range(11))
    for r in rep:
        assert set(r) == {"d", "numerator", "symmetric", "unimodal", "sum", "expected_sum", "pass"}
        assert r["pass"] and r["symmetric"] and r["unimodal"]
        assert r["sum"] == r["expected_sum"] == factorial(2 * r["d"]) // factorial(r["d"])
    assert [r["sum"] for r in rep[:6]] == [1, 2, 12, 120, 1680, 30240]


def test_int_polynomial():
    p = IntPolynomial([1, 3, 1])
    assert p.is_palindromic() and p.is_unimodal()
    assert not IntPolynomial([1, 0, 1]).is_unimodal()
    assert not IntPolynomial([1, 2]).is_palindromic()
    assert p.degree == 2


def test_gamma_set_rank():
    rep = gamma_set_report(4)
    assert rep["size"] == 26 and rep["rank"] == 26
    assert rep["independent"] and rep["same_span_as_graduated"]


def test_canonical_gamma_is_zero_one():
    for e in canonical_elements(4)[::3]:
        g = canonical_gamma_fn(e, 4)
        from permblades.indicator import arrangement_witnesses, subset_normals
        wit = arrangement_witnesses(subset_normals(4), 4)
        assert {eval_at(g, w) for w in wit} <= {0, 1}


def test_quotient_relations():
    rep = quotient_relations_report()
    assert rep and all(rep.values()), rep
