import random
from fractions import Fraction
from itertools import product

import pytest

from alexlab.errors import AmbientMismatchError, ComputationLimitError, InvalidInputError, PresentationParseError
from alexlab.laurent import (
    CyclotomicElement,
    LaurentPoly,
    cyclotomic,
    cyclotomic_decompose,
    determinant,
    divides,
    embed,
    evaluate_at_character,
    exact_divide,
    gcd,
    gcd_all,
    line_support,
    matrix_rank,
    multiply,
    newton_dim,
    substitute_monomial,
    to_text,
)

from .conftest import poly


def test_text_form():
    p = poly("1 - 3*t + t^2")
    assert to_text(p) == "t^2 - 3*t + 1"
    assert to_text(poly("t1^2*t2^2 - 3*t1*t2 + 1", 2)) == "t1^2*t2^2 - 3*t1*t2 + 1"
    assert to_text(LaurentPoly.zero(2)) == "0"
    assert to_text(poly("-2", 1)) == "2"


def test_from_text_rejects_garbage():
    with pytest.raises(PresentationParseError):
        poly("t + s")
    with pytest.raises(PresentationParseError):
        poly("")


def test_normalized_is_canonical_up_to_units():
    p = LaurentPoly.from_dict(1, {(-1,): 1, (1,): -1})
    assert to_text(p.normalized()) == "t^2 - 1"
    q = LaurentPoly.from_dict(2, {(3, -2): -1, (4, -1): -1})
    assert q.normalized() == poly("t1*t2 + 1", 2)


def test_arithmetic_is_exact():
    t = LaurentPoly.variable(1, 0)
    assert (t - 1) * (t + 1) == poly("t^2 - 1")
    assert (t + 1) ** 3 == poly("t^3 + 3*t^2 + 3*t + 1")
    assert multiply(t.shift((-5,)), t + 1) == poly("t + 1")
    with pytest.raises(AmbientMismatchError):
        t + LaurentPoly.variable(2, 0)


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ("t^3 + 1", "t^4 + t^2 + 1", "t^2 - t + 1"),
        ("4", "6", "2"),
        ("t^2 - 1", "0", "t^2 - 1"),
        ("2*t + 2", "4*t^2 - 4", "2*t + 2"),
        ("t^2 - 3*t + 1", "t + 1", "1"),
    ],
)
def test_gcd_univariate(a, b, expected):
    assert gcd(poly(a), poly(b)) == poly(expected)


def test_gcd_multivariate_and_zero():
    p = poly("t1*t2 + t1 - t2 - 1", 2)  # (t1 - 1)(t2 + 1)
    q = poly("t1^2 + t1*t2 - t1 - t2", 2)  # (t1 - 1)(t1 + t2)
    assert gcd(p, q) == poly("t1 - 1", 2)
    assert gcd(LaurentPoly.zero(2), LaurentPoly.zero(2)).is_zero()
    assert gcd_all([], 1).is_zero()
    assert gcd_all([poly("t^2 - 1"), poly("t^3 - 1"), poly("t - 1")], 1) == poly("t - 1")


def test_gcd_respects_variable_limit(monkeypatch):
    monkeypatch.setenv("ALEXLAB_MAX_VARS", "2")
    with pytest.raises(ComputationLimitError):
        gcd(poly("t1 + t3", 3), poly("t2 + 1", 3))


def test_exact_divide_and_divides():
    assert exact_divide(poly("t^2 - 1"), poly("t - 1")) == poly("t + 1")
    assert divides(poly("t1 + 1", 2), poly("t1^2*t2 + t1*t2", 2))
    assert not divides(poly("t + 2"), poly("t^2 + 1"))
    with pytest.raises(InvalidInputError):
        exact_divide(poly("t^2 + 1"), poly("t - 1"))
    with pytest.raises(InvalidInputError):
        exact_divide(poly("t"), LaurentPoly.zero(1))


def test_embed():
    p = embed(poly("t^2 - t + 1"), 3, 1)
    assert p == poly("t2^2 - t2 + 1", 3)
    with pytest.raises(AmbientMismatchError):
        embed(poly("t1 + t2", 2), 2, 1)


@pytest.mark.parametrize(
    "text, nvars, dim",
    [
        ("5", 2, 0),
        ("t1*t2 + 1", 2, 1),
        ("t1 + t2 + 1", 2, 2),
        ("t1*t2*t3 + t1 + 1", 3, 2),
    ],
)
def test_newton_dim(text, nvars, dim):
    assert newton_dim(poly(text, nvars)) == dim


def test_newton_dim_of_zero_raises():
    with pytest.raises(InvalidInputError):
        newton_dim(LaurentPoly.zero(1))


def test_line_support_and_substitution():
    p = poly("t1^2*t2^2 - t1*t2 + 1", 2)
    form = line_support(p)
    assert form.direction == (1, 1)
    assert form.poly == poly("t^2 - t + 1")
    assert substitute_monomial(form.poly, form.direction).normalized() == p
    assert line_support(poly("t1 + t2 + 1", 2)) is None

    q = poly("t1^2 - t2^2", 2)  # direction (1, -1) up to a unit
    form = line_support(q)
    assert form.direction == (1, -1)
    assert form.poly == poly("t^2 - 1")


def test_cyclotomic_polynomials():
    assert cyclotomic(1) == poly("t - 1")
    assert cyclotomic(6) == poly("t^2 - t + 1")
    assert cyclotomic(12) == poly("t^4 - t^2 + 1")


def test_cyclotomic_decompose():
    split = cyclotomic_decompose(poly("t^2 - t + 1"))
    assert split.factors == ((6, 1),)
    assert split.is_cyclotomic

    split = cyclotomic_decompose(poly("t^4 - 1"))
    assert split.factors == ((1, 1), (2, 1), (4, 1))

    p = poly("2*t^2 - 6*t + 2")
    split = cyclotomic_decompose(p)
    assert split.content == 2
    assert split.factors == ()
    assert split.remainder == poly("t^2 - 3*t + 1")
    assert not split.is_cyclotomic
    assert split.reassemble() == p

    p = (poly("t + 1") ** 2 * poly("t^2 + 1") * poly("t^2 - 3*t + 1")).normalized()
    split = cyclotomic_decompose(p)
    assert split.factors == ((2, 2), (4, 1))
    assert split.reassemble() == p


def test_cyclotomic_decompose_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        cyclotomic_decompose(poly("t1 + 1", 2))
    with pytest.raises(InvalidInputError):
        cyclotomic_decompose(LaurentPoly.zero(1))


def test_evaluate_at_character():
    p = poly("t^2 - t + 1")
    assert evaluate_at_character(p, [Fraction(1, 6)]).is_zero()
    assert not evaluate_at_character(p, [Fraction(1, 3)]).is_zero()
    assert evaluate_at_character(LaurentPoly.variable(1, 0), [Fraction(1, 2)]).as_int() == -1
    assert evaluate_at_character(p, [Fraction(1, 2)]).as_int() == 3
    assert evaluate_at_character(poly("t1*t2 + 1", 2), [Fraction(1, 2), 0]).is_zero()
    with pytest.raises(InvalidInputError):
        evaluate_at_character(p, [0.5])
    with pytest.raises(AmbientMismatchError):
        evaluate_at_character(p, [0, 0])


def test_cyclotomic_element_arithmetic():
    z3 = CyclotomicElement.from_powers(3, {1: 1})
    z3_bar = CyclotomicElement.from_powers(3, {2: 1})
    one = CyclotomicElement.from_powers(1, {0: 1})
    assert z3 * z3_bar == one
    assert hash(z3 * z3_bar) == hash(one)
    # zeta_6^2 = zeta_3
    assert CyclotomicElement.from_powers(6, {2: 1}) == z3
    assert CyclotomicElement.from_powers(4, {0: 1, 2: 1}).is_zero()


def test_determinant_and_rank():
    t = LaurentPoly.variable(1, 0)
    rows = [[t - 2, LaurentPoly.constant(1, -1)], [LaurentPoly.constant(1, -1), t - 1]]
    assert determinant(rows, 1) == poly("t^2 - 3*t + 1")
    assert determinant([], 1) == poly("1")
    assert matrix_rank(rows, 1) == 2
    zero = LaurentPoly.zero(2)
    a, b = poly("t1 - 1", 2), poly("t2 - 1", 2)
    assert matrix_rank([[a, b], [a * b, b * b]], 2) == 1
    assert matrix_rank([[zero, zero]], 2) == 0


# -- randomized properties --------------------------------------------------------

def random_poly(rng: random.Random, nvars: int, terms: int = 3, spread: int = 2) -> LaurentPoly:
    while True:
        mapping = {
            tuple(rng.randint(-spread, spread) for _ in range(nvars)): rng.randint(-3, 3) for _ in range(terms)
        }
        p = LaurentPoly.from_dict(nvars, mapping)
        if not p.is_zero():
            return p


def test_gcd_divides_and_leaves_coprime_cofactors():
    rng = random.Random(20261016)
    for _ in range(200):
        nvars = rng.choice([1, 2])
        common = random_poly(rng, nvars, terms=2)
        p = random_poly(rng, nvars) * common
        q = random_poly(rng, nvars) * common
        g = gcd(p, q)
        assert divides(g, p) and divides(g, q), (p, q)
        assert divides(common, g), (p, q)
        assert gcd(exact_divide(p, g), exact_divide(q, g)).is_unit(), (p, q)


def test_newton_dim_of_a_product_is_bounded_by_the_minkowski_sum():
    rng = random.Random(7)
    for _ in range(100):
        p = random_poly(rng, 3, terms=rng.randint(1, 3))
        q = random_poly(rng, 3, terms=rng.randint(1, 3))
        dp, dq, dpq = newton_dim(p), newton_dim(q), newton_dim(multiply(p, q))
        assert max(dp, dq) <= dpq <= min(dp + dq, 3), (p, q)


def test_cyclotomic_remainder_has_no_cyclotomic_factor():
    for coeffs in product((-1, 0, 1), repeat=5):
        if not any(coeffs):
            continue
        p = LaurentPoly.from_dict(1, {(i,): c for i, c in enumerate(coeffs) if c})
        split = cyclotomic_decompose(p)
        assert split.reassemble() == p.normalized(), coeffs
        rest = split.remainder
        for d in range(1, 31):
            if cyclotomic(d).degree() <= rest.degree():
                assert not divides(cyclotomic(d), rest), (coeffs, d)


def test_evaluation_is_multiplicative():
    rng = random.Random(3)
    for _ in range(60):
        nvars = rng.choice([1, 2])
        p, q = random_poly(rng, nvars), random_poly(rng, nvars)
        rho = [Fraction(rng.randint(0, 11), rng.randint(1, 12)) for _ in range(nvars)]
        assert evaluate_at_character(p * q, rho) == evaluate_at_character(p, rho) * evaluate_at_character(q, rho)
