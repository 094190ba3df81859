import random
from fractions import Fraction

import pytest

from alexlab.alexinv import (
    CharacterPoint,
    cv_dim,
    elementary_generators,
    evaluated_rank,
    first_order,
    fraction_rank,
    hironaka_mismatches,
    order_k,
    order_sequence,
    thickness,
    torsion_characters,
)
from alexlab.builders import klein_bottle, torus_bundle, torus_knot, trivial_group
from alexlab.errors import AmbientMismatchError, InvalidInputError, PresentationParseError
from alexlab.fpgroup import Word, fox_matrix, free_product
from alexlab.laurent import LaurentPoly, exact_divide

from .conftest import conjugate_relator, corpus, poly, relabel


def test_trefoil_orders(trefoil):
    F = fox_matrix(trefoil)
    assert order_k(F, 0).is_zero()
    assert order_k(F, 1) == poly("t^2 - t + 1")
    assert order_k(F, 2) == poly("1")
    assert first_order(F) == (1, poly("t^2 - t + 1"))
    seq = order_sequence(F, 3)
    assert seq.k0 == 1
    assert seq.orders == (LaurentPoly.zero(1), poly("t^2 - t + 1"), poly("1"), poly("1"))


def test_order_k_rejects_negative(trefoil):
    with pytest.raises(InvalidInputError):
        order_k(fox_matrix(trefoil), -1)


@pytest.mark.parametrize("p, q", [(2, 3), (2, 5), (3, 4)])
def test_torus_knot_closed_formula(p, q):
    t = LaurentPoly.variable(1, 0)
    expected = exact_divide((t ** (p * q) - 1) * (t - 1), (t ** p - 1) * (t ** q - 1))
    k0, delta = first_order(fox_matrix(torus_knot(p, q)))
    assert k0 == 1
    assert delta == expected


@pytest.mark.parametrize(
    "name, k0, delta, nvars",
    [
        ("solbundle", 1, "t^2 - 3*t + 1", 1),
        ("figure8", 1, "t^2 - 3*t + 1", 1),
        ("rot90", 1, "t^2 + 1", 1),
        ("klein", 1, "t + 1", 1),
        ("z2", 1, "1", 2),
        ("z", 1, "1", 1),
        ("t24link", 1, "t1*t2 + 1", 2),
        ("z2mod", 0, "2", 0),
    ],
)
def test_first_orders_of_corpus(name, k0, delta, nvars):
    assert first_order(fox_matrix(corpus(name))) == (k0, poly(delta, nvars))


def test_trivial_group():
    F = fox_matrix(trivial_group())
    assert first_order(F) == (0, LaurentPoly.constant(0, 1))
    assert thickness(F) == 0


def test_fraction_rank_and_generators(trefoil):
    F = fox_matrix(trefoil)
    assert fraction_rank(F) == 1
    assert elementary_generators(F, 1) == [poly("t^3 + 1"), poly("t^4 + t^2 + 1")]
    assert elementary_generators(F, 0) == []
    assert elementary_generators(F, 2) == [poly("1")]


def test_thickness():
    assert thickness(fox_matrix(corpus("trefoil"))) == 1
    assert thickness(fox_matrix(corpus("z2"))) == 0
    assert thickness(fox_matrix(corpus("t24link"))) == 1


def test_character_point_parsing():
    rho = CharacterPoint.parse_csv("1/6, 7/6")
    assert rho.rho == (Fraction(1, 6), Fraction(1, 6))
    assert rho.order == 6
    assert str(rho) == "1/6,1/6"
    assert CharacterPoint.parse_csv("").rho == ()
    with pytest.raises(PresentationParseError):
        CharacterPoint.parse_csv("1/0")
    with pytest.raises(InvalidInputError):
        CharacterPoint.of([0.5])


@pytest.mark.parametrize("rho, dim", [("1/6", 1), ("5/6", 1), ("1/2", 0), ("1/3", 0), ("0", 1)])
def test_cv_dim_trefoil(trefoil, rho, dim):
    assert cv_dim(fox_matrix(trefoil), CharacterPoint.parse_csv(rho)).dim == dim


def test_cv_dim_memberships(trefoil):
    report = cv_dim(fox_matrix(trefoil), CharacterPoint.parse_csv("1/6"), kmax=3)
    assert report.memberships == (True, False, False)


def test_cv_dim_two_variables():
    F = fox_matrix(corpus("t24link"))
    # Delta = 1 + t1*t2 vanishes exactly on t1*t2 = -1
    assert cv_dim(F, CharacterPoint.parse_csv("1/2,0")).dim == 1
    assert cv_dim(F, CharacterPoint.parse_csv("1/4,1/4")).dim == 1
    assert cv_dim(F, CharacterPoint.parse_csv("1/3,0")).dim == 0
    assert cv_dim(F, CharacterPoint.parse_csv("0,0")).dim == 2


def test_cv_dim_ambient_mismatch(trefoil):
    with pytest.raises(AmbientMismatchError):
        cv_dim(fox_matrix(trefoil), CharacterPoint.parse_csv("1/2,0"))


def test_evaluated_rank_of_torus_bundle():
    F = fox_matrix(torus_bundle([[2, 1], [1, 1]]))
    assert evaluated_rank(F, CharacterPoint.parse_csv("1/2")) == 2


def test_torsion_characters():
    chars = torsion_characters(1, 4)
    assert [str(c) for c in chars] == ["1/2", "1/3", "2/3", "1/4", "3/4"]
    assert len(torsion_characters(2, 2)) == 3


@pytest.mark.parametrize("group", ["trefoil", "klein"])
def test_pointwise_agreement_with_first_order(group):
    p = corpus("trefoil") if group == "trefoil" else klein_bottle()
    F = fox_matrix(p)
    assert hironaka_mismatches(F, 1, 12) == []


def test_pointwise_agreement_two_variables():
    assert hironaka_mismatches(fox_matrix(corpus("t24link")), 1, 4) == []


def test_mismatch_requires_positive_k(trefoil):
    with pytest.raises(InvalidInputError):
        hironaka_mismatches(fox_matrix(trefoil), 0, 3)


@pytest.mark.parametrize("name", ["trefoil", "solbundle", "figure8", "rot90", "klein", "z2", "t24link", "torusknot_3_4"])
def test_rank_at_a_prime_order_character_matches_fraction_rank(name):
    F = fox_matrix(corpus(name))
    rho = CharacterPoint.of([Fraction(3 + 7 * i, 31) for i in range(F.nvars)])
    assert evaluated_rank(F, rho) == fraction_rank(F)


THICKNESS_GROUPS = ["trefoil", "figure8", "solbundle", "rot90", "klein", "z2", "z2mod", "t24link", "torusknot_2_5"]


@pytest.mark.parametrize("name", THICKNESS_GROUPS)
def test_thickness_is_a_group_invariant(name):
    rng = random.Random(name)
    p = corpus(name)
    expected = thickness(fox_matrix(p))
    for _ in range(3):
        perm = list(range(p.ngens))
        rng.shuffle(perm)
        order = list(range(len(p.relators)))
        rng.shuffle(order)
        q = relabel(p, perm, relator_order=order)
        w = Word.reduced([(rng.randrange(q.ngens), rng.choice([-2, -1, 1, 2])) for _ in range(3)])
        q = conjugate_relator(q, rng.randrange(len(q.relators)), w)
        assert thickness(fox_matrix(q)) == expected


def test_thickness_of_a_free_product_is_a_group_invariant():
    p = free_product(corpus("trefoil"), corpus("klein"))
    q = relabel(p, [3, 2, 1, 0], relator_order=[1, 0])
    assert thickness(fox_matrix(p)) == thickness(fox_matrix(q)) == 2
