import random
from math import comb

import pytest

from uniform_bundles.bundles import (ChernVector, Cotangent, Dual, Line, Sum, Sym, Tangent, Twist, Wedge,
                                     chern_total, direct_sum, parse_expr, pullback_target, rank, render,
                                     restrict_to_line, restriction_degrees)
from uniform_bundles.errors import BundleSyntaxError, RankError
from uniform_bundles.ring import GeomPoly
from uniform_bundles.splitting_type import SplittingType


def test_tangent_bundle_is_binomial():
    for n in range(1, 7):
        assert chern_total(Tangent(), n).c == tuple(comb(n + 1, i) for i in range(n + 1))


def test_cotangent_and_dual_sign_law():
    samples = [Tangent(), Twist(Tangent(), -1), Wedge(2, Twist(Tangent(), -1)), Sym(2, Tangent()),
               direct_sum(Line(3), Line(-1), Tangent())]
    for e in samples:
        c = chern_total(e).c
        assert chern_total(Dual(e)).c == tuple((-1) ** i * value for i, value in enumerate(c))
    assert chern_total(Cotangent()) == chern_total(Dual(Tangent()))


def test_line_bundles():
    assert chern_total(Line(3)).c == (1, 3)
    assert chern_total(direct_sum(Line(1), Line(1), Line(1))).c == (1, 3, 3, 1)


def test_twisted_tangent():
    assert chern_total(Twist(Tangent(), -1)).c == (1, 1, 1, 1, 1)
    assert chern_total(Twist(Cotangent(), 1)).c == (1, -1, 1, -1, 1)


def test_wedge_of_twisted_tangent():
    chern = chern_total(Wedge(2, Twist(Tangent(), -1)))
    assert chern.r == 6
    assert chern.c[1] == 3
    assert chern.c == (1, 3, 5, 5, 0)


def test_whitney_formula():
    generator = random.Random(11)
    pieces = [Tangent(), Cotangent(), Twist(Tangent(), 2), Wedge(2, Tangent()), Line(2), Line(-3),
              Sym(2, Twist(Cotangent(), 1))]
    for _ in range(200):
        a = generator.choice(pieces)
        b = generator.choice(pieces)
        assert chern_total(Sum(a, b)) == chern_total(a).whitney(chern_total(b))


def test_whitney_truncates_in_degree_n():
    assert ChernVector(2, 1, (1, 1)).whitney(ChernVector(2, 2, (1, 2, 1))) == ChernVector(2, 3, (1, 3, 3))


def test_ranks():
    assert rank(Wedge(2, Tangent())) == 6
    assert rank(Sym(2, Tangent())) == 10
    assert rank(Wedge(0, Tangent())) == 1
    with pytest.raises(RankError):
        rank(Wedge(5, Tangent()))


def test_restriction_to_lines():
    assert restriction_degrees(Tangent()) == [2, 1, 1, 1]
    assert restrict_to_line(Wedge(2, Twist(Tangent(), -1))) == SplittingType((3, 3), (1, 0))
    assert restrict_to_line(parse_expr('T(-1) + O(1)^2')) == SplittingType((3, 3), (1, 0))
    assert restrict_to_line(parse_expr('Om(2) + O(2) + O(1)')) == SplittingType((1, 4, 1), (2, 1, 0))


def test_pullback_target():
    target = pullback_target(Twist(Tangent(), -1))
    assert target == GeomPoly({(4 - i, i, 0): 1 for i in range(5)})


@pytest.mark.parametrize('text, expected', [
    ('O(1)', Line(1)),
    ('O(-2)', Line(-2)),
    ('T', Tangent()),
    ('Omega', Cotangent()),
    ('Om(1)', Twist(Cotangent(), 1)),
    ('T(-1)+O(1)^2', Sum(Sum(Twist(Tangent(), -1), Line(1)), Line(1))),
    ('wedge(2,T(-1))(1)', Twist(Wedge(2, Twist(Tangent(), -1)), 1)),
    ('dual(T + O(3))', Dual(Sum(Tangent(), Line(3)))),
    ('sym(2, T)', Sym(2, Tangent())),
    ('(T + O(0))(1)', Twist(Sum(Tangent(), Line(0)), 1)),
])
def test_parse(text, expected):
    assert parse_expr(text) == expected


@pytest.mark.parametrize('text, position', [
    ('O(1', 3),
    ('T +', 3),
    ('X', 0),
    ('T(-1) $', 6),
    ('O(1)^0', 5),
    ('wedge(2 T)', 8),
])
def test_parse_errors_carry_position(text, position):
    with pytest.raises(BundleSyntaxError) as error:
        parse_expr(text)
    assert error.value.position == position


def test_render_collapses_repeated_summands():
    assert render(parse_expr('T(-1) + O(1) + O(1)')) == 'T(-1) + O(1)^2'
    assert render(parse_expr('(T + O(0))(1)')) == '(T + O(0))(1)'
    assert parse_expr(render(parse_expr('wedge(2,T(-1))(1) + O(2)^3'))) == parse_expr('wedge(2,T(-1))(1) + O(2)^3')


def _truncated_product(factors, n: int) -> tuple[int, ...]:
    """coefficients of h^0..h^n of a product of polynomials in h, given as coefficient lists"""
    result = [1] + [0] * n
    for factor in factors:
        expanded = [0] * (n + 1)
        for i, a in enumerate(result):
            for j, b in enumerate(factor):
                if i + j <= n:
                    expanded[i + j] += a * b
        result = expanded
    return tuple(result)


def test_twist_matches_the_product_of_shifted_roots():
    generator = random.Random(5)
    for _ in range(200):
        n = generator.randint(1, 6)
        degrees = [generator.randint(-4, 4) for _ in range(generator.randint(1, 6))]
        a = generator.randint(-5, 5)
        expected = _truncated_product([[1, d + a] for d in degrees], n)
        chern = chern_total(Twist(direct_sum(*[Line(d) for d in degrees]), a), n)
        assert chern.c == expected[:min(len(degrees), n) + 1]


def test_twisted_tangent_matches_the_euler_sequence():
    # c(T(a)) * (1 + a h) = (1 + (a + 1) h)^(n+1)
    for n in range(1, 7):
        for a in range(-3, 4):
            c = chern_total(Twist(Tangent(), a), n).c
            assert _truncated_product([list(c), [1, a]], n) == _truncated_product([[1, a + 1]] * (n + 1), n)


def test_wedge_matches_pairwise_sums_of_roots():
    generator = random.Random(9)
    for _ in range(50):
        degrees = [generator.randint(-3, 3) for _ in range(generator.randint(2, 5))]
        pairs = [[1, degrees[i] + degrees[j]] for i in range(len(degrees)) for j in range(i + 1, len(degrees))]
        chern = chern_total(Wedge(2, direct_sum(*[Line(d) for d in degrees])), 4)
        assert chern.c == _truncated_product(pairs, 4)[:min(len(pairs), 4) + 1]


@pytest.mark.parametrize('e', [Tangent(), Cotangent(), Wedge(2, Twist(Tangent(), -1)), Sym(3, Tangent()),
                               direct_sum(Line(2), Twist(Cotangent(), 2), Line(0)), Dual(Sym(2, Cotangent()))])
def test_restriction_of_a_twist_is_shifted(e):
    for a in (-2, 1, 3):
        assert restriction_degrees(Twist(e, a)) == [d + a for d in restriction_degrees(e)]
        assert restrict_to_line(Twist(e, a)) == restrict_to_line(e).twisted(a)
        assert restrict_to_line(Twist(e, a)).multiset() == [d + a for d in restrict_to_line(e).multiset()]
    assert rank(e) == len(restriction_degrees(e)) == restrict_to_line(e).rank
