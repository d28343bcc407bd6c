from fractions import Fraction
from math import lcm

import pytest

from uniform_bundles.bundles import ChernVector
from uniform_bundles.chow import reduce
from uniform_bundles.constraints import (build_system, cached_system, check_solution, evaluated_factors, gauge,
                                         gauge_reduce, registered_types, residual_chern, symmetric_basis,
                                         symmetric_monomials)
from uniform_bundles.errors import InvalidSolution, MissingAssignment, ReducibleType
from uniform_bundles.ring import GeomPoly, T, add, eval_unknowns, mul, product, shift_T
from uniform_bundles.splitting_type import SplittingType

THREE_THREE = SplittingType.parse('2;3,3;1,0')


def test_symmetric_monomials():
    assert symmetric_monomials(3) == [((3, 0), (0, 3)), ((2, 1), (1, 2))]
    assert symmetric_monomials(4)[-1] == ((2, 2),)


def test_symmetric_basis_below_n_is_full():
    assert symmetric_basis(2, 4) == [GeomPoly.parse('U^2+V^2'), GeomPoly.parse('UV')]
    assert len(symmetric_basis(3, 4)) == 2


@pytest.mark.parametrize('d, retained', [(4, (0, 1)), (5, (1,)), (6, (2,)), (7, ()), (8, ())])
def test_gauge_retained_directions(d, retained):
    assert gauge(d, 4).retained == retained


def test_gauge_relations_are_integral():
    record = gauge(4, 4)
    assert record.deleted == (2,)
    assert record.relations[2] == {0: Fraction(-1), 1: Fraction(-1)}
    assert record.unimodular
    assert gauge(5, 4).relations[2] == {1: Fraction(-1)}
    assert gauge_reduce(5, 4, [7, 3, 2]) == {1: Fraction(1)}


def test_symmetric_basis_rejects_degree_zero():
    with pytest.raises(ValueError):
        symmetric_basis(0, 4)


def test_unknowns_in_canonical_order():
    system = build_system(THREE_THREE)
    assert [u.name for u in system.unknowns] == ['a1', 'a2_0', 'a2_1', 'a3_0', 'a3_1',
                                                 'b1', 'b2_0', 'b2_1', 'b3_0', 'b3_1']
    system = build_system(SplittingType.parse('3;1,2,3;2,1,0'))
    assert [u.name for u in system.unknowns] == ['a1', 'b1', 'b2_0', 'b2_1',
                                                 'c1', 'c2_0', 'c2_1', 'c3_0', 'c3_1']


def test_gauge_applies_to_rank_four_factor():
    system = build_system(SplittingType.parse('2;2,4;1,0'))
    assert [u.name for u in system.unknowns] == ['a1', 'a2_0', 'a2_1',
                                                 'b1', 'b2_0', 'b2_1', 'b3_0', 'b3_1', 'b4_0', 'b4_1']
    assert system.factors[1].gauge[4].deleted == (2,)


def test_system_is_normalized():
    system = build_system(SplittingType.parse('2;3,3;6,5'))
    assert str(system.splitting_type) == '2;3,3;1,0'


def test_equations_come_from_v_coefficients():
    system = build_system(THREE_THREE)
    assert system.equations
    assert all(v > 0 for _, _, v in system.equation_monomials)
    assert len({equation.primitive() for equation in system.equations}) == len(system.equations)


def test_gap_types_are_reducible():
    with pytest.raises(ReducibleType):
        build_system(SplittingType.parse('2;3,3;3,0'))


@pytest.mark.parametrize('values', [
    (0, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (-1, 0, 0, 0, 0, 1, 1, 1, 1, 1),
    (-1, 1, 1, -1, -1, 1, 0, 0, 0, 0),
    (-2, 2, 3, 0, -1, 2, 2, 3, 0, 1),
])
def test_published_solutions_check(values):
    assert check_solution(cached_system(THREE_THREE), values)


@pytest.mark.parametrize('values', [
    (1, 0, 0, 0, 0, 0, 0, 0, 0, 0),
    (-1, 0, 0, 0, 0, 1, 1, 1, 1, 0),
    (-2, 2, 3, 0, -1, 2, 2, 3, 0, 2),
])
def test_perturbed_solutions_fail(values):
    assert not check_solution(cached_system(THREE_THREE), values)


def test_assignment_must_be_complete():
    system = cached_system(THREE_THREE)
    with pytest.raises(MissingAssignment) as error:
        check_solution(system, (0, 0, 0))
    assert error.value.name == 'a3_0'
    with pytest.raises(MissingAssignment):
        check_solution(system, {system.namespace['a1']: 0})
    with pytest.raises(ValueError):
        check_solution(system, (0,) * 11)


def test_residual_chern():
    assert residual_chern(THREE_THREE, 4, (0,) * 10) == ChernVector(n=4, r=6, c=(1, 3, 3, 1, 0))
    assert residual_chern(THREE_THREE, 4, (-1, 0, 0, 0, 0, 1, 1, 1, 1, 1)).c == (1, 3, 4, 4, 4)
    with pytest.raises(InvalidSolution):
        residual_chern(THREE_THREE, 4, (1,) + (0,) * 9)


def test_evaluated_factors():
    factors = evaluated_factors(cached_system(THREE_THREE), (-1, 0, 0, 0, 0, 1, 1, 1, 1, 1))
    assert factors[0] == GeomPoly.parse('T^3-(U+V)T^2')
    assert factors[1] == GeomPoly.parse('T^3+(U+V)T^2+(U^2+UV+V^2)T+U^3+U^2V+UV^2+V^3')


def test_display_projection():
    system = cached_system(SplittingType.parse('3;2,1,3;2,1,0'))
    assert [u.name for u in system.display][:2] == ['b1', 'a1']
    values = tuple(range(len(system.unknowns)))
    assert system.project(values)[:2] == (3, 0)
    assert cached_system(THREE_THREE, 3).display is None


def test_registered_types():
    types = registered_types(4)
    assert len(types) == 31
    assert THREE_THREE in types
    assert registered_types(3) == []


def test_to_json():
    data = build_system(THREE_THREE).to_json()
    assert list(data) == ['type', 'n', 'unknowns', 'equations', 'display']
    assert data['type'] == '2;3,3;1,0'


@pytest.mark.parametrize('text', ['2;3,3;1,0', '2;2,4;1,0', '3;1,2,3;2,1,0', '2;1,6;1,0'])
def test_factors_are_symmetric_in_u_and_v(text):
    system = cached_system(SplittingType.parse(text))
    every_other = {unknown: unknown.id - 3 for unknown in system.unknowns if unknown.id % 2}
    for factor in system.factors:
        assert factor.polynomial.swap_uv() == factor.polynomial
        partial = eval_unknowns(factor.polynomial, every_other, partial=True)
        assert partial.swap_uv() == partial
    for factor in evaluated_factors(system, (0,) * len(system.unknowns)):
        assert factor.swap_uv() == factor


def _symmetric_element(d: int, j: int) -> GeomPoly:
    return GeomPoly({(0, u, v): 1 for u, v in symmetric_monomials(d)[j]})


@pytest.mark.parametrize('text', ['2;2,4;1,0', '2;1,5;1,0', '3;1,1,5;2,1,0', '2;1,6;1,0'])
def test_deleted_gauge_directions_leave_the_equations_unchanged(text):
    system = build_system(SplittingType.parse(text))
    shifted = [shift_T(factor.polynomial, factor.twist) for factor in system.factors]
    checked = 0
    for position, factor in enumerate(system.factors):
        for d, record in factor.gauge.items():
            for j in record.deleted:
                scale = lcm(*(c.denominator for c in record.relations[j].values()))
                kernel = _symmetric_element(d, j) * scale
                for i, coefficient in record.relations[j].items():
                    kernel = add(kernel, _symmetric_element(d, i) * -int(coefficient * scale))
                assert not reduce(kernel, system.n)
                moved = add(factor.polynomial, mul(kernel, T ** (factor.rank - d)))
                factors = shifted[:position] + [shift_T(moved, factor.twist)] + shifted[position + 1:]
                assert reduce(product(factors), system.n) == system.product
                checked += 1
    assert checked
