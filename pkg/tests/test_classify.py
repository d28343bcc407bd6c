from itertools import product

import pytest

from uniform_bundles.bundles import Tangent, chern_total, parse_expr, render
from uniform_bundles.classify import (CATALOG, Matched, ProvenNonexistent, Unidentified, catalog_bundles,
                                      catalog_candidates, classify, dual_verdict, enumerate_cases, families,
                                      match_solution, shortcuts, verify)
from uniform_bundles.constraints import cached_system
from uniform_bundles.errors import TypeMismatch
from uniform_bundles.solver import SolverConfig, dualize_type, transform_solution
from uniform_bundles.splitting_type import SplittingType

THREE_THREE = SplittingType.parse('2;3,3;1,0')
ZERO = (0,) * 10
TANGENT_TUPLE = (-1, 0, 0, 0, 0, 1, 1, 1, 1, 1)
COTANGENT_TUPLE = (-1, 1, 1, -1, -1, 1, 0, 0, 0, 0)
WEDGE_TUPLE = (-2, 2, 3, 0, -1, 2, 2, 3, 0, 1)


def unproject(system, projected):
    """the canonical tuple behind a reported one, when the report covers every unknown"""
    if len(system.display) != len(system.unknowns):
        return None
    values = [0] * len(system.unknowns)
    for unknown, value in zip(system.display, projected):
        values[unknown.id] = value
    return tuple(values)


@pytest.mark.parametrize('bundle, values', [
    ('T(-1) + O(1)^2', TANGENT_TUPLE),
    ('O(1)^3 + O(0)^3', ZERO),
    ('wedge(2,T(-1))', WEDGE_TUPLE),
    ('Om(2) + O(0)^2', COTANGENT_TUPLE),
    ('T(4) + O(6)^2', TANGENT_TUPLE),
])
def test_verify_pairings(bundle, values):
    assert verify(parse_expr(bundle), THREE_THREE, values)


def test_verify_rejects_wrong_bundle():
    assert not verify(parse_expr('T(-1) + O(1)^2'), THREE_THREE, ZERO)
    assert not verify(parse_expr('wedge(2,T(-1))'), THREE_THREE, TANGENT_TUPLE)


def test_verify_rejects_perturbed_tuples():
    pairs = [('T(-1) + O(1)^2', TANGENT_TUPLE), ('wedge(2,T(-1))', WEDGE_TUPLE), ('O(1)^3 + O(0)^3', ZERO)]
    perturbed = 0
    for bundle, values in pairs:
        for i, delta in product(range(len(values)), (-1, 1)):
            changed = list(values)
            changed[i] += delta
            assert not verify(parse_expr(bundle), THREE_THREE, changed)
            perturbed += 1
    assert perturbed >= 20


def test_verify_type_mismatch():
    with pytest.raises(TypeMismatch):
        verify(Tangent(), THREE_THREE, ZERO)
    with pytest.raises(TypeMismatch):
        verify(parse_expr('O(1)^3 + O(-1)^3'), THREE_THREE, ZERO)


def test_catalog_candidates_order():
    rendered = [render(bundle) for _, bundle in catalog_candidates(THREE_THREE)]
    assert rendered == ['wedge(2,T(-1))', 'T(-1) + O(1)^2', 'Om(2) + O(0)^2', 'O(1)^3 + O(0)^3']


def test_catalog_instantiations_are_well_ranked():
    for st, bundle, family in catalog_bundles(4, 7):
        assert sum(st.ranks) == 7
        assert chern_total(bundle).r == 7
        assert family in [entry.family for entry in CATALOG]


@pytest.mark.parametrize('values, bundle, family', [
    (ZERO, 'O(1)^3 + O(0)^3', 'lines'),
    (TANGENT_TUPLE, 'T(-1) + O(1)^2', 'T(a) + lines'),
    (COTANGENT_TUPLE, 'Om(2) + O(0)^2', 'Om(a) + lines'),
    (WEDGE_TUPLE, 'wedge(2,T(-1))', 'wedge(2,T(-1))(a) + lines'),
])
def test_match_three_three(values, bundle, family):
    verdict = match_solution(THREE_THREE, values)
    assert isinstance(verdict, Matched)
    assert render(verdict.bundle) == bundle
    assert verdict.family == family
    assert verdict.chern == chern_total(verdict.bundle)


def test_match_known_nonexistence():
    verdict = match_solution(SplittingType.parse('3;1,2,3;2,1,0'), (-2, 0, 0, 0, 2, 4, 4, 8, 8))
    assert isinstance(verdict, ProvenNonexistent)
    assert '3;1,2,3;2,1,0' in verdict.reason


def test_match_nonexistence_through_the_dual():
    st = SplittingType.parse('4;2,3,1,1;3,2,1,0')
    values = unproject(cached_system(st), (0, 0, 0, -2, 4, 4, -8, -8, 0, 2))
    dual = dualize_type(st)
    assert dual == SplittingType.parse('4;1,1,3,2;3,2,1,0')
    verdict = match_solution(dual, transform_solution(st, values))
    assert isinstance(verdict, ProvenNonexistent)
    assert verdict.reason.startswith('dual case')


def test_fabricated_tuple_is_unidentified():
    assert match_solution(THREE_THREE, (5,) * 10) == Unidentified()


def test_dual_verdict_matches_dual_case():
    verdict = match_solution(THREE_THREE, TANGENT_TUPLE)
    dual = dual_verdict(verdict, THREE_THREE)
    expected = match_solution(THREE_THREE, transform_solution(THREE_THREE, TANGENT_TUPLE))
    assert verify(dual.bundle, THREE_THREE, transform_solution(THREE_THREE, TANGENT_TUPLE))
    assert dual.chern == expected.chern


def test_enumerate_rank_two():
    assert enumerate_cases(4, 2) == [SplittingType.parse('2;1,1;1,0')]
    with pytest.raises(ValueError):
        enumerate_cases(4, 1)


@pytest.mark.parametrize('r', [3, 4, 5, 6, 7, 8])
def test_enumerate_against_brute_force(r):
    expected = set()
    for k in range(2, r + 1):
        for ranks in product(range(1, r + 1), repeat=k):
            if sum(ranks) == r:
                expected.add(min(ranks, tuple(reversed(ranks))))
    cases = enumerate_cases(4, r)
    assert len(cases) == len(expected)
    assert {st.ranks for st in cases} == expected
    assert cases == sorted(cases, key=lambda st: (st.k, st.ranks))


def test_enumerate_rank_six_headers():
    cases = [str(st) for st in enumerate_cases(4, 6)]
    for header in ('2;3,3;1,0', '2;2,4;1,0', '3;1,2,3;2,1,0'):
        assert header in cases
    assert '2;4,2;1,0' not in cases


def test_shortcuts():
    assert shortcuts(SplittingType.parse('2;3,3;3,0')) == ['gap']
    assert shortcuts(SplittingType.parse('2;1,5;1,0')) == ['ellia']
    assert shortcuts(SplittingType.parse('2;5,1;1,0')) == ['ellia']
    assert shortcuts(SplittingType.parse('3;2,2,2;2,1,0')) == ['parts-le-2']
    assert shortcuts(SplittingType.parse('2;1,1;1,0')) == ['ellia', 'parts-le-2']
    assert shortcuts(THREE_THREE) == []


def test_classify_rank_two():
    reports = classify(4, 2)
    assert len(reports) == 1
    report = reports[0]
    assert report.solutions.tuples == [(0, 0)]
    assert render(report.verdicts[0].bundle) == 'O(1) + O(0)'
    assert families(reports) == ['lines']
    assert report.to_json()['verdicts'] == [{'verdict': 'Matched', 'bundle': 'O(1) + O(0)', 'family': 'lines',
                                             'chern': [1, 1, 0]}]


def test_classify_flags_disclaimer_outside_catalog_range():
    reports = classify(4, 2)
    assert not reports[0].notes
    reports = classify(3, 2)
    assert reports[0].notes == ['the catalog makes no completeness claim for n=3, rank 2']


@pytest.mark.slow
@pytest.mark.parametrize('r', [6, 7])
def test_classify_is_homogeneous(r):
    reports = classify(4, r, SolverConfig())
    assert all(report.error is None for report in reports)
    assert sum(report.unidentified for report in reports) == 0
    assert families(reports) == ['lines', 'T(a) + lines', 'Om(a) + lines', 'wedge(2,T(-1))(a) + lines']
    for report in reports:
        assert len(report.verdicts) == len(report.solutions.tuples)
        for values, verdict in zip(report.solutions.tuples, report.verdicts):
            if isinstance(verdict, Matched):
                assert verify(verdict.bundle, report.splitting_type, values)


@pytest.mark.slow
def test_classify_is_deterministic():
    first = [report.to_json() for report in classify(4, 5)]
    second = [report.to_json() for report in classify(4, 5)]
    assert first == second
