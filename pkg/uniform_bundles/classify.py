from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Callable, Iterator, Sequence, Union

from .bundles import (BundleExpr, ChernVector, Cotangent, Dual, Line, Tangent, Twist, Wedge, chern_total, direct_sum,
                      pullback_target, render, restriction_degrees)
from .chow import chow_equal
from .constraints import ConstraintSystem, cached_system, check_solution, evaluated_product
from .errors import TypeMismatch, UniformBundlesError
from .print_prefixed import quiet
from .solver import SolutionSet, SolverConfig, dualize_type, solve, transform_solution
from .splitting_type import SplittingType


@dataclass(frozen=True)
class CatalogEntry:
    """a family of homogeneous bundles: one non-line summand, twisted by a, plus lines"""
    family: str
    summand: Callable[[int], BundleExpr] | None
    provenance: str

    def instantiate(self, a: int) -> BundleExpr | None:
        return self.summand(a) if self.summand else None


CATALOG = [
    CatalogEntry('lines', None, 'direct sums of line bundles'),
    CatalogEntry('T(a) + lines', lambda a: Twist(Tangent(), a), 'twisted tangent bundle'),
    CatalogEntry('Om(a) + lines', lambda a: Twist(Cotangent(), a), 'twisted cotangent bundle'),
    CatalogEntry('wedge(2,T(-1))(a) + lines', lambda a: Twist(Wedge(2, Twist(Tangent(), -1)), a),
                 'twisted second exterior power of T(-1)'),
]

CATALOG_RANKS = {4: 7}


@dataclass(frozen=True)
class Matched:
    bundle: BundleExpr
    family: str
    chern: ChernVector

    def to_json(self) -> dict:
        return {'verdict': 'Matched', 'bundle': render(self.bundle), 'family': self.family,
                'chern': list(self.chern.c)}


@dataclass(frozen=True)
class ProvenNonexistent:
    reason: str

    def to_json(self) -> dict:
        return {'verdict': 'ProvenNonexistent', 'reason': self.reason}


@dataclass(frozen=True)
class Unidentified:

    def to_json(self) -> dict:
        return {'verdict': 'Unidentified'}


Verdict = Union[Matched, ProvenNonexistent, Unidentified]


def _strip_zero_twist(e: BundleExpr) -> BundleExpr:
    return e.e if isinstance(e, Twist) and e.a == 0 else e


def catalog_candidates(st: SplittingType, n: int = 4) -> Iterator[tuple[CatalogEntry, BundleExpr]]:
    """catalog bundles restricting to st on lines, fewest summands first, then by twists"""
    target = Counter(st.multiset())
    r = st.rank
    candidates = []
    for order, entry in enumerate(CATALOG):
        if entry.summand is None:
            degrees = sorted(target.elements(), reverse=True)
            candidates.append(((r, tuple(degrees), order), entry, direct_sum(*[Line(d) for d in degrees])))
            continue
        for a in range(-r, r + 1):
            summand = _strip_zero_twist(entry.instantiate(a))
            summand_degrees = Counter(restriction_degrees(summand, n))
            if summand_degrees - target:
                continue
            lines = sorted((target - summand_degrees).elements(), reverse=True)
            bundle = direct_sum(summand, *[Line(d) for d in lines])
            candidates.append(((1 + len(lines), (a, *lines), order), entry, bundle))
    candidates.sort(key=lambda item: item[0])
    for _, entry, bundle in candidates:
        yield entry, bundle


def verify(e: BundleExpr, st: SplittingType, values: Sequence[int], n: int = 4) -> bool:
    """does the factor product at values equal the pullback of c(e) in the Chow ring"""
    e_type = SplittingType.from_multiset(restriction_degrees(e, n))
    if e_type.ranks != st.ranks or e_type.gaps() != st.gaps():
        raise TypeMismatch(f'{render(e)} restricts to {e_type}, not to a twist of {st}')
    system = cached_system(st.normalized(), n)
    if not check_solution(system, values):
        return False
    offset = e_type.twists[-1]
    normalized = Twist(e, -offset) if offset else e
    return chow_equal(evaluated_product(system, values), pullback_target(normalized, n), n)


@dataclass
class NonexistenceBase:
    arguments: dict[str, str]
    entries: dict[str, dict[tuple[int, ...], str]]

    @classmethod
    @lru_cache(maxsize=None)
    def load(cls) -> NonexistenceBase:
        text = resources.files('uniform_bundles').joinpath('data/nonexistence.json').read_text(encoding='utf-8')
        data = json.loads(text)
        entries: dict[str, dict[tuple[int, ...], str]] = {}
        for entry in data['entries']:
            entries.setdefault(entry['type'], {})[tuple(entry['coordinates'])] = entry['argument']
        return cls(arguments=data['arguments'], entries=entries)

    def _lookup_direct(self, system: ConstraintSystem, values: Sequence[int]) -> str | None:
        projection = system.project(values)
        if projection is None:
            return None
        argument = self.entries.get(str(system.splitting_type), {}).get(projection)
        if argument is None:
            return None
        return f'{self.arguments[argument]} ({system.splitting_type} at {list(projection)})'

    def lookup(self, st: SplittingType, values: Sequence[int], n: int = 4) -> str | None:
        """the recorded reason, looked up for st or through its dual"""
        if n != 4:
            return None
        st = st.normalized()
        system = cached_system(st, n)
        reason = self._lookup_direct(system, values)
        if reason is None and check_solution(system, values):
            dual = dualize_type(st)
            reason = self._lookup_direct(cached_system(dual, n), transform_solution(st, values, n))
            if reason is not None:
                reason = f'dual case: {reason}'
        return reason


def catalog_is_complete(n: int, r: int) -> bool:
    return r <= CATALOG_RANKS.get(n, 0)


def is_ellia_type(st: SplittingType) -> bool:
    """(2;1,r-1) and its dual (2;r-1,1): every uniform bundle of this type is homogeneous"""
    return st.k == 2 and 1 in st.ranks and st.is_consecutive()


def match_solution(st: SplittingType, values: Sequence[int], n: int = 4) -> Verdict:
    for entry, bundle in catalog_candidates(st, n):
        if verify(bundle, st, values, n):
            return Matched(bundle=bundle, family=entry.family, chern=chern_total(bundle, n))
    reason = NonexistenceBase.load().lookup(st, values, n)
    if reason is not None:
        return ProvenNonexistent(reason)
    if is_ellia_type(st) and catalog_is_complete(n, st.rank):
        return ProvenNonexistent('every uniform bundle of splitting type (2;1,r-1) is homogeneous, '
                                 'and no homogeneous bundle has this Chern data')
    return Unidentified()


def compositions(r: int) -> Iterator[tuple[int, ...]]:
    if r == 0:
        yield ()
        return
    for first in range(1, r + 1):
        for rest in compositions(r - first):
            yield (first,) + rest


def enumerate_cases(n: int, r: int) -> list[SplittingType]:
    """consecutive types of rank r with k >= 2, keeping the smaller of each dual pair"""
    if r < 2:
        raise ValueError(f'rank must be at least 2, got {r}')
    cases = []
    for ranks in compositions(r):
        if len(ranks) < 2 or ranks > tuple(reversed(ranks)):
            continue
        cases.append(SplittingType.consecutive(ranks))
    return sorted(cases, key=lambda st: (st.k, st.ranks))


def shortcuts(st: SplittingType) -> list[str]:
    notes = []
    if not st.is_consecutive():
        notes.append('gap')
    if is_ellia_type(st):
        notes.append('ellia')
    if max(st.ranks) <= 2:
        notes.append('parts-le-2')
    return notes


@dataclass
class CaseReport:
    splitting_type: SplittingType
    shortcuts: list[str]
    system: ConstraintSystem | None = None
    solutions: SolutionSet | None = None
    verdicts: list[Verdict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    error: str | None = None

    @property
    def unidentified(self) -> int:
        return sum(isinstance(verdict, Unidentified) for verdict in self.verdicts)

    def to_json(self) -> dict:
        data = {'type': str(self.splitting_type), 'shortcuts': self.shortcuts}
        if self.system is not None:
            data['unknowns'] = [unknown.name for unknown in self.system.unknowns]
        if self.solutions is not None:
            data['solutions'] = [list(t) for t in self.solutions.tuples]
            data['completeness'] = self.solutions.completeness.name
            data['verdicts'] = [verdict.to_json() for verdict in self.verdicts]
        if self.notes:
            data['notes'] = self.notes
        if self.error is not None:
            data['error'] = self.error
        return data


def classify_case(st: SplittingType, n: int, config: SolverConfig,
                  log: Callable[[str], None] = quiet) -> CaseReport:
    report = CaseReport(splitting_type=st, shortcuts=shortcuts(st))
    if 'gap' in report.shortcuts:
        report.notes.append('reducible by extension into uniform bundles of smaller rank; not solved')
        return report
    log(f'solving {st}')
    try:
        report.system = cached_system(st, n)
        report.solutions = solve(report.system, config, log)
        report.verdicts = [match_solution(st, t, n) for t in report.solutions.tuples]
    except UniformBundlesError as error:
        report.error = f'{type(error).__name__}: {error}'
        log(f'{st}: {report.error}')
        return report
    zero = tuple([0] * len(report.system.unknowns))
    if 'parts-le-2' in report.shortcuts and report.solutions.tuples != [zero]:
        report.notes.append('non-zero solutions in a case with all parts at most 2')
    if not catalog_is_complete(n, st.rank):
        report.notes.append(f'the catalog makes no completeness claim for n={n}, rank {st.rank}')
    return report


def classify(n: int, r: int, config: SolverConfig = SolverConfig(),
             log: Callable[[str], None] = quiet) -> list[CaseReport]:
    return [classify_case(st, n, config, log) for st in enumerate_cases(n, r)]


def families(reports: Sequence[CaseReport]) -> list[str]:
    """matched catalog families in catalog order"""
    found = {verdict.family for report in reports for verdict in report.verdicts if isinstance(verdict, Matched)}
    return [entry.family for entry in CATALOG if entry.family in found]


def catalog_bundles(n: int, r: int) -> list[tuple[SplittingType, BundleExpr, str]]:
    """every catalog bundle of rank r whose line restriction is consecutive and normalized"""
    listed = []
    for ranks in compositions(r):
        st = SplittingType.consecutive(ranks)
        for entry, bundle in catalog_candidates(st, n):
            listed.append((st, bundle, entry.family))
    return listed


def dual_verdict(verdict: Verdict, st: SplittingType, n: int = 4) -> Verdict:
    """the verdict the dual case should carry: dual bundles twisted back to the normalized dual type"""
    if not isinstance(verdict, Matched):
        return verdict
    twist = st.normalized().twists[0]
    bundle = Twist(Dual(verdict.bundle), twist)
    return Matched(bundle=bundle, family=verdict.family, chern=chern_total(bundle, n))


__all__ = ['CATALOG', 'CaseReport', 'CatalogEntry', 'Matched', 'NonexistenceBase', 'ProvenNonexistent',
           'Unidentified', 'Verdict', 'catalog_bundles', 'catalog_candidates', 'classify', 'classify_case',
           'dual_verdict', 'enumerate_cases', 'families', 'match_solution', 'shortcuts', 'verify']
