from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from string import ascii_lowercase
from typing import Mapping, Sequence

from sympy import Matrix

from . import chow
from .bundles import ChernVector
from .errors import InvalidSolution, MissingAssignment, ReducibleType
from .ring import CoefPoly, GeomPoly, Namespace, Unknown, eval_unknowns, product, shift_T
from .splitting_type import SplittingType


def symmetric_monomials(d: int) -> list[tuple[tuple[int, int], ...]]:
    """U^(d-j)V^j + U^jV^(d-j) for j < d/2, then U^(d/2)V^(d/2) when d is even"""
    basis = []
    for j in range(d // 2 + 1):
        if d - j == j:
            basis.append(((j, j),))
        else:
            basis.append(((d - j, j), (j, d - j)))
    return basis


def _element(monomials: tuple[tuple[int, int], ...], t: int = 0) -> GeomPoly:
    return GeomPoly({(t, u, v): 1 for u, v in monomials})


@dataclass(frozen=True)
class GaugeRecord:
    """which symmetric directions of degree d survive in the Chow ring of P^n"""
    degree: int
    retained: tuple[int, ...]
    deleted: tuple[int, ...]
    # deleted index -> coefficients over the retained indices, equal in the Chow ring
    relations: Mapping[int, Mapping[int, Fraction]] = field(default_factory=dict)

    @property
    def unimodular(self) -> bool:
        return all(value.denominator == 1 for row in self.relations.values() for value in row.values())


@lru_cache(maxsize=None)
def gauge(d: int, n: int) -> GaugeRecord:
    """keeps basis elements in order while their normal forms stay linearly independent"""
    elements = symmetric_monomials(d)
    if d < n:
        return GaugeRecord(degree=d, retained=tuple(range(len(elements))), deleted=())
    columns = chow.chow_basis(n)
    vectors = []
    for monomials in elements:
        reduced = chow.reduce(_element(monomials), n)
        vectors.append([reduced.terms.get((0, u, v), CoefPoly()).constant_value() for u, v in columns])
    retained: list[int] = []
    deleted: list[int] = []
    for j, vector in enumerate(vectors):
        candidate = Matrix([vectors[i] for i in retained] + [vector])
        if candidate.rank() > len(retained):
            retained.append(j)
        else:
            deleted.append(j)
    relations = {}
    if retained:
        basis = Matrix([vectors[i] for i in retained]).T
        for j in deleted:
            solution, _ = basis.gauss_jordan_solve(Matrix(vectors[j]))
            relations[j] = {i: Fraction(int(value.p), int(value.q)) for i, value in zip(retained, solution)}
    else:
        relations = {j: {} for j in deleted}
    return GaugeRecord(degree=d, retained=tuple(retained), deleted=tuple(deleted), relations=relations)


def symmetric_basis(d: int, n: int) -> list[GeomPoly]:
    """the gauge-fixed symmetric basis of degree d: the full basis for d < n"""
    if d < 1:
        raise ValueError(f'degree must be positive, got {d}')
    elements = symmetric_monomials(d)
    return [_element(elements[j]) for j in gauge(d, n).retained]


def gauge_reduce(d: int, n: int, coordinates: Sequence[int]) -> dict[int, Fraction]:
    """maps coordinates over the full symmetric basis onto the retained basis, same Chow class"""
    record = gauge(d, n)
    reduced = {i: Fraction(coordinates[i]) for i in record.retained}
    for j in record.deleted:
        for i, coefficient in record.relations[j].items():
            reduced[i] += coefficient * coordinates[j]
    return reduced


@dataclass
class FactorAnsatz:
    """the monic factor T^r + sum_d N_d(U,V) T^(r-d) with U<->V symmetric N_d"""
    index: int
    rank: int
    twist: int
    polynomial: GeomPoly
    # degree -> [(basis index, unknown)]
    unknowns: dict[int, list[tuple[int, Unknown]]]
    gauge: dict[int, GaugeRecord]

    def all_unknowns(self) -> list[Unknown]:
        return [unknown for d in sorted(self.unknowns) for _, unknown in self.unknowns[d]]


def factor_prefix(index: int) -> str:
    return ascii_lowercase[index - 1] if index <= len(ascii_lowercase) else f's{index}_'


def unknown_name(prefix: str, d: int, j: int) -> str:
    return f'{prefix}{d}' if d == 1 else f'{prefix}{d}_{j}'


def build_factor(namespace: Namespace, index: int, rank: int, twist: int, n: int) -> FactorAnsatz:
    prefix = factor_prefix(index)
    terms: dict = {(rank, 0, 0): CoefPoly.constant(1)}
    unknowns: dict[int, list[tuple[int, Unknown]]] = {}
    records = {}
    for d in range(1, rank + 1):
        record = gauge(d, n)
        if d >= n:
            records[d] = record
        elements = symmetric_monomials(d)
        unknowns[d] = []
        for j in record.retained:
            unknown = namespace.create(unknown_name(prefix, d, j))
            unknowns[d].append((j, unknown))
            for u, v in elements[j]:
                terms[(rank - d, u, v)] = CoefPoly.unknown(unknown)
    return FactorAnsatz(index=index, rank=rank, twist=twist, polynomial=GeomPoly(terms), unknowns=unknowns,
                        gauge=records)


@dataclass
class ConstraintSystem:
    splitting_type: SplittingType
    n: int
    namespace: Namespace
    factors: list[FactorAnsatz]
    product: GeomPoly
    equations: list[CoefPoly]
    equation_monomials: list[tuple[int, int, int]]
    display: list[Unknown] | None = None

    @property
    def unknowns(self) -> list[Unknown]:
        return self.namespace.unknowns

    def assignment(self, values: Sequence[int] | Mapping[Unknown, int]) -> dict[Unknown, int]:
        """a full tuple in canonical unknown order, or a mapping that must cover every unknown"""
        if isinstance(values, Mapping):
            for unknown in self.unknowns:
                if unknown not in values:
                    raise MissingAssignment(unknown.name)
            return dict(values)
        values = list(values)
        if len(values) != len(self.unknowns):
            if len(values) < len(self.unknowns):
                raise MissingAssignment(self.unknowns[len(values)].name)
            raise ValueError(f'{len(values)} values given for {len(self.unknowns)} unknowns')
        return dict(zip(self.unknowns, values))

    def project(self, values: Sequence[int]) -> tuple[int, ...] | None:
        """the coordinates reported for this type, in their reported order"""
        if self.display is None:
            return None
        return tuple(values[unknown.id] for unknown in self.display)

    def to_json(self) -> dict:
        return {
            'type': str(self.splitting_type),
            'n': self.n,
            'unknowns': [unknown.name for unknown in self.unknowns],
            'equations': [equation.render(self.namespace) for equation in self.equations],
            'display': [unknown.name for unknown in self.display] if self.display is not None else None,
        }


def _equation_key(item):
    (t, u, v), _ = item
    return -t, u, v


def build_system(st: SplittingType, n: int = 4) -> ConstraintSystem:
    """the V-carrying coefficients of the reduced product of the shifted factors S_i(T + u_i U)"""
    if not st.is_consecutive():
        raise ReducibleType(f'{st} has a twist gap of {max(st.gaps())}: reducible by extension')
    st = st.normalized()
    namespace = Namespace()
    factors = [build_factor(namespace, i + 1, r, u, n) for i, (r, u) in enumerate(zip(st.ranks, st.twists))]
    reduced = chow.reduce(product(shift_T(factor.polynomial, factor.twist) for factor in factors), n)
    equations = []
    monomials = []
    seen = set()
    for exponent, coefficient in sorted(reduced.terms.items(), key=_equation_key):
        if exponent[2] == 0:
            continue
        key = coefficient.primitive()
        if key in seen:
            continue
        seen.add(key)
        equations.append(coefficient)
        monomials.append(exponent)
    system = ConstraintSystem(splitting_type=st, n=n, namespace=namespace, factors=factors, product=reduced,
                              equations=equations, equation_monomials=monomials)
    system.display = display_coordinates(system)
    return system


@lru_cache(maxsize=None)
def cached_system(st: SplittingType, n: int = 4) -> ConstraintSystem:
    return build_system(st, n)


def check_solution(system: ConstraintSystem, values: Sequence[int] | Mapping[Unknown, int]) -> bool:
    assignment = {unknown.id: value for unknown, value in system.assignment(values).items()}
    return all(equation.evaluate(assignment, system.namespace) == 0 for equation in system.equations)


def evaluated_product(system: ConstraintSystem, values: Sequence[int] | Mapping[Unknown, int]) -> GeomPoly:
    """normal form of the factor product at a concrete tuple"""
    return eval_unknowns(system.product, system.assignment(values), namespace=system.namespace)


def evaluated_factors(system: ConstraintSystem, values: Sequence[int] | Mapping[Unknown, int]) -> list[GeomPoly]:
    assignment = system.assignment(values)
    return [eval_unknowns(factor.polynomial, assignment, namespace=system.namespace) for factor in system.factors]


def residual_chern(st: SplittingType, n: int, values: Sequence[int] | Mapping[Unknown, int]) -> ChernVector:
    """the Chern classes c_i(E) read off the coefficients of T^(r-i) U^i"""
    system = cached_system(st.normalized(), n)
    reduced = evaluated_product(system, values)
    if not reduced.is_v_free():
        raise InvalidSolution(f'the factor product of {st} is not free of V at {tuple(values)}')
    r = st.rank
    c = tuple(reduced.terms[(r - i, i, 0)].constant_value() if (r - i, i, 0) in reduced.terms else 0
              for i in range(min(r, n) + 1))
    return ChernVector(n=n, r=r, c=c)


@lru_cache(maxsize=None)
def _display_registry() -> dict[str, list[str]]:
    text = resources.files('uniform_bundles').joinpath('data/display_coordinates.json').read_text(encoding='utf-8')
    return json.loads(text)['types']


def registered_types(n: int = 4) -> list[SplittingType]:
    if n != 4:
        return []
    return [SplittingType.parse(key) for key in _display_registry()]


def display_coordinates(system: ConstraintSystem) -> list[Unknown] | None:
    if system.n != 4:
        return None
    names = _display_registry().get(str(system.splitting_type))
    if names is None:
        return None
    return [system.namespace[name] for name in names]
