from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from sympy import Poly, groebner, symbols

from .argparse_enums import Completeness, Strategy
from .constraints import ConstraintSystem, cached_system, check_solution, factor_prefix, unknown_name
from .errors import EliminationDegreeBlowup, InvalidSolution, SolutionCapExceeded
from .print_prefixed import quiet
from .ring import CoefPoly
from .splitting_type import SplittingType


@dataclass(frozen=True)
class SolverConfig:
    bound: int = 200
    strategy: Strategy = Strategy.hybrid
    max_solutions: int = 10000
    degree_cap: int = 32
    coefficient_bits_cap: int = 4096

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError(f'bound must be at least 1, got {self.bound}')
        if self.max_solutions < 1:
            raise ValueError(f'max_solutions must be at least 1, got {self.max_solutions}')


@dataclass
class SolverStats:
    nodes: int = 0
    pivots: int = 0
    splits: int = 0
    eliminations: int = 0
    fallbacks: int = 0
    seconds: float = 0.0

    def to_json(self) -> dict:
        return {'nodes': self.nodes, 'pivots': self.pivots, 'splits': self.splits,
                'eliminations': self.eliminations, 'fallbacks': self.fallbacks, 'seconds': round(self.seconds, 3)}


@dataclass
class SolutionSet:
    unknowns: list[str]
    tuples: list[tuple[int, ...]]
    completeness: Completeness
    bound: int
    stats: SolverStats = field(default_factory=SolverStats)

    def describe_completeness(self) -> str:
        if self.completeness is Completeness.eliminationComplete:
            return 'complete over all integers'
        return f'complete within [-{self.bound},{self.bound}]'

    def to_json(self) -> dict:
        return {'unknowns': self.unknowns, 'solutions': [list(t) for t in self.tuples],
                'completeness': self.completeness.name}


class _Node:
    """one state of the search; definitions are (x, c, rest) with c*x + rest = 0"""
    __slots__ = ('equations', 'values', 'definitions', 'conditions', 'reduced')

    def __init__(self, equations: list[CoefPoly], values: dict[int, int] | None = None,
                 definitions: list[tuple[int, CoefPoly, CoefPoly]] | None = None,
                 conditions: list[CoefPoly] | None = None, reduced: bool = False):
        self.equations = equations
        self.values = values or {}
        self.definitions = definitions or []
        self.conditions = conditions or []
        # equations already form a reduced basis of their ideal
        self.reduced = reduced

    def copy(self) -> _Node:
        return _Node(list(self.equations), dict(self.values), list(self.definitions), list(self.conditions),
                     self.reduced)

    def assign(self, x: int, value: int):
        binding = {x: value}
        self.values[x] = value
        self.equations = [e.subs(binding) for e in self.equations]
        self.conditions = [c.subs(binding) for c in self.conditions]
        self.reduced = False

    def assigned(self, x: int, value: int) -> _Node:
        child = self.copy()
        child.assign(x, value)
        return child

    def eliminate(self, x: int, c: CoefPoly, rest: CoefPoly):
        """replaces x by -rest/c everywhere, clearing denominators with powers of c"""
        self.definitions.append((x, c, rest))
        self.equations = [_pseudo_substitute(e, x, c, rest) for e in self.equations]
        self.conditions = [_pseudo_substitute(e, x, c, rest) for e in self.conditions]
        self.reduced = False


def _pseudo_substitute(poly: CoefPoly, x: int, c: CoefPoly, rest: CoefPoly) -> CoefPoly:
    groups = poly.coefficients_in(x)
    top = max(groups)
    if top == 0:
        return poly
    result = CoefPoly()
    negated = -rest
    for exponent, coefficient in groups.items():
        result = result + coefficient * negated ** exponent * c ** (top - exponent)
    return result


def _linear_roots(poly: CoefPoly, x: int) -> list[int] | None:
    groups = poly.coefficients_in(x)
    if max(groups) != 1:
        return None
    a = groups[1].constant_value()
    b = groups.get(0, CoefPoly()).constant_value()
    return [-b // a] if b % a == 0 else []


def _dense(poly: CoefPoly, x: int) -> list[int]:
    """coefficients from the constant term upwards"""
    groups = poly.coefficients_in(x)
    coefficients = [0] * (max(groups) + 1)
    for exponent, coefficient in groups.items():
        coefficients[exponent] = coefficient.constant_value()
    return coefficients


def _horner(coefficients: list[int], value: int) -> int:
    result = 0
    for coefficient in reversed(coefficients):
        result = result * value + coefficient
    return result


def bounded_integer_roots(poly: CoefPoly, x: int, bound: int) -> list[int]:
    """integer roots in [-bound, bound]: divisors of the lowest coefficient, screened by the Cauchy bound"""
    linear = _linear_roots(poly, x)
    if linear is not None:
        return [r for r in linear if abs(r) <= bound]
    coefficients = _dense(poly, x)
    roots = []
    low = next(i for i, c in enumerate(coefficients) if c)
    if low > 0:
        roots.append(0)
    coefficients = coefficients[low:]
    constant = abs(coefficients[0])
    leading = abs(coefficients[-1])
    cauchy = 1 + max(abs(c) for c in coefficients[:-1]) // leading if len(coefficients) > 1 else 0
    for candidate in range(1, min(bound, cauchy, constant) + 1):
        if constant % candidate:
            continue
        for value in (candidate, -candidate):
            if _horner(coefficients, value) == 0:
                roots.append(value)
    return sorted(roots)


_SYMBOLS: dict[int, object] = {}


def _symbol(unknown_id: int):
    if unknown_id not in _SYMBOLS:
        _SYMBOLS[unknown_id] = symbols(f'x{unknown_id}')
    return _SYMBOLS[unknown_id]


def _to_sympy(poly: CoefPoly, gens: Sequence[int]) -> Poly:
    position = {g: i for i, g in enumerate(gens)}
    terms = {}
    for monomial, coefficient in poly.terms.items():
        exponent = [0] * len(gens)
        for v, e in monomial:
            exponent[position[v]] = e
        terms[tuple(exponent)] = coefficient
    return Poly.from_dict(terms, *[_symbol(g) for g in gens])


def _from_sympy(poly, gens: Sequence[int], skip: int = 0) -> CoefPoly:
    """skip leading generators of poly that are not unknowns; they must not occur"""
    if not isinstance(poly, Poly):
        return CoefPoly.constant(int(poly))
    terms = {}
    for exponent, coefficient in poly.terms():
        if coefficient:
            terms[tuple(sorted((g, e) for g, e in zip(gens, exponent[skip:]) if e))] = int(coefficient)
    return CoefPoly(terms)


def exact_integer_roots(poly: CoefPoly, x: int) -> list[int]:
    """all integer roots, read off the linear factors over the integers"""
    linear = _linear_roots(poly, x)
    if linear is not None:
        return linear
    _, factors = _to_sympy(poly, [x]).factor_list()
    roots = []
    for factor, _ in factors:
        if factor.degree() == 1:
            a, b = (int(c) for c in factor.all_coeffs())
            if b % a == 0:
                roots.append(-b // a)
    return sorted(set(roots))


@dataclass
class Elimination:
    basis: list[CoefPoly]
    zero_dimensional: bool
    # largest total degree and coefficient size of the degree-ordered basis
    degree: int
    coefficient_bits: int

    @property
    def inconsistent(self) -> bool:
        return any(poly.is_constant() for poly in self.basis)


def groebner_basis(equations: Sequence[CoefPoly], gens: Sequence[int],
                   conditions: Sequence[CoefPoly] = ()) -> Elimination:
    """Reduced basis of the ideal of the equations, saturated by the conditions, which must stay nonzero.
    For finitely many complex solutions the basis is converted to lexicographic order and is triangular:
    the last of gens is constrained by a univariate polynomial. Otherwise the equations come back as a
    degree-ordered basis, or unchanged when there are conditions."""
    # one auxiliary t with t*c - 1 = 0 per condition c, ordered before the unknowns
    auxiliary = [symbols(f't{i}') for i in range(len(conditions))]
    unknowns = [_symbol(g) for g in gens]
    generators = [_to_sympy(e, gens).as_expr() for e in equations]
    generators += [t * _to_sympy(c, gens).as_expr() - 1 for t, c in zip(auxiliary, conditions)]
    basis = groebner(generators, *auxiliary, *unknowns, order='grevlex', method='f5b')
    degree = max(poly.total_degree() for poly in basis.polys)
    bits = max(abs(int(c)).bit_length() for poly in basis.polys for c in poly.coeffs())
    if any(poly.is_ground for poly in basis.polys):
        return Elimination([CoefPoly.constant(1)], True, degree, bits)
    skip = len(conditions)
    if basis.is_zero_dimensional:
        triangular = [poly for poly in basis.fglm('lex').polys if not any(any(m[:skip]) for m in poly.monoms())]
        return Elimination([_from_sympy(poly, gens, skip) for poly in triangular], True, degree, bits)
    if conditions:
        return Elimination(list(equations), False, degree, bits)
    return Elimination([_from_sympy(poly, gens) for poly in basis.polys], False, degree, bits)


_FAILED = object()
_PROGRESS = object()


class SearchContext:
    """Depth-first search: univariate equations are solved exactly, everything else is branched over
    the box [-bound, bound]. Subclasses hook into the loop through _pivot, _split and _eliminate; an
    eliminated unknown is recovered after the search from its definition with an exact division."""

    strategy = Strategy.dfs

    def __init__(self, system: ConstraintSystem, config: SolverConfig, log: Callable[[str], None] = quiet):
        self.system = system
        self.config = config
        self.log = log
        self.stats = SolverStats()
        self.solutions: set[tuple[int, ...]] = set()
        self.branched = False
        self.downgraded = False
        self.all_ids = [unknown.id for unknown in system.unknowns]

    @property
    def certifies(self) -> bool:
        return self.strategy is Strategy.elim and not self.branched and not self.downgraded

    def run(self) -> SolutionSet:
        start = time.perf_counter()
        self._search(_Node(list(self.system.equations)))
        self.stats.seconds = time.perf_counter() - start
        completeness = Completeness.eliminationComplete if self.certifies else Completeness.boxBounded
        tuples = sorted(self.solutions)
        if completeness is Completeness.boxBounded:
            tuples = [t for t in tuples if all(abs(value) <= self.config.bound for value in t)]
        verified = [t for t in tuples if check_solution(self.system, t)]
        if len(verified) != len(tuples):
            self.log(f'warning: dropped {len(tuples) - len(verified)} tuples failing the plug-back check')
        self.log(f'{self.system.splitting_type}: {len(verified)} solutions, {self.stats.nodes} nodes, '
                 f'{self.stats.seconds:.2f}s ({completeness.name})')
        return SolutionSet(unknowns=[u.name for u in self.system.unknowns], tuples=verified,
                           completeness=completeness, bound=self.config.bound, stats=self.stats)

    def _search(self, node: _Node):
        self.stats.nodes += 1
        while True:
            if not self._normalize(node):
                return
            if not node.equations:
                break
            step = self._univariate(node)
            if step is _FAILED:
                return
            if step is _PROGRESS:
                continue
            if step is not None:
                for x, value in step:
                    self._search(node.assigned(x, value))
                return
            if self._pivot(node) or self._split(node) or self._eliminate(node):
                continue
            break
        free = self._free(node)
        if not free:
            self._emit(node)
            return
        self._branch(node, self._choose(node, free))

    @staticmethod
    def _normalize(node: _Node) -> bool:
        equations = []
        seen = set()
        for equation in node.equations:
            if not equation:
                continue
            if equation.is_constant():
                return False
            primitive = equation.primitive()
            if primitive not in seen:
                seen.add(primitive)
                equations.append(primitive)
        conditions = []
        for condition in node.conditions:
            if condition.is_constant():
                if not condition:
                    return False
            else:
                conditions.append(condition)
        node.conditions = conditions
        node.equations = sorted(equations, key=lambda e: (len(e.unknowns()), e.total_degree(), len(e.terms),
                                                          e.sorted_terms()))
        return True

    def _roots(self, poly: CoefPoly, x: int) -> list[int]:
        return bounded_integer_roots(poly, x, self.config.bound)

    def _univariate(self, node: _Node):
        by_unknown: dict[int, list[CoefPoly]] = {}
        for equation in node.equations:
            unknowns = equation.unknowns()
            if len(unknowns) == 1:
                by_unknown.setdefault(next(iter(unknowns)), []).append(equation)
        if not by_unknown:
            return None
        x, equations = min(by_unknown.items(), key=lambda item: (min(e.degree(item[0]) for e in item[1]), item[0]))
        equations.sort(key=lambda e: e.degree(x))
        roots = self._roots(equations[0], x)
        roots = [r for r in roots if all(e.evaluate({x: r}) == 0 for e in equations[1:])]
        if not roots:
            return _FAILED
        if len(roots) == 1:
            node.assign(x, roots[0])
            return _PROGRESS
        return [(x, r) for r in roots]

    def _pivot(self, node: _Node) -> bool:
        return False

    def _eliminate(self, node: _Node) -> bool:
        return False

    def _split(self, node: _Node) -> bool:
        return False

    def _free(self, node: _Node) -> list[int]:
        defined = {x for x, _, _ in node.definitions}
        return [i for i in self.all_ids if i not in node.values and i not in defined]

    @staticmethod
    def _choose(node: _Node, free: list[int]) -> int:
        """most constrained first: most occurrences, then lowest degree, then id"""
        occurrences: dict[int, int] = {}
        degrees: dict[int, int] = {}
        for equation in node.equations:
            for x in equation.unknowns():
                occurrences[x] = occurrences.get(x, 0) + 1
                degrees[x] = min(degrees.get(x, equation.degree(x)), equation.degree(x))
        return min(free, key=lambda x: (-occurrences.get(x, 0), degrees.get(x, 0), x))

    def _branch(self, node: _Node, x: int):
        if not self.branched:
            self.log(f'{self.system.splitting_type}: branching over [-{self.config.bound},{self.config.bound}] '
                     f'with {len(node.equations)} equations left')
        self.branched = True
        bound = self.config.bound
        for value in range(-bound, bound + 1):
            self._search(node.assigned(x, value))

    def _emit(self, node: _Node):
        values = dict(node.values)
        for x, c, rest in reversed(node.definitions):
            divisor = c.evaluate(values)
            remainder = rest.evaluate(values)
            if divisor == 0 or remainder % divisor:
                return
            values[x] = -remainder // divisor
        if any(condition.evaluate(values) == 0 for condition in node.conditions):
            return
        self.solutions.add(tuple(values[i] for i in self.all_ids))
        if len(self.solutions) > self.config.max_solutions:
            raise SolutionCapExceeded(self.config.max_solutions, sorted(self.solutions))


class HybridSearch(SearchContext):
    """Adds propagation and elimination. An unknown occurring linearly with a constant coefficient is
    eliminated, unit coefficients first. A linear unknown whose coefficient depends on one other unknown
    is split on the roots of that coefficient. When both stall the equations are replaced by a Groebner
    basis, triangular whenever the solutions are finite in number, so that back substitution proceeds
    through univariate equations. Unknowns of low degree in U and V are eliminated last. Only what is
    left after all of this is branched over the box."""

    strategy = Strategy.hybrid

    def __init__(self, system: ConstraintSystem, config: SolverConfig, log: Callable[[str], None] = quiet):
        super().__init__(system, config, log)
        self.weights = {unknown.id: d for factor in system.factors
                        for d, entries in factor.unknowns.items() for _, unknown in entries}

    def _pivot(self, node: _Node) -> bool:
        best = None
        for position, equation in enumerate(node.equations):
            for x in sorted(equation.unknowns()):
                groups = equation.coefficients_in(x)
                if max(groups) != 1 or not groups[1].is_constant():
                    continue
                c = groups[1].constant_value()
                key = (abs(c) != 1, len(equation.terms), abs(c), x)
                if best is None or key < best[0]:
                    best = key, position, x, groups
        if best is None:
            return False
        _, position, x, groups = best
        equation = node.equations.pop(position)
        self.stats.pivots += 1
        node.eliminate(x, groups[1], equation - groups[1] * CoefPoly.unknown(x))
        return True

    def _eliminate(self, node: _Node) -> bool:
        if node.reduced:
            return False
        node.reduced = True
        unknowns = set().union(*(e.unknowns() for e in node.equations + node.conditions))
        gens = sorted(unknowns, key=lambda x: (-self.weights[x], x))
        self.stats.eliminations += 1
        elimination = groebner_basis(node.equations, gens, node.conditions)
        try:
            self._admit(elimination)
        except EliminationDegreeBlowup as error:
            if not self.downgraded:
                self.log(f'{self.system.splitting_type}: {error}; the result is only complete within the box')
            self.downgraded = True
            self.stats.fallbacks += 1
        if elimination.inconsistent:
            node.equations = [CoefPoly.constant(1)]
            return True
        if {poly.primitive() for poly in elimination.basis} == set(node.equations):
            return False
        node.equations = elimination.basis
        return True

    def _admit(self, elimination: Elimination):
        pass

    def _split(self, node: _Node) -> bool:
        best = None
        for position, equation in enumerate(node.equations):
            for x in sorted(equation.unknowns()):
                groups = equation.coefficients_in(x)
                if max(groups) != 1 or len(groups[1].unknowns()) != 1:
                    continue
                c = groups[1]
                key = (c.total_degree(), len(c.terms), len(equation.terms), x)
                if best is None or key < best[0]:
                    best = key, position, x, c
        if best is None:
            return False
        _, position, x, c = best
        (y,) = c.unknowns()
        self.stats.splits += 1
        # c(y) = 0 is searched separately; the remaining branch carries c(y) != 0
        for root in self._roots(c, y):
            self._search(node.assigned(y, root))
        equation = node.equations.pop(position)
        node.conditions.append(c)
        node.eliminate(x, c, equation - c * CoefPoly.unknown(x))
        return True


class EliminationSearch(HybridSearch):
    """Roots are exact over all integers and every basis is checked against the degree and coefficient
    caps, so the result is complete whenever the search neither branches nor exceeds a cap."""

    strategy = Strategy.elim

    def _roots(self, poly: CoefPoly, x: int) -> list[int]:
        return exact_integer_roots(poly, x)

    def _admit(self, elimination: Elimination):
        if elimination.degree > self.config.degree_cap \
                or elimination.coefficient_bits > self.config.coefficient_bits_cap:
            raise EliminationDegreeBlowup(f'elimination basis of degree {elimination.degree} '
                                          f'with {elimination.coefficient_bits}-bit coefficients')


_CONTEXTS = {Strategy.dfs: SearchContext, Strategy.hybrid: HybridSearch, Strategy.elim: EliminationSearch}


def solve(system: ConstraintSystem, config: SolverConfig = SolverConfig(),
          log: Callable[[str], None] = quiet) -> SolutionSet:
    return _CONTEXTS[config.strategy](system, config, log).run()


def dualize_type(st: SplittingType) -> SplittingType:
    return SplittingType(ranks=tuple(reversed(st.ranks)),
                         twists=tuple(st.twists[0] - u for u in reversed(st.twists))).normalized()


def transform_solution(st: SplittingType, values: Sequence[int], n: int = 4) -> tuple[int, ...]:
    """the tuple of the dual bundle: factors reversed, degree-d coordinates multiplied by (-1)^d"""
    system = cached_system(st.normalized(), n)
    if not check_solution(system, values):
        raise InvalidSolution(f'{tuple(values)} does not solve the system of {st}')
    dual = cached_system(dualize_type(st), n)
    image = [0] * len(dual.unknowns)
    k = st.k
    for factor in system.factors:
        prefix = factor_prefix(k + 1 - factor.index)
        for d, entries in factor.unknowns.items():
            for j, unknown in entries:
                image[dual.namespace[unknown_name(prefix, d, j)].id] = (-1) ** d * values[unknown.id]
    return tuple(image)


def solve_dual(st: SplittingType, config: SolverConfig = SolverConfig(), n: int = 4,
               log: Callable[[str], None] = quiet) -> SolutionSet:
    """solves the dual type and maps the solutions back"""
    dual = dualize_type(st)
    solutions = solve(cached_system(dual, n), config, log)
    system = cached_system(st.normalized(), n)
    return SolutionSet(unknowns=[u.name for u in system.unknowns],
                       tuples=sorted(transform_solution(dual, t, n) for t in solutions.tuples),
                       completeness=solutions.completeness, bound=solutions.bound, stats=solutions.stats)
