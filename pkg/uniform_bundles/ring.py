from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator, Mapping

from sympy import Poly, symbols
from sympy.parsing.sympy_parser import (implicit_multiplication_application, parse_expr,
                                        standard_transformations)

from .errors import MissingAssignment

# a monomial in the unknowns: sorted ((unknown id, exponent), ...) pairs, () is the constant monomial
Monomial = tuple[tuple[int, int], ...]
# exponents of T, U, V
GeomExponent = tuple[int, int, int]


@dataclass(frozen=True, order=True)
class Unknown:
    name: str
    id: int


@dataclass
class Namespace:
    """dense id allocation for the unknowns of one constraint system"""
    unknowns: list[Unknown] = field(default_factory=list)

    def __post_init__(self):
        self._by_name = {unknown.name: unknown for unknown in self.unknowns}

    def create(self, name: str) -> Unknown:
        if name in self._by_name:
            raise ValueError(f'unknown {name!r} already exists')
        unknown = Unknown(name=name, id=len(self.unknowns))
        self.unknowns.append(unknown)
        self._by_name[name] = unknown
        return unknown

    def __getitem__(self, name: str) -> Unknown:
        return self._by_name[name]

    def __len__(self):
        return len(self.unknowns)

    def __iter__(self) -> Iterator[Unknown]:
        return iter(self.unknowns)

    def name_of(self, unknown_id: int) -> str:
        return self.unknowns[unknown_id].name if unknown_id < len(self.unknowns) else f'x{unknown_id}'


def _monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exponents = dict(a)
    for unknown_id, exponent in b:
        exponents[unknown_id] = exponents.get(unknown_id, 0) + exponent
    return tuple(sorted(exponents.items()))


def _monomial_key(monomial: Monomial):
    return -sum(e for _, e in monomial), monomial


class CoefPoly:
    """Integer polynomial in the unknowns. Zero coefficients are never stored."""
    __slots__ = ('terms',)

    def __init__(self, terms: Mapping[Monomial, int] | None = None):
        self.terms: dict[Monomial, int] = {m: c for m, c in (terms or {}).items() if c}

    @classmethod
    def _raw(cls, terms: dict[Monomial, int]) -> CoefPoly:
        poly = cls.__new__(cls)
        poly.terms = terms
        return poly

    @classmethod
    def constant(cls, value: int) -> CoefPoly:
        return cls._raw({(): value} if value else {})

    @classmethod
    def unknown(cls, unknown: Unknown | int, exponent: int = 1) -> CoefPoly:
        unknown_id = unknown.id if isinstance(unknown, Unknown) else unknown
        return cls._raw({((unknown_id, exponent),): 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = CoefPoly.constant(other)
        return isinstance(other, CoefPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(self.sorted_terms())

    def __repr__(self):
        return f'CoefPoly({self.render()!r})'

    def sorted_terms(self) -> tuple[tuple[Monomial, int], ...]:
        return tuple(sorted(self.terms.items(), key=lambda item: _monomial_key(item[0])))

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> int:
        return self.terms.get((), 0)

    def __neg__(self) -> CoefPoly:
        return CoefPoly._raw({m: -c for m, c in self.terms.items()})

    def __add__(self, other: CoefPoly | int) -> CoefPoly:
        if isinstance(other, int):
            other = CoefPoly.constant(other)
        terms = dict(self.terms)
        for monomial, coefficient in other.terms.items():
            value = terms.get(monomial, 0) + coefficient
            if value:
                terms[monomial] = value
            else:
                terms.pop(monomial, None)
        return CoefPoly._raw(terms)

    __radd__ = __add__

    def __sub__(self, other: CoefPoly | int) -> CoefPoly:
        return self + (-other)

    def __rsub__(self, other: int) -> CoefPoly:
        return (-self) + other

    def __mul__(self, other: CoefPoly | int) -> CoefPoly:
        if isinstance(other, int):
            if not other:
                return CoefPoly()
            return CoefPoly._raw({m: c * other for m, c in self.terms.items()})
        terms: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                monomial = _monomial_mul(m1, m2)
                value = terms.get(monomial, 0) + c1 * c2
                if value:
                    terms[monomial] = value
                else:
                    del terms[monomial]
        return CoefPoly._raw(terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> CoefPoly:
        result = CoefPoly.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def unknowns(self) -> set[int]:
        return {unknown_id for monomial in self.terms for unknown_id, _ in monomial}

    def degree(self, unknown_id: int) -> int:
        return max((e for monomial in self.terms for v, e in monomial if v == unknown_id), default=0)

    def total_degree(self) -> int:
        return max((sum(e for _, e in monomial) for monomial in self.terms), default=0)

    def max_coefficient_bits(self) -> int:
        return max((abs(c).bit_length() for c in self.terms.values()), default=0)

    def content(self) -> int:
        result = 0
        for coefficient in self.terms.values():
            result = gcd(result, coefficient)
        return result

    def primitive(self) -> CoefPoly:
        """divides by the content and fixes the sign of the leading term; only valid for equations = 0"""
        if not self.terms:
            return self
        content = self.content()
        leading = self.sorted_terms()[0][1]
        if leading < 0:
            content = -content
        if content == 1:
            return self
        return CoefPoly._raw({m: c // content for m, c in self.terms.items()})

    def coefficients_in(self, unknown_id: int) -> dict[int, CoefPoly]:
        """groups the terms by the exponent of one unknown"""
        groups: dict[int, dict[Monomial, int]] = {}
        for monomial, coefficient in self.terms.items():
            exponent = 0
            rest = monomial
            for position, (v, e) in enumerate(monomial):
                if v == unknown_id:
                    exponent = e
                    rest = monomial[:position] + monomial[position + 1:]
                    break
            groups.setdefault(exponent, {})[rest] = coefficient
        return {exponent: CoefPoly._raw(terms) for exponent, terms in groups.items()}

    def subs(self, values: Mapping[int, int]) -> CoefPoly:
        """partial evaluation at integer values"""
        terms: dict[Monomial, int] = {}
        for monomial, coefficient in self.terms.items():
            rest = []
            for v, e in monomial:
                if v in values:
                    coefficient *= values[v] ** e
                    if not coefficient:
                        break
                else:
                    rest.append((v, e))
            if not coefficient:
                continue
            key = tuple(rest)
            value = terms.get(key, 0) + coefficient
            if value:
                terms[key] = value
            else:
                del terms[key]
        return CoefPoly._raw(terms)

    def evaluate(self, values: Mapping[int, int], namespace: Namespace | None = None) -> int:
        total = 0
        for monomial, coefficient in self.terms.items():
            for v, e in monomial:
                if v not in values:
                    raise MissingAssignment(namespace.name_of(v) if namespace else f'x{v}')
                coefficient *= values[v] ** e
            total += coefficient
        return total

    def substitute(self, unknown_id: int, replacement: CoefPoly) -> CoefPoly:
        groups = self.coefficients_in(unknown_id)
        if set(groups) == {0}:
            return self
        result = CoefPoly()
        for exponent, coefficient in groups.items():
            result = result + coefficient * replacement ** exponent
        return result

    def render(self, namespace: Namespace | None = None) -> str:
        if not self.terms:
            return '0'
        parts = []
        for monomial, coefficient in self.sorted_terms():
            factors = []
            for v, e in monomial:
                name = namespace.name_of(v) if namespace else f'x{v}'
                factors.append(name if e == 1 else f'{name}^{e}')
            body = '*'.join(factors)
            if not body:
                text = str(abs(coefficient))
            elif abs(coefficient) == 1:
                text = body
            else:
                text = f'{abs(coefficient)}*{body}'
            parts.append(('-' if coefficient < 0 else '+') + text)
        rendered = ''.join(parts)
        return rendered[1:] if rendered.startswith('+') else rendered


def _geom_key(exponent: GeomExponent):
    t, u, v = exponent
    return -t, -(u + v), v


class GeomPoly:
    """Polynomial in T, U, V with CoefPoly coefficients."""
    __slots__ = ('terms',)

    def __init__(self, terms: Mapping[GeomExponent, CoefPoly | int] | None = None):
        cleaned = {}
        for exponent, coefficient in (terms or {}).items():
            if isinstance(coefficient, int):
                coefficient = CoefPoly.constant(coefficient)
            if coefficient:
                cleaned[exponent] = coefficient
        self.terms: dict[GeomExponent, CoefPoly] = cleaned

    @classmethod
    def _raw(cls, terms: dict[GeomExponent, CoefPoly]) -> GeomPoly:
        poly = cls.__new__(cls)
        poly.terms = terms
        return poly

    @classmethod
    def monomial(cls, t: int = 0, u: int = 0, v: int = 0, coefficient: CoefPoly | int = 1) -> GeomPoly:
        return cls({(t, u, v): coefficient})

    @classmethod
    def parse(cls, text: str) -> GeomPoly:
        """reads an integer polynomial in T, U, V such as "T^2+(U-V)T-UV" """
        t, u, v = symbols('T U V')
        try:
            expr = parse_expr(text.replace('^', '**'), local_dict={'T': t, 'U': u, 'V': v},
                              transformations=standard_transformations + (implicit_multiplication_application,))
            poly = Poly(expr, t, u, v)
        except Exception as error:
            raise ValueError(f'cannot read polynomial {text!r}: {error}') from error
        if not poly.domain.is_ZZ:
            raise ValueError(f'{text!r} is not an integer polynomial in T, U, V')
        return cls({monomial: int(coefficient) for monomial, coefficient in poly.terms() if coefficient})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, GeomPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(sorted((e, c.sorted_terms()) for e, c in self.terms.items())))

    def __repr__(self):
        return f'GeomPoly({self.render()!r})'

    def __neg__(self) -> GeomPoly:
        return GeomPoly._raw({e: -c for e, c in self.terms.items()})

    def __add__(self, other: GeomPoly) -> GeomPoly:
        return add(self, other)

    def __sub__(self, other: GeomPoly) -> GeomPoly:
        return add(self, -other)

    def __mul__(self, other: GeomPoly | CoefPoly | int) -> GeomPoly:
        if isinstance(other, (int, CoefPoly)):
            return GeomPoly._raw({e: c * other for e, c in self.terms.items() if c * other})
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> GeomPoly:
        result = GeomPoly.monomial()
        for _ in range(exponent):
            result = mul(result, self)
        return result

    def is_v_free(self) -> bool:
        return all(v == 0 for _, _, v in self.terms)

    def unknowns(self) -> set[int]:
        return set().union(*(c.unknowns() for c in self.terms.values()))

    def swap_uv(self) -> GeomPoly:
        return GeomPoly._raw({(t, v, u): c for (t, u, v), c in self.terms.items()})

    def sorted_terms(self) -> list[tuple[GeomExponent, CoefPoly]]:
        return sorted(self.terms.items(), key=lambda item: _geom_key(item[0]))

    def render(self, namespace: Namespace | None = None) -> str:
        """text in the notation "T^2+(U-V)T-UV": grouped by descending powers of T"""
        if not self.terms:
            return '0'
        by_t: dict[int, list[tuple[int, int, CoefPoly]]] = {}
        for (t, u, v), coefficient in self.sorted_terms():
            by_t.setdefault(t, []).append((u, v, coefficient))
        parts = []
        for t, group in by_t.items():
            t_text = '' if t == 0 else ('T' if t == 1 else f'T^{t}')
            inner = _render_uv(group, namespace)
            if len(group) > 1 and t_text:
                parts.append('+' + f'({inner.lstrip("+")})' + t_text)
            elif not t_text:
                parts.append(inner if inner.startswith('-') else '+' + inner)
            elif inner in ('1', '-1'):
                parts.append(('-' if inner == '-1' else '+') + t_text)
            else:
                parts.append((inner if inner.startswith('-') else '+' + inner) + t_text)
        rendered = ''.join(parts)
        return rendered[1:] if rendered.startswith('+') else rendered


def _power(letter: str, exponent: int) -> str:
    return '' if exponent == 0 else (letter if exponent == 1 else f'{letter}^{exponent}')


def _render_uv(group: list[tuple[int, int, CoefPoly]], namespace: Namespace | None) -> str:
    parts = []
    for u, v, coefficient in group:
        monomial = _power('U', u) + _power('V', v)
        if coefficient.is_constant():
            value = coefficient.constant_value()
            sign = '-' if value < 0 else '+'
            digits = '' if abs(value) == 1 and monomial else str(abs(value))
            parts.append(f'{sign}{digits}{monomial}')
        else:
            text = coefficient.render(namespace)
            if len(coefficient.terms) > 1:
                text = f'({text})'
            parts.append('+' + (f'{text}*{monomial}' if monomial else text))
    rendered = ''.join(parts)
    return rendered[1:] if rendered.startswith('+') else rendered


T = GeomPoly.monomial(t=1)
U = GeomPoly.monomial(u=1)
V = GeomPoly.monomial(v=1)
ONE = GeomPoly.monomial()
ZERO = GeomPoly()


def add(a: GeomPoly, b: GeomPoly) -> GeomPoly:
    terms = dict(a.terms)
    for exponent, coefficient in b.terms.items():
        if exponent in terms:
            value = terms[exponent] + coefficient
            if value:
                terms[exponent] = value
            else:
                del terms[exponent]
        else:
            terms[exponent] = coefficient
    return GeomPoly._raw(terms)


def mul(a: GeomPoly, b: GeomPoly) -> GeomPoly:
    terms: dict[GeomExponent, CoefPoly] = {}
    for (t1, u1, v1), c1 in a.terms.items():
        for (t2, u2, v2), c2 in b.terms.items():
            exponent = (t1 + t2, u1 + u2, v1 + v2)
            product = c1 * c2
            if exponent in terms:
                product = terms[exponent] + product
            if product:
                terms[exponent] = product
            else:
                terms.pop(exponent, None)
    return GeomPoly._raw(terms)


def shift_T(p: GeomPoly, c: int) -> GeomPoly:
    """substitutes T <- T + c*U"""
    if c == 0:
        return p
    result = ZERO
    for (t, u, v), coefficient in p.terms.items():
        binomial = 1
        expanded = {}
        for j in range(t + 1):
            # C(t, j) * T^(t-j) * (cU)^j
            expanded[(t - j, u + j, v)] = coefficient * (binomial * c ** j)
            binomial = binomial * (t - j) // (j + 1)
        result = add(result, GeomPoly._raw(expanded))
    return result


def eval_unknowns(p: GeomPoly, assignment: Mapping[Unknown, int], partial: bool = False,
                  namespace: Namespace | None = None) -> GeomPoly:
    values = {unknown.id: value for unknown, value in assignment.items()}
    if not partial:
        missing = p.unknowns() - values.keys()
        if missing:
            unknown_id = min(missing)
            raise MissingAssignment(namespace.name_of(unknown_id) if namespace else f'x{unknown_id}')
    return GeomPoly({e: c.subs(values) for e, c in p.terms.items()})


def coefficient_of(p: GeomPoly, t: int, u: int, v: int) -> CoefPoly:
    return p.terms.get((t, u, v), CoefPoly())


def product(factors: Iterable[GeomPoly]) -> GeomPoly:
    result = ONE
    for factor in factors:
        result = mul(result, factor)
    return result
