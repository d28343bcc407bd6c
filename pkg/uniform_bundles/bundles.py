from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Union

from .errors import BundleSyntaxError, IntegralityViolation, RankError
from .ring import GeomPoly
from .splitting_type import SplittingType


@dataclass(frozen=True)
class Line:
    a: int


@dataclass(frozen=True)
class Tangent:
    pass


@dataclass(frozen=True)
class Cotangent:
    pass


@dataclass(frozen=True)
class Dual:
    e: 'BundleExpr'


@dataclass(frozen=True)
class Twist:
    e: 'BundleExpr'
    a: int


@dataclass(frozen=True)
class Sum:
    left: 'BundleExpr'
    right: 'BundleExpr'


@dataclass(frozen=True)
class Wedge:
    p: int
    e: 'BundleExpr'


@dataclass(frozen=True)
class Sym:
    p: int
    e: 'BundleExpr'


BundleExpr = Union[Line, Tangent, Cotangent, Dual, Twist, Sum, Wedge, Sym]


@dataclass(frozen=True)
class ChernVector:
    """c_0..c_min(r,n) in units of powers of the hyperplane class"""
    n: int
    r: int
    c: tuple[int, ...]

    def whitney(self, other: ChernVector) -> ChernVector:
        """total Chern class of the direct sum, truncated in degree n"""
        r = self.r + other.r
        length = min(r, self.n) + 1
        c = [0] * length
        for i, a in enumerate(self.c):
            for j, b in enumerate(other.c):
                if i + j < length:
                    c[i + j] += a * b
        return ChernVector(n=self.n, r=r, c=tuple(c))

    def to_json(self) -> dict:
        return {'rank': self.r, 'chern': list(self.c)}


def direct_sum(*summands: BundleExpr) -> BundleExpr:
    result = summands[0]
    for summand in summands[1:]:
        result = Sum(result, summand)
    return result


def summands(e: BundleExpr) -> list[BundleExpr]:
    if isinstance(e, Sum):
        return summands(e.left) + summands(e.right)
    return [e]


# parser

_TOKEN = re.compile(r'\s*(?:(?P<int>[+-]?\d+)|(?P<name>[A-Za-z]+)|(?P<op>[()+^,]))')


class _Parser:

    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        position = 0
        while True:
            while position < len(text) and text[position].isspace():
                position += 1
            if position == len(text):
                break
            match = _TOKEN.match(text, position)
            if not match:
                raise BundleSyntaxError('unexpected character', text, position)
            kind = match.lastgroup
            start = match.start(kind)
            self.tokens.append((kind, match.group(kind), start))
            position = match.end()
        self.index = 0

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def position(self) -> int:
        token = self.peek()
        return token[2] if token else len(self.text)

    def take(self, kind: str, value: str | None = None) -> str:
        token = self.peek()
        if token is None or token[0] != kind or (value is not None and token[1] != value):
            expected = value or kind
            raise BundleSyntaxError(f'expected {expected!r}', self.text, self.position())
        self.index += 1
        return token[1]

    def at(self, kind: str, value: str | None = None) -> bool:
        token = self.peek()
        return token is not None and token[0] == kind and (value is None or token[1] == value)

    def integer(self) -> int:
        return int(self.take('int'))

    def expr(self) -> BundleExpr:
        summands = self.term()
        while self.at('op', '+'):
            self.take('op', '+')
            summands += self.term()
        return direct_sum(*summands)

    def term(self) -> list[BundleExpr]:
        """a summand, repeated by a trailing multiplicity"""
        result = self.postfix()
        if self.at('op', '^'):
            self.take('op', '^')
            position = self.position()
            count = self.integer()
            if count < 1:
                raise BundleSyntaxError('multiplicity must be positive', self.text, position)
            return [result] * count
        return [result]

    def postfix(self) -> BundleExpr:
        result = self.primary()
        while self.at('op', '('):
            self.take('op', '(')
            result = Twist(result, self.integer())
            self.take('op', ')')
        return result

    def primary(self) -> BundleExpr:
        position = self.position()
        if self.at('op', '('):
            self.take('op', '(')
            result = self.expr()
            self.take('op', ')')
            return result
        if not self.at('name'):
            raise BundleSyntaxError('expected a bundle', self.text, position)
        name = self.take('name')
        if name == 'O':
            self.take('op', '(')
            a = self.integer()
            self.take('op', ')')
            return Line(a)
        if name == 'T':
            return Tangent()
        if name in ('Om', 'Omega'):
            return Cotangent()
        if name == 'dual':
            self.take('op', '(')
            result = self.expr()
            self.take('op', ')')
            return Dual(result)
        if name in ('wedge', 'sym'):
            self.take('op', '(')
            p = self.integer()
            self.take('op', ',')
            result = self.expr()
            self.take('op', ')')
            return Wedge(p, result) if name == 'wedge' else Sym(p, result)
        raise BundleSyntaxError(f'unknown bundle {name!r}', self.text, position)


def parse_expr(text: str) -> BundleExpr:
    parser = _Parser(text)
    result = parser.expr()
    if parser.peek() is not None:
        raise BundleSyntaxError('unexpected trailing input', parser.text, parser.position())
    return result


def render(e: BundleExpr) -> str:
    """canonical text in the parser's grammar, equal consecutive summands collapsed to E^m"""
    parts = []
    for item in summands(e):
        text = _render_single(item)
        if parts and parts[-1][0] == text:
            parts[-1][1] += 1
        else:
            parts.append([text, 1])
    return ' + '.join(text if count == 1 else f'{text}^{count}' for text, count in parts)


def _render_single(e: BundleExpr) -> str:
    match e:
        case Line(a):
            return f'O({a})'
        case Tangent():
            return 'T'
        case Cotangent():
            return 'Om'
        case Dual(inner):
            return f'dual({render(inner)})'
        case Twist(inner, a):
            base = render(inner)
            if isinstance(inner, Sum):
                base = f'({base})'
            return f'{base}({a})'
        case Wedge(p, inner):
            return f'wedge({p},{render(inner)})'
        case Sym(p, inner):
            return f'sym({p},{render(inner)})'
        case Sum():
            return f'({render(e)})'
    raise TypeError(f'not a bundle expression: {e!r}')


# structural analysis

def rank(e: BundleExpr, n: int = 4) -> int:
    match e:
        case Line():
            return 1
        case Tangent() | Cotangent():
            return n
        case Dual(inner) | Twist(inner, _):
            return rank(inner, n)
        case Sum(left, right):
            return rank(left, n) + rank(right, n)
        case Wedge(p, inner):
            r = rank(inner, n)
            if not 0 <= p <= r:
                raise RankError(f'wedge({p}, ...) of a rank {r} bundle')
            return comb(r, p)
        case Sym(p, inner):
            if p < 0:
                raise RankError(f'sym({p}, ...) needs a non-negative power')
            return comb(rank(inner, n) + p - 1, p)
    raise TypeError(f'not a bundle expression: {e!r}')


def restriction_degrees(e: BundleExpr, n: int = 4) -> list[int]:
    """degrees of the line bundles in the restriction to a line, sorted descending"""
    match e:
        case Line(a):
            degrees = [a]
        case Tangent():
            degrees = [2] + [1] * (n - 1)
        case Cotangent():
            degrees = [-2] + [-1] * (n - 1)
        case Dual(inner):
            degrees = [-d for d in restriction_degrees(inner, n)]
        case Twist(inner, a):
            degrees = [d + a for d in restriction_degrees(inner, n)]
        case Sum(left, right):
            degrees = restriction_degrees(left, n) + restriction_degrees(right, n)
        case Wedge(p, inner):
            rank(e, n)
            degrees = [sum(c) for c in combinations(restriction_degrees(inner, n), p)]
        case Sym(p, inner):
            rank(e, n)
            degrees = [sum(c) for c in combinations_with_replacement(restriction_degrees(inner, n), p)]
        case _:
            raise TypeError(f'not a bundle expression: {e!r}')
    return sorted(degrees, reverse=True)


def restrict_to_line(e: BundleExpr, n: int = 4) -> SplittingType:
    return SplittingType.from_multiset(restriction_degrees(e, n))


# Chern classes

# splitting principle: a bundle is carried by the power sums p_0 = rank, p_1, ..., p_n of its Chern roots
PowerSums = list[Fraction]


def _line_sums(a: int, n: int) -> PowerSums:
    return [Fraction(a) ** k for k in range(n + 1)]


def _tensor(a: PowerSums, b: PowerSums) -> PowerSums:
    return [sum(comb(k, j) * a[j] * b[k - j] for j in range(k + 1)) for k in range(len(a))]


def _adams(a: PowerSums, m: int) -> PowerSums:
    return [Fraction(m) ** k * value for k, value in enumerate(a)]


def _add(a: PowerSums, b: PowerSums) -> PowerSums:
    return [x + y for x, y in zip(a, b)]


def _lambda_powers(e: PowerSums, p: int, sign: int) -> PowerSums:
    """exterior (sign=-1) or symmetric (sign=+1) power through p*L^p = sum_m (+-1)^(m-1) psi^m(E) L^(p-m)"""
    powers = [[Fraction(1)] + [Fraction(0)] * (len(e) - 1)]
    for q in range(1, p + 1):
        total = [Fraction(0)] * len(e)
        for m in range(1, q + 1):
            term = _tensor(_adams(e, m), powers[q - m])
            factor = 1 if sign > 0 or m % 2 == 1 else -1
            total = [t + factor * x for t, x in zip(total, term)]
        powers.append([t / q for t in total])
    return powers[p]


def power_sums(e: BundleExpr, n: int) -> PowerSums:
    match e:
        case Line(a):
            return _line_sums(a, n)
        case Tangent():
            # Euler sequence: T + O = O(1)^(n+1)
            return [Fraction(n)] + [Fraction(n + 1)] * n
        case Cotangent():
            return _adams(power_sums(Tangent(), n), -1)
        case Dual(inner):
            return _adams(power_sums(inner, n), -1)
        case Twist(inner, a):
            return _tensor(power_sums(inner, n), _line_sums(a, n))
        case Sum(left, right):
            return _add(power_sums(left, n), power_sums(right, n))
        case Wedge(p, inner):
            rank(e, n)
            return _lambda_powers(power_sums(inner, n), p, -1)
        case Sym(p, inner):
            rank(e, n)
            return _lambda_powers(power_sums(inner, n), p, 1)
    raise TypeError(f'not a bundle expression: {e!r}')


def chern_from_power_sums(sums: PowerSums, n: int) -> ChernVector:
    r = sums[0]
    if r.denominator != 1:
        raise IntegralityViolation(f'non-integral rank {r}')
    r = int(r)
    c = [Fraction(1)]
    for k in range(1, min(r, n) + 1):
        c.append(sum((-1) ** (i - 1) * c[k - i] * sums[i] for i in range(1, k + 1)) / k)
    if any(value.denominator != 1 for value in c):
        raise IntegralityViolation(f'non-integral Chern classes {c}')
    return ChernVector(n=n, r=r, c=tuple(int(value) for value in c))


def chern_total(e: BundleExpr, n: int = 4) -> ChernVector:
    return chern_from_power_sums(power_sums(e, n), n)


def pullback_target(e: BundleExpr, n: int = 4) -> GeomPoly:
    """sum of c_i(E) U^i T^(r-i): the Chern polynomial of p*E with h = -U"""
    chern = chern_total(e, n)
    return GeomPoly({(chern.r - i, i, 0): c for i, c in enumerate(chern.c)})
