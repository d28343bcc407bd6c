from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .ring import GeomPoly, add


@dataclass(frozen=True)
class ChowElement:
    n: int
    value: GeomPoly

    def __bool__(self):
        return bool(self.value)


@lru_cache(maxsize=None)
def _reduce_uv(u: int, v: int, n: int) -> tuple[tuple[tuple[int, int], int], ...]:
    if u > n:
        return ()
    if v < n:
        return ((u, v), 1),
    reduced: dict[tuple[int, int], int] = {}
    for k in range(1, n + 1):
        for monomial, coefficient in _reduce_uv(u + k, v - k, n):
            value = reduced.get(monomial, 0) - coefficient
            if value:
                reduced[monomial] = value
            else:
                reduced.pop(monomial, None)
    return tuple(sorted(reduced.items()))


def reduce(p: GeomPoly, n: int) -> GeomPoly:
    """normal form in Z[U,V]/<R^n(U,V), U^(n+1)>: V^n is rewritten until no V-exponent reaches n, then
    monomials with U-exponent above n are dropped. Powers of T never take part in a relation."""
    if n < 1:
        raise ValueError(f'n must be at least 1, got {n}')
    result = {}
    for (t, u, v), coefficient in p.terms.items():
        for (u2, v2), factor in _reduce_uv(u, v, n):
            key = (t, u2, v2)
            value = coefficient * factor
            if key in result:
                value = result[key] + value
            if value:
                result[key] = value
            else:
                result.pop(key, None)
    return GeomPoly._raw(result)


def normal_form(p: GeomPoly, n: int) -> ChowElement:
    return ChowElement(n=n, value=reduce(p, n))


def chow_equal(a: GeomPoly, b: GeomPoly, n: int) -> bool:
    return not reduce(add(a, -b), n)


def chow_basis(n: int) -> list[tuple[int, int]]:
    """the monomials U^i V^j, 0 <= i <= n, 0 <= j <= n-1, by degree then V-exponent"""
    if n < 1:
        raise ValueError(f'n must be at least 1, got {n}')
    return sorted(((i, j) for i in range(n + 1) for j in range(n)), key=lambda m: (m[0] + m[1], m[1]))


def r_poly(n: int, degree: int | None = None) -> GeomPoly:
    """R^d(U,V) = sum of U^k V^(d-k), the relation generator for d = n"""
    degree = n if degree is None else degree
    return GeomPoly({(0, k, degree - k): 1 for k in range(degree + 1)})
