from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True, order=True)
class SplittingType:
    """(k; r_1..r_k; u_1..u_k): the line restriction O(u_1)^r_1 + ... + O(u_k)^r_k, u strictly decreasing"""
    ranks: tuple[int, ...]
    twists: tuple[int, ...]

    def __post_init__(self):
        if len(self.ranks) != len(self.twists) or not self.ranks:
            raise ValueError(f'ranks {self.ranks} and twists {self.twists} must be non-empty and of equal length')
        if any(r < 1 for r in self.ranks):
            raise ValueError(f'ranks must be positive: {self.ranks}')
        if any(a <= b for a, b in zip(self.twists, self.twists[1:])):
            raise ValueError(f'twists must be strictly decreasing: {self.twists}')

    @classmethod
    def consecutive(cls, ranks: Iterable[int]) -> SplittingType:
        ranks = tuple(ranks)
        return cls(ranks=ranks, twists=tuple(range(len(ranks) - 1, -1, -1)))

    @classmethod
    def parse(cls, text: str) -> SplittingType:
        """reads "k;r1,...,rk;u1,...,uk"; fields may be labelled ("2;u=1,0;r=3,3") and the twists
        may be left out for the consecutive normalized type ("2;3,3")"""
        fields = [field.strip() for field in text.strip().split(';')]
        try:
            k = int(fields[0])
            labelled = {}
            positional = []
            for field in fields[1:]:
                if '=' in field:
                    label, _, values = field.partition('=')
                    labelled[label.strip()] = values
                else:
                    positional.append(field)
            ranks_text = labelled['r'] if 'r' in labelled else (positional.pop(0) if positional else None)
            twists_text = labelled['u'] if 'u' in labelled else (positional.pop(0) if positional else None)
            if ranks_text is None or positional:
                raise ValueError('expected ranks and at most one twist list')
            ranks = tuple(int(value) for value in ranks_text.split(','))
            if twists_text is None:
                split = cls.consecutive(ranks)
            else:
                split = cls(ranks=ranks, twists=tuple(int(value) for value in twists_text.split(',')))
        except (ValueError, IndexError) as error:
            raise ValueError(f'invalid splitting type {text!r}: {error}') from error
        if split.k != k:
            raise ValueError(f'invalid splitting type {text!r}: k={k} but {split.k} ranks given')
        return split

    @classmethod
    def from_multiset(cls, degrees: Iterable[int]) -> SplittingType:
        counts = Counter(degrees)
        twists = tuple(sorted(counts, reverse=True))
        return cls(ranks=tuple(counts[u] for u in twists), twists=twists)

    def __str__(self):
        return f'{self.k};{",".join(map(str, self.ranks))};{",".join(map(str, self.twists))}'

    @property
    def k(self) -> int:
        return len(self.ranks)

    @property
    def rank(self) -> int:
        return sum(self.ranks)

    def multiset(self) -> list[int]:
        return [u for u, r in zip(self.twists, self.ranks) for _ in range(r)]

    def twisted(self, a: int) -> SplittingType:
        return SplittingType(ranks=self.ranks, twists=tuple(u + a for u in self.twists))

    def normalized(self) -> SplittingType:
        return self.twisted(-self.twists[-1])

    def is_normalized(self) -> bool:
        return self.twists[-1] == 0

    def gaps(self) -> list[int]:
        return [a - b for a, b in zip(self.twists, self.twists[1:])]

    def is_consecutive(self) -> bool:
        """false for types that are reducible by extension (a twist gap of two or more)"""
        return all(gap == 1 for gap in self.gaps())
