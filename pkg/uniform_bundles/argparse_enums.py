from enum import Enum


class ArgparseEnum(Enum):

    def __str__(self):
        return self.name

    @classmethod
    def from_string(cls, string: str):
        """this is required for the enum to work with argparse"""
        try:
            return cls[string]
        except KeyError:
            raise ValueError(f'{string!r} is not one of {", ".join(member.name for member in cls)}')


class Strategy(ArgparseEnum):
    """search strategy of the integer solver"""
    dfs = 'depth-first search over the coordinate box'
    hybrid = 'linear propagation and Groebner elimination, then most-constrained backtracking'
    elim = 'hybrid search with exact roots and capped eliminations for completeness certificates'


class OutputFormat(ArgparseEnum):
    json = 'json'
    md = 'markdown'
    text = 'text'


class Completeness(ArgparseEnum):
    """strength of the claim that a solution list is exhaustive"""
    boxBounded = 'complete within the coordinate box'
    eliminationComplete = 'complete over all integers'
