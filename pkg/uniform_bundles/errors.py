class UniformBundlesError(Exception):
    """base class of all domain errors raised by the engine"""


class MissingAssignment(UniformBundlesError):
    """total evaluation was requested but an unknown has no value"""

    def __init__(self, name: str):
        super().__init__(f'no value assigned to unknown {name!r}')
        self.name = name


class ReducibleType(UniformBundlesError):
    """the splitting type has a twist gap of two or more and splits as an extension"""


class InvalidSolution(UniformBundlesError):
    """a tuple does not make the factor product free of V"""


class SolutionCapExceeded(UniformBundlesError):

    def __init__(self, limit: int, partial: list[tuple[int, ...]]):
        super().__init__(f'more than {limit} solutions found, search aborted')
        self.limit = limit
        self.partial = partial


class EliminationDegreeBlowup(UniformBundlesError):
    """an eliminant exceeded the configured degree or coefficient size"""


class BundleSyntaxError(UniformBundlesError, ValueError):

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f'{message} at position {position}: {text!r}')
        self.text = text
        self.position = position


class RankError(UniformBundlesError):
    """wedge or sym power outside of the admissible range"""


class IntegralityViolation(UniformBundlesError):
    """a Chern class came out non-integral; always an internal bug"""


class TypeMismatch(UniformBundlesError):
    """the restriction of a bundle to a line does not agree with the splitting type"""


class ConfigurationError(UniformBundlesError):
    """the configuration file is unreadable or holds an invalid value"""
