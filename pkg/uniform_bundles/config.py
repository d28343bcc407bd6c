from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from pathlib import Path

from .argparse_enums import Strategy
from .errors import ConfigurationError
from .solver import SolverConfig


@dataclass(frozen=True)
class EngineSettings:
    """solver presets plus the dimension n, as read from an INI file

    [solver]
    bound = 200
    strategy = hybrid
    max_solutions = 10000

    [engine]
    n = 4
    """
    solver: SolverConfig = field(default_factory=SolverConfig)
    n: int = 4

    def override(self, n: int | None = None, bound: int | None = None, strategy: Strategy | None = None,
                 max_solutions: int | None = None) -> EngineSettings:
        """flags given on the command line win over the file"""
        changes = {key: value for key, value in
                   (('bound', bound), ('strategy', strategy), ('max_solutions', max_solutions)) if value is not None}
        try:
            solver = replace(self.solver, **changes)
        except ValueError as error:
            raise ConfigurationError(str(error)) from error
        return EngineSettings(solver=solver, n=self.n if n is None else n)


def _integer(parser: configparser.ConfigParser, section: str, key: str, default: int) -> int:
    try:
        return parser.getint(section, key, fallback=default)
    except ValueError as error:
        raise ConfigurationError(f'[{section}] {key}: {error}') from error


def load_settings(path: Path | None) -> EngineSettings:
    if path is None:
        return EngineSettings()
    parser = configparser.ConfigParser()
    try:
        with open(path, encoding='utf-8') as file:
            parser.read_file(file)
    except (OSError, configparser.Error) as error:
        raise ConfigurationError(f'cannot read configuration {path}: {error}') from error
    defaults = SolverConfig()
    strategy = defaults.strategy
    if parser.has_option('solver', 'strategy'):
        try:
            strategy = Strategy.from_string(parser.get('solver', 'strategy').strip())
        except ValueError as error:
            raise ConfigurationError(f'[solver] strategy: {error}') from error
    n = _integer(parser, 'engine', 'n', 4)
    if n < 1:
        raise ConfigurationError(f'[engine] n must be positive, got {n}')
    try:
        solver = SolverConfig(bound=_integer(parser, 'solver', 'bound', defaults.bound), strategy=strategy,
                              max_solutions=_integer(parser, 'solver', 'max_solutions', defaults.max_solutions))
    except ValueError as error:
        raise ConfigurationError(str(error)) from error
    return EngineSettings(solver=solver, n=n)
