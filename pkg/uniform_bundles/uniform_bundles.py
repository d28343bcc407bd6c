from .argparse_enums import OutputFormat, Strategy
from .bundles import chern_total, parse_expr, pullback_target
from .chow import reduce
from .classify import catalog_bundles, catalog_is_complete, classify, enumerate_cases, shortcuts, verify
from .config import EngineSettings, load_settings
from .constraints import cached_system
from .errors import BundleSyntaxError, SolutionCapExceeded, UniformBundlesError
from .print_prefixed import print_prefixed, quiet
from .report import render_cases, render_catalog, render_chern, render_classify, render_reduce, render_solve, \
    render_verify
from .ring import GeomPoly
from .solver import solve, solve_dual
from .splitting_type import SplittingType
from pathlib import Path
import argparse
import sys

# flags whose values may start with a minus sign
_VALUE_FLAGS = ('--tuple', '--poly', '--bundle')


def parse_tuple(text: str) -> tuple[int, ...]:
    """comma-separated integers, in the canonical unknown order printed by solve"""
    try:
        return tuple(int(value) for value in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError(f'{text!r} is not a comma-separated list of integers')


def parse_type(text: str) -> SplittingType:
    try:
        return SplittingType.parse(text)
    except ValueError as error:
        raise argparse.ArgumentTypeError(str(error))


def parse_bundle(text: str):
    try:
        return parse_expr(text)
    except BundleSyntaxError as error:
        raise argparse.ArgumentTypeError(str(error))


def parse_poly(text: str) -> GeomPoly:
    try:
        return GeomPoly.parse(text)
    except ValueError as error:
        raise argparse.ArgumentTypeError(str(error))


def attach_negative_values(argv: list[str]) -> list[str]:
    """--tuple -1,0 is read as --tuple=-1,0 instead of two flags"""
    attached = []
    index = 0
    while index < len(argv):
        argument = argv[index]
        if argument in _VALUE_FLAGS and index + 1 < len(argv) and argv[index + 1].startswith('-'):
            attached.append(f'{argument}={argv[index + 1]}')
            index += 2
            continue
        attached.append(argument)
        index += 1
    return attached


class UniformBundles:

    def __init__(self,
                 default_format: OutputFormat = OutputFormat.text,
                 default_config: Path | None = None,
                 prog: str = 'uniform-bundles'):
        """
        :param default_format:  Output format used when --format is not given.
        :param default_config:  INI file read when --config is not given. Flags override its values.
        :param prog:            Program name shown in the usage synopsis.
        """
        self.default_format = default_format
        self.default_config = default_config
        self.prog = prog

    def parser(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument('--n', dest='n', type=int, default=None,
                            help='dimension of the projective space (default 4, or [engine] n of the config file)')
        common.add_argument('--format', dest='output_format', type=OutputFormat.from_string,
                            choices=list(OutputFormat), default=self.default_format)
        common.add_argument('--output', dest='output', type=Path, default=None,
                            help='write the result to this file instead of stdout')
        common.add_argument('--config', dest='config', type=Path, default=self.default_config,
                            help='INI file with [solver] bound, strategy, max_solutions and [engine] n')
        common.add_argument('--verbose', dest='verbose', action='store_true',
                            help='print progress and solver statistics to stderr')
        solver_options = argparse.ArgumentParser(add_help=False)
        solver_options.add_argument('--bound', dest='bound', type=int, default=None,
                                    help='coordinate box [-bound, bound] for branching (default 200)')
        solver_options.add_argument('--strategy', dest='strategy', type=Strategy.from_string,
                                    choices=list(Strategy), default=None)

        parser = argparse.ArgumentParser(prog=self.prog,
                                         description='Exact Chern class computations for uniform vector bundles '
                                                     'on projective space')
        commands = parser.add_subparsers(dest='command', required=True, metavar='command')

        solve_parser = commands.add_parser('solve', parents=[common, solver_options],
                                           help='integer solutions of the system of a splitting type')
        solve_parser.add_argument('--type', dest='splitting_type', type=parse_type, required=True,
                                  help='splitting type "k;r1,..,rk;u1,..,uk"')
        solve_parser.add_argument('--dual', dest='dual', action='store_true',
                                  help='solve the dual type and map the solutions back')

        classify_parser = commands.add_parser('classify', parents=[common, solver_options],
                                              help='solve and classify every case of a rank')
        classify_parser.add_argument('--rank', dest='rank', type=int, required=True)

        chern_parser = commands.add_parser('chern', parents=[common], help='Chern classes of a bundle expression')
        chern_parser.add_argument('--bundle', dest='bundle', type=parse_bundle, required=True,
                                  help='e.g. "T(-1) + O(1)^2" or "wedge(2,T(-1))"')
        chern_parser.add_argument('--target', dest='target', action='store_true',
                                  help='also print the Chern polynomial of the pullback')

        verify_parser = commands.add_parser('verify', parents=[common],
                                            help='check a solution tuple against a bundle; exit code 1 if it fails')
        verify_parser.add_argument('--bundle', dest='bundle', type=parse_bundle, required=True)
        verify_parser.add_argument('--type', dest='splitting_type', type=parse_type, required=True)
        verify_parser.add_argument('--tuple', dest='values', type=parse_tuple, required=True)

        reduce_parser = commands.add_parser('reduce', parents=[common],
                                            help='normal form of a polynomial in T, U, V')
        reduce_parser.add_argument('--poly', dest='poly', type=parse_poly, required=True)

        cases_parser = commands.add_parser('cases', parents=[common], help='splitting types of a rank')
        cases_parser.add_argument('--rank', dest='rank', type=int, required=True)

        catalog_parser = commands.add_parser('catalog', parents=[common],
                                             help='homogeneous bundles of the catalog of a rank')
        catalog_parser.add_argument('--rank', dest='rank', type=int, required=True)
        return parser

    def dispatch(self, argv: list[str]) -> int:
        """Parses argv, runs the subcommand and returns the exit code: 0 on success, 1 on a domain failure,
        2 on a usage error"""
        try:
            arguments = self.parser().parse_args(attach_negative_values(list(argv)))
        except SystemExit as exit:
            return exit.code if isinstance(exit.code, int) else 2
        log = print_prefixed if arguments.verbose else quiet
        try:
            settings = load_settings(arguments.config).override(
                n=arguments.n,
                bound=getattr(arguments, 'bound', None),
                strategy=getattr(arguments, 'strategy', None))
            try:
                self.validate(arguments, settings)
            except ValueError as error:
                print_prefixed(str(error))
                return 2
            output, code = getattr(self, f'run_{arguments.command}')(arguments, settings, log)
        except SolutionCapExceeded as error:
            print_prefixed(f'{error} ({len(error.partial)} solutions kept)')
            return 1
        except UniformBundlesError as error:
            print_prefixed(f'{type(error).__name__}: {error}')
            return 1
        if arguments.output is not None:
            arguments.output.write_text(output, encoding='utf-8')
        else:
            sys.stdout.write(output)
        return code

    @staticmethod
    def validate(arguments, settings: EngineSettings):
        """checks of the arguments that depend on the settings; raises ValueError on a usage error"""
        if settings.n < 1:
            raise ValueError(f'n must be positive, got {settings.n}')
        rank = getattr(arguments, 'rank', None)
        if rank is not None and rank < 2:
            raise ValueError(f'rank must be at least 2, got {rank}')
        values = getattr(arguments, 'values', None)
        if values is not None and arguments.splitting_type.is_consecutive():
            expected = len(cached_system(arguments.splitting_type.normalized(), settings.n).unknowns)
            if len(values) != expected:
                raise ValueError(f'--tuple has {len(values)} values but {arguments.splitting_type} has '
                                 f'{expected} unknowns')

    def run_solve(self, arguments, settings: EngineSettings, log) -> tuple[str, int]:
        st = arguments.splitting_type
        system = cached_system(st.normalized(), settings.n)
        if arguments.dual:
            solutions = solve_dual(st, settings.solver, settings.n, log)
        else:
            solutions = solve(system, settings.solver, log)
        return render_solve(system, solutions, arguments.output_format), 0

    def run_classify(self, arguments, settings: EngineSettings, log) -> tuple[str, int]:
        reports = classify(settings.n, arguments.rank, settings.solver, log)
        unidentified = sum(report.unidentified for report in reports)
        failed = [report for report in reports if report.error is not None]
        if unidentified:
            print_prefixed(f'{unidentified} solution tuples are UNIDENTIFIED')
        for report in failed:
            print_prefixed(f'{report.splitting_type}: {report.error}')
        code = 1 if unidentified or failed else 0
        return render_classify(settings.n, arguments.rank, reports, arguments.output_format), code

    def run_chern(self, arguments, settings: EngineSettings, log) -> tuple[str, int]:
        chern = chern_total(arguments.bundle, settings.n)
        target = pullback_target(arguments.bundle, settings.n) if arguments.target else None
        return render_chern(arguments.bundle, chern, target, arguments.output_format), 0

    def run_verify(self, arguments, settings: EngineSettings, log) -> tuple[str, int]:
        holds = verify(arguments.bundle, arguments.splitting_type, arguments.values, settings.n)
        output = render_verify(arguments.bundle, arguments.splitting_type, arguments.values, holds,
                               arguments.output_format)
        return output, 0 if holds else 1

    def run_reduce(self, arguments, settings: EngineSettings, log) -> tuple[str, int]:
        return render_reduce(reduce(arguments.poly, settings.n), arguments.output_format), 0

    def run_cases(self, arguments, settings: EngineSettings, log) -> tuple[str, int]:
        cases = enumerate_cases(settings.n, arguments.rank)
        return render_cases(settings.n, arguments.rank, cases, [shortcuts(st) for st in cases],
                            arguments.output_format), 0

    def run_catalog(self, arguments, settings: EngineSettings, log) -> tuple[str, int]:
        listed = [(st, e, family, chern_total(e, settings.n))
                  for st, e, family in catalog_bundles(settings.n, arguments.rank)]
        return render_catalog(settings.n, arguments.rank, listed, catalog_is_complete(settings.n, arguments.rank),
                              arguments.output_format), 0

    def main(self):
        """Main entrypoint. Parses the CLI parameters of the current process and exits with the resulting code"""
        sys.exit(self.dispatch(sys.argv[1:]))


def main():
    UniformBundles().main()
