from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Sequence

from .argparse_enums import OutputFormat
from .bundles import BundleExpr, ChernVector, render
from .classify import CaseReport, Matched, ProvenNonexistent, Verdict, families
from .constraints import ConstraintSystem
from .ring import GeomPoly
from .solver import SolutionSet
from .splitting_type import SplittingType


@lru_cache(maxsize=None)
def published_discrepancies() -> dict[str, list[str]]:
    text = resources.files('uniform_bundles').joinpath('data/published_discrepancies.json').read_text(
        encoding='utf-8')
    return json.loads(text)['types']


def dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2) + '\n'


def _tuple(values: Sequence[int]) -> str:
    return '(' + ','.join(str(value) for value in values) + ')'


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> list[str]:
    lines = ['| ' + ' | '.join(header) + ' |', '|' + '|'.join('---' for _ in header) + '|']
    lines += ['| ' + ' | '.join(row) + ' |' for row in rows]
    return lines


def describe_verdict(verdict: Verdict) -> str:
    if isinstance(verdict, Matched):
        return f'{render(verdict.bundle)} [{verdict.family}]'
    if isinstance(verdict, ProvenNonexistent):
        return f'no bundle: {verdict.reason}'
    return 'UNIDENTIFIED'


# solve

# stats is the only key that differs between identical invocations
def solve_payload(system: ConstraintSystem, solutions: SolutionSet) -> dict:
    payload = {'n': system.n, 'type': str(system.splitting_type)}
    payload.update(solutions.to_json())
    if system.display is not None:
        payload['display'] = {'unknowns': [unknown.name for unknown in system.display],
                              'solutions': [list(system.project(t)) for t in solutions.tuples]}
    payload['stats'] = solutions.stats.to_json()
    return payload


def render_solve(system: ConstraintSystem, solutions: SolutionSet, output_format: OutputFormat) -> str:
    if output_format is OutputFormat.json:
        return dumps(solve_payload(system, solutions))
    if output_format is OutputFormat.md:
        lines = [f'## {system.splitting_type} on P^{system.n}', '',
                 f'{len(solutions.tuples)} solutions, {solutions.describe_completeness()}.', '']
        lines += _table(['#'] + solutions.unknowns,
                        [[str(i + 1)] + [str(value) for value in t] for i, t in enumerate(solutions.tuples)])
        if system.display is not None:
            lines += ['', 'reported coordinates:', '']
            lines += _table(['#'] + [unknown.name for unknown in system.display],
                            [[str(i + 1)] + [str(value) for value in system.project(t)]
                             for i, t in enumerate(solutions.tuples)])
        return '\n'.join(lines) + '\n'
    lines = [f'{system.splitting_type}: {len(solutions.tuples)} solutions ({solutions.describe_completeness()})',
             'unknowns: ' + ','.join(solutions.unknowns)]
    lines += [_tuple(t) for t in solutions.tuples]
    if system.display is not None:
        lines.append('reported coordinates: ' + ','.join(unknown.name for unknown in system.display))
        lines += [_tuple(system.project(t)) for t in solutions.tuples]
    return '\n'.join(lines) + '\n'


# classify

def classify_payload(n: int, rank: int, reports: Sequence[CaseReport]) -> dict:
    return {
        'n': n,
        'rank': rank,
        'cases': [report.to_json() for report in reports],
        'families': families(reports),
        'unidentified_count': sum(report.unidentified for report in reports),
        'stats': {str(report.splitting_type): report.solutions.stats.to_json()
                  for report in reports if report.solutions is not None},
    }


def _case_markdown(report: CaseReport) -> list[str]:
    lines = [f'### {report.splitting_type}', '']
    if report.shortcuts:
        lines += ['shortcuts: ' + ', '.join(report.shortcuts), '']
    if report.error is not None:
        lines += [f'**error**: {report.error}', '']
    if report.solutions is not None:
        system = report.system
        lines += [f'{len(report.solutions.tuples)} solutions, {report.solutions.describe_completeness()}.', '']
        display = system.display is not None
        header = ['#', 'tuple'] + (['reported'] if display else []) + ['verdict']
        rows = []
        for i, (values, verdict) in enumerate(zip(report.solutions.tuples, report.verdicts)):
            row = [str(i + 1), _tuple(values)]
            if display:
                row.append(_tuple(system.project(values)))
            rows.append(row + [describe_verdict(verdict)])
        lines += _table(header, rows) + ['']
    notes = report.notes + published_discrepancies().get(str(report.splitting_type), [])
    lines += [f'- note: {note}' for note in notes]
    if notes:
        lines.append('')
    return lines


def render_classify(n: int, rank: int, reports: Sequence[CaseReport], output_format: OutputFormat) -> str:
    if output_format is OutputFormat.json:
        return dumps(classify_payload(n, rank, reports))
    unidentified = sum(report.unidentified for report in reports)
    found = families(reports)
    if output_format is OutputFormat.md:
        lines = [f'# uniform bundles of rank {rank} on P^{n}', '']
        if unidentified:
            lines += [f'**{unidentified} UNIDENTIFIED solution tuples**', '']
        for report in reports:
            lines += _case_markdown(report)
        lines += ['## matched families', ''] + [f'- {family}' for family in found]
        return '\n'.join(lines) + '\n'
    lines = [f'rank {rank} on P^{n}: {len(reports)} cases, {unidentified} unidentified']
    for report in reports:
        if report.solutions is None:
            lines.append(f'{report.splitting_type}: {report.error or ", ".join(report.notes)}')
            continue
        lines.append(f'{report.splitting_type}: {len(report.solutions.tuples)} solutions')
        for values, verdict in zip(report.solutions.tuples, report.verdicts):
            lines.append(f'  {_tuple(values)} -> {describe_verdict(verdict)}')
    lines.append('families: ' + '; '.join(found))
    return '\n'.join(lines) + '\n'


# small subcommands

def render_chern(e: BundleExpr, chern: ChernVector, target: GeomPoly | None, output_format: OutputFormat) -> str:
    if output_format is OutputFormat.json:
        payload = {'bundle': render(e), 'n': chern.n}
        payload.update(chern.to_json())
        if target is not None:
            payload['target'] = target.render()
        return dumps(payload)
    lines = [f'{render(e)}: rank {chern.r}, c = {_tuple(chern.c)}']
    if target is not None:
        lines.append(f'pullback target: {target.render()}')
    return '\n'.join(lines) + '\n'


def render_reduce(reduced: GeomPoly, output_format: OutputFormat) -> str:
    if output_format is OutputFormat.json:
        return dumps({'normal_form': reduced.render()})
    return reduced.render() + '\n'


def render_verify(e: BundleExpr, st: SplittingType, values: Sequence[int], holds: bool,
                  output_format: OutputFormat) -> str:
    if output_format is OutputFormat.json:
        return dumps({'bundle': render(e), 'type': str(st), 'tuple': list(values), 'verified': holds})
    return f'{render(e)} {"matches" if holds else "does not match"} {st} at {_tuple(values)}\n'


def render_cases(n: int, rank: int, cases: Sequence[SplittingType], annotations: Sequence[list[str]],
                 output_format: OutputFormat) -> str:
    if output_format is OutputFormat.json:
        return dumps({'n': n, 'rank': rank,
                      'cases': [{'type': str(st), 'shortcuts': notes} for st, notes in zip(cases, annotations)]})
    if output_format is OutputFormat.md:
        rows = [[str(st), ', '.join(notes)] for st, notes in zip(cases, annotations)]
        return '\n'.join(_table(['type', 'shortcuts'], rows)) + '\n'
    return ''.join(f'{st}' + (f'  [{", ".join(notes)}]' if notes else '') + '\n'
                   for st, notes in zip(cases, annotations))


def render_catalog(n: int, rank: int, listed: Sequence[tuple[SplittingType, BundleExpr, str, ChernVector]],
                   complete: bool, output_format: OutputFormat) -> str:
    disclaimer = None if complete else f'the catalog makes no completeness claim for n={n}, rank {rank}'
    if output_format is OutputFormat.json:
        payload = {'n': n, 'rank': rank,
                   'bundles': [{'type': str(st), 'bundle': render(e), 'family': family, 'chern': list(chern.c)}
                               for st, e, family, chern in listed]}
        if disclaimer:
            payload['note'] = disclaimer
        return dumps(payload)
    if output_format is OutputFormat.md:
        lines = _table(['type', 'bundle', 'family', 'chern'],
                       [[str(st), render(e), family, _tuple(chern.c)] for st, e, family, chern in listed])
    else:
        lines = [f'{st}: {render(e)}  c = {_tuple(chern.c)}' for st, e, family, chern in listed]
    if disclaimer:
        lines.append(f'note: {disclaimer}')
    return '\n'.join(lines) + '\n'
