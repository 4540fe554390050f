"""
Command line interface, installed as the `bpldiff` script.

    bpldiff gen --kind typed --depth 5 --count 100 --out programs/
    bpldiff exec programs/000000.sexpr --trace
    bpldiff verify programs/000000.bpl
    bpldiff diff programs/000000.sexpr
    bpldiff campaign desk.conf
    bpldiff report runs/desk/results.jsonl
"""
import argparse
from dataclasses import replace
import logging
from pathlib import Path
import sys
from typing import Optional, Sequence

from bpldiff.boogie import INFER_FLAG, BoogieConfig, BoogieNotFoundError, PatternTableNotFoundError, run_boogie, verify_program
from bpldiff.campaign import aggregate, diff_program, load_results, render_report, run_campaign, write_manifest, write_report
from bpldiff.config import CampaignConfigError, load_config
from bpldiff.executor import EXIT_CODES, ExecConfig, ExecOutcome, execute
from bpldiff.generator import BatchSpec, BatchStats, GenConfig, GeneratedProgram, GenKind, SaturationError, gen_batch
from bpldiff.syntax.boogie import EmitStyle, write_program
from bpldiff.syntax.sexpr import read_program
from bpldiff.syntax.utils import SexprSyntaxError

logger = logging.getLogger(__name__)

# Exit status of every verb when the tool itself can't do its job.
EXIT_TOOL_ERROR = 10


def _describe(outcome: ExecOutcome) -> str:
    text = f'{outcome.kind.value} after {outcome.steps_taken} steps'
    if outcome.loop_first is not None:
        text += f' (term of step {outcome.loop_first} recurs at step {outcome.loop_recurrence})'
    if outcome.detail:
        text += f': {outcome.detail}'
    return text

def _boogie_config(args: argparse.Namespace) -> BoogieConfig:
    flags = (INFER_FLAG,) if getattr(args, 'infer', False) else ()
    return BoogieConfig(
        binary=args.boogie,
        timeout=args.timeout,
        flags=flags,
        style=EmitStyle(args.style),
    )

def _exec_config(args: argparse.Namespace) -> ExecConfig:
    return ExecConfig(step_budget=args.budget, loop_detection=not args.no_loop_detection)


# Verbs ------------------------------------------------------------------------

def cmd_gen(args: argparse.Namespace) -> int:
    spec = BatchSpec(
        args.count,
        GenConfig(GenKind(args.kind), args.depth, seed=args.seed, allow_div=not args.no_div),
    )
    stats = BatchStats()
    style = EmitStyle(args.style)
    written: list[GeneratedProgram] = []
    for generated in gen_batch(spec, workers=args.workers, stats=stats):
        write_program(generated.program, args.out, f'{generated.index:06d}', style)
        written.append(generated)
    write_manifest(args.out, spec, written)
    print(f'{len(written)} programs written to {args.out} ({stats.rejected} duplicates rejected).')
    return 0

def cmd_exec(args: argparse.Namespace) -> int:
    program = read_program(args.file)
    outcome = execute(program, _exec_config(args), trace=sys.stdout if args.trace else None)
    print(_describe(outcome))
    return EXIT_CODES[outcome.kind]

def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _boogie_config(args)
    path = Path(args.file)
    if path.suffix == '.bpl':
        result = run_boogie(path, cfg)
    else:
        result = verify_program(read_program(path), cfg)
    print(f'{result.kind.value} in {result.wall_time:.2f}s')
    for d in result.diagnostics:
        print(f'  ({d.line},{d.column}): {d.message}')
    return 0

def cmd_diff(args: argparse.Namespace) -> int:
    program = read_program(args.file)
    result = diff_program(program, _exec_config(args), _boogie_config(args), classify=not args.no_classify)
    print(f'execution: {_describe(result.exec_outcome)}')
    print(f'boogie:    {result.boogie.kind.value}')
    print(f'verdict:   {result.verdict.label}')
    report = result.incompleteness
    if report is not None:
        proxy = report.proxy.value if report.proxy else 'undetermined'
        final = report.final.value if report.final else 'undetermined'
        print(f'rerun with {INFER_FLAG}: {report.rerun.value} ({proxy})')
        for g in report.guards:
            print(f'  constant guard at {"/".join(map(str, g.location))}: {str(g.value).lower()}'
                  f'{" (stable)" if g.stable else ""}')
        print(f'class:     {final}')
    return 1 if result.verdict.mismatch is not None else 0

def cmd_campaign(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    if args.resume:
        cfg = replace(cfg, resume=True)
    report = run_campaign(cfg)
    print(render_report(report))
    return 0

def cmd_report(args: argparse.Namespace) -> int:
    log = Path(args.results)
    if not log.is_file():
        logger.error("There isn't a results log at '%s'.", log)
        return EXIT_TOOL_ERROR
    report = aggregate(load_results(log), args.sample, args.seed)
    write_report(report, args.out or log.parent)
    print(render_report(report))
    return 0


# Parser -----------------------------------------------------------------------

def _add_exec_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--budget', type=int, default=100000, help='Step budget (default: 100000).')
    parser.add_argument('--no-loop-detection', action='store_true', help='Only stop on the step budget.')

def _add_boogie_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--boogie', default=None, help='Boogie binary (default: $BPLDIFF_BOOGIE, then boogie on PATH).')
    parser.add_argument('--timeout', type=float, default=60.0, help='Verifier timeout in seconds (default: 60).')
    parser.add_argument(
        '--style', choices=[s.value for s in EmitStyle], default=EmitStyle.DECL_WITH_INIT.value,
        help='How initialised locals are written in Boogie.'
    )

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='bpldiff',
        description='Differential testing of the Boogie verifier against an executable semantics.',
    )
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help='Log debug messages.')
    verbosity.add_argument('-q', '--quiet', action='store_true', help='Only log warnings and errors.')
    verbs = parser.add_subparsers(dest='verb', required=True)

    gen = verbs.add_parser('gen', help='Generate a batch of distinct programs.')
    gen.add_argument('--kind', choices=[k.value for k in GenKind], default=GenKind.TYPED.value)
    gen.add_argument('--depth', type=int, required=True)
    gen.add_argument('--count', type=int, required=True)
    gen.add_argument('--seed', type=int, default=0)
    gen.add_argument('--out', type=Path, required=True)
    gen.add_argument('--workers', type=int, default=1)
    gen.add_argument('--no-div', action='store_true', help='Never generate divisions.')
    gen.add_argument('--style', choices=[s.value for s in EmitStyle], default=EmitStyle.DECL_WITH_INIT.value)
    gen.set_defaults(func=cmd_gen)

    exe = verbs.add_parser('exec', help='Execute a program.')
    exe.add_argument('file', type=Path)
    _add_exec_options(exe)
    exe.add_argument('--trace', action='store_true', help='Print every applied rule.')
    exe.set_defaults(func=cmd_exec)

    verify = verbs.add_parser('verify', help='Verify a .sexpr or .bpl program with Boogie.')
    verify.add_argument('file', type=Path)
    _add_boogie_options(verify)
    verify.add_argument('--infer', action='store_true', help=f'Pass {INFER_FLAG} to Boogie.')
    verify.set_defaults(func=cmd_verify)

    diff = verbs.add_parser('diff', help='Execute and verify a program and compare the outcomes.')
    diff.add_argument('file', type=Path)
    _add_exec_options(diff)
    _add_boogie_options(diff)
    diff.add_argument('--no-classify', action='store_true', help="Don't classify completeness mismatches.")
    diff.set_defaults(func=cmd_diff)

    campaign = verbs.add_parser('campaign', help='Run a campaign from a configuration file.')
    campaign.add_argument('config', type=Path)
    campaign.add_argument('--resume', action='store_true', help='Skip programs already in the results log.')
    campaign.set_defaults(func=cmd_campaign)

    report = verbs.add_parser('report', help='Aggregate a results log.')
    report.add_argument('results', type=Path)
    report.add_argument('--out', type=Path, default=None, help="Where to write the report (default: the log's directory).")
    report.add_argument('--sample', type=int, default=20, help='Review sample size per group (default: 20).')
    report.add_argument('--seed', type=int, default=0, help='Review sample seed (default: 0).')
    report.set_defaults(func=cmd_report)
    return parser

def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format='%(levelname)s: %(message)s')
    try:
        return args.func(args)
    except (
        BoogieNotFoundError,
        CampaignConfigError,
        PatternTableNotFoundError,
        SaturationError,
        SexprSyntaxError,
        FileNotFoundError,
        ValueError,
    ) as error:
        logger.error(str(error).strip())
        return EXIT_TOOL_ERROR


if __name__ == '__main__':
    sys.exit(main())
