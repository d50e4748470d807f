"""
wittcheck - Main Entry Point
Commands:
1. bracket         Lie bracket of two element files
2. verify          Lemma checks as a stream of reports
3. centralizer     Centralizer of an element or a distinguished element
4. derivations     Der(W_n) against Inn(W_n)
5. recover         The inner element behind a pair of images
6. twolocal-check  Two-locality and derivation tests of a map file
7. suite           The acceptance matrix, configuration by configuration
"""

import sys
from pathlib import Path
from typing import List, Optional

import click

sys.path.insert(0, str(Path(__file__).parent))

from config import DEFAULT_SEED, DIM_CAP, EXIT_CODES, FIXTURE_DIR, OUTPUT_DIR
from core.element_io import dumps, dumps_element, element_to_dict, load_document, read_element
from core.errors import (
    UNSOLVABLE,
    CharTwoUnsupported,
    DomainNotFull,
    ElementFormatError,
    FieldTooSmall,
    Infeasible,
    WittCheckError,
)
from core.galois_field import default_regular
from core.structure import CheckReport, StructureAnalyzer, algebra_params
from core.two_local import PointwiseMap, TwoLocalAnalyzer
from core.verifier import AlgebraConfig, CheckRunner, exit_code, infeasible_report, run_checks
from data.check_matrix import suite_configurations
from utils.helpers import print_banner, print_reports, print_summary
from utils.logger import logger, set_verbose
from utils.report_generator import CertificateWriter

CHECK_NAMES = ['all', 'der-inn', 'script-d', 'centralizers', 'torus-cartan', 'graded-vanishing',
               'determining-pair', 'counterexample', 'roots', 'change-of-variables',
               'delta-support', 'properties']


class Session:
    """Global flags shared by every command."""

    def __init__(self, config: AlgebraConfig, fmt: str):
        self.config = config
        self.fmt = fmt

    @property
    def machine(self) -> bool:
        return self.fmt == 'machine'

    def emit_reports(self, reports: List[CheckReport]):
        if not self.machine:
            print_reports(reports)
            return
        for report in reports:
            click.echo(dumps(report.to_dict()))


def _parse_modulus(ctx, param, value: Optional[str]):
    if value is None:
        return None
    try:
        return tuple(int(c) for c in value.split(","))
    except ValueError:
        raise click.BadParameter("expected comma-separated integers, e.g. 1,0,1")


def _fail_usage(ctx: click.Context, message: str):
    click.echo(f"Error: {message}", err=True)
    ctx.exit(EXIT_CODES['usage'])


def _algebra(ctx: click.Context):
    try:
        return ctx.obj.config.algebra()
    except WittCheckError as e:
        _fail_usage(ctx, str(e))


@click.group()
@click.option('--n', 'n', type=int, default=2, show_default=True, help="Number of variables.")
@click.option('--p', 'p', type=int, default=3, show_default=True, help="Characteristic.")
@click.option('--deg', type=int, default=None, help="Field extension degree (default: n).")
@click.option('--modulus', callback=_parse_modulus, default=None,
              help="Ascending coefficients of a monic irreducible, e.g. 1,0,1.")
@click.option('--dim-cap', type=int, default=DIM_CAP, show_default=True)
@click.option('--seed', type=int, default=DEFAULT_SEED, show_default=True)
@click.option('--format', 'fmt', type=click.Choice(['text', 'machine']), default='text',
              show_default=True)
@click.option('--jobs', type=int, default=1, show_default=True, help="Worker threads.")
@click.option('--timings/--no-timings', default=False, help="Record elapsed_ms in reports.")
@click.option('--verbose', is_flag=True, help="Log progress to stderr.")
@click.pass_context
def cli(ctx, n, p, deg, modulus, dim_cap, seed, fmt, jobs, timings, verbose):
    """Exact computations on Jacobson-Witt algebras W_n over finite fields."""
    set_verbose(verbose)
    try:
        config = AlgebraConfig(n=n, p=p, deg=deg, modulus=modulus, dim_cap=dim_cap,
                               seed=seed, jobs=jobs, timings=timings)
    except WittCheckError as e:
        _fail_usage(ctx, str(e))
    ctx.obj = Session(config, fmt)


# ==========================================
# ELEMENT COMMANDS
# ==========================================

@cli.command()
@click.argument('file_x', type=click.Path(dir_okay=False))
@click.argument('file_y', type=click.Path(dir_okay=False))
@click.pass_context
def bracket(ctx, file_x, file_y):
    """Print [X, Y] for the elements stored in FILE_X and FILE_Y."""
    A = _algebra(ctx)
    try:
        X = read_element(file_x, A)
        Y = read_element(file_y, A)
    except ElementFormatError as e:
        _fail_usage(ctx, str(e))
    Z = A.bracket(X, Y)
    click.echo(dumps_element(Z) if ctx.obj.machine else repr(Z))


@cli.command()
@click.argument('element_file', required=False, type=click.Path(dir_okay=False))
@click.option('--special', help="Distinguished element instead of a file, e.g. script_D.")
@click.option('--index', type=int, default=1, show_default=True,
              help="Index parameter of the distinguished element.")
@click.pass_context
def centralizer(ctx, element_file, special, index):
    """Centralizer of an element, reported with an echelon basis."""
    session = ctx.obj
    A = _algebra(ctx)
    try:
        X = _resolve_element(A, element_file, special, index)
    except (ElementFormatError, WittCheckError) as e:
        if isinstance(e, (Infeasible, FieldTooSmall, CharTwoUnsupported)):
            report = infeasible_report('centralizer', algebra_params(A), str(e))
            session.emit_reports([report])
            ctx.exit(EXIT_CODES['infeasible'])
        _fail_usage(ctx, str(e))
    if not A.within_cap():
        session.emit_reports([infeasible_report('centralizer', algebra_params(A),
                                                f"dimension {A.dim} exceeds cap {A.dim_cap}")])
        ctx.exit(EXIT_CODES['infeasible'])

    structure = StructureAnalyzer(A, session.config.seed)
    C = structure.centralizer(X)
    basis = structure.elements_of(C)
    report = CheckReport(check='centralizer', params=algebra_params(A), status='pass',
                         dims={"dim": C.dim, "subalgebra": structure.is_subalgebra(C)},
                         witness={"element": element_to_dict(X),
                                  "basis": [element_to_dict(B) for B in basis]})
    session.emit_reports([report])
    ctx.exit(EXIT_CODES['pass'])


def _resolve_element(A, element_file: Optional[str], special: Optional[str], index: int):
    if element_file and special:
        raise ElementFormatError("give either an element file or --special, not both")
    if element_file:
        return read_element(element_file, A)
    if not special:
        raise ElementFormatError("an element file or --special is required")
    if special == 'd_lambda_k':
        return A.d_lambda(default_regular(A.field, A.n), index)
    if special in ('script_D', 'h_j', 'hh_k', 'I_k', 'tau_term'):
        key = {'script_D': 'i', 'h_j': 'j', 'hh_k': 'k', 'I_k': 'k', 'tau_term': 'j'}[special]
        return A.special(special, **{key: index})
    X = A.special(special)
    if isinstance(X, list):
        raise ElementFormatError(f"'{special}' names a set of elements, not one element")
    return X


@cli.command()
@click.pass_context
def derivations(ctx):
    """Compute Der(W_n) and Inn(W_n) and compare them."""
    session = ctx.obj
    try:
        reports = run_checks(session.config, ['der-inn'])
    except WittCheckError as e:
        _fail_usage(ctx, str(e))
    session.emit_reports(reports)
    ctx.exit(exit_code(reports))


@cli.command()
@click.argument('file_v1', type=click.Path(dir_okay=False))
@click.argument('file_v2', type=click.Path(dir_okay=False))
@click.pass_context
def recover(ctx, file_v1, file_v2):
    """Solve [a, d_1] = V1 and [a, d_2] = V2 for the determining pair (d_1, d_2)."""
    session = ctx.obj
    A = _algebra(ctx)
    try:
        v1 = read_element(file_v1, A)
        v2 = read_element(file_v2, A)
    except ElementFormatError as e:
        _fail_usage(ctx, str(e))

    params = algebra_params(A)
    try:
        structure = StructureAnalyzer(A, session.config.seed)
        lam = default_regular(A.field, A.n)
        A.require_cap("recover")
        _, _, branch = structure.determining_pair(lam)
        a = structure.recover_inner(v1, v2, lam)
    except (Infeasible, FieldTooSmall, CharTwoUnsupported) as e:
        session.emit_reports([infeasible_report('recover', params, str(e))])
        ctx.exit(EXIT_CODES['infeasible'])

    solved = a is not UNSOLVABLE
    report = CheckReport(check='recover', params=params, status='pass' if solved else 'fail',
                         dims={"solvable": solved},
                         witness={"a": element_to_dict(a)} if solved else None,
                         details={"branch": branch})
    session.emit_reports([report])
    ctx.exit(EXIT_CODES['pass'] if solved else EXIT_CODES['fail'])


# ==========================================
# MAP COMMANDS
# ==========================================

@cli.command('twolocal-check')
@click.argument('map_file', required=False, type=click.Path(dir_okay=False),
                default=str(FIXTURE_DIR / "counterexample_w1_p2.json"))
@click.pass_context
def twolocal_check(ctx, map_file):
    """
    Test a pointwise map for two-locality and for being a derivation.

    The map file carries its own algebra; the global algebra flags are ignored.
    """
    session = ctx.obj
    try:
        delta = PointwiseMap.from_dict(load_document(map_file), session.config.dim_cap)
    except (ElementFormatError, WittCheckError) as e:
        _fail_usage(ctx, str(e))

    analyzer = TwoLocalAnalyzer(delta.algebra, session.config.seed, session.config.jobs)
    params = algebra_params(delta.algebra)
    try:
        reports = [analyzer.is_two_local(delta)]
    except Infeasible as e:
        session.emit_reports([infeasible_report('two-local', params, str(e))])
        ctx.exit(EXIT_CODES['infeasible'])
    try:
        reports.append(analyzer.is_derivation_map(delta))
    except (DomainNotFull, Infeasible) as e:
        reports.append(infeasible_report('derivation', params, str(e)))
    session.emit_reports(reports)
    ctx.exit(EXIT_CODES['pass'] if reports[0].passed else EXIT_CODES['fail'])


# ==========================================
# CHECK RUNNERS
# ==========================================

@cli.command()
@click.argument('checks', nargs=-1, type=click.Choice(CHECK_NAMES))
@click.option('--output', is_flag=True, help="Write a certificate to the output directory.")
@click.pass_context
def verify(ctx, checks, output):
    """Run CHECKS (default: all) and print one report per check."""
    session = ctx.obj
    names = list(checks) or ['all']
    try:
        runner = CheckRunner(session.config)
    except WittCheckError as e:
        _fail_usage(ctx, str(e))

    if not session.machine:
        print_banner(session.config.label())
    logger.info("=" * 80)
    logger.info(f"VERIFYING {session.config.label()}: {', '.join(names)}")
    logger.info("=" * 80)

    reports = runner.run(names)
    session.emit_reports(reports)
    if output:
        CertificateWriter(OUTPUT_DIR).write_all(reports, name="verify")
    ctx.exit(exit_code(reports))


@cli.command()
@click.option('--fast', is_flag=True, help="Skip configurations with large Der systems.")
@click.option('--output', is_flag=True, help="Write a certificate to the output directory.")
@click.pass_context
def suite(ctx, fast, output):
    """Run the acceptance matrix; the global n, p and deg flags are ignored."""
    session = ctx.obj
    base = session.config
    if not session.machine:
        print_banner("Acceptance matrix")

    reports: List[CheckReport] = []
    configurations = list(suite_configurations(include_slow=not fast))
    for step, (n, p, checks) in enumerate(configurations, 1):
        config = AlgebraConfig(n=n, p=p, deg=n, dim_cap=base.dim_cap, seed=base.seed,
                               jobs=base.jobs, timings=base.timings)
        logger.info("=" * 80)
        logger.info(f"STEP {step}/{len(configurations)}: {config.label()}")
        logger.info("=" * 80)
        batch = run_checks(config, checks)
        session.emit_reports(batch)
        reports.extend(batch)

    if output:
        paths = CertificateWriter(OUTPUT_DIR).write_all(reports, name="suite")
        for kind, path in paths.items():
            logger.info(f"  ✓ {kind.title()}: {path.name}")
    if not session.machine:
        print_summary(reports, title="ACCEPTANCE SUMMARY")
    ctx.exit(exit_code(reports))


def main():
    try:
        cli()
    except Exception as e:
        logger.error(f"❌ Critical error: {e}", exc_info=True)
        logger.error("Check logs/wittcheck.log for details")
        sys.exit(EXIT_CODES["fail"])


if __name__ == "__main__":
    main()
