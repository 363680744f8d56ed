"""
Main CLI entry point for the renewal epidemic model toolkit
Handles equilibrium analysis, simulation, certification and parameter sweeps
"""

import os
import sys
from pathlib import Path
from typing import Optional

import click
from dotenv import load_dotenv
from loguru import logger

# Load environment variables
load_dotenv()

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent))

from model_core.errors import NumericalError, PreconditionError, ScenarioError
from orchestration.scenario_runner import ScenarioRunner
from orchestration.sweep_orchestrator import SweepOrchestrator
from reporting.report_writer import ReportWriter
from scenarios.scenario import Scenario
from scenarios.scenario_parser import ScenarioParser, set_field

EXIT_CERTIFICATION_FAILURE = 1
EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3


def _default_output_dir() -> str:
    return os.getenv('RENEWAL_OUTPUT_DIR', './output')


def _load_scenario(
    config: str, dt: Optional[float] = None, t_end: Optional[float] = None
) -> Scenario:
    parser = ScenarioParser()
    data = parser.load(config)
    if dt is not None:
        data = set_field(data, 'run.delta', dt)
    if t_end is not None:
        data = set_field(data, 'run.t_end', t_end)
    return parser.parse_dict(data)


def _fail(command: str, error: Exception) -> None:
    """Report a failed command and exit with the matching status"""
    if isinstance(error, (ScenarioError, PreconditionError)):
        code = EXIT_INPUT_ERROR
        kind = "Invalid input"
    elif isinstance(error, NumericalError):
        code = EXIT_NUMERICAL_FAILURE
        kind = "Numerical failure"
    else:
        code = EXIT_NUMERICAL_FAILURE
        kind = "Unexpected failure"
    logger.error(f"{command} failed: {error}")
    click.echo(f"❌ {kind}: {error}", err=True)
    sys.exit(code)


config_option = click.option(
    '--config', required=True, type=click.Path(dir_okay=False), help='Scenario YAML file'
)
out_option = click.option(
    '--out', default=_default_output_dir, show_default='$RENEWAL_OUTPUT_DIR or ./output',
    help='Output directory'
)
dt_option = click.option('--dt', type=float, default=None, help='Override run.delta')
t_end_option = click.option('--t-end', 't_end', type=float, default=None, help='Override run.t_end')


@click.group()
@click.version_option(version='1.0.0')
def cli():
    """Renewal epidemic model with variable susceptibility: equilibria, simulation, certificates"""
    # Configure logging
    log_level = os.getenv('LOG_LEVEL', 'INFO')
    log_file = os.getenv('LOG_FILE', './logs/renewal_certify.log')

    logger.remove()
    logger.add(sys.stderr, level=log_level)
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(log_file, rotation="10 MB", retention="30 days", level=log_level)
    logger.info("Renewal model CLI started")


@cli.command()
@config_option
@out_option
def equilibrium(config: str, out: str):
    """Compute R0 and the equilibria without simulating"""
    try:
        scenario = _load_scenario(config)
        summary = ScenarioRunner(scenario).equilibrium()
        ReportWriter(out).write_summary(summary)
    except Exception as e:
        _fail('equilibrium', e)

    eq = summary.equilibria
    click.echo(f"📊 R0 = {eq.R0:.10g}")
    if eq.endemic is not None:
        click.echo(f"  Fbar = {eq.endemic.Fbar:.10g}, etabar = {eq.endemic.etabar:.10g}")
    else:
        click.echo("  No endemic equilibrium (R0 <= 1)")
    click.echo(f"📁 Summary saved to: {out}")


@cli.command()
@config_option
@out_option
@dt_option
@t_end_option
def run(config: str, out: str, dt: Optional[float], t_end: Optional[float]):
    """Simulate a scenario and write the trajectory and summary"""
    try:
        scenario = _load_scenario(config, dt, t_end)
        summary, record = ScenarioRunner(scenario).run()
        writer = ReportWriter(out)
        writer.write_trajectory(record)
        writer.write_summary(summary)
    except Exception as e:
        _fail('run', e)

    click.echo(f"✅ Simulation finished: R0 = {summary.equilibria.R0:.6g}")
    click.echo(f"  Initial history: {summary.classification}")
    click.echo(f"  Converged to: {summary.convergence.converged_to}")
    if summary.monitor is not None:
        status = '✅ passed' if summary.monitor.passed else '⚠️  violations'
        click.echo(f"  Lyapunov monitor: {status}")
    click.echo(f"📁 Results saved to: {out}")


@cli.command()
@config_option
@out_option
@dt_option
@t_end_option
def certify(config: str, out: str, dt: Optional[float], t_end: Optional[float]):
    """Run with all monitors and applicable oracles; exit 1 unless certified"""
    try:
        scenario = _load_scenario(config, dt, t_end)
        summary, record = ScenarioRunner(scenario).certify()
        writer = ReportWriter(out)
        writer.write_trajectory(record)
        writer.write_summary(summary)
    except Exception as e:
        _fail('certify', e)

    for report in summary.oracles:
        click.echo(f"  {'✅' if report.passed else '❌'} oracle {report.name}")
    click.echo(f"📁 Results saved to: {out}")

    if summary.certified:
        click.echo("✅ Certified")
        return
    click.echo("❌ Certification failed:", err=True)
    for failure in summary.failures:
        click.echo(f"  - {failure}", err=True)
    sys.exit(EXIT_CERTIFICATION_FAILURE)


@cli.command()
@config_option
@out_option
@dt_option
@t_end_option
@click.option(
    '--workers', type=int, default=None, help='Concurrent sweep points (default $MAX_SWEEP_WORKERS)'
)
def sweep(
    config: str, out: str, dt: Optional[float], t_end: Optional[float], workers: Optional[int]
):
    """Run a scenario over its sweep axes and write an index"""
    try:
        scenario = _load_scenario(config, dt, t_end)
        orchestrator = SweepOrchestrator(out, max_workers=workers)
        index_file = orchestrator.run_sweep(scenario)
    except Exception as e:
        _fail('sweep', e)

    click.echo("✅ Sweep completed")
    click.echo(f"📁 Index saved to: {index_file}")


@cli.command()
@config_option
def validate(config: str):
    """Parse a scenario and report R0 and the initial-history class without running"""
    try:
        scenario = _load_scenario(config)
        runner = ScenarioRunner(scenario)
        eq = runner.analyze_equilibria()
        region = runner.classify()
    except Exception as e:
        _fail('validate', e)

    click.echo(f"✅ {config} is valid")
    click.echo(f"  Classes: {scenario.sigma.m}")
    kernel = runner.kernel
    click.echo(f"  Kernel: {scenario.kernel.type_name}, K = {kernel.K} slots of {kernel.delta:g}")
    click.echo(f"  R0 = {eq.R0:.10g}")
    click.echo(f"  Initial history: {region.value}")
    if scenario.sweep:
        points = 1
        for axis in scenario.sweep:
            points *= len(axis.values)
        click.echo(f"  Sweep: {len(scenario.sweep)} axes, {points} points")


if __name__ == '__main__':
    cli()
