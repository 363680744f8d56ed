"""
Unit tests for Scenario Runner
"""

import copy
import json

import numpy as np
import pytest

from equilibria.equilibrium_solver import compute_equilibria
from orchestration.scenario_runner import ScenarioRunner, contradicts_theory, convergence_verdict
from reporting.summary import NOT_CONVERGED, P0, PBAR, ConvergenceVerdict
from scenarios.scenario_parser import ScenarioParser, set_field
from simulator.renewal_stepper import Region, TrajectoryRecord


def _record(F_end, S_end):
    return TrajectoryRecord(
        times=np.array([0.0, 10.0]),
        F=np.array([0.05, F_end]),
        S=np.array([[0.5], [S_end]]),
        delta=0.5,
        warm_time=4.0,
        final_state=None,
    )


def _verdict(converged_to):
    return ConvergenceVerdict(
        t_end=10.0, distance_P0=1.0, distance_Pbar=1.0, tolerance=1e-4,
        converged_to=converged_to,
    )


@pytest.fixture
def equilibria(homogeneous):
    """R0 = 2: P⁰ has S = 1, P̄ has F = 0.1 and S = 0.5"""
    grid, params, kernel = homogeneous
    return compute_equilibria(grid, params, kernel)


def test_convergence_verdict_endemic(equilibria):
    """Test a state at P̄ is classified as converged to P̄"""
    verdict = convergence_verdict(_record(0.1, 0.5), equilibria, 1e-4)

    assert verdict.converged_to == PBAR
    assert verdict.distance_Pbar == pytest.approx(0.0, abs=1e-9)
    assert verdict.distance_P0 == pytest.approx(0.5)
    assert verdict.t_end == 10.0


def test_convergence_verdict_infection_free(equilibria):
    """Test a state at P⁰ is classified as converged to P⁰"""
    verdict = convergence_verdict(_record(0.0, 1.0), equilibria, 1e-4)

    assert verdict.converged_to == P0
    assert verdict.distance_P0 == 0.0


def test_convergence_verdict_not_converged(equilibria):
    """Test a state far from both equilibria is not converged"""
    verdict = convergence_verdict(_record(0.05, 0.75), equilibria, 1e-4)

    assert verdict.converged_to == NOT_CONVERGED


@pytest.mark.parametrize("converged_to, R0, region, expected", [
    (P0, 0.8, Region.INTERIOR, False),
    (P0, 2.0, Region.BOUNDARY, False),
    (P0, 2.0, Region.INTERIOR, True),
    (PBAR, 2.0, Region.INTERIOR, False),
    (PBAR, 2.0, Region.BOUNDARY, True),
    (PBAR, 0.8, Region.INTERIOR, True),
    (NOT_CONVERGED, 2.0, Region.INTERIOR, False),
])
def test_contradicts_theory(converged_to, R0, region, expected):
    """Test which verdicts contradict the stability results"""
    assert contradicts_theory(_verdict(converged_to), R0, region) is expected


def test_equilibrium_summary(scenario_config):
    """Test the equilibrium command carries no run data"""
    summary = ScenarioRunner(ScenarioParser().parse_dict(scenario_config)).equilibrium()
    data = summary.to_dict()

    assert summary.has_endemic
    assert data['command'] == 'equilibrium'
    assert set(data) == {'command', 'R0', 'equilibria', 'scenario'}


def test_run_without_observers(scenario_config):
    """Test a run with every observer off has no monitor"""
    config = copy.deepcopy(scenario_config)
    config['run'].update({'record_U': False, 'record_W': False, 'monitor': False})
    summary, record = ScenarioRunner(ScenarioParser().parse_dict(config)).run()

    assert summary.monitor is None
    assert record.lyapunov_samples == []
    assert summary.run['warm_time'] == 4.0


def test_run_too_short_to_monitor(scenario_config):
    """Test a run that ends before the window is warm skips the monitor"""
    config = set_field(scenario_config, 'run.t_end', 2.0)
    summary, _ = ScenarioRunner(ScenarioParser().parse_dict(config)).run()

    assert summary.monitor is None
    assert summary.run['warm_time'] is None


def test_certify_boundary(scenario_config):
    """Test a boundary start certifies with U checked and W skipped"""
    config = copy.deepcopy(scenario_config)
    config['initial'] = {'profile': 'constant', 'S_scale': 0.5, 'F': 0.0}
    runner = ScenarioRunner(ScenarioParser().parse_dict(config))

    summary, record = runner.certify()

    assert summary.classification == Region.BOUNDARY.value
    assert summary.monitor.check_U
    assert summary.monitor.w_pairs == 0
    assert np.all(record.F == 0.0)
    assert summary.certified, summary.failures


def test_certify_summary_is_json_serializable(scenario_config):
    """Test an above-threshold certify summary with closed-form oracle dumps to JSON"""
    scenario = ScenarioParser().parse_dict(set_field(scenario_config, 'run.t_end', 8.0))

    summary, _ = ScenarioRunner(scenario).certify()
    data = json.loads(json.dumps(summary.to_dict()))

    oracles = {report['name']: report for report in data['oracles']}
    assert oracles['closed_form_equilibrium']['passed'] is True
    assert type(data['monitor']['passed']) is bool
    assert type(data['monitor']['check_U']) is bool
    assert data['equilibria']['endemic'] is not None


def test_certify_reuses_equilibria(mocker, scenario_config):
    """Test certify does not solve for the equilibria twice"""
    scenario = ScenarioParser().parse_dict(set_field(scenario_config, 'run.t_end', 6.0))
    runner = ScenarioRunner(scenario)
    runner.analyze_equilibria()
    spy = mocker.spy(type(scenario), 'equilibria')

    runner.certify()

    assert spy.call_count == 0
