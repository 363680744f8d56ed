"""
Unit tests for Scenario Parser
"""

import copy

import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from discretization.kernel_families import Boxcar, Table
from model_core.errors import KernelError, ScenarioError
from scenarios.scenario_parser import ScenarioParser, set_field


@pytest.fixture
def config_file(tmp_path, scenario_config):
    """Write the reference scenario to YAML"""
    path = tmp_path / "scenario.yaml"
    with open(path, 'w') as f:
        yaml.safe_dump(scenario_config, f)
    return path


def test_parse_file(config_file):
    """Test parsing the reference scenario"""
    scenario = ScenarioParser().parse_file(config_file)

    assert scenario.sigma.m == 1
    assert scenario.params.mu == 0.1
    assert scenario.kernel == Boxcar(0.5, 4.0)
    assert scenario.initial.balanced is True
    assert scenario.run.delta == 0.25
    assert scenario.run.corrector is True
    assert scenario.tolerances.c_tol == 1.0
    assert scenario.sweep == ()


def test_parse_file_not_found(tmp_path):
    """Test a missing config is an input error"""
    with pytest.raises(ScenarioError, match="not found"):
        ScenarioParser().parse_file(tmp_path / "missing.yaml")


def test_exponent_only_floats(tmp_path):
    """Test 1e-4 style decimals load as floats"""
    path = tmp_path / "floats.yaml"
    path.write_text("a: 1e-4\nb: 2.5E3\nc: 7\n")
    data = ScenarioParser().load(path)

    assert data == {'a': 1e-4, 'b': 2500.0, 'c': 7}
    assert isinstance(data['a'], float)


def test_invalid_yaml(tmp_path):
    """Test malformed YAML is reported as an input error"""
    path = tmp_path / "broken.yaml"
    path.write_text("sigma: [unclosed\n")

    with pytest.raises(ScenarioError):
        ScenarioParser().load(path)


@pytest.mark.parametrize("path, value, message", [
    ("params.mu", -0.1, "params.mu"),
    ("run.delta", 0, "run.delta"),
    ("kernel.height", "high", "kernel.height"),
    ("sigma.classes.0.lambda", 0.0, "sigma.classes.0.lambda"),
    ("initial.profile", "sine", "initial.profile"),
])
def test_schema_errors_name_field_path(scenario_config, path, value, message):
    """Test schema violations name the offending field"""
    with pytest.raises(ScenarioError, match=message):
        ScenarioParser().parse_dict(set_field(scenario_config, path, value))


def test_unknown_keys_are_rejected(scenario_config):
    """Test a misspelled tolerance name is a hard error"""
    config = copy.deepcopy(scenario_config)
    config['tolerances'] = {'c_tol': 1.0, 'ctol': 2.0}

    with pytest.raises(ScenarioError, match="ctol"):
        ScenarioParser().parse_dict(config)


def test_kernel_parameters_follow_type(scenario_config):
    """Test boxcar keys are rejected on an exponential kernel"""
    config = copy.deepcopy(scenario_config)
    config['kernel']['type'] = 'truncated_exponential'

    with pytest.raises(ScenarioError, match="kernel"):
        ScenarioParser().parse_dict(config)


def test_negative_table_sample_rejected(scenario_config):
    """Test a negative tabulated sample is rejected before any run"""
    config = copy.deepcopy(scenario_config)
    config['kernel'] = {'type': 'table', 'points': [[0.0, 0.5], [1.0, -0.5], [2.0, 0.0]]}

    with pytest.raises(ScenarioError, match=r"kernel\.points\.1\.1"):
        ScenarioParser().parse_dict(config)


def test_table_semantic_validation(scenario_config):
    """Test checks the schema cannot express still run"""
    config = copy.deepcopy(scenario_config)
    config['kernel'] = {'type': 'table', 'points': [[0.0, 0.5], [2.0, 0.5], [1.0, 0.0]]}

    with pytest.raises(KernelError, match=r"kernel\.points\.2\.0"):
        ScenarioParser().parse_dict(config)


def test_initial_S_length(scenario_config):
    """Test per-class S must match the class count"""
    config = set_field(scenario_config, 'initial.S', [0.5, 0.5])

    with pytest.raises(ScenarioError, match="initial.S"):
        ScenarioParser().parse_dict(config)


def test_set_field(scenario_config):
    """Test dotted-path overrides and their errors"""
    updated = set_field(scenario_config, 'sigma.classes.0.eta', 2.0)

    assert updated['sigma']['classes'][0]['eta'] == 2.0
    assert scenario_config['sigma']['classes'][0]['eta'] == 1.0
    with pytest.raises(ScenarioError, match="sigma.classes.3"):
        set_field(scenario_config, 'sigma.classes.3.eta', 2.0)
    with pytest.raises(ScenarioError, match="scalar"):
        set_field(scenario_config, 'kernel', 2.0)
    with pytest.raises(ScenarioError, match="nope"):
        set_field(scenario_config, 'nope.value', 2.0)


def test_sweep_axes(scenario_config):
    """Test explicit and linspace sweep axes"""
    config = copy.deepcopy(scenario_config)
    config['sweep'] = {'axes': [
        {'field': 'kernel.height', 'values': [0.125, 0.375]},
        {'field': 'params.mu', 'start': 0.1, 'stop': 0.3, 'num': 3},
    ]}
    scenario = ScenarioParser().parse_dict(config)

    assert scenario.sweep[0].values == (0.125, 0.375)
    assert scenario.sweep[1].values == pytest.approx((0.1, 0.2, 0.3))


@pytest.mark.parametrize("axis", [
    {'field': 'kernel.height', 'values': []},
    {'field': 'kernel.height', 'start': 0.1, 'stop': 0.3, 'num': 0},
])
def test_empty_sweep_axis(scenario_config, axis):
    """Test an empty range is rejected"""
    config = copy.deepcopy(scenario_config)
    config['sweep'] = {'axes': [axis]}

    with pytest.raises(ScenarioError, match="empty sweep axis"):
        ScenarioParser().parse_dict(config)


def test_round_trip(scenario_config):
    """Test serialize-then-parse reproduces the scenario field for field"""
    config = copy.deepcopy(scenario_config)
    config['tolerances'] = {'c_tol': 2.0, 'solver_max_iter': 50}
    config['sweep'] = {'axes': [{'field': 'kernel.height', 'values': [0.25]}]}
    parser = ScenarioParser()
    scenario = parser.parse_dict(config)

    assert parser.parse_dict(scenario.to_config()) == scenario


def test_round_trip_table_kernel(scenario_config):
    """Test tabulated kernels survive the round trip"""
    config = copy.deepcopy(scenario_config)
    config['kernel'] = {'type': 'table', 'points': [[0.0, 0.0], [1.0, 2.0], [2.0, 0.0]]}
    parser = ScenarioParser()
    scenario = parser.parse_dict(config)

    assert scenario.kernel == Table(((0.0, 0.0), (1.0, 2.0), (2.0, 0.0)))
    assert parser.parse_dict(scenario.to_config()) == scenario


@settings(max_examples=30, deadline=None)
@given(
    mu=st.floats(1e-3, 10.0),
    eta=st.lists(st.floats(0.1, 5.0), min_size=1, max_size=4),
    height=st.floats(0.0, 5.0),
    delta=st.floats(1e-3, 1.0),
    corrector=st.booleans(),
)
def test_round_trip_property(mu, eta, height, delta, corrector):
    """Test the round trip over random scenarios"""
    config = {
        'sigma': {'classes': [{'weight': 1.0, 'eta': e, 'lambda': 0.1} for e in eta]},
        'params': {'mu': mu},
        'kernel': {'type': 'boxcar', 'height': height, 'width': 4.0},
        'initial': {'profile': 'ramp', 'S_scale': 0.5, 'F': 0.1, 'F_start': 0.0},
        'run': {'delta': delta, 't_end': 10.0, 'corrector': corrector},
    }
    parser = ScenarioParser()
    scenario = parser.parse_dict(config)

    assert parser.parse_dict(scenario.to_config()) == scenario
