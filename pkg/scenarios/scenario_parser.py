"""
Scenario Parser
Loads YAML scenario files, validates them against a strict schema and
builds Scenario objects
"""

import copy
import re
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

import numpy as np
import yaml
from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match
from loguru import logger

from discretization.kernel_families import kernel_from_config
from model_core.domain import ModelParams, SigmaClass, SigmaGrid
from model_core.errors import ScenarioError
from simulator.history import PROFILES, InitialProfile

from .scenario import RunSettings, Scenario, SweepAxis, Tolerances


class _ScenarioLoader(yaml.SafeLoader):
    """SafeLoader that also reads exponent-only decimals such as 1e-4 as floats"""


_ScenarioLoader.add_implicit_resolver(
    'tag:yaml.org,2002:float',
    re.compile(r'^[-+]?(?:[0-9][0-9_]*)(?:\.[0-9_]*)?[eE][-+]?[0-9]+$'),
    list('-+0123456789'),
)

_POSITIVE = {'type': 'number', 'exclusiveMinimum': 0}
_NON_NEGATIVE = {'type': 'number', 'minimum': 0}
_NUMBER = {'type': 'number'}
_BOOLEAN = {'type': 'boolean'}

_TABLE_POINTS = {
    'type': 'array',
    'minItems': 2,
    'items': {
        'type': 'array',
        'prefixItems': [_NON_NEGATIVE, _NON_NEGATIVE],
        'items': False,
        'minItems': 2,
    },
}

KERNEL_PARAMETERS: Dict[str, Tuple[Dict[str, Dict], List[str]]] = {
    'boxcar': ({'height': _NON_NEGATIVE, 'width': _POSITIVE}, ['height', 'width']),
    'truncated_exponential': (
        {'beta': _NON_NEGATIVE, 'gamma': _NON_NEGATIVE, 'cutoff': _POSITIVE},
        ['beta', 'gamma', 'cutoff'],
    ),
    'truncated_gamma': (
        {'scale': _NON_NEGATIVE, 'shape': _POSITIVE, 'rate': _POSITIVE, 'cutoff': _POSITIVE},
        ['scale', 'shape', 'cutoff'],
    ),
    'table': ({'points': _TABLE_POINTS}, ['points']),
}


def _strict(properties: Dict, required: List[str] = ()) -> Dict:
    return {
        'type': 'object',
        'properties': properties,
        'required': list(required),
        'additionalProperties': False,
    }


SCENARIO_SCHEMA = _strict(
    {
        'sigma': _strict(
            {
                'classes': {
                    'type': 'array',
                    'minItems': 1,
                    'items': _strict(
                        {'weight': _POSITIVE, 'eta': _NON_NEGATIVE, 'lambda': _POSITIVE},
                        ['weight', 'eta', 'lambda'],
                    ),
                }
            },
            ['classes'],
        ),
        'params': _strict({'mu': _POSITIVE}, ['mu']),
        'kernel': {
            'type': 'object',
            'properties': {'type': {'enum': list(KERNEL_PARAMETERS)}},
            'required': ['type'],
            'allOf': [
                {
                    'if': {'properties': {'type': {'const': name}}, 'required': ['type']},
                    'then': _strict({'type': {'const': name}, **props}, required),
                }
                for name, (props, required) in KERNEL_PARAMETERS.items()
            ],
        },
        'initial': _strict({
            'profile': {'enum': list(PROFILES)},
            'S': {'type': 'array', 'minItems': 1, 'items': _POSITIVE},
            'S_scale': _POSITIVE,
            'balanced': _BOOLEAN,
            'F': _NON_NEGATIVE,
            'F_start': _NON_NEGATIVE,
        }),
        'run': _strict(
            {
                'delta': _POSITIVE,
                't_end': _POSITIVE,
                'corrector': _BOOLEAN,
                'record_U': _BOOLEAN,
                'record_W': _BOOLEAN,
                'monitor': _BOOLEAN,
                'refinement_study': _BOOLEAN,
            },
            ['delta', 't_end'],
        ),
        'tolerances': _strict({
            'c_tol': _POSITIVE,
            'solver_rtol': _POSITIVE,
            'solver_max_iter': {'type': 'integer', 'minimum': 1},
            'identity_tol': _POSITIVE,
            'convergence': _POSITIVE,
        }),
        'sweep': _strict(
            {
                'axes': {
                    'type': 'array',
                    'items': _strict(
                        {
                            'field': {'type': 'string', 'minLength': 1},
                            'values': {'type': 'array', 'items': _NUMBER},
                            'start': _NUMBER,
                            'stop': _NUMBER,
                            'num': {'type': 'integer', 'minimum': 0},
                        },
                        ['field'],
                    ),
                }
            },
            ['axes'],
        ),
    },
    ['sigma', 'params', 'kernel', 'initial', 'run'],
)


def _format_path(parts) -> str:
    return '.'.join(str(p) for p in parts)


def set_field(data: Dict, field_path: str, value: Any) -> Dict:
    """
    Return a copy of a raw config dict with one scalar field replaced

    Args:
        data: Raw config mapping
        field_path: Dotted path, list indices as integers (sigma.classes.1.eta)
        value: New scalar value

    Returns:
        Deep copy of `data` with the field set
    """
    updated = copy.deepcopy(data)
    parts = field_path.split('.')
    node: Any = updated

    for depth, part in enumerate(parts[:-1]):
        node = _child(node, part, _format_path(parts[:depth + 1]))

    leaf = parts[-1]
    if isinstance(node, list):
        index = _index(node, leaf, field_path)
        if isinstance(node[index], (dict, list)):
            raise ScenarioError("sweep and override targets must be scalar fields", field_path)
        node[index] = value
    elif isinstance(node, dict):
        if isinstance(node.get(leaf), (dict, list)):
            raise ScenarioError("sweep and override targets must be scalar fields", field_path)
        node[leaf] = value
    else:
        raise ScenarioError("path does not address a config field", field_path)
    return updated


def _index(node: List, part: str, path: str) -> int:
    try:
        index = int(part)
    except ValueError:
        raise ScenarioError(f"expected a list index, got {part!r}", path) from None
    if not 0 <= index < len(node):
        raise ScenarioError(f"index {index} out of range", path)
    return index


def _child(node: Any, part: str, path: str) -> Any:
    if isinstance(node, list):
        return node[_index(node, part, path)]
    if isinstance(node, dict):
        if part not in node or not isinstance(node[part], (dict, list)):
            raise ScenarioError("no such config section", path)
        return node[part]
    raise ScenarioError("path does not address a config field", path)


class ScenarioParser:
    """Parses and validates scenario configs"""

    def __init__(self):
        self.validator = Draft202012Validator(SCENARIO_SCHEMA)

    def load(self, file_path: Union[str, Path]) -> Dict:
        """Read a YAML scenario file into a raw mapping"""
        file_path = Path(file_path)
        if not file_path.exists():
            raise ScenarioError(f"config file not found: {file_path}")

        try:
            with open(file_path, 'r') as f:
                data = yaml.load(f, Loader=_ScenarioLoader)
        except yaml.YAMLError as e:
            raise ScenarioError(f"invalid YAML in {file_path}: {e}") from e

        if not isinstance(data, dict):
            raise ScenarioError(f"config {file_path} must be a mapping")
        return data

    def validate(self, data: Dict) -> None:
        """Raise ScenarioError naming the field path of the most relevant schema violation"""
        error = best_match(self.validator.iter_errors(data))
        if error is not None:
            path = _format_path(error.absolute_path) or '<root>'
            raise ScenarioError(error.message, path)

    def parse_file(self, file_path: Union[str, Path]) -> Scenario:
        """Load, validate and build a scenario"""
        logger.info(f"Parsing scenario: {file_path}")
        return self.parse_dict(self.load(file_path))

    def parse_dict(self, data: Dict) -> Scenario:
        """Validate a raw mapping and build a scenario"""
        self.validate(data)

        sigma = SigmaGrid(tuple(
            SigmaClass(weight=float(c['weight']), eta=float(c['eta']), lam=float(c['lambda']))
            for c in data['sigma']['classes']
        ))
        params = ModelParams(mu=float(data['params']['mu']))
        kernel = kernel_from_config(data['kernel'])

        initial_config = data.get('initial', {})
        initial = InitialProfile(
            profile=initial_config.get('profile', 'constant'),
            S=tuple(initial_config['S']) if 'S' in initial_config else None,
            S_scale=float(initial_config.get('S_scale', 1.0)),
            balanced=bool(initial_config.get('balanced', False)),
            F=float(initial_config.get('F', 0.0)),
            F_start=float(initial_config.get('F_start', 0.0)),
        )
        if initial.S is not None and len(initial.S) != sigma.m:
            raise ScenarioError(
                f"expected {sigma.m} per-class values, got {len(initial.S)}", 'initial.S'
            )

        run_config = dict(data['run'])
        run_config['delta'] = float(run_config['delta'])
        run_config['t_end'] = float(run_config['t_end'])
        run = RunSettings(**run_config)

        tolerance_config = {
            key: (int(value) if key == 'solver_max_iter' else float(value))
            for key, value in data.get('tolerances', {}).items()
        }
        tolerances = Tolerances(**tolerance_config)

        sweep = self._parse_sweep(data.get('sweep'))
        return Scenario(
            sigma=sigma,
            params=params,
            kernel=kernel,
            initial=initial,
            run=run,
            tolerances=tolerances,
            sweep=sweep,
        )

    def _parse_sweep(self, config) -> Tuple[SweepAxis, ...]:
        if not config:
            return ()

        axes = []
        for i, axis in enumerate(config['axes']):
            path = f"sweep.axes.{i}"
            if 'values' in axis:
                values = tuple(float(v) for v in axis['values'])
            elif {'start', 'stop', 'num'} <= set(axis):
                values = tuple(
                    float(v) for v in np.linspace(axis['start'], axis['stop'], axis['num'])
                )
            else:
                raise ScenarioError("axis needs `values` or `start`/`stop`/`num`", path)

            if not values:
                raise ScenarioError(f"empty sweep axis {axis['field']!r}", path)
            axes.append(SweepAxis(field=axis['field'], values=values))
        return tuple(axes)
