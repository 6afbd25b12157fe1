"""Python access to the qgl experiments and generators.

Configs are passed as JSON strings or dicts with the same layout the CLI reads.
"""

import json as _json

from . import _core
from ._core import ConfigError, QglError, experiment_columns, registered_experiments, trace_distance

__all__ = [
    "ConfigError",
    "QglError",
    "discriminant_proxy",
    "experiment_columns",
    "fixed_point",
    "gibbs_state",
    "lindbladian",
    "registered_experiments",
    "report_csv",
    "run_experiment",
    "trace_distance",
]


def _text(config):
    return config if isinstance(config, str) else _json.dumps(config)


def run_experiment(config, timing=False):
    return _core.run_experiment(_text(config), timing)


def report_csv(config):
    return _core.report_csv(_text(config))


def gibbs_state(config):
    return _core.gibbs_state(_text(config))


def lindbladian(config):
    return _core.lindbladian(_text(config))


def fixed_point(config):
    return _core.fixed_point(_text(config))


def discriminant_proxy(config):
    return _core.discriminant_proxy(_text(config))
