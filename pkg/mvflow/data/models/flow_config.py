#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Flow Configuration Model

This module provides the FlowConfig model, the complete description of a
flow run as read from a JSON configuration document.
"""

import json
import hashlib
import math

from mvflow.curvature.functions import CurvatureSpec
from mvflow.geometry.bodies import BODY_KINDS
from mvflow.utils.error_handler import ConfigError
from mvflow.utils.logger import get_logger

BACKENDS = ('axisym', 'sphere2d')

# Defaults applied by from_dict
DEFAULTS = {
    'beta': 1.0,
    'm_index': -1,
    'backend': {'kind': 'axisym', 'resolution': 256},
    'initial': {'kind': 'sphere', 'params': {}},
    'cfl_safety': 0.25,
    't_end': 100.0,
    'max_steps': 1000000,
    'f_tolerance': 1e-8,
    'cadence': 50,
    'seed': 0,
    'fd_order': 2,
    'convergence_window': 10,
    'snapshot_every': 10,
    'label': '',
}

# Fields that do not change the computation
NON_SEMANTIC_FIELDS = ('label',)


class FlowConfig:
    """
    Flow configuration model class.

    Holds the dimension, curvature function, exponent, preserved index,
    backend, initial body, step control and stopping rules of a run.
    """

    def __init__(self, n, spec, beta=1.0, m_index=-1, backend=None, initial=None,
                 cfl_safety=0.25, t_end=100.0, max_steps=1000000, f_tolerance=1e-8,
                 cadence=50, seed=0, fd_order=2, convergence_window=10,
                 snapshot_every=10, label=''):
        """
        Initialize a flow configuration.

        Args:
            n (int): Hypersurface dimension, n >= 2
            spec (CurvatureSpec or str or dict): Curvature function
            beta (float, optional): Exponent of the speed F^beta, >= 1
            m_index (int, optional): Preserved mixed volume V_{n-m}, -1 <= m <= n - 1
            backend (dict, optional): {'kind': 'axisym'|'sphere2d', 'resolution': N or [n_theta, n_phi]}
            initial (dict, optional): {'kind': body kind, 'params': {...}}
            cfl_safety (float, optional): Safety factor in (0, 1]
            t_end (float, optional): Final time
            max_steps (int, optional): Step limit
            f_tolerance (float, optional): Convergence tolerance on f_max
            cadence (int, optional): Steps between monitor records
            seed (int, optional): Seed recorded for reproducibility
            fd_order (int, optional): Finite-difference order of the axisymmetric backend
            convergence_window (int, optional): Consecutive records below tolerance
            snapshot_every (int, optional): Records between geometry snapshots
            label (str, optional): Free-form run label
        """
        self.logger = get_logger(__name__)
        self.n = n
        self.spec = spec
        self.beta = beta
        self.m_index = m_index
        self.backend = dict(backend or DEFAULTS['backend'])
        self.initial = dict(initial or DEFAULTS['initial'])
        self.cfl_safety = cfl_safety
        self.t_end = t_end
        self.max_steps = max_steps
        self.f_tolerance = f_tolerance
        self.cadence = cadence
        self.seed = seed
        self.fd_order = fd_order
        self.convergence_window = convergence_window
        self.snapshot_every = snapshot_every
        self.label = label
        self.validate()

    def validate(self):
        """
        Validate and normalize every field.

        Raises:
            ConfigError: Naming the first invalid field
        """
        self.n = _integer(self.n, 'n')
        if self.n < 2:
            raise ConfigError(f"must be >= 2, got {self.n}", field='n')

        try:
            if not isinstance(self.spec, CurvatureSpec):
                self.spec = CurvatureSpec.from_dict(self.spec)
            self.spec.validate(self.n)
        except (ValueError, AttributeError, TypeError) as exc:
            raise ConfigError(str(exc), field='spec') from exc

        self.beta = _number(self.beta, 'beta')
        if not self.beta >= 1.0:
            raise ConfigError(f"beta={self.beta} violates the hypothesis beta >= 1", field='beta')

        self.m_index = _integer(self.m_index, 'm_index')
        if not -1 <= self.m_index <= self.n - 1:
            raise ConfigError(f"must lie in -1..{self.n - 1}, got {self.m_index}", field='m_index')

        kind = self.backend.get('kind')
        if kind not in BACKENDS:
            raise ConfigError(f"kind must be one of {BACKENDS}, got {kind!r}", field='backend')
        resolution = self.backend.get('resolution', 256 if kind == 'axisym' else [64, 128])
        if kind == 'axisym':
            resolution = _integer(resolution, 'backend.resolution')
            if resolution < 16:
                raise ConfigError(f"must be >= 16, got {resolution}", field='backend.resolution')
        else:
            if self.n != 2:
                raise ConfigError("sphere2d requires n = 2", field='backend')
            if not isinstance(resolution, (list, tuple)) or len(resolution) != 2:
                raise ConfigError("must be [n_theta, n_phi]", field='backend.resolution')
            resolution = [_integer(r, 'backend.resolution') for r in resolution]
            if resolution[0] < 16 or resolution[1] < 8 or resolution[1] % 2:
                raise ConfigError("needs n_theta >= 16 and an even n_phi >= 8",
                                  field='backend.resolution')
        self.backend = {'kind': kind, 'resolution': resolution}

        body = self.initial.get('kind')
        if body not in BODY_KINDS:
            raise ConfigError(f"kind must be one of {sorted(BODY_KINDS)}, got {body!r}",
                              field='initial')
        params = self.initial.get('params') or {}
        if not isinstance(params, dict):
            raise ConfigError("params must be an object", field='initial.params')
        self.initial = {'kind': body, 'params': {key: _canonical_param(key, params[key])
                                                 for key in sorted(params)}}

        self.cfl_safety = _number(self.cfl_safety, 'cfl_safety')
        if not 0.0 < self.cfl_safety <= 1.0:
            raise ConfigError(f"must lie in (0, 1], got {self.cfl_safety}", field='cfl_safety')
        self.t_end = _number(self.t_end, 't_end')
        if not self.t_end > 0.0:
            raise ConfigError(f"must be positive, got {self.t_end}", field='t_end')
        self.f_tolerance = _number(self.f_tolerance, 'f_tolerance')
        if not self.f_tolerance > 0.0:
            raise ConfigError(f"must be positive, got {self.f_tolerance}", field='f_tolerance')

        for name in ('max_steps', 'cadence', 'convergence_window', 'snapshot_every'):
            value = _integer(getattr(self, name), name)
            if value < 1:
                raise ConfigError(f"must be >= 1, got {value}", field=name)
            setattr(self, name, value)

        self.seed = _integer(self.seed, 'seed')
        self.fd_order = _integer(self.fd_order, 'fd_order')
        if self.fd_order not in (2, 4):
            raise ConfigError(f"must be 2 or 4, got {self.fd_order}", field='fd_order')
        if kind == 'sphere2d' and self.fd_order != 2:
            raise ConfigError("sphere2d supports fd_order 2 only", field='fd_order')
        self.label = str(self.label or '')

    @property
    def resolution(self):
        return self.backend['resolution']

    def to_dict(self):
        """
        Convert the configuration to its fully-defaulted canonical dictionary.

        Returns:
            dict: Configuration data
        """
        return {
            'n': self.n,
            'spec': self.spec.to_dict(),
            'beta': self.beta,
            'm_index': self.m_index,
            'backend': dict(self.backend),
            'initial': {'kind': self.initial['kind'], 'params': dict(self.initial['params'])},
            'cfl_safety': self.cfl_safety,
            't_end': self.t_end,
            'max_steps': self.max_steps,
            'f_tolerance': self.f_tolerance,
            'cadence': self.cadence,
            'seed': self.seed,
            'fd_order': self.fd_order,
            'convergence_window': self.convergence_window,
            'snapshot_every': self.snapshot_every,
            'label': self.label,
        }

    @classmethod
    def from_dict(cls, data):
        """
        Create a configuration from a dictionary, applying defaults.

        Args:
            data (dict): Configuration data

        Returns:
            FlowConfig: Validated configuration

        Raises:
            ConfigError: On unknown or invalid fields
        """
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        known = set(DEFAULTS) | {'n', 'spec'}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown fields {unknown}")
        for required in ('n', 'spec'):
            if required not in data:
                raise ConfigError("missing required field", field=required)
        merged = dict(DEFAULTS)
        merged.update(data)
        return cls(**merged)

    @classmethod
    def from_json(cls, text):
        """
        Parse a JSON document into a configuration.

        Raises:
            ConfigError: With line and column on malformed JSON
        """
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
        return cls.from_dict(data)

    def canonical_json(self):
        """Canonical JSON text: sorted keys, compact separators, no run label."""
        data = self.to_dict()
        for name in NON_SEMANTIC_FIELDS:
            data.pop(name, None)
        return json.dumps(data, sort_keys=True, separators=(',', ':'))

    def config_hash(self):
        """SHA-256 of the canonical JSON configuration."""
        return hashlib.sha256(self.canonical_json().encode('utf-8')).hexdigest()

    def copy(self, **changes):
        """A validated copy with some fields replaced."""
        data = self.to_dict()
        data.update(changes)
        return FlowConfig.from_dict(data)

    def __repr__(self):
        return f"FlowConfig(n={self.n}, spec={self.spec}, beta={self.beta}, m_index={self.m_index})"


def _integer(value, name):
    if isinstance(value, bool):
        raise ConfigError(f"expected an integer, got {value!r}", field=name)
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if not isinstance(value, int):
        raise ConfigError(f"expected an integer, got {value!r}", field=name)
    return value


def _number(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"expected a number, got {value!r}", field=name)
    value = float(value)
    if not math.isfinite(value):
        raise ConfigError(f"expected a finite number, got {value!r}", field=name)
    return value


def _canonical_param(key, value):
    # integral mode numbers stay integers, lengths become floats
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        return value
    if key == 'l':
        return _integer(value, f"initial.params.{key}")
    return _number(value, f"initial.params.{key}")
