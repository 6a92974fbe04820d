#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Data Model Unit Tests

This module tests the data models and file stores, including:
- FlowConfig defaults, validation and the canonical hash
- MonitorRecord rows
- Trajectory and snapshot CSV files
- The run manifest
"""

import os
import json
import shutil
import tempfile
import unittest

import numpy as np
from numpy.testing import assert_allclose

# Add parent directory to path to allow importing from mvflow
import sys
import pathlib
parent_dir = str(pathlib.Path(__file__).parent.parent.parent)
if parent_dir not in sys.path:
    sys.path.insert(0, parent_dir)

import mvflow
from mvflow.curvature.functions import CurvatureSpec
from mvflow.data.models.flow_config import FlowConfig
from mvflow.data.models.monitor_record import MonitorRecord, columns_for
from mvflow.data.models.run_manifest import OUTPUT_LAYOUT, RunManifest
from mvflow.data.snapshot_store import SnapshotStore, read_snapshot
from mvflow.data.trajectory_store import TrajectoryFormatError, TrajectoryStore
from mvflow.geometry.bodies import Ellipsoid, Spheroid
from mvflow.utils.error_handler import ConfigError


def sample_record(step=0, n=2):
    return MonitorRecord(
        step=step, t=0.1 * step, dt=0.1, preserved_volume=4.18879, min_q1=0.24, min_q2=0.95,
        f_max=1.0 / 3.0, pinch_ratio=1.05, speed_min=-0.01, speed_max=0.02, phi_max=1.1,
        phi_bar=1.0, rho_minus=0.9, rho_plus=1.1, radius_ratio=1.1 / 0.9, radius_bound=2.97,
        z_max=1.6, min_f_integral=0.05 * step, volumes=[float(k + 1) for k in range(n + 2)])


class TestFlowConfig(unittest.TestCase):
    """Test cases for the FlowConfig model."""

    def test_defaults(self):
        config = FlowConfig.from_dict({'n': 2, 'spec': 'MeanH'})
        self.assertEqual(config.beta, 1.0)
        self.assertEqual(config.m_index, -1)
        self.assertEqual(config.backend, {'kind': 'axisym', 'resolution': 256})
        self.assertEqual(config.initial, {'kind': 'sphere', 'params': {}})
        self.assertEqual(config.cfl_safety, 0.25)
        self.assertEqual(config.f_tolerance, 1e-8)
        self.assertEqual(config.cadence, 50)
        self.assertEqual(config.spec, CurvatureSpec('MeanH'))

    def test_round_trip(self):
        data = {'n': 3, 'spec': {'family': 'QuotientEml', 'params': {'m': 3, 'l': 1}},
                'beta': 2, 'm_index': 1,
                'initial': {'kind': 'spheroid', 'params': {'a': 1, 'c': 1.5}}}
        config = FlowConfig.from_dict(data)
        again = FlowConfig.from_dict(config.to_dict())
        self.assertEqual(again.to_dict(), config.to_dict())
        self.assertEqual(again.config_hash(), config.config_hash())
        self.assertEqual(config.initial['params'], {'a': 1.0, 'c': 1.5})

    def test_hash_is_canonical(self):
        """Equal configurations hash equally; the label does not count."""
        first = FlowConfig.from_dict({'n': 2, 'spec': 'MeanH', 'beta': 1})
        second = FlowConfig.from_dict({'beta': 1.0, 'spec': 'MeanH', 'n': 2, 'label': 'other'})
        third = FlowConfig.from_dict({'n': 2, 'spec': 'MeanH', 'beta': 1.5})
        self.assertEqual(first.config_hash(), second.config_hash())
        self.assertNotEqual(first.config_hash(), third.config_hash())
        self.assertEqual(len(first.config_hash()), 64)
        self.assertNotIn('label', json.loads(first.canonical_json()))

    def test_copy(self):
        config = FlowConfig.from_dict({'n': 2, 'spec': 'MeanH'})
        changed = config.copy(beta=2.0, label='beta2')
        self.assertEqual(changed.beta, 2.0)
        self.assertEqual(config.beta, 1.0)
        self.assertEqual(changed.label, 'beta2')

    def test_invalid_fields(self):
        """Each invalid document names the offending field."""
        cases = [
            ({'n': 1, 'spec': 'MeanH'}, 'n'),
            ({'n': 2, 'spec': 'Unknown'}, 'spec'),
            ({'n': 2, 'spec': 'QuotientEml(3,1)'}, 'spec'),
            ({'n': 2, 'spec': 'MeanH', 'beta': 0.5}, 'beta'),
            ({'n': 2, 'spec': 'MeanH', 'm_index': 2}, 'm_index'),
            ({'n': 2, 'spec': 'MeanH', 'm_index': -2}, 'm_index'),
            ({'n': 2, 'spec': 'MeanH', 'backend': {'kind': 'spectral'}}, 'backend'),
            ({'n': 3, 'spec': 'MeanH', 'backend': {'kind': 'sphere2d'}}, 'backend'),
            ({'n': 2, 'spec': 'MeanH', 'backend': {'kind': 'axisym', 'resolution': 8}},
             'backend.resolution'),
            ({'n': 2, 'spec': 'MeanH', 'initial': {'kind': 'cube'}}, 'initial'),
            ({'n': 2, 'spec': 'MeanH', 'cfl_safety': 1.5}, 'cfl_safety'),
            ({'n': 2, 'spec': 'MeanH', 'cadence': 0}, 'cadence'),
            ({'n': 2, 'spec': 'MeanH', 'fd_order': 3}, 'fd_order'),
            ({'n': 2, 'spec': 'MeanH', 't_end': True}, 't_end'),
            ({'n': 2}, 'spec'),
        ]
        for data, field in cases:
            with self.assertRaises(ConfigError, msg=str(data)) as ctx:
                FlowConfig.from_dict(data)
            self.assertEqual(ctx.exception.field, field, msg=str(data))
            self.assertTrue(str(ctx.exception).startswith(f"{field}: "))

    def test_unknown_field(self):
        with self.assertRaises(ConfigError) as ctx:
            FlowConfig.from_dict({'n': 2, 'spec': 'MeanH', 'speed': 3})
        self.assertIn('speed', str(ctx.exception))

    def test_malformed_json(self):
        with self.assertRaises(ConfigError) as ctx:
            FlowConfig.from_json('{"n": 2,\n "spec": }')
        self.assertIn('line 2', str(ctx.exception))
        with self.assertRaises(ConfigError):
            FlowConfig.from_json('[1, 2]')


class TestMonitorRecord(unittest.TestCase):
    """Test cases for the MonitorRecord model."""

    def test_row_columns(self):
        row = sample_record(n=3).to_row()
        self.assertEqual(list(row), columns_for(3))
        self.assertEqual(row['V_4'], 5.0)
        self.assertEqual(sample_record().min_q, {'q1': 0.24, 'q2': 0.95})

    def test_from_row_strings(self):
        row = {key: str(value) for key, value in sample_record(step=7).to_row().items()}
        record = MonitorRecord.from_row(row)
        self.assertEqual(record.step, 7)
        self.assertIsInstance(record.step, int)
        self.assertEqual(record.volumes, [1.0, 2.0, 3.0, 4.0])


class TestStores(unittest.TestCase):
    """Test cases for the trajectory and snapshot files."""

    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_trajectory_file(self):
        """Records survive the CSV file exactly."""
        path = os.path.join(self.directory, 'run', 'trajectory.csv')
        records = [sample_record(step) for step in (0, 50, 100)]
        TrajectoryStore(path).write(records)
        self.assertEqual(TrajectoryStore(path).read(), records)

    def test_incremental_append(self):
        path = os.path.join(self.directory, 'trajectory.csv')
        with TrajectoryStore(path).open(2) as store:
            store.append(sample_record(0))
            store.append(sample_record(1))
        header, rows = TrajectoryStore(path).read_rows(required=('f_max',))
        self.assertEqual(header, columns_for(2))
        self.assertEqual(len(rows), 2)

    def test_missing_column(self):
        path = os.path.join(self.directory, 'bad.csv')
        with open(path, 'w') as handle:
            handle.write("step,t\n0,0.0\n")
        with self.assertRaises(TrajectoryFormatError) as ctx:
            TrajectoryStore(path).read_rows(required=('step', 'f_max'))
        self.assertEqual(ctx.exception.column, 'f_max')

    def test_empty_trajectory(self):
        path = os.path.join(self.directory, 'empty.csv')
        with open(path, 'w') as handle:
            handle.write(",".join(columns_for(2)) + "\n")
        with self.assertRaises(TrajectoryFormatError):
            TrajectoryStore(path).read()
        with self.assertRaises(TrajectoryFormatError):
            TrajectoryStore(path).write([])

    def test_axisym_snapshot(self):
        grid = Spheroid(3, a=1.0, c=1.4).grid('axisym', 32)
        store = SnapshotStore(os.path.join(self.directory, 'snapshots'))
        path = store.write(grid, 2)
        self.assertEqual(store.written, ['snapshot_00002.csv'])
        columns = read_snapshot(path)
        self.assertEqual(list(columns), ['theta', 'h', 'R_1', 'R_2', 'R_3',
                                         'lambda_1', 'lambda_2', 'lambda_3', 'weight'])
        assert_allclose(columns['h'], grid.h, rtol=0.0)
        assert_allclose(columns['R_1'] * columns['lambda_1'], 1.0, rtol=1e-14)

    def test_sphere2d_snapshot(self):
        grid = Ellipsoid(2, 1.0, 1.1, 1.3).grid('sphere2d', (16, 32))
        path = SnapshotStore(self.directory).write(grid, 0)
        columns = read_snapshot(path)
        self.assertEqual(columns['phi'].size, grid.node_count)
        assert_allclose(np.sum(columns['weight']), grid.curvatures().area, rtol=1e-14)


class TestRunManifest(unittest.TestCase):
    """Test cases for the RunManifest model."""

    def test_dict_round_trip(self):
        manifest = RunManifest('ab' * 32, 'converged', 12.5, snapshots=['snapshot_00000.csv'])
        data = manifest.to_dict()
        self.assertEqual(data['version'], mvflow.__version__)
        self.assertEqual(data['layout'], OUTPUT_LAYOUT)
        self.assertEqual(RunManifest.from_dict(data).to_dict(), data)

    def test_layout(self):
        self.assertEqual(set(OUTPUT_LAYOUT), {'trajectory', 'snapshots', 'summary', 'audit',
                                              'manifest', 'config'})


if __name__ == '__main__':
    unittest.main()
