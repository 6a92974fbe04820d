#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Run Manifest Model

This module provides the RunManifest model written next to every run's
outputs.
"""

from datetime import datetime

import mvflow

# Output layout of a run directory
OUTPUT_LAYOUT = {
    'trajectory': 'trajectory.csv',
    'snapshots': 'snapshots/',
    'summary': 'summary.json',
    'audit': 'audit.json',
    'manifest': 'manifest.json',
    'config': 'config.json',
}


class RunManifest:
    """
    Run manifest model class.

    Records the config hash, package version, output layout, wall-clock time
    and termination reason of a run.
    """

    def __init__(self, config_hash, termination_reason, wall_clock_seconds,
                 version=None, layout=None, started_at=None, snapshots=None):
        """
        Initialize a run manifest.

        Args:
            config_hash (str): SHA-256 of the canonical configuration
            termination_reason (str): Termination reason of the run
            wall_clock_seconds (float): Wall-clock duration
            version (str, optional): Package version, defaults to the installed one
            layout (dict, optional): Output layout, defaults to OUTPUT_LAYOUT
            started_at (str, optional): ISO timestamp of the run start
            snapshots (list, optional): Snapshot file names written
        """
        self.config_hash = config_hash
        self.termination_reason = termination_reason
        self.wall_clock_seconds = float(wall_clock_seconds)
        self.version = version or mvflow.__version__
        self.layout = dict(layout or OUTPUT_LAYOUT)
        self.started_at = started_at or datetime.now().isoformat()
        self.snapshots = list(snapshots or [])

    def to_dict(self):
        """
        Convert the manifest to a dictionary.

        Returns:
            dict: Manifest data
        """
        return {
            'config_hash': self.config_hash,
            'version': self.version,
            'layout': self.layout,
            'started_at': self.started_at,
            'wall_clock_seconds': self.wall_clock_seconds,
            'termination_reason': self.termination_reason,
            'snapshots': self.snapshots,
        }

    @classmethod
    def from_dict(cls, data):
        """
        Create a manifest from a dictionary.

        Args:
            data (dict): Manifest data

        Returns:
            RunManifest: Manifest instance
        """
        return cls(
            config_hash=data.get('config_hash'),
            termination_reason=data.get('termination_reason'),
            wall_clock_seconds=data.get('wall_clock_seconds', 0.0),
            version=data.get('version'),
            layout=data.get('layout'),
            started_at=data.get('started_at'),
            snapshots=data.get('snapshots'),
        )
