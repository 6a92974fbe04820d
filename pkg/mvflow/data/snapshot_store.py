#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Snapshot Store

This module reads and writes geometry snapshots: one CSV row per node with
columns theta[, phi], h, R_1..R_n, lambda_1..lambda_n, weight.
"""

import csv
import os

import numpy as np

from mvflow.utils.logger import get_logger


class SnapshotStore:
    """
    CSV repository for geometry snapshots of a run directory.
    """

    def __init__(self, directory):
        """
        Initialize the store.

        Args:
            directory (str): Snapshot directory, created on first write
        """
        self.logger = get_logger(__name__)
        self.directory = directory
        self.written = []

    def path_for(self, index):
        return os.path.join(self.directory, f"snapshot_{index:05d}.csv")

    def write(self, grid, index):
        """
        Write a snapshot of a grid.

        Args:
            grid (SupportGrid): Geometry to store
            index (int): Snapshot number

        Returns:
            str: Path of the written file
        """
        if not os.path.exists(self.directory):
            os.makedirs(self.directory)
        path = self.path_for(index)
        write_snapshot(path, grid)
        self.written.append(os.path.basename(path))
        self.logger.debug(f"Snapshot {index} written to {path}")
        return path


def snapshot_columns(grid):
    """Column arrays of a snapshot, in file order."""
    curv = grid.curvatures()
    columns = dict(grid.coordinates())
    columns['h'] = grid.h
    for i in range(grid.n):
        columns[f"R_{i + 1}"] = curv.radii[:, i]
    for i in range(grid.n):
        columns[f"lambda_{i + 1}"] = curv.lam[:, i]
    columns['weight'] = curv.weights
    return columns


def write_snapshot(path, grid):
    """Write a grid snapshot with 17 significant digits."""
    columns = snapshot_columns(grid)
    names = list(columns)
    with open(path, 'w', newline='') as handle:
        writer = csv.writer(handle)
        writer.writerow(names)
        for i in range(grid.node_count):
            writer.writerow([format(float(columns[name][i]), '.17g') for name in names])


def read_snapshot(path):
    """
    Read a snapshot back into column arrays.

    Returns:
        dict: Column name to numpy array
    """
    with open(path, newline='') as handle:
        reader = csv.reader(handle)
        names = next(reader)
        values = np.array([[float(x) for x in row] for row in reader], dtype=float)
    return {name: values[:, i] for i, name in enumerate(names)}
