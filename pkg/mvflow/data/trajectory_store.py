#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Trajectory Store

This module reads and writes trajectory CSV files, one MonitorRecord per row.
"""

import csv
import os

from mvflow.data.models.monitor_record import MonitorRecord, columns_for
from mvflow.utils.error_handler import MVFlowError
from mvflow.utils.logger import get_logger


class TrajectoryFormatError(MVFlowError):
    """A trajectory file is empty or lacks a required column."""

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class TrajectoryStore:
    """
    CSV repository for trajectories.

    Rows are appended as records arrive so a run can be followed while it
    progresses.
    """

    def __init__(self, path):
        """
        Initialize the store.

        Args:
            path (str): CSV file path
        """
        self.logger = get_logger(__name__)
        self.path = path
        self._file = None
        self._writer = None

    def open(self, n):
        """Create the file and write the header for dimension n."""
        directory = os.path.dirname(self.path)
        if directory and not os.path.exists(directory):
            os.makedirs(directory)
        self._file = open(self.path, 'w', newline='')
        self._writer = csv.DictWriter(self._file, fieldnames=columns_for(n))
        self._writer.writeheader()
        return self

    def append(self, record):
        """Write one record and flush."""
        if self._writer is None:
            self.open(len(record.volumes) - 2)
        self._writer.writerow({key: _format(value) for key, value in record.to_row().items()})
        self._file.flush()

    def close(self):
        if self._file is not None:
            self._file.close()
            self._file = None
            self._writer = None

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_value, traceback):
        self.close()

    def write(self, records):
        """Write a whole trajectory, replacing the file."""
        if not records:
            raise TrajectoryFormatError("cannot write an empty trajectory")
        self.open(len(records[0].volumes) - 2)
        try:
            for record in records:
                self.append(record)
        finally:
            self.close()
        self.logger.debug(f"Wrote {len(records)} records to {self.path}")

    def read_rows(self, required=()):
        """
        Read the raw rows as dictionaries of floats.

        Args:
            required (iterable, optional): Columns that must be present

        Returns:
            tuple: (header list, list of row dicts)

        Raises:
            TrajectoryFormatError: On an empty file or a missing column
        """
        with open(self.path, newline='') as handle:
            reader = csv.DictReader(handle)
            header = reader.fieldnames or []
            for column in required:
                if column not in header:
                    raise TrajectoryFormatError(f"missing column '{column}'", column=column)
            rows = [{key: float(value) for key, value in row.items()} for row in reader]
        if not rows:
            raise TrajectoryFormatError(f"trajectory {self.path} has no records")
        return header, rows

    def read(self):
        """Read the trajectory as MonitorRecord instances."""
        _, rows = self.read_rows(required=('step', 't'))
        return [MonitorRecord.from_row(row) for row in rows]


def _format(value):
    # 17 significant digits round-trip doubles exactly
    if isinstance(value, float):
        return format(value, '.17g')
    return value
