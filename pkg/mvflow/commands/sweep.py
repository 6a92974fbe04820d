#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Sweep Command

This module runs the cartesian product of a sweep file's axes and aggregates
one table row per run into sweep.csv. Each run writes its own directory; a
failed run is recorded in its row and the sweep continues.

Sweep file:
    {"base": <run config>, "axes": {"spec": [...], "beta": [...], ...}, "workers": 2}
"""

import csv
import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor, as_completed

from mvflow.commands.run import execute_run
from mvflow.data.models.flow_config import FlowConfig
from mvflow.utils.error_handler import ConfigError, MVFlowError, exit_code_for, report_error
from mvflow.utils.logger import get_logger

logger = get_logger(__name__)

# Axis order of the cartesian product
AXES = ('spec', 'beta', 'm_index', 'n', 'eccentricity')

SWEEP_COLUMNS = (
    'run', 'spec', 'beta', 'm_index', 'n', 'eccentricity', 'termination', 'exit_code',
    'steps', 't_final', 'conservation_drift', 'fitted_rate', 'worst_monotonicity',
    'audit_passed', 'config_hash', 'error',
)


def load_sweep(path):
    """
    Read a sweep file.

    Returns:
        dict: {'base': dict, 'axes': dict, 'workers': int or None}

    Raises:
        ConfigError: On unreadable files, malformed JSON or unknown axes
    """
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(data, dict):
        raise ConfigError("sweep file must be a JSON object")
    axes = data.get('axes') or {}
    if not isinstance(axes, dict):
        raise ConfigError("must be an object", field='axes')
    unknown = sorted(set(axes) - set(AXES))
    if unknown:
        raise ConfigError(f"unknown axes {unknown}, expected a subset of {list(AXES)}", field='axes')
    for name, values in axes.items():
        if not isinstance(values, list) or not values:
            raise ConfigError("must be a nonempty list", field=f"axes.{name}")
    base = data.get('base') or {}
    if not isinstance(base, dict):
        raise ConfigError("must be an object", field='base')
    return {'base': base, 'axes': axes, 'workers': data.get('workers')}


def expand(base, axes):
    """
    Cartesian product of the axes applied to the base configuration.

    Args:
        base (dict): Base run configuration
        axes (dict): Axis name to list of values

    Returns:
        list: (parameters dict, configuration dict) pairs in axis order
    """
    names = [name for name in AXES if name in axes]
    points = []
    for values in itertools.product(*(axes[name] for name in names)):
        params = dict(zip(names, values))
        data = json.loads(json.dumps(base))
        for name, value in params.items():
            if name == 'eccentricity':
                # c/a of a spheroid with a = 1
                data['initial'] = {'kind': 'spheroid', 'params': {'a': 1.0, 'c': value}}
            else:
                data[name] = value
        points.append((params, data))
    return points


def _axis_value(value):
    if isinstance(value, dict):
        return json.dumps(value, sort_keys=True)
    return value


def run_point(index, params, data, output_dir):
    """
    Execute one sweep point. Never raises: failures land in the row.

    Args:
        index (int): Run number
        params (dict): Axis values of the point
        data (dict): Run configuration
        output_dir (str): Sweep directory

    Returns:
        dict: Table row
    """
    row = {name: '' for name in SWEEP_COLUMNS}
    row['run'] = index
    row.update({name: _axis_value(value) for name, value in params.items()})
    try:
        config = FlowConfig.from_dict(data)
        row['config_hash'] = config.config_hash()
        result, summary, audit = execute_run(config, os.path.join(output_dir, f"run_{index:04d}"))
    except ConfigError as exc:
        row.update(termination='config_error', exit_code=exit_code_for('config_error'),
                   error=str(exc))
        return row
    except (MVFlowError, ValueError, FloatingPointError) as exc:
        logger.error(f"Sweep run {index} failed: {exc}")
        row.update(termination='error', exit_code=1, error=f"{type(exc).__name__}: {exc}")
        return row

    monotonicity = audit['monotonicity']
    row.update(
        termination=result.reason,
        exit_code=exit_code_for(result.reason),
        steps=summary['steps'],
        t_final=summary['t_final'],
        conservation_drift=summary['conservation_drift'],
        fitted_rate='' if summary['fitted_rate'] is None else summary['fitted_rate'],
        worst_monotonicity=monotonicity['worst_relative_decrease'],
        audit_passed=audit['passed'],
    )
    if result.failure:
        row['error'] = f"convexity loss at node {result.failure['node']}"
    return row


def _worker(job):
    return run_point(*job)


def resolve_workers(workers, sweep_workers):
    """Worker count: flag, then sweep file, then MVFLOW_WORKERS, then 1."""
    for candidate in (workers, sweep_workers, os.getenv('MVFLOW_WORKERS')):
        if candidate in (None, ''):
            continue
        try:
            count = int(candidate)
        except (TypeError, ValueError):
            logger.warning(f"Ignoring invalid worker count {candidate!r}")
            continue
        if count >= 1:
            return count
    return 1


def run_sweep(base, axes, output_dir, workers=1):
    """
    Run every point of a sweep.

    Args:
        base (dict): Base run configuration
        axes (dict): Axis name to list of values
        output_dir (str): Sweep directory, one run directory per point
        workers (int, optional): Parallel processes

    Returns:
        list: Table rows ordered by run number
    """
    jobs = [(i, params, data, output_dir) for i, (params, data) in enumerate(expand(base, axes))]
    logger.info(f"Sweep of {len(jobs)} runs with {workers} worker(s)")
    if workers <= 1:
        rows = [_worker(job) for job in jobs]
    else:
        rows = []
        with ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(_worker, job): job[0] for job in jobs}
            for future in as_completed(futures):
                row = future.result()
                logger.info(f"Sweep run {row['run']}: {row['termination']}")
                rows.append(row)
    return sorted(rows, key=lambda row: row['run'])


def write_table(path, rows):
    with open(path, 'w', newline='') as handle:
        writer = csv.DictWriter(handle, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
    return path


def cmd_sweep(sweep_path, output_dir, workers=None):
    """
    The `sweep` subcommand.

    Args:
        sweep_path (str): Sweep file
        output_dir (str): Sweep directory
        workers (int, optional): Worker processes, overrides the sweep file

    Returns:
        int: 0 once the table is written, 1 on an invalid sweep file
    """
    try:
        sweep = load_sweep(sweep_path)
    except ConfigError as exc:
        report_error("Configuration Error", f"Invalid sweep {sweep_path}", str(exc))
        return 1
    try:
        if not os.path.exists(output_dir):
            os.makedirs(output_dir)
        rows = run_sweep(sweep['base'], sweep['axes'], output_dir,
                         resolve_workers(workers, sweep['workers']))
        path = write_table(os.path.join(output_dir, 'sweep.csv'), rows)
    except OSError as exc:
        report_error("Output Error", f"Cannot write to {output_dir}", str(exc))
        return 1

    failed = [row for row in rows if row['termination'] != 'converged']
    logger.info(f"Sweep table written to {path}: {len(rows) - len(failed)}/{len(rows)} converged")
    return 0
