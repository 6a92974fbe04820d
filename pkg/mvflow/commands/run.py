#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Run Command

This module executes one configured flow and writes its run directory:
trajectory.csv, snapshots/, summary.json, audit.json and manifest.json.
"""

import json
import os
from datetime import datetime

import numpy as np

from mvflow.analysis.audit import StepMonotonicityTracker, audit_report
from mvflow.analysis.decay import fit_decay
from mvflow.analysis.monitor import InequalityTracker
from mvflow.curvature.certification import sample_lemma_inequalities
from mvflow.data.models.flow_config import FlowConfig
from mvflow.data.models.run_manifest import OUTPUT_LAYOUT, RunManifest
from mvflow.data.snapshot_store import SnapshotStore
from mvflow.data.trajectory_store import TrajectoryStore
from mvflow.flow.solver import run
from mvflow.utils.error_handler import (
    ConfigError,
    FitUnavailableError,
    exit_code_for,
    report_error,
    report_warning,
)
from mvflow.utils.logger import get_logger

logger = get_logger(__name__)

# Pinching level and sample count of the pointwise umbilicity check in the audit
AUDIT_EPSILON = 0.1
AUDIT_SAMPLES = 2000


def load_config(path):
    """
    Read and validate a run configuration file.

    Args:
        path (str): JSON configuration path

    Returns:
        FlowConfig: Validated configuration

    Raises:
        ConfigError: If the file is unreadable, malformed or invalid
    """
    try:
        with open(path, 'r', encoding='utf-8') as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from exc
    return FlowConfig.from_json(text)


def write_json(path, data):
    """Write a JSON document with stable key order."""
    with open(path, 'w', encoding='utf-8') as handle:
        json.dump(data, handle, indent=2, sort_keys=True)
        handle.write('\n')
    return path


def _empirical_delta(config):
    """Sampled umbilicity constant for the audit, or None when the level is infeasible."""
    if AUDIT_EPSILON * config.n >= 1.0:
        return None
    report = sample_lemma_inequalities(config.n, AUDIT_SAMPLES, config.seed,
                                       epsilons=(AUDIT_EPSILON,))
    return report.delta_for(AUDIT_EPSILON)


def build_summary(result, config):
    """
    Summary JSON content of a finished run.

    Args:
        result (FlowResult): Completed run
        config (FlowConfig): Run configuration

    Returns:
        dict: Termination, final radii, fitted rate and drift
    """
    summary = result.summary()
    summary['config_hash'] = config.config_hash()
    summary['label'] = config.label
    radii = result.final_state.grid.curvatures().radii
    summary['final_principal_radii'] = {
        'min': float(np.min(radii)),
        'max': float(np.max(radii)),
    }
    try:
        fit = fit_decay(result.trajectory, 'f_max', tolerance=config.f_tolerance)
        summary['fitted_rate'] = fit.rate
        summary['fit_r_squared'] = fit.r_squared
    except FitUnavailableError as exc:
        logger.info(f"No decay fit: {exc}")
        summary['fitted_rate'] = None
        summary['fit_r_squared'] = None
    return summary


def execute_run(config, output_dir):
    """
    Run a flow and write its complete run directory.

    Args:
        config (FlowConfig): Validated configuration
        output_dir (str): Run directory, created if missing

    Returns:
        tuple: (FlowResult, summary dict, audit dict)

    Raises:
        ConfigError: If the initial data are invalid
    """
    if not os.path.exists(output_dir):
        os.makedirs(output_dir)
    started_at = datetime.now().isoformat()
    snapshots = SnapshotStore(os.path.join(output_dir, OUTPUT_LAYOUT['snapshots']))
    trajectory_path = os.path.join(output_dir, OUTPUT_LAYOUT['trajectory'])
    snapped = {'count': 0, 'last_step': None}
    delta_emp = _empirical_delta(config)
    inequality = InequalityTracker(AUDIT_EPSILON, delta_emp) if delta_emp is not None else None
    steps = StepMonotonicityTracker(config.spec.declared_class)

    with TrajectoryStore(trajectory_path).open(config.n) as store:
        def on_record(entry, state):
            store.append(entry)
            if inequality is not None:
                inequality(entry, state)
            if snapped['count'] % config.snapshot_every == 0:
                snapshots.write(state.grid, len(snapshots.written))
                snapped['last_step'] = state.step
            snapped['count'] += 1

        result = run(config, on_record=on_record, on_step=steps)

    if snapped['last_step'] != result.final_state.step:
        snapshots.write(result.final_state.grid, len(snapshots.written))

    summary = build_summary(result, config)
    audit = audit_report(result, config, inequality=inequality, steps=steps)

    write_json(os.path.join(output_dir, OUTPUT_LAYOUT['summary']), summary)
    write_json(os.path.join(output_dir, OUTPUT_LAYOUT['audit']), audit)
    manifest = RunManifest(
        config_hash=config.config_hash(),
        termination_reason=result.reason,
        wall_clock_seconds=result.wall_time,
        started_at=started_at,
        snapshots=snapshots.written,
    )
    write_json(os.path.join(output_dir, OUTPUT_LAYOUT['manifest']), manifest.to_dict())
    write_json(os.path.join(output_dir, OUTPUT_LAYOUT['config']), config.to_dict())

    logger.info(f"Run directory written to {output_dir}")
    return result, summary, audit


def cmd_run(config_path, output_dir):
    """
    The `run` subcommand.

    Args:
        config_path (str): JSON configuration path
        output_dir (str): Run directory

    Returns:
        int: 0 converged, 1 configuration error, 2 convexity loss, 3 step
            limit, 4 final time reached without convergence
    """
    try:
        config = load_config(config_path)
        result, _, audit = execute_run(config, output_dir)
    except ConfigError as exc:
        report_error("Configuration Error", f"Invalid configuration {config_path}", str(exc))
        return exit_code_for('config_error')
    except OSError as exc:
        report_error("Output Error", f"Cannot write to {output_dir}", str(exc))
        return exit_code_for('config_error')

    if result.failure:
        report_warning("Convexity Loss",
                       f"Run stopped at step {result.failure['step']}",
                       f"node {result.failure['node']}, radius {result.failure['value']:.3e}")
    elif not result.converged:
        report_warning("Not Converged", f"Run ended with '{result.reason}'",
                       f"final f_max {result.trajectory[-1].f_max:.3e}")
    if not audit['passed']:
        report_warning("Audit", "One or more audit checks failed",
                       os.path.join(output_dir, OUTPUT_LAYOUT['audit']))
    return exit_code_for(result.reason)
