#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Verify Command

This module certifies every registry curvature function by sampling and
writes verify_report.json. The report holds no timings, so a fixed seed
reproduces it byte for byte.
"""

import os

from mvflow.commands.run import write_json
from mvflow.curvature.certification import (
    certify_conditions,
    pinching_threshold,
    sample_lemma_inequalities,
)
from mvflow.curvature.functions import default_registry
from mvflow.utils.error_handler import report_error, report_warning
from mvflow.utils.logger import get_logger

logger = get_logger(__name__)

REPORT_NAME = 'verify_report.json'

# Pinching thresholds are measured on fewer samples than the inequality sweep
THRESHOLD_SAMPLES = 2000

EPSILONS = (0.1, 0.2)


def build_report(n, samples, seed):
    """
    Run the certification and the inequality samplers for the registry of dimension n.

    Args:
        n (int): Dimension, n >= 2
        samples (int): Samples per check
        seed (int): Seed of every sampler

    Returns:
        dict: Report content; 'passed' is False when the class-matched
            inequalities report any violation
    """
    registry = default_registry(n)
    certification = [certify_conditions(spec, samples, seed, n=n).to_dict() for spec in registry]

    lemmas = sample_lemma_inequalities(n, samples, seed, epsilons=EPSILONS, registry=registry)

    epsilon = 1.0 / (2 * n)
    thresholds = [pinching_threshold(spec, n, epsilon, min(samples, THRESHOLD_SAMPLES), seed).to_dict()
                  for spec in registry]

    return {
        'n': n,
        'samples': samples,
        'seed': seed,
        'registry': [spec.name for spec in registry],
        'certification': certification,
        'inequalities': lemmas.to_dict(),
        'delta': {f"{d.epsilon:g}": d.delta for d in lemmas.deltas},
        'pinching_thresholds': thresholds,
        'violations': lemmas.total_violations,
        'certified': all(entry['consistent'] for entry in certification),
        'passed': lemmas.total_violations == 0,
    }


def cmd_verify(n, samples, seed, output_dir='.'):
    """
    The `verify` subcommand.

    Args:
        n (int): Dimension
        samples (int): Samples per check
        seed (int): Seed of every sampler
        output_dir (str, optional): Directory of verify_report.json

    Returns:
        int: 0 iff the class-matched inequalities hold on every sample, 1 otherwise
    """
    if n < 2 or samples < 1:
        report_error("Invalid Arguments", "verify needs n >= 2 and samples >= 1",
                     f"n={n}, samples={samples}")
        return 1
    try:
        if not os.path.exists(output_dir):
            os.makedirs(output_dir)
        report = build_report(n, samples, seed)
        path = write_json(os.path.join(output_dir, REPORT_NAME), report)
    except OSError as exc:
        report_error("Output Error", f"Cannot write to {output_dir}", str(exc))
        return 1

    logger.info(f"Verification report written to {path}")
    if not report['certified']:
        report_warning("Certification", "Some registry members failed certification", path)
    if not report['passed']:
        report_error("Verification Failed", f"{report['violations']} inequality violations", path)
        return 1
    return 0
