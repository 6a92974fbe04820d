#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Plot Command

This module turns a trajectory CSV into the standard SVG charts.
"""

from mvflow.data.trajectory_store import TrajectoryFormatError, TrajectoryStore
from mvflow.ui.charts import CHART_COLUMNS, trajectory_charts
from mvflow.utils.error_handler import report_error
from mvflow.utils.logger import get_logger

logger = get_logger(__name__)


def cmd_plot(trajectory_path, output_dir):
    """
    The `plot` subcommand.

    Args:
        trajectory_path (str): Trajectory CSV
        output_dir (str): Directory for the SVG files

    Returns:
        int: 0 once the charts are written, 1 on an unreadable, empty or
            incomplete trajectory
    """
    try:
        _, rows = TrajectoryStore(trajectory_path).read_rows(required=CHART_COLUMNS)
    except TrajectoryFormatError as exc:
        report_error("Invalid Trajectory", f"Cannot plot {trajectory_path}", str(exc))
        return 1
    except (OSError, ValueError) as exc:
        report_error("Invalid Trajectory", f"Cannot read {trajectory_path}", str(exc))
        return 1

    try:
        paths = trajectory_charts(rows, output_dir)
    except OSError as exc:
        report_error("Output Error", f"Cannot write to {output_dir}", str(exc))
        return 1
    logger.info(f"Wrote {len(paths)} charts to {output_dir}")
    return 0
