#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Charts

This module renders trajectory columns as self-contained SVG line charts.
The chart stylesheet is embedded in every file.
"""

import os
import xml.etree.ElementTree as ET

import numpy as np

from mvflow.ui.styles.style_loader import load_stylesheet
from mvflow.ui.utils.styles import (
    CHART_HEIGHT,
    CHART_MARGINS,
    CHART_WIDTH,
    DEFAULT_COLOR,
    MARKER_RADIUS,
    SERIES_COLORS,
    STYLESHEET,
    TICK_COUNT,
)
from mvflow.utils.logger import get_logger

logger = get_logger(__name__)

# Trajectory columns the standard charts need
CHART_COLUMNS = ('t', 'f_max', 'min_q1', 'min_q2', 'preserved_volume', 'pinch_ratio')


class LineChart:
    """
    A line chart with one or more series over a shared x axis.
    """

    def __init__(self, title, x_label, y_label, log_y=False):
        """
        Initialize a chart.

        Args:
            title (str): Chart title
            x_label (str): Label of the x axis
            y_label (str): Label of the y axis
            log_y (bool, optional): Logarithmic y axis; non-positive values are dropped
        """
        self.title = title
        self.x_label = x_label
        self.y_label = y_label
        self.log_y = log_y
        self.series = []
        self.notes = []

    def add_series(self, name, x, y, color=None):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        keep = np.isfinite(x) & np.isfinite(y)
        if self.log_y:
            dropped = int(np.sum(keep & (y <= 0.0)))
            keep &= y > 0.0
            if dropped:
                self.notes.append(f"{name}: {dropped} non-positive values omitted")
        self.series.append((name, x[keep], y[keep], color or SERIES_COLORS.get(name, DEFAULT_COLOR)))

    def _ranges(self):
        xs = np.concatenate([s[1] for s in self.series]) if self.series else np.array([])
        ys = np.concatenate([s[2] for s in self.series]) if self.series else np.array([])
        if self.log_y and ys.size:
            ys = np.log10(ys)
        x_range = _padded(xs)
        y_range = _padded(ys)
        return x_range, y_range

    def render(self):
        """
        Render the chart.

        Returns:
            str: SVG document
        """
        left, right, top, bottom = CHART_MARGINS
        width, height = CHART_WIDTH - left - right, CHART_HEIGHT - top - bottom
        (x0, x1), (y0, y1) = self._ranges()

        def px(x):
            return left + (x - x0) / (x1 - x0) * width

        def py(y):
            if self.log_y:
                y = np.log10(y)
            return top + height - (y - y0) / (y1 - y0) * height

        svg = ET.Element('svg', {
            'xmlns': 'http://www.w3.org/2000/svg',
            'width': str(CHART_WIDTH),
            'height': str(CHART_HEIGHT),
            'viewBox': f"0 0 {CHART_WIDTH} {CHART_HEIGHT}",
            'class': 'mvflow-chart',
        })
        style = ET.SubElement(svg, 'style')
        style.text = load_stylesheet(STYLESHEET)
        ET.SubElement(svg, 'text', {'x': str(CHART_WIDTH / 2), 'y': '24', 'text-anchor': 'middle',
                                    'class': 'chart-title'}).text = self.title

        for value in np.linspace(y0, y1, TICK_COUNT):
            y = top + height - (value - y0) / (y1 - y0) * height
            ET.SubElement(svg, 'line', {'x1': str(left), 'x2': str(left + width), 'y1': f"{y:.2f}",
                                        'y2': f"{y:.2f}", 'class': 'grid-line'})
            label = f"1e{value:.1f}" if self.log_y else f"{value:.4g}"
            ET.SubElement(svg, 'text', {'x': str(left - 6), 'y': f"{y + 3:.2f}", 'text-anchor': 'end',
                                        'class': 'tick-label'}).text = label
        for value in np.linspace(x0, x1, TICK_COUNT):
            x = px(value)
            ET.SubElement(svg, 'text', {'x': f"{x:.2f}", 'y': str(top + height + 16),
                                        'text-anchor': 'middle', 'class': 'tick-label'}).text = f"{value:.4g}"

        ET.SubElement(svg, 'line', {'x1': str(left), 'x2': str(left), 'y1': str(top),
                                    'y2': str(top + height), 'class': 'axis'})
        ET.SubElement(svg, 'line', {'x1': str(left), 'x2': str(left + width), 'y1': str(top + height),
                                    'y2': str(top + height), 'class': 'axis'})
        ET.SubElement(svg, 'text', {'x': str(left + width / 2), 'y': str(CHART_HEIGHT - 12),
                                    'text-anchor': 'middle', 'class': 'axis-label'}).text = self.x_label
        ET.SubElement(svg, 'text', {'x': '16', 'y': str(top + height / 2), 'text-anchor': 'middle',
                                    'transform': f"rotate(-90 16 {top + height / 2})",
                                    'class': 'axis-label'}).text = self.y_label

        for name, x, y, color in self.series:
            if x.size == 0:
                continue
            points = ' '.join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x, y))
            group = ET.SubElement(svg, 'g', {'id': f"series-{name}"})
            if x.size > 1:
                ET.SubElement(group, 'polyline', {'points': points, 'stroke': color, 'class': 'series'})
            else:
                ET.SubElement(group, 'circle', {'cx': f"{px(x[0]):.2f}", 'cy': f"{py(y[0]):.2f}",
                                                'r': str(MARKER_RADIUS), 'fill': color,
                                                'class': 'marker'})
        for i, note in enumerate(self.notes):
            ET.SubElement(svg, 'text', {'x': str(left + 4), 'y': str(top + 12 + 12 * i),
                                        'class': 'note'}).text = note

        return ET.tostring(svg, encoding='unicode')

    def save(self, path):
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(self.render())
        logger.debug(f"Chart written to {path}")
        return path


def _padded(values):
    """Axis range with a margin; degenerate ranges are widened."""
    if values.size == 0:
        return 0.0, 1.0
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi - lo <= 1e-12 * max(abs(lo), abs(hi), 1.0):
        pad = 0.5 * max(abs(lo), 1.0) if lo == hi else 0.5 * (hi - lo)
        return lo - pad, hi + pad
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def trajectory_charts(rows, output_dir):
    """
    Write the four standard charts of a trajectory.

    Args:
        rows (list): Trajectory rows as dictionaries with CHART_COLUMNS
        output_dir (str): Directory for the SVG files

    Returns:
        list: Paths of f_max.svg, min_q.svg, volume_drift.svg and pinch_ratio.svg
    """
    if not os.path.exists(output_dir):
        os.makedirs(output_dir)
    t = np.array([row['t'] for row in rows])

    def column(name):
        return np.array([row[name] for row in rows])

    volume = column('preserved_volume')
    charts = {
        'f_max.svg': LineChart("Umbilicity deficit", "t", "max f (log)", log_y=True),
        'min_q.svg': LineChart("Pinching quantities", "t", "min Q"),
        'volume_drift.svg': LineChart("Preserved mixed volume drift", "t", "(V - V(0)) / V(0)"),
        'pinch_ratio.svg': LineChart("Curvature pinching", "t", "max lambda_n / lambda_1"),
    }
    charts['f_max.svg'].add_series('f_max', t, column('f_max'))
    charts['min_q.svg'].add_series('min_q1', t, column('min_q1'))
    charts['min_q.svg'].add_series('min_q2', t, column('min_q2'))
    charts['volume_drift.svg'].add_series('volume_drift', t, (volume - volume[0]) / volume[0])
    charts['pinch_ratio.svg'].add_series('pinch_ratio', t, column('pinch_ratio'))

    return [chart.save(os.path.join(output_dir, name)) for name, chart in charts.items()]
