#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Chart Styles Module

This module defines consistent chart geometry and series colours.
"""

# Canvas size in pixels
CHART_WIDTH = 640
CHART_HEIGHT = 400

# Plot-area margins: left, right, top, bottom
CHART_MARGINS = (72, 24, 40, 52)

TICK_COUNT = 5

STYLESHEET = "chart.css"

# Series colours by quantity
SERIES_COLORS = {
    "f_max": "#1565C0",
    "min_q1": "#2E7D32",
    "min_q2": "#EF6C00",
    "volume_drift": "#6A1B9A",
    "pinch_ratio": "#C62828",
}

DEFAULT_COLOR = "#424242"

MARKER_RADIUS = 2.5
