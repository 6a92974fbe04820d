#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Style Loader

This module loads the CSS stylesheet embedded in charts.
"""

from pathlib import Path

from mvflow.utils.logger import get_logger

logger = get_logger(__name__)


def load_stylesheet(stylesheet_name):
    """
    Load a CSS stylesheet by name.

    Args:
        stylesheet_name (str): Name of the stylesheet file (e.g., "chart.css")

    Returns:
        str: Contents of the stylesheet, or empty string if not found
    """
    stylesheet_path = Path(__file__).parent / stylesheet_name
    if not stylesheet_path.exists():
        logger.warning(f"Stylesheet {stylesheet_name} not found")
        return ""

    try:
        with open(stylesheet_path, 'r', encoding='utf-8') as file:
            stylesheet = file.read()
    except OSError as e:
        logger.error(f"Error loading stylesheet {stylesheet_name}: {e}")
        return ""

    logger.debug(f"Loaded stylesheet: {stylesheet_name}")
    return stylesheet
