#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - UI Package

This package renders run trajectories as self-contained SVG charts.
"""
