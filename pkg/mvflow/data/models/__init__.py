#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Data Models

This module provides data models for the MVFlow package.
"""

from .flow_config import FlowConfig
from .monitor_record import MonitorRecord
from .run_manifest import RunManifest

__all__ = ['FlowConfig', 'MonitorRecord', 'RunManifest']
