#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Flow Package

This package provides the time-stepping engine of the flow.
"""
