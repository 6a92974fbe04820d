#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Analysis Package

This package provides run monitors, audits and decay fitting.
"""
