#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Data Package

This package provides the run models and the CSV file stores.
"""
