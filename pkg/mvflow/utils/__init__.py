#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
MVFlow - Utilities Package

This package provides logging and error handling for the MVFlow package.
"""
