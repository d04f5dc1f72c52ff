"""Batch experiment driver."""

from .main import cli

__all__ = ['cli']
