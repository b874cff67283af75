"""Timing and performance instrumentation."""
