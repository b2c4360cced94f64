"""Experiment runners binding the numerical engines to output files."""
