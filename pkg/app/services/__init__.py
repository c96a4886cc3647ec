"""Estimators, sliding windows and evaluation pipelines."""
