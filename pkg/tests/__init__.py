"""Test suite for the sliding-window AUC toolkit."""
