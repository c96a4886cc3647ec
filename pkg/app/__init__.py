"""Sliding-window approximate AUC toolkit."""
