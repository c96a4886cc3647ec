"""Balanced search trees and weighted linked lists backing the estimator."""
