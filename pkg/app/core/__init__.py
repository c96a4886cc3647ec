"""Core components: errors and exact AUC oracles."""
