"""Metric-adjusted skew information, conical 2-design GEAMs, and entanglement tests."""
