"""Interval typings for compositional flow networks."""
