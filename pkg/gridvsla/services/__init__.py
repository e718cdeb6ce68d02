"""Numerical services: power flow, stressing, LCI and scenario analysis."""
