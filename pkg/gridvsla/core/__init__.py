"""Core utilities shared across the analyzer."""
