"""
Infrastructure layer - settings, thread limits and dependency wiring.
"""
