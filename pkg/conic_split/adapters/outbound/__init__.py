"""
Outbound adapters.
"""
