"""
Inbound adapters.
"""
