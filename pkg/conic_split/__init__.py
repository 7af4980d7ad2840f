"""
conic_split - first-order conic solver with adaptive conditioning.

Layered the hexagonal way: `domain` holds the numerics, `application` the
use cases, `adapters` the CLI and file formats, `infrastructure` settings
and wiring.
"""

__version__ = "0.3.0"
