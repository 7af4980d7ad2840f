"""Entry point for `python -m conic_split`."""
import sys

from conic_split.adapters.inbound.cli import main

sys.exit(main())
