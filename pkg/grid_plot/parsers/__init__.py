"""
Case file parsers.

Each parser turns an external case format into the `Network` model.
"""

from grid_plot.parsers.matpower import RawMatpowerCase, parse_matpower, to_network
from grid_plot.parsers.pglib import pglib

__all__ = ["RawMatpowerCase", "parse_matpower", "to_network", "pglib"]
