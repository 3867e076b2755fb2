"""Fault detection for parallel-connected battery strings."""

from ._parafault import *  # noqa: F401,F403
from ._parafault import __doc__  # noqa: F401

__version__ = "0.1.0"
