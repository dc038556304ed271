"""Parametrically driven Tavis-Cummings model: criticality and dynamic sensing."""

from ._dtc import *  # noqa: F401,F403
from ._dtc import __version__  # noqa: F401
