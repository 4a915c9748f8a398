"""Cone target-defense game."""

from ._conedef import *  # noqa: F401,F403
from ._conedef import __doc__  # noqa: F401
