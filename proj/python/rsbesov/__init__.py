"""Besov-space regularity structures on periodic dyadic grids."""

from ._rsbesov import *  # noqa: F401,F403
from ._rsbesov import __version__, rng_id  # noqa: F401

inf = float("inf")
