"""Gossip-based frequent item mining over Space-Saving summaries."""

from ._p2pss import *  # noqa: F401,F403
from ._p2pss import __doc__  # noqa: F401
