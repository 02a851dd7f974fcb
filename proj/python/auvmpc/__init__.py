"""Energy-optimal surge control for a small AUV (C++ core)."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
