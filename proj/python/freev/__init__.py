"""FreeV vocoder signal processing toolkit (C++ core)."""

from ._freev import *  # noqa: F401,F403
from ._freev import __doc__  # noqa: F401
