from ._stkit import *  # noqa: F401,F403
from ._stkit import __version__  # noqa: F401
