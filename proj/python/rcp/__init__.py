from ._rcp import *  # noqa: F401,F403
from ._rcp import __doc__  # noqa: F401
