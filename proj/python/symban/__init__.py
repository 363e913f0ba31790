from ._symban import *  # noqa: F401,F403
