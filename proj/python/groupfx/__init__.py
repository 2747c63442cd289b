"""Least squares group effects of strongly correlated predictors."""

from groupfx._core import *  # noqa: F401,F403
from groupfx._core import __version__  # noqa: F401
