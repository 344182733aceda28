"""Planar rigid-body contact simulation with learned stochastic residuals."""

from ._resim import *  # noqa: F401,F403
from ._resim import __doc__  # noqa: F401
