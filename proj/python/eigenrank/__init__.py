"""Spectra, product tails and Coulomb-integral fitting for elliptic operators on boxes."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
