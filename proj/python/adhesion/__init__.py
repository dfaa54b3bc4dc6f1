"""Viscous and inviscid adhesion dynamics: Hopf-Lax and Cole-Hopf fields, sticky flows, three-sector oracle."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
