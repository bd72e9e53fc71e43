"""Weighted backward shift dynamics on Köthe and power series spaces.

The heavy lifting lives in the C++ extension `kshift._core`; this package
re-exports its surface.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

__version__ = "0.1.0"
