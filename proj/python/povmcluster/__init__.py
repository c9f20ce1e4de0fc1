"""POVM-augmented cluster-state computation simulator."""

from ._povmcluster import *  # noqa: F401,F403
from ._povmcluster import __doc__, __version__  # noqa: F401
