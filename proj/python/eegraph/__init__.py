"""EEG connectivity graphs: transformer edge prediction, judge-based edge
refinement, and graph benchmark metrics."""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
