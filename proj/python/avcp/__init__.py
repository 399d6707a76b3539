"""Quantum models of classical measurement arrangements.

Thin python surface over the C++ core: operator/measurement primitives,
symbolic bracket and quantization helpers, arrangement averages, and the
module verification suites.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
