"""GHZ-state field sensing under independent dephasing.

Thin re-export of the C++ core: decoherence rates, estimation variances,
Monte Carlo noise-trajectory checks and exposure-time scaling analysis.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
