"""Motivic integration on SNC models, checked against finite-field point counts."""
from .errors import *  # noqa: F401,F403
from .motive_ring import *  # noqa: F401,F403
from .geometry import *  # noqa: F401,F403
from .jets import *  # noqa: F401,F403
from .integrator import *  # noqa: F401,F403
from .counting_oracle import *  # noqa: F401,F403

__version__ = "0.1.0"
