"""Singular Hessian valuations of convex functions and their toolkit."""

from . import errors
from .convexfun import *  # noqa: F401,F403
from .geometry import *  # noqa: F401,F403
from .hessmeasure import *  # noqa: F401,F403
from .polytope import Polytope  # noqa: F401
from .transforms import *  # noqa: F401,F403
from .valuations import *  # noqa: F401,F403
from .zetaspace import *  # noqa: F401,F403

__version__ = "0.1.0"
