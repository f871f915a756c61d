"""Exact statistics and certified constants for extreme prime-power exponents."""

try:
    from ._primexp import *  # noqa: F401,F403  (installed package layout)
    from ._primexp import __doc__  # noqa: F401
except ImportError:  # build-tree layout: the module sits directly on sys.path
    from _primexp import *  # noqa: F401,F403
    from _primexp import __doc__  # noqa: F401
