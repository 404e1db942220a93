"""Multi-frequency Calderon-Zygmund laboratory on the discrete torus.

Thin python surface over the C++ core: grids and spectral transforms, dyadic
machinery, Muckenhoupt weights, multiplier operators, the multi-frequency
decomposition, sparse domination, and the verification suites.
"""

try:
    from ._mfcz import *  # noqa: F401,F403  (installed wheel layout)
    from ._mfcz import __doc__ as _core_doc
except ImportError:  # in-tree builds put _mfcz directly on sys.path
    from _mfcz import *  # noqa: F401,F403
    from _mfcz import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
