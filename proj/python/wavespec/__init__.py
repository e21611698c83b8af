"""Hurst exponent estimation for 2D self-similar signals via primal and dual
wavelet spectra.

The heavy lifting lives in the compiled extension `_wavespec`; this package
re-exports its public surface.
"""

try:
    from ._wavespec import *  # noqa: F401,F403  (installed layout)
    from ._wavespec import __doc__ as _doc
except ImportError:  # build-tree layout: extension next to the package dir
    from _wavespec import *  # noqa: F401,F403
    from _wavespec import __doc__ as _doc

__doc__ = _doc or __doc__
__version__ = "0.1.0"
