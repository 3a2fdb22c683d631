"""Exact and numerical studies of the Mobius/step-function convolution.

The heavy lifting lives in the compiled extension ``munu._core``; everything
it exports is re-exported here.
"""

from munu._core import *  # noqa: F401,F403
from munu._core import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
__doc__ = (__doc__ or "") + "\n\n" + (_core_doc or "")
