"""Kernel selection: compiled Cython core when available, pure Python otherwise.

Set ``PARITYSI_PURE=1`` to force the fallback. :func:`use` swaps the active
implementation at runtime (tests and the kernel benchmark use it).
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

IMPLEMENTATIONS = {"python": _pykernels}
if _ckernels is not None:
    IMPLEMENTATIONS["cython"] = _ckernels

if _ckernels is not None and not os.environ.get("PARITYSI_PURE"):
    impl = _ckernels
    name = "cython"
else:
    impl = _pykernels
    name = "python"


def use(which: str):
    """Activate the named implementation and return the previous name."""
    global impl, name
    if which not in IMPLEMENTATIONS:
        raise ValueError(f"kernel implementation {which!r} is not available")
    previous = name
    impl = IMPLEMENTATIONS[which]
    name = which
    return previous
