"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``ABRP_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels as python

compiled = None
if os.environ.get("ABRP_PURE_PYTHON") != "1":
    try:
        from . import _kernels as compiled
    except ImportError:
        compiled = None

_active = compiled if compiled is not None else python

IMPLEMENTATION = _active.IMPLEMENTATION
partition_search = _active.partition_search
held_karp = _active.held_karp
two_opt = _active.two_opt
or_opt = _active.or_opt


def backends():
    """Available kernel modules keyed by implementation name."""
    out = {"python": python}
    if compiled is not None:
        out["compiled"] = compiled
    return out
