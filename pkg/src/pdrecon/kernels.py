"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the numpy
fallback.  Setting ``PDRECON_PURE=1`` forces the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
impl = _pykernels

if os.environ.get("PDRECON_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:  # extension not built
        pass

closure = impl.closure
closure_many = impl.closure_many
xset_table = impl.xset_table
xsets_of_size = impl.xsets_of_size
tar_connectivity = impl.tar_connectivity

DOM, PD, ZF = _pykernels.DOM, _pykernels.PD, _pykernels.ZF
