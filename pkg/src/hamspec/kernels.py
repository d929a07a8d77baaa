"""Backend selection for the hot loops.

The compiled extension ``hamspec._ckernels`` is used when it imports;
otherwise the numpy versions in ``hamspec._pykernels`` take over. Setting
``HAMSPEC_PURE_PYTHON=1`` forces the fallback.
"""

import os

from . import _pykernels

_impl = _pykernels
if not os.environ.get("HAMSPEC_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _pykernels

BACKEND = _impl.BACKEND

fwht = _impl.fwht
distance_histogram = _impl.distance_histogram
distance_matrix = _impl.distance_matrix
close_pair_mask = _impl.close_pair_mask
common_neighbor_stats = _impl.common_neighbor_stats


def backends():
    """Every importable backend module, compiled first."""
    mods = []
    try:
        from . import _ckernels

        mods.append(_ckernels)
    except ImportError:
        pass
    mods.append(_pykernels)
    return mods
