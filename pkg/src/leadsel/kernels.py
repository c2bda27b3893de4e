"""Kernel backend selection.

The compiled extension ``_ckernels`` is used when it imports; otherwise the
pure-Python ``_pykernels`` module is used.  Setting ``LEADSEL_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _pykernels

MEDIAN = _pykernels.MEDIAN
CENTER = _pykernels.CENTER
CENTER_WEIGHTED = _pykernels.CENTER_WEIGHTED
CENTER_WEIGHTED_CORRECTED = _pykernels.CENTER_WEIGHTED_CORRECTED

_impl = _pykernels
BACKEND = "python"
if os.environ.get("LEADSEL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

prufer_decode = _impl.prufer_decode
protocol_round = _impl.protocol_round
transfer = _impl.transfer
run_rounds = _impl.run_rounds
tree_distances = _impl.tree_distances


def backends() -> dict:
    """Every importable backend by name; used by the benchmark and parity tests."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
