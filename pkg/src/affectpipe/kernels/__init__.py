"""Hot-kernel backend selection.

The package ships two implementations of its inner loops: numba ``@njit``
kernels (default) and a pure-numpy fallback. ``AFFECTPIPE_BACKEND``
selects one:

    auto   use numba when importable, else numpy (default)
    numba  require numba, fail loudly if missing
    numpy  force the fallback

``benchmarks/compare_backends.py`` times the two side by side.
"""
from __future__ import annotations

import os
import warnings

_requested = os.environ.get("AFFECTPIPE_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise ValueError(
        f"AFFECTPIPE_BACKEND must be auto, numba or numpy, got {_requested!r}"
    )

if _requested == "numpy":
    from . import _numpy as _impl

    ACTIVE_BACKEND = "numpy"
elif _requested == "numba":
    from . import _numba as _impl

    ACTIVE_BACKEND = "numba"
else:
    try:
        from . import _numba as _impl

        ACTIVE_BACKEND = "numba"
    except ImportError:
        warnings.warn("numba unavailable, falling back to numpy kernels")
        from . import _numpy as _impl

        ACTIVE_BACKEND = "numpy"

pairwise_geometry = _impl.pairwise_geometry
box_mean_threshold = _impl.box_mean_threshold
convolve_replicate = _impl.convolve_replicate
gradient_nms = _impl.gradient_nms
hysteresis = _impl.hysteresis
label_components = _impl.label_components
svm_accumulate = _impl.svm_accumulate

__all__ = [
    "ACTIVE_BACKEND",
    "pairwise_geometry",
    "box_mean_threshold",
    "convolve_replicate",
    "gradient_nms",
    "hysteresis",
    "label_components",
    "svm_accumulate",
]
