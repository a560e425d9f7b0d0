"""Kernel backend selection.

The compiled ``_ckernels`` extension is preferred; set
``INERTIA_EVAL_PURE_PYTHON=1`` to force the fallback.
"""

import os

if os.environ.get("INERTIA_EVAL_PURE_PYTHON"):
    from . import _pykernels as _impl

    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _pykernels as _impl

        BACKEND = "python"

splitmix64_fill = _impl.splitmix64_fill
splitmix64_below_fill = _impl.splitmix64_below_fill
levenshtein = _impl.levenshtein
fnv1a64 = _impl.fnv1a64
em_estep = _impl.em_estep
viterbi = _impl.viterbi

__all__ = [
    "BACKEND",
    "splitmix64_fill",
    "splitmix64_below_fill",
    "levenshtein",
    "fnv1a64",
    "em_estep",
    "viterbi",
]
