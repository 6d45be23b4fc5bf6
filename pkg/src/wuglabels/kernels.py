"""Kernel backend selection.

The compiled extension is preferred when available; set WUGLABELS_PURE_PYTHON=1
to force the pure-Python fallback (used by the parity tests and benchmark).
"""

from __future__ import annotations

import os

if os.environ.get("WUGLABELS_PURE_PYTHON"):
    from wuglabels import _fallback as _impl

    BACKEND = "python"
else:
    try:
        from wuglabels import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        from wuglabels import _fallback as _impl

        BACKEND = "python"

lcs_length = _impl.lcs_length
hash_ngram_counts = _impl.hash_ngram_counts
