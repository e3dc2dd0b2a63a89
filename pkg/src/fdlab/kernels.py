"""Kernel selection: compiled Cython extension if available, numpy otherwise.

Set ``FDLAB_PURE_PYTHON=1`` to force the numpy fallback (used by the
benchmark and for debugging). ``USING_COMPILED`` records the choice.
"""
from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("FDLAB_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
    USING_COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        USING_COMPILED = True
    except ImportError:
        _impl = _kernels_py
        USING_COMPILED = False

echo_traces = _impl.echo_traces
echo_operator = _impl.echo_operator
