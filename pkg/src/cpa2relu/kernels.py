"""Kernel backend selection.

Imports the compiled extension when it is built and falls back to the
pure-Python twin otherwise.  CPA2RELU_PURE=1 forces the fallback, which
the benchmark and the backend-agreement tests use.
"""
import os

if os.environ.get("CPA2RELU_PURE") == "1":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
rat_reduce = _impl.rat_reduce
line_sign = _impl.line_sign
eval_terms = _impl.eval_terms
forward_layers = _impl.forward_layers
