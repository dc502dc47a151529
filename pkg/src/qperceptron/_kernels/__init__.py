"""Kernel backend selection.

Two interchangeable implementations of the numeric hot spots exist: a
compiled Cython extension (``_ckernels``) and a numpy fallback (``pure``).
The active one is chosen once at import time:

* ``QPERCEPTRON_KERNELS=c``     require the compiled extension, fail if absent
* ``QPERCEPTRON_KERNELS=pure``  force the numpy fallback
* unset or ``auto``             compiled if importable, else fallback

``BACKEND`` names the active implementation ("c" or "pure").  The module
re-exports ``expectation``, ``accumulate_outer`` and ``draw_outcomes`` from
whichever backend won.
"""

from __future__ import annotations

import os

from . import pure


def _select():
    choice = os.environ.get("QPERCEPTRON_KERNELS", "auto").lower()
    if choice not in ("auto", "c", "pure"):
        raise ValueError(
            f"QPERCEPTRON_KERNELS must be 'auto', 'c' or 'pure', got {choice!r}"
        )
    if choice == "pure":
        return pure
    try:
        from . import _ckernels
    except ImportError:
        if choice == "c":
            raise ImportError(
                "QPERCEPTRON_KERNELS=c but the compiled kernel extension is "
                "not built; run 'python setup.py build_ext --inplace' or "
                "reinstall the package"
            ) from None
        return pure
    return _ckernels


_impl = _select()

BACKEND: str = _impl.BACKEND_NAME
expectation = _impl.expectation
accumulate_outer = _impl.accumulate_outer
draw_outcomes = _impl.draw_outcomes

__all__ = ["BACKEND", "expectation", "accumulate_outer", "draw_outcomes", "pure"]
