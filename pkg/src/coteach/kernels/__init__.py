"""Block-solver backends: compiled extension if built, numpy otherwise.

The active backend is chosen once at import time.  Set ``COTEACH_KERNEL``
to ``python`` or ``cython`` to force a choice (``cython`` raises if the
extension is missing); the default ``auto`` prefers the compiled kernel.
"""

import os

from . import _block_py

_FORCED = os.environ.get("COTEACH_KERNEL", "auto").lower()

_BACKENDS = {"python": _block_py.solve_block}
try:
    from . import _block_cy

    _BACKENDS["cython"] = _block_cy.solve_block
except ImportError:
    if _FORCED == "cython":
        raise

if _FORCED == "auto":
    _ACTIVE = "cython" if "cython" in _BACKENDS else "python"
elif _FORCED in _BACKENDS:
    _ACTIVE = _FORCED
else:
    raise ValueError(
        f"COTEACH_KERNEL={_FORCED!r} not recognized; use auto, python, or cython"
    )

solve_block = _BACKENDS[_ACTIVE]


def active_backend():
    return _ACTIVE


def available_backends():
    return tuple(sorted(_BACKENDS))


def get_backend(name):
    return _BACKENDS[name]
