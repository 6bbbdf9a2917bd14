"""Hashing kernel backend selection.

The compiled Cython kernel and the pure-Python fallback implement the same
documented procedure and produce bit-identical output; the compiled one is
simply faster. Selection happens once at import: the extension is used when
present unless WARPGATE_PURE_PYTHON=1 forces the fallback.
"""

import os

from . import _hash_fallback

if os.environ.get("WARPGATE_PURE_PYTHON") == "1":
    _impl = _hash_fallback
    BACKEND = "fallback"
else:
    try:
        from . import _hashkernel as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _hash_fallback
        BACKEND = "fallback"

embed_sum = _impl.embed_sum
