"""Exact, asymptotic and simulated laws of distances in random binary tries."""
import os as _os

# TRIE_LAB_THREADS caps BLAS threads; it must be set before numpy loads
_threads = _os.environ.get("TRIE_LAB_THREADS", "")
if _threads.isdigit() and int(_threads) > 0:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ[_var] = _threads

from .errors import (  # noqa: E402
    DepthCapExceeded, DomainError, GammaPoleError, IndistinguishableKeysError,
    InsufficientBitsError, QuadratureError, TrieLabError,
)

__version__ = "0.1.0"
