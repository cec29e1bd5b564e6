"""Hot numeric kernels with two interchangeable backends.

The numba backend JIT-compiles the inner loops; the numpy backend is a
pure-vectorized fallback.  Selection happens once at import time from the
``PREPOST_BACKEND`` environment variable:

    PREPOST_BACKEND=auto    use numba when importable, else numpy (default)
    PREPOST_BACKEND=numba   require numba, fail loudly if unavailable
    PREPOST_BACKEND=numpy   force the pure-numpy path

Both backends implement the same functions on the same array layouts and
agree to float rounding; ``benchmarks/compare_backends.py`` times them
against each other.
"""

from __future__ import annotations

import os

import numpy as np

from . import numpy_backend

__all__ = [
    "active_backend",
    "chain_amplitudes",
    "chain_leaf_norms",
    "phase_sum",
    "born_up_count",
    "dominance_count",
    "get_backend_module",
]

_CHOICES = ("auto", "numba", "numpy")
_requested = os.environ.get("PREPOST_BACKEND", "auto").lower()
if _requested not in _CHOICES:
    raise ValueError(
        f"PREPOST_BACKEND={_requested!r} is not one of {_CHOICES}"
    )

_impl = None
if _requested in ("auto", "numba"):
    try:
        from . import numba_backend as _impl
    except ImportError:
        if _requested == "numba":
            raise
        _impl = None
if _impl is None:
    _impl = numpy_backend

_BACKEND_NAME = "numpy" if _impl is numpy_backend else "numba"


def active_backend() -> str:
    """Name of the backend selected at import time ('numba' or 'numpy')."""
    return _BACKEND_NAME


def get_backend_module(name: str):
    """Fetch a backend module by name, for equivalence tests and benchmarks."""
    if name == "numpy":
        return numpy_backend
    if name == "numba":
        from . import numba_backend

        return numba_backend
    raise ValueError(f"unknown backend {name!r}")


def _chain_args(segments, projectors, offsets, vec):
    segments = np.ascontiguousarray(segments, dtype=np.complex128)
    projectors = np.ascontiguousarray(projectors, dtype=np.complex128)
    offsets = np.ascontiguousarray(offsets, dtype=np.int64)
    vec = np.ascontiguousarray(vec, dtype=np.complex128)
    return segments, projectors, offsets, vec


def chain_amplitudes(segments, projectors, offsets, initial, final) -> np.ndarray:
    """Boundary-to-boundary amplitudes for every outcome tuple.

    ``segments`` is an (m+1, d, d) stack of unitary products between
    measurement events (segment 0 acts first); ``projectors`` stacks all
    event projectors, event i owning rows offsets[i]:offsets[i+1].  The
    returned complex array enumerates outcome tuples in lexicographic
    order with the first event's outcome most significant.
    """
    segments, projectors, offsets, initial = _chain_args(
        segments, projectors, offsets, initial
    )
    final_conj = np.ascontiguousarray(np.conj(final), dtype=np.complex128)
    return _impl.chain_amplitudes(segments, projectors, offsets, initial, final_conj)


def chain_leaf_norms(segments, projectors, offsets, initial) -> np.ndarray:
    """Squared norms of the post-schedule branch states, one per outcome tuple.

    Equals the total squared amplitude summed over any complete orthonormal
    basis of final states; tuple ordering matches :func:`chain_amplitudes`.
    """
    segments, projectors, offsets, initial = _chain_args(
        segments, projectors, offsets, initial
    )
    return _impl.chain_leaf_norms(segments, projectors, offsets, initial)


def phase_sum(path_lengths, weights, wavenumber: float) -> complex:
    """Weighted coherent sum of free-propagation phases exp(i*k*length)."""
    path_lengths = np.ascontiguousarray(path_lengths, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    if path_lengths.shape != weights.shape:
        raise ValueError("path_lengths and weights must have matching shapes")
    return complex(_impl.phase_sum(path_lengths, weights, float(wavenumber)))


def born_up_count(gaussians, up_scale: float, down_scale: float) -> int:
    """Count samples whose 'up' matched weight beats the 'down' one.

    Each row of ``gaussians`` holds four standard normals building one
    isotropically random border qubit (re0, im0, re1, im1); the branch
    weights are up_scale*|b0|^2 and down_scale*|b1|^2 after normalization.
    """
    gaussians = np.ascontiguousarray(gaussians, dtype=np.float64)
    if gaussians.ndim != 2 or gaussians.shape[1] != 4:
        raise ValueError("gaussians must have shape (samples, 4)")
    return int(_impl.born_up_count(gaussians, float(up_scale), float(down_scale)))


def dominance_count(log_weights, margin: float) -> int:
    """Count rows whose largest entry beats the runner-up by >= margin."""
    log_weights = np.ascontiguousarray(log_weights, dtype=np.float64)
    if log_weights.ndim != 2 or log_weights.shape[1] < 2:
        raise ValueError("log_weights must have shape (trials, k>=2)")
    return int(_impl.dominance_count(log_weights, float(margin)))
