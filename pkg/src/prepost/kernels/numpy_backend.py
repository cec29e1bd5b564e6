"""Pure-numpy kernel implementations.

The enumeration kernels sweep a breadth-first frontier: one row per
partial outcome tuple, expanded at every measurement event.  Memory grows
with the number of tuples, so callers enforce the enumeration cap.
"""

from __future__ import annotations

import numpy as np


def _frontier(segments, projectors, offsets, initial):
    n_events = offsets.shape[0] - 1
    d = initial.shape[0]
    frontier = (segments[0] @ initial)[None, :]
    for i in range(n_events):
        block = projectors[offsets[i] : offsets[i + 1]]
        # (B,d,d) x (n,d) -> (n,B,d): child rows ordered with the earlier
        # event's outcome most significant, i.e. lexicographic tuples.
        frontier = np.einsum("bij,nj->nbi", block, frontier).reshape(-1, d)
        frontier = frontier @ segments[i + 1].T
    return frontier


def chain_amplitudes(segments, projectors, offsets, initial, final_conj):
    return _frontier(segments, projectors, offsets, initial) @ final_conj


def chain_leaf_norms(segments, projectors, offsets, initial):
    frontier = _frontier(segments, projectors, offsets, initial)
    return np.einsum("nd,nd->n", frontier.conj(), frontier).real


def phase_sum(path_lengths, weights, wavenumber):
    return complex(np.sum(weights * np.exp(1j * wavenumber * path_lengths)))


def born_up_count(gaussians, up_scale, down_scale):
    b0_sq = gaussians[:, 0] ** 2 + gaussians[:, 1] ** 2
    b1_sq = gaussians[:, 2] ** 2 + gaussians[:, 3] ** 2
    norm = b0_sq + b1_sq
    w_up = up_scale * (b0_sq / norm)
    w_down = down_scale * (b1_sq / norm)
    return int(np.count_nonzero(w_up > w_down))


def dominance_count(log_weights, margin):
    ordered = np.sort(log_weights, axis=1)
    return int(np.count_nonzero(ordered[:, -1] - ordered[:, -2] >= margin))
