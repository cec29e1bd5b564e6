"""Numba-compiled kernel implementations.

The enumeration kernels walk the outcome tree depth-first with an
odometer over outcome digits, reusing shared prefixes; memory stays at
O(events * dim) regardless of how many tuples are enumerated.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _matvec(a, x, out):
    d = a.shape[0]
    for r in range(d):
        s = 0.0 + 0.0j
        for c in range(d):
            s += a[r, c] * x[c]
        out[r] = s


@njit(cache=True)
def chain_amplitudes(segments, projectors, offsets, initial, final_conj):
    n_events = offsets.shape[0] - 1
    d = initial.shape[0]
    counts = np.empty(n_events, np.int64)
    n_total = 1
    for i in range(n_events):
        counts[i] = offsets[i + 1] - offsets[i]
        n_total *= counts[i]
    amps = np.empty(n_total, np.complex128)
    states = np.empty((n_events + 1, d), np.complex128)
    tmp = np.empty(d, np.complex128)
    _matvec(segments[0], initial, states[0])
    digits = np.zeros(n_events, np.int64)
    depth = 0
    t = 0
    while True:
        for i in range(depth, n_events):
            _matvec(projectors[offsets[i] + digits[i]], states[i], tmp)
            _matvec(segments[i + 1], tmp, states[i + 1])
        acc = 0.0 + 0.0j
        for j in range(d):
            acc += final_conj[j] * states[n_events, j]
        amps[t] = acc
        t += 1
        # odometer increment; `depth` marks the shallowest changed digit
        i = n_events - 1
        while i >= 0 and digits[i] == counts[i] - 1:
            digits[i] = 0
            i -= 1
        if i < 0:
            break
        digits[i] += 1
        depth = i
    return amps


@njit(cache=True)
def chain_leaf_norms(segments, projectors, offsets, initial):
    n_events = offsets.shape[0] - 1
    d = initial.shape[0]
    counts = np.empty(n_events, np.int64)
    n_total = 1
    for i in range(n_events):
        counts[i] = offsets[i + 1] - offsets[i]
        n_total *= counts[i]
    norms = np.empty(n_total, np.float64)
    states = np.empty((n_events + 1, d), np.complex128)
    tmp = np.empty(d, np.complex128)
    _matvec(segments[0], initial, states[0])
    digits = np.zeros(n_events, np.int64)
    depth = 0
    t = 0
    while True:
        for i in range(depth, n_events):
            _matvec(projectors[offsets[i] + digits[i]], states[i], tmp)
            _matvec(segments[i + 1], tmp, states[i + 1])
        acc = 0.0
        for j in range(d):
            v = states[n_events, j]
            acc += v.real * v.real + v.imag * v.imag
        norms[t] = acc
        t += 1
        i = n_events - 1
        while i >= 0 and digits[i] == counts[i] - 1:
            digits[i] = 0
            i -= 1
        if i < 0:
            break
        digits[i] += 1
        depth = i
    return norms


@njit(cache=True)
def phase_sum(path_lengths, weights, wavenumber):
    acc = 0.0 + 0.0j
    for i in range(path_lengths.shape[0]):
        phase = wavenumber * path_lengths[i]
        acc += weights[i] * complex(np.cos(phase), np.sin(phase))
    return acc


@njit(cache=True)
def born_up_count(gaussians, up_scale, down_scale):
    count = 0
    for i in range(gaussians.shape[0]):
        b0_sq = gaussians[i, 0] ** 2 + gaussians[i, 1] ** 2
        b1_sq = gaussians[i, 2] ** 2 + gaussians[i, 3] ** 2
        norm = b0_sq + b1_sq
        w_up = up_scale * (b0_sq / norm)
        w_down = down_scale * (b1_sq / norm)
        if w_up > w_down:
            count += 1
    return count


@njit(cache=True)
def dominance_count(log_weights, margin):
    trials, k = log_weights.shape
    count = 0
    for t in range(trials):
        top = log_weights[t, 0]
        second = log_weights[t, 1]
        if second > top:
            top, second = second, top
        for j in range(2, k):
            v = log_weights[t, j]
            if v > top:
                second = top
                top = v
            elif v > second:
                second = v
        if top - second >= margin:
            count += 1
    return count
