#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Times every hot kernel on both backends at configurable sizes and prints a
table with speedups.  The numba path is warmed (JIT-compiled) before any
timing starts.

Usage:
    python benchmarks/compare_backends.py [--events N] [--dim D]
        [--surface N] [--samples N] [--trials N] [--repeats R]
"""

from __future__ import annotations

import argparse
import time
from dataclasses import dataclass

import numpy as np

from prepost.hilbert import Projector, make_rng, random_state, random_unitary
from prepost.kernels import get_backend_module
from prepost.two_boundary import (
    Evolve,
    Measure,
    MeasurementEvent,
    Schedule,
    TwoBoundaryProcess,
    compile_chain,
)


@dataclass
class Timing:
    kernel: str
    numpy_s: float
    numba_s: float

    @property
    def speedup(self) -> float:
        return self.numpy_s / self.numba_s


def best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def build_chain_inputs(dim: int, n_events: int):
    """A process with n_events binary measurements: 2**n_events tuples."""
    rng = make_rng(1)
    steps = []
    for _ in range(n_events):
        steps.append(Evolve(random_unitary(dim, rng)))
        u = random_unitary(dim, rng).entries
        half = dim // 2
        p0 = Projector(u[:, :half] @ u[:, :half].conj().T)
        p1 = Projector(u[:, half:] @ u[:, half:].conj().T)
        steps.append(Measure(MeasurementEvent([p0, p1])))
    proc = TwoBoundaryProcess(
        random_state(dim, rng), random_state(dim, rng), Schedule(steps)
    )
    segments, projectors, offsets = compile_chain(proc)
    return segments, projectors, offsets, proc.initial.amps, np.conj(proc.final.amps)


def main() -> None:
    parser = argparse.ArgumentParser(description="Compare kernel backends")
    parser.add_argument("--events", type=int, default=16, help="binary measurement events")
    parser.add_argument("--dim", type=int, default=4, help="Hilbert space dimension")
    parser.add_argument("--surface", type=int, default=1 << 20, help="phase-sum points")
    parser.add_argument("--samples", type=int, default=2_000_000, help="born samples")
    parser.add_argument("--trials", type=int, default=2_000_000, help="dominance trials")
    parser.add_argument("--repeats", type=int, default=3, help="best-of repeats")
    args = parser.parse_args()

    np_mod = get_backend_module("numpy")
    nb_mod = get_backend_module("numba")
    rng = make_rng(0)

    chain_args = build_chain_inputs(args.dim, args.events)
    lengths = rng.uniform(0.0, 4.0, args.surface)
    weights = np.ones(args.surface)
    gaussians = rng.standard_normal((args.samples, 4))
    draws = rng.normal(-10.0, np.sqrt(10.0), (args.trials, 2))

    cases = [
        (
            f"chain_amplitudes ({2**args.events} tuples, dim {args.dim})",
            lambda m: m.chain_amplitudes(*chain_args),
        ),
        (
            f"chain_leaf_norms ({2**args.events} tuples, dim {args.dim})",
            lambda m: m.chain_leaf_norms(*chain_args[:4]),
        ),
        (f"phase_sum ({args.surface} points)", lambda m: m.phase_sum(lengths, weights, 40.0)),
        (f"born_up_count ({args.samples} samples)", lambda m: m.born_up_count(gaussians, 0.5, 0.5)),
        (f"dominance_count ({args.trials} trials)", lambda m: m.dominance_count(draws, 2.0)),
    ]

    print("warming numba kernels (JIT compile)...")
    for _, fn in cases:
        fn(nb_mod)

    timings = []
    for name, fn in cases:
        t_np = best_of(lambda: fn(np_mod), args.repeats)
        t_nb = best_of(lambda: fn(nb_mod), args.repeats)
        timings.append(Timing(name, t_np, t_nb))

    width = max(len(t.kernel) for t in timings) + 2
    print(f"\n{'kernel':<{width}} {'numpy (s)':>12} {'numba (s)':>12} {'speedup':>9}")
    print("-" * (width + 36))
    for t in timings:
        print(f"{t.kernel:<{width}} {t.numpy_s:>12.4f} {t.numba_s:>12.4f} {t.speedup:>8.2f}x")


if __name__ == "__main__":
    main()
