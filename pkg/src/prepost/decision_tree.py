"""Macroscopic decision machinery.

Covers exhaustive history enumeration, folding a batch of (shifted)
decision projectors into an effective final-state density matrix, and the
overlap-decay experiment: every binary 50/50 decision recorded in the
boundary states multiplies the squared boundary overlap by 1/2, so the
overlap of a universe with many decisions is astronomically small.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ImpossiblePostSelectionError
from .hilbert import Operator, Projector, StateVector, basis_state, inner
from .tolerances import ATOL_CONSTRUCT, WEIGHT_FLOOR
from .two_boundary import (
    DEFAULT_HISTORY_CAP,
    History,
    TwoBoundaryProcess,
    all_amplitudes,
)

__all__ = [
    "DecisionRun",
    "FinalDensity",
    "OverlapScalingResult",
    "accumulate_final_density",
    "enumerate_histories",
    "overlap_scaling_experiment",
]


@dataclass
class DecisionRun:
    """Configuration of the overlap-decay experiment."""

    n_decisions: int
    branching_factor: int = 2
    rng: np.random.Generator = None

    def __post_init__(self):
        if not 1 <= self.n_decisions <= 30:
            raise ValueError("n_decisions must be in 1..30")
        if self.branching_factor < 2:
            raise ValueError("branching_factor must be >= 2")
        if self.rng is None:
            raise ValueError("DecisionRun requires a seeded rng")


class FinalDensity:
    """A trace-one density operator, validated on construction."""

    __slots__ = ("rho",)

    def __init__(self, rho: Operator):
        m = rho.entries
        if np.abs(m - m.conj().T).max() > ATOL_CONSTRUCT:
            raise ValueError("density matrix is not Hermitian within tolerance")
        eigvals = np.linalg.eigvalsh(m)
        if eigvals.min() < -ATOL_CONSTRUCT:
            raise ValueError("density matrix is not positive semidefinite")
        if abs(np.trace(m).real - 1.0) > ATOL_CONSTRUCT:
            raise ValueError("density matrix trace differs from 1")
        object.__setattr__(self, "rho", rho)

    def __setattr__(self, name, value):
        raise AttributeError("FinalDensity is immutable")

    @property
    def dim(self) -> int:
        return self.rho.dim


def accumulate_final_density(projections, rho0: Operator) -> FinalDensity:
    """Fold decision projectors into the final-state density matrix.

    With S the sum of the (already time-shifted) projectors, returns
    S rho0 S+ normalized to unit trace.  A complete projector set has
    S = I and leaves rho0 untouched; an over- or under-complete set
    reweights it.
    """
    projections = list(projections)
    if not projections:
        raise ValueError("need at least one projector")
    if not all(isinstance(p, Projector) for p in projections):
        raise TypeError("projections must be Projectors")
    dim = projections[0].dim
    if any(p.dim != dim for p in projections) or rho0.dim != dim:
        raise ValueError("all projectors and rho0 must share one dimension")
    s = sum(p.entries for p in projections)
    out = s @ rho0.entries @ s.conj().T
    tr = np.trace(out).real
    if tr <= 1e-12:
        raise ImpossiblePostSelectionError("decisions annihilate the state")
    return FinalDensity(Operator(out / tr))


def enumerate_histories(
    proc: TwoBoundaryProcess, cap: int = DEFAULT_HISTORY_CAP
) -> list[History]:
    """All histories of a process with amplitudes and ABL probabilities.

    Outcome tuples are enumerated lexicographically (first event most
    significant); probabilities sum to one.  Exceeding ``cap`` raises
    rather than truncating: exponential blowup must be a caller decision.
    """
    amps = all_amplitudes(proc, cap)
    weights = np.abs(amps) ** 2
    total = float(weights.sum())
    if total <= WEIGHT_FLOOR:
        raise ImpossiblePostSelectionError(
            "impossible post-selection: every history amplitude vanishes"
        )
    counts = proc.outcome_counts()
    histories = []
    for flat, (amp, w) in enumerate(zip(amps, weights)):
        outcomes = []
        rem = flat
        for c in reversed(counts):
            outcomes.append(rem % c)
            rem //= c
        outcomes.reverse()
        histories.append(
            History(tuple(outcomes), complex(amp), float(w / total))
        )
    return histories


@dataclass(frozen=True)
class OverlapScalingResult:
    """Per-decision decay of the boundary overlap.

    ``decay_base`` multiplies the squared overlap per decision (1/2 for
    binary decisions); ``amplitude_decay_base`` multiplies the bare
    amplitude (1/sqrt(2)).  Both are reported because "halved per
    decision" is ambiguous between the two readings.
    """

    decay_base: float
    amplitude_decay_base: float
    n_values: np.ndarray
    log_sq_overlaps: np.ndarray


def overlap_scaling_experiment(run: DecisionRun) -> OverlapScalingResult:
    """Measure how fast the initial/final overlap shrinks with decisions.

    Each decision contributes a factor <uniform|e_b> with |e_b> a seeded
    random basis outcome of a branching_factor-dimensional register.  The
    product structure lets overlaps accumulate factor by factor in the log
    domain, so no 2^n state is ever materialized and deep runs cannot
    underflow.  The decay base is exp(slope) of a least-squares fit of
    ln|<initial|final>|^2 against n.
    """
    b = run.branching_factor
    uniform = StateVector(np.full(b, 1.0 / np.sqrt(b), dtype=np.complex128))
    picks = run.rng.integers(0, b, size=run.n_decisions)
    log_factors = np.array(
        [np.log(abs(inner(uniform, basis_state(b, int(k))))) for k in picks]
    )
    log_amp = np.cumsum(log_factors)
    log_sq = 2.0 * log_amp
    n_values = np.arange(1, run.n_decisions + 1, dtype=np.float64)
    if run.n_decisions == 1:
        slope_sq = log_sq[0]
        slope_amp = log_amp[0]
    else:
        slope_sq = np.polyfit(n_values, log_sq, 1)[0]
        slope_amp = np.polyfit(n_values, log_amp, 1)[0]
    return OverlapScalingResult(
        decay_base=float(np.exp(slope_sq)),
        amplitude_decay_base=float(np.exp(slope_amp)),
        n_values=n_values,
        log_sq_overlaps=log_sq,
    )
