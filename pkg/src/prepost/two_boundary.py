"""Two-state-vector engine.

A process is pinned at both ends: an initial boundary state, an ordered
schedule of unitary evolutions and projective measurement events, and a
final boundary state.  A history fixes one outcome per measurement event;
its amplitude is the boundary-to-boundary chain

    <final| (last step) ... (projector or unitary) ... (first step) |initial>

and its probability follows the Aharonov-Bergmann-Lebowitz rule: squared
amplitude normalized over every outcome tuple of the process.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DimensionMismatchError,
    EmptyBranchError,
    EnumerationCapError,
    ImpossiblePostSelectionError,
)
from .hilbert import Projector, StateVector, Unitary
from .tolerances import ATOL_CONSTRUCT, WEIGHT_FLOOR

__all__ = [
    "MeasurementEvent",
    "Evolve",
    "Measure",
    "Schedule",
    "TwoBoundaryProcess",
    "History",
    "DEFAULT_HISTORY_CAP",
    "history_amplitude",
    "history_probability",
    "total_weight",
    "basis_averaged_probabilities",
    "shift_projection",
    "collapse",
    "computational_event",
    "two_outcome_event",
]

DEFAULT_HISTORY_CAP = 2**20


class MeasurementEvent:
    """A complete set of pairwise-orthogonal projectors.

    Completeness is required so that summing probabilities over outcomes is
    meaningful; a partial measurement is expressed by listing the
    complement projector explicitly.
    """

    __slots__ = ("projectors",)

    def __init__(self, projectors):
        projectors = tuple(projectors)
        if not projectors:
            raise ValueError("a measurement event needs at least one projector")
        if not all(isinstance(p, Projector) for p in projectors):
            raise TypeError("measurement outcomes must be Projectors")
        dim = projectors[0].dim
        if any(p.dim != dim for p in projectors):
            raise DimensionMismatchError("all projectors must share one dimension")
        for i in range(len(projectors)):
            for j in range(i + 1, len(projectors)):
                prod = projectors[i].entries @ projectors[j].entries
                if np.abs(prod).max() > ATOL_CONSTRUCT:
                    raise ValueError(f"projectors {i} and {j} are not orthogonal")
        total = sum(p.entries for p in projectors)
        if np.abs(total - np.eye(dim)).max() > ATOL_CONSTRUCT:
            raise ValueError("projectors do not sum to the identity")
        object.__setattr__(self, "projectors", projectors)

    def __setattr__(self, name, value):
        raise AttributeError("MeasurementEvent is immutable")

    @property
    def dim(self) -> int:
        return self.projectors[0].dim

    @property
    def n_outcomes(self) -> int:
        return len(self.projectors)


@dataclass(frozen=True)
class Evolve:
    op: Unitary

    def __post_init__(self):
        if not isinstance(self.op, Unitary):
            raise TypeError("Evolve requires a Unitary operator")


@dataclass(frozen=True)
class Measure:
    event: MeasurementEvent

    def __post_init__(self):
        if not isinstance(self.event, MeasurementEvent):
            raise TypeError("Measure requires a MeasurementEvent")


def _step_dim(step) -> int:
    if isinstance(step, Evolve):
        return step.op.dim
    if isinstance(step, Measure):
        return step.event.dim
    raise TypeError(f"schedule steps must be Evolve or Measure, got {type(step)}")


class Schedule:
    """Ordered alternation of unitary evolutions and measurement events."""

    __slots__ = ("steps",)

    def __init__(self, steps=()):
        steps = tuple(steps)
        dims = {_step_dim(s) for s in steps}
        if len(dims) > 1:
            raise DimensionMismatchError(f"schedule mixes dimensions {sorted(dims)}")
        object.__setattr__(self, "steps", steps)

    def __setattr__(self, name, value):
        raise AttributeError("Schedule is immutable")

    @property
    def dim(self):
        """Common dimension of the steps, or None for an empty schedule."""
        return _step_dim(self.steps[0]) if self.steps else None

    @property
    def measure_steps(self) -> tuple[MeasurementEvent, ...]:
        return tuple(s.event for s in self.steps if isinstance(s, Measure))

    @property
    def n_measurements(self) -> int:
        return sum(1 for s in self.steps if isinstance(s, Measure))


class TwoBoundaryProcess:
    """Initial boundary, schedule, final boundary."""

    __slots__ = ("initial", "final", "schedule")

    def __init__(self, initial: StateVector, final: StateVector, schedule: Schedule):
        if not isinstance(schedule, Schedule):
            schedule = Schedule(schedule)
        if initial.dim != final.dim:
            raise DimensionMismatchError("initial and final dimensions differ")
        if schedule.dim is not None and schedule.dim != initial.dim:
            raise DimensionMismatchError("schedule dimension differs from boundaries")
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "final", final)
        object.__setattr__(self, "schedule", schedule)

    def __setattr__(self, name, value):
        raise AttributeError("TwoBoundaryProcess is immutable")

    @property
    def dim(self) -> int:
        return self.initial.dim

    def outcome_counts(self) -> tuple[int, ...]:
        return tuple(e.n_outcomes for e in self.schedule.measure_steps)

    def n_histories(self) -> int:
        n = 1
        for c in self.outcome_counts():
            n *= c
        return n


@dataclass(frozen=True)
class History:
    """One outcome index per measurement event, with amplitude and probability."""

    outcomes: tuple[int, ...]
    amplitude: complex
    probability: float


def compile_chain(proc: TwoBoundaryProcess):
    """Flatten a process into kernel arrays.

    Returns (segments, projectors, offsets): segments[i] is the product of
    the unitaries between measurement events i-1 and i (identity when none),
    projectors stacks every event's outcome projectors, and offsets marks
    each event's slice.
    """
    d = proc.dim
    segments = []
    projectors = []
    offsets = [0]
    current = np.eye(d, dtype=np.complex128)
    for step in proc.schedule.steps:
        if isinstance(step, Evolve):
            current = step.op.entries @ current
        else:
            segments.append(current)
            current = np.eye(d, dtype=np.complex128)
            for p in step.event.projectors:
                projectors.append(p.entries)
            offsets.append(len(projectors))
    segments.append(current)
    seg_arr = np.stack(segments)
    proj_arr = (
        np.stack(projectors)
        if projectors
        else np.zeros((0, d, d), dtype=np.complex128)
    )
    return seg_arr, proj_arr, np.asarray(offsets, dtype=np.int64)


def _check_outcomes(proc: TwoBoundaryProcess, outcomes) -> tuple[int, ...]:
    events = proc.schedule.measure_steps
    outcomes = tuple(int(k) for k in outcomes)
    if len(outcomes) != len(events):
        raise ValueError(
            f"expected {len(events)} outcome indices, got {len(outcomes)}"
        )
    for k, event in zip(outcomes, events):
        if not 0 <= k < event.n_outcomes:
            raise IndexError(
                f"outcome index {k} out of range for event with "
                f"{event.n_outcomes} outcomes"
            )
    return outcomes


def _check_cap(proc: TwoBoundaryProcess, cap: int) -> int:
    n = proc.n_histories()
    if n > cap:
        raise EnumerationCapError(
            f"{n} outcome tuples exceed the enumeration cap {cap}; "
            f"rerun with cap={n} to enumerate them all"
        )
    return n


def history_amplitude(proc: TwoBoundaryProcess, outcomes) -> complex:
    """Chain amplitude <final| ... |initial> for one outcome tuple.

    Evaluated by a single left-to-right sweep along the schedule; this is
    the bare amplitude, not a probability.
    """
    outcomes = _check_outcomes(proc, outcomes)
    v = proc.initial.amps
    it = iter(outcomes)
    for step in proc.schedule.steps:
        if isinstance(step, Evolve):
            v = step.op.entries @ v
        else:
            v = step.event.projectors[next(it)].entries @ v
    return complex(np.vdot(proc.final.amps, v))


def all_amplitudes(proc: TwoBoundaryProcess, cap: int = DEFAULT_HISTORY_CAP) -> np.ndarray:
    """Amplitudes of every outcome tuple, lexicographic order."""
    _check_cap(proc, cap)
    segments, projectors, offsets = compile_chain(proc)
    return kernels.chain_amplitudes(
        segments, projectors, offsets, proc.initial.amps, proc.final.amps
    )


def total_weight(proc: TwoBoundaryProcess, cap: int = DEFAULT_HISTORY_CAP) -> float:
    """Sum of squared history amplitudes over all outcome tuples."""
    amps = all_amplitudes(proc, cap)
    return float(np.sum(np.abs(amps) ** 2))


def history_probability(
    proc: TwoBoundaryProcess, outcomes, cap: int = DEFAULT_HISTORY_CAP
) -> float:
    """Aharonov-Bergmann-Lebowitz probability of one outcome tuple.

    |amplitude|^2 normalized over every outcome tuple of the process; the
    bare amplitude ratio is available via :func:`history_amplitude` for
    inspection but is not itself a probability.
    """
    outcomes = _check_outcomes(proc, outcomes)
    total = total_weight(proc, cap)
    if total <= WEIGHT_FLOOR:
        raise ImpossiblePostSelectionError(
            "impossible post-selection: every history amplitude vanishes"
        )
    amp = history_amplitude(proc, outcomes)
    return abs(amp) ** 2 / total


def basis_averaged_probabilities(
    proc: TwoBoundaryProcess, cap: int = DEFAULT_HISTORY_CAP
) -> np.ndarray:
    """Outcome-tuple probabilities with the final boundary averaged away.

    Replacing the final state by a uniform average over any complete
    orthonormal basis turns each history weight into the squared norm of
    its post-schedule branch state, recovering the ordinary forward-only
    (Born) statistics.
    """
    _check_cap(proc, cap)
    segments, projectors, offsets = compile_chain(proc)
    norms = kernels.chain_leaf_norms(segments, projectors, offsets, proc.initial.amps)
    total = float(norms.sum())
    if total <= WEIGHT_FLOOR:
        raise ImpossiblePostSelectionError("initial state has no support")
    return norms / total


def shift_projection(p: Projector, u2: Unitary) -> Projector:
    """Push a projector through a later unitary: P' = U2+ P U2.

    Satisfies U1 @ P @ U2 == U1 @ U2 @ P' for any U1, so a measurement may
    be postponed to the far side of U2 without changing any chain value.
    """
    if p.dim != u2.dim:
        raise DimensionMismatchError("projector and unitary dimensions differ")
    u = u2.entries
    return Projector(u.conj().T @ p.entries @ u)


def collapse(psi: StateVector, p: Projector) -> StateVector:
    """Project and renormalize to a unit vector.

    The renormalization factor 1/|P psi| diverges as the branch weight
    shrinks; an unsupported branch (norm <= 1e-12) is an error.
    """
    if psi.dim != p.dim:
        raise DimensionMismatchError("state and projector dimensions differ")
    v = p.entries @ psi.amps
    n = np.linalg.norm(v)
    if n <= 1e-12:
        raise EmptyBranchError("branch has no support")
    return StateVector(v / n)


def computational_event(dim: int) -> MeasurementEvent:
    """Measurement event with one rank-1 projector per basis vector."""
    eye = np.eye(dim, dtype=np.complex128)
    return MeasurementEvent(
        Projector(np.outer(eye[k], eye[k])) for k in range(dim)
    )


def two_outcome_event(p: Projector) -> MeasurementEvent:
    """Yes/no event {P, I - P} with the complement spelled out."""
    comp = Projector(np.eye(p.dim, dtype=np.complex128) - p.entries)
    return MeasurementEvent((p, comp))
