"""Bidirectional universe toys.

A bidirectional universe runs forward from a bang state to a matching
border at maximum extent and backward from there to a crunch state.  Each
measurement event in the forward epoch has a time-mirrored twin in the
backward epoch carrying the same projector list; a matched history inserts
the same outcome projector at both, with the border itself acting as the
identity (the two epochs join continuously).

Three statistical experiments ride on top: Born-rule emergence from
dominant matched weights, dominance of a single matched history among
exponentially tiny candidates, and an amplitude-level CPT asymmetry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import DimensionMismatchError
from .hilbert import StateVector, apply, inner
from .tolerances import ATOL_EQUAL
from .two_boundary import Evolve, Measure, Schedule

__all__ = [
    "BidirectionalUniverse",
    "DominanceModel",
    "CptAmplitudePair",
    "DOMINANCE_MARGIN_LOG10",
    "matched_history_amplitude",
    "matched_border_weight",
    "born_emergence_experiment",
    "dominance_experiment",
    "dominance_fraction_exact",
    "cpt_asymmetry",
]

# "Dominant" means the top matched weight exceeds the runner-up by a
# factor of 100, i.e. two decades in log10.
DOMINANCE_MARGIN_LOG10 = 2.0


def _measure_indices(schedule: Schedule) -> list[int]:
    return [i for i, s in enumerate(schedule.steps) if isinstance(s, Measure)]


class BidirectionalUniverse:
    """Bang and crunch boundaries with mirrored forward/backward schedules.

    ``mirrored_events`` pairs forward measurement events with backward ones
    by their per-schedule measurement index; paired events must carry
    identical projector lists.
    """

    __slots__ = ("bang", "crunch", "forward", "backward", "mirrored_events")

    def __init__(
        self,
        bang: StateVector,
        crunch: StateVector,
        forward: Schedule,
        backward: Schedule,
        mirrored_events,
    ):
        dims = {bang.dim, crunch.dim}
        if forward.dim is not None:
            dims.add(forward.dim)
        if backward.dim is not None:
            dims.add(backward.dim)
        if len(dims) != 1:
            raise DimensionMismatchError(f"universe mixes dimensions {sorted(dims)}")
        fwd_events = forward.measure_steps
        bwd_events = backward.measure_steps
        pairs = tuple((int(a), int(b)) for a, b in mirrored_events)
        if sorted(a for a, _ in pairs) != list(range(len(fwd_events))) or sorted(
            b for _, b in pairs
        ) != list(range(len(bwd_events))):
            raise ValueError(
                "mirrored_events must pair every forward measurement with "
                "exactly one backward measurement"
            )
        for a, b in pairs:
            pa, pb = fwd_events[a].projectors, bwd_events[b].projectors
            if len(pa) != len(pb) or any(
                np.abs(x.entries - y.entries).max() > ATOL_EQUAL
                for x, y in zip(pa, pb)
            ):
                raise ValueError(
                    f"paired events {a} and {b} have different projector lists"
                )
        object.__setattr__(self, "bang", bang)
        object.__setattr__(self, "crunch", crunch)
        object.__setattr__(self, "forward", forward)
        object.__setattr__(self, "backward", backward)
        object.__setattr__(self, "mirrored_events", pairs)

    def __setattr__(self, name, value):
        raise AttributeError("BidirectionalUniverse is immutable")

    @classmethod
    def time_mirrored(cls, bang, crunch, forward, backward):
        """Pair the i-th forward event with the (n-1-i)-th backward event.

        This is the pairing for a backward schedule listed in increasing
        time: the event at t mirrors the one at total duration minus t.
        """
        n = forward.n_measurements
        if backward.n_measurements != n:
            raise ValueError("forward and backward must have equally many events")
        return cls(bang, crunch, forward, backward, [(i, n - 1 - i) for i in range(n)])

    @property
    def dim(self) -> int:
        return self.bang.dim

    @property
    def n_pairs(self) -> int:
        return len(self.mirrored_events)


def matched_history_amplitude(u: BidirectionalUniverse, outcomes) -> complex:
    """Chain amplitude of one matched history.

    Inserts the same outcome projector at each mirrored event pair, treats
    the border as the identity, and evaluates

        <bang| (forward steps...) (backward steps...) |crunch>

    by sweeping the operator string onto the crunch state from the right.
    """
    outcomes = tuple(int(k) for k in outcomes)
    if len(outcomes) != u.n_pairs:
        raise ValueError(f"expected {u.n_pairs} outcome indices, got {len(outcomes)}")
    fwd_choice = {a: outcomes[j] for j, (a, _) in enumerate(u.mirrored_events)}
    bwd_choice = {b: outcomes[j] for j, (_, b) in enumerate(u.mirrored_events)}

    def resolved(schedule: Schedule, choice: dict[int, int]):
        idx = 0
        for step in schedule.steps:
            if isinstance(step, Evolve):
                yield step.op.entries
            else:
                k = choice[idx]
                if not 0 <= k < step.event.n_outcomes:
                    raise IndexError(f"outcome index {k} out of range")
                yield step.event.projectors[k].entries
                idx += 1

    chain = list(resolved(u.forward, fwd_choice)) + list(
        resolved(u.backward, bwd_choice)
    )
    v = u.crunch.amps
    for m in reversed(chain):
        v = m @ v
    return complex(np.vdot(u.bang.amps, v))


def matched_border_weight(psi: StateVector, proj, border: StateVector) -> float:
    """Weight of one branch matched through an explicit border state.

    The forward epoch carries <psi| P |border> and the mirrored backward
    epoch the conjugate chain <border| P |psi>, so the matched weight is
    |<border|P|psi>|^2 -- real and nonnegative by construction.
    """
    branch = apply(proj, psi)
    amp_fwd = inner(branch, border)
    amp_bwd = inner(border, branch)
    return (amp_fwd * amp_bwd).real


@dataclass
class DominanceModel:
    """Gaussian model of matched log-weights.

    ``h`` is the mean number of decades suppressing a matched history
    (weights near 10**-h); statistical variation of the exponent scales
    like sqrt(h), so log10-weights are drawn i.i.d. from Normal(-h, sqrt(h))
    for each of ``k`` candidate histories.
    """

    h: float
    k: int
    rng: np.random.Generator = None
    weight_model: str = field(default="iid-gaussian-log10-weights", init=False)

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError("h must be positive")
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.rng is None:
            raise ValueError("DominanceModel requires a seeded rng")


def dominance_experiment(model: DominanceModel, trials: int) -> float:
    """Fraction of trials in which one matched history dominates all others.

    Per trial, draws k log10-weights from Normal(-h, sqrt(h)) and checks
    whether the top weight beats the runner-up by at least
    DOMINANCE_MARGIN_LOG10 decades (a factor of 100).
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    draws = model.rng.normal(
        loc=-model.h, scale=math.sqrt(model.h), size=(trials, model.k)
    )
    count = kernels.dominance_count(draws, DOMINANCE_MARGIN_LOG10)
    return count / trials


def dominance_fraction_exact(h: float, margin: float = DOMINANCE_MARGIN_LOG10) -> float:
    """Closed form for k=2: the log-weight gap is Normal(0, sqrt(2h))."""
    sigma_delta = math.sqrt(2.0 * h)
    phi = 0.5 * (1.0 + math.erf(margin / (sigma_delta * math.sqrt(2.0))))
    return 2.0 * (1.0 - phi)


def born_emergence_experiment(
    theta: float, samples: int, rng: np.random.Generator
) -> float:
    """Empirical up-probability for a spin tilted by ``theta`` from up.

    Per sample an isotropically random border state decides the matched
    history: the up and down branches carry matched weights
    cos^2(theta/2)*|<border|up>|^2 and sin^2(theta/2)*|<border|down>|^2,
    and the heavier branch is the one realized.  Because the squared
    border overlap of a random qubit is uniform on [0, 1], the up
    frequency converges to cos^2(theta/2) -- the quadratic rule emerges
    from dominance statistics instead of being postulated.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    up_scale = math.cos(theta / 2.0) ** 2
    down_scale = math.sin(theta / 2.0) ** 2
    gaussians = rng.standard_normal((samples, 4))
    count = kernels.born_up_count(gaussians, up_scale, down_scale)
    return count / samples


@dataclass(frozen=True)
class CptAmplitudePair:
    """Amplitudes of a process and of its boundary-swapped partner."""

    a: complex
    a_prime: complex


def cpt_asymmetry(pair: CptAmplitudePair) -> float:
    """|conj(a) a' - a conj(a')| = 2 |Im(conj(a) a')|.

    CPT conjugation is realized as complex conjugation at the amplitude
    level.  With identical amplitudes the two pairings coincide and the
    asymmetry vanishes; distinct boundary amplitudes leave a residue.
    """
    a, ap = complex(pair.a), complex(pair.a_prime)
    return abs(a.conjugate() * ap - a * ap.conjugate())
