"""Dense finite-dimensional complex linear algebra substrate.

States and operators are thin immutable wrappers around contiguous
complex128 numpy arrays.  Composite systems use row-major (Kronecker)
indexing with the first factor most significant, so
``tensor(a, b).amps[i * b.dim + j] == a.amps[i] * b.amps[j]``.

Randomness flows through ``numpy.random.Generator`` (PCG64); the same
seed reproduces bit-identical sample streams.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError
from .tolerances import ATOL_CONSTRUCT

__all__ = [
    "StateVector",
    "Operator",
    "Unitary",
    "Projector",
    "inner",
    "apply",
    "tensor",
    "partial_trace",
    "make_rng",
    "split_rng",
    "random_state",
    "random_unitary",
    "basis_state",
    "basis_projector",
    "projector_onto",
    "identity",
]


def _as_complex_vector(amps) -> np.ndarray:
    arr = np.ascontiguousarray(amps, dtype=np.complex128)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("state amplitudes must form a 1-D vector of length >= 1")
    return arr


def _as_complex_matrix(entries) -> np.ndarray:
    arr = np.ascontiguousarray(entries, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise ValueError("operator entries must form a square matrix of dim >= 1")
    return arr


class StateVector:
    """A vector of complex amplitudes over a finite Hilbert space.

    Not normalized by construction; call :meth:`normalize` when a unit
    vector is required.  The underlying array is frozen so instances can
    be shared freely across threads.
    """

    __slots__ = ("amps",)

    def __init__(self, amps):
        arr = _as_complex_vector(amps)
        arr.setflags(write=False)
        object.__setattr__(self, "amps", arr)

    def __setattr__(self, name, value):
        raise AttributeError("StateVector is immutable")

    @property
    def dim(self) -> int:
        return self.amps.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def normalize(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.amps / n)

    def __repr__(self):
        return f"StateVector(dim={self.dim})"


class Operator:
    """A dense complex square matrix acting on a finite Hilbert space."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = _as_complex_matrix(entries)
        self._check(arr)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Operator is immutable")

    def _check(self, arr: np.ndarray) -> None:
        pass

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def dagger(self) -> "Operator":
        return Operator(self.entries.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim})"


class Unitary(Operator):
    """An Operator verified unitary on construction (max |U+U - I| <= 1e-10)."""

    __slots__ = ()

    def _check(self, arr: np.ndarray) -> None:
        defect = arr.conj().T @ arr - np.eye(arr.shape[0])
        if np.abs(defect).max() > ATOL_CONSTRUCT:
            raise ValueError("matrix is not unitary within tolerance")

    def dagger(self) -> "Unitary":
        return Unitary(self.entries.conj().T)


class Projector(Operator):
    """An Operator verified Hermitian and idempotent on construction."""

    __slots__ = ()

    def _check(self, arr: np.ndarray) -> None:
        if np.abs(arr - arr.conj().T).max() > ATOL_CONSTRUCT:
            raise ValueError("projector is not Hermitian within tolerance")
        if np.abs(arr @ arr - arr).max() > ATOL_CONSTRUCT:
            raise ValueError("projector is not idempotent within tolerance")


def _require_same_dim(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatchError(f"dimension mismatch: {a} != {b}")


def inner(phi: StateVector, psi: StateVector) -> complex:
    """<phi|psi> with the conjugate on the first argument."""
    _require_same_dim(phi.dim, psi.dim)
    return complex(np.vdot(phi.amps, psi.amps))


def apply(op: Operator, psi: StateVector) -> StateVector:
    """Matrix-vector product op|psi>, with no implicit normalization."""
    _require_same_dim(op.dim, psi.dim)
    return StateVector(op.entries @ psi.amps)


def tensor(a, b):
    """Kronecker product of two states or two operators (first factor most significant)."""
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amps, b.amps))
    if isinstance(a, Operator) and isinstance(b, Operator):
        return Operator(np.kron(a.entries, b.entries))
    raise TypeError("tensor requires two StateVectors or two Operators")


def partial_trace(rho: Operator, keep: int, dims) -> Operator:
    """Reduced density operator on factor ``keep`` of a composite system.

    ``dims`` lists the factor dimensions in tensor order; their product
    must equal ``rho.dim``.  ``rho`` is expected to be Hermitian (a density
    operator); the trace is preserved either way.
    """
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise ValueError("factor dimensions must be positive")
    if int(np.prod(dims)) != rho.dim:
        raise DimensionMismatchError(
            f"product of factor dims {dims} != operator dim {rho.dim}"
        )
    if not 0 <= keep < len(dims):
        raise ValueError(f"keep index {keep} out of range for {len(dims)} factors")
    n = len(dims)
    t = rho.entries.reshape(dims + dims)
    # Trace out factors from the highest index down so the axis numbers of
    # factors below stay valid; row axis i pairs with column axis i + m
    # where m is the count of factors still present.
    m = n
    for i in reversed(range(n)):
        if i == keep:
            continue
        t = np.trace(t, axis1=i, axis2=i + m)
        m -= 1
    d = dims[keep]
    return Operator(t.reshape(d, d))


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic generator (PCG64) for the given 64-bit seed."""
    return np.random.default_rng(np.uint64(seed))


def split_rng(seed: int, n: int) -> list[np.random.Generator]:
    """n independent generators derived deterministically from one master seed."""
    seq = np.random.SeedSequence(np.uint64(seed))
    return [np.random.Generator(np.random.PCG64(child)) for child in seq.spawn(n)]


def random_state(dim: int, rng: np.random.Generator) -> StateVector:
    """Haar-uniform unit vector: normalized complex-Gaussian draw."""
    if dim < 1:
        raise ValueError("dim must be >= 1")
    z = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return StateVector(z / np.linalg.norm(z))


def random_unitary(dim: int, rng: np.random.Generator) -> Unitary:
    """Haar-uniform unitary via QR of a complex-Gaussian matrix.

    The R diagonal is rephased to unit modulus, which removes the QR sign
    ambiguity and makes the distribution exactly Haar.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return Unitary(q)


def basis_state(dim: int, k: int) -> StateVector:
    """Computational basis vector e_k."""
    v = np.zeros(dim, dtype=np.complex128)
    v[k] = 1.0
    return StateVector(v)


def basis_projector(dim: int, k: int) -> Projector:
    """Rank-1 projector |e_k><e_k|."""
    m = np.zeros((dim, dim), dtype=np.complex128)
    m[k, k] = 1.0
    return Projector(m)


def projector_onto(psi: StateVector) -> Projector:
    """Rank-1 projector |psi><psi| (psi is normalized first)."""
    v = psi.normalize().amps
    return Projector(np.outer(v, v.conj()))


def identity(dim: int) -> Unitary:
    return Unitary(np.eye(dim, dtype=np.complex128))
