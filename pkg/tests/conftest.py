import numpy as np
import pytest

from prepost import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation once so timed tests measure steady state."""
    segs = np.stack([np.eye(2, dtype=np.complex128)] * 2)
    p = np.zeros((2, 2, 2), dtype=np.complex128)
    p[0, 0, 0] = 1.0
    p[1, 1, 1] = 1.0
    e0 = np.array([1.0, 0.0], dtype=np.complex128)
    kernels.chain_amplitudes(segs, p, np.array([0, 2]), e0, e0)
    kernels.chain_leaf_norms(segs, p, np.array([0, 2]), e0)
    kernels.phase_sum(np.zeros(4), np.ones(4), 1.0)
    kernels.born_up_count(np.ones((4, 4)), 0.5, 0.5)
    kernels.dominance_count(np.zeros((4, 2)), 2.0)
