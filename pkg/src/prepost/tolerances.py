"""Centralized numeric tolerances.

Construction-time checks (unitarity, projector idempotence, event
completeness) use ATOL_CONSTRUCT; exact-identity assertions (shift
identities, tensor relabeling, trace preservation) use the tighter
ATOL_EQUAL.  Both leave comfortable headroom above double-precision
rounding at the dense-matrix sizes this package targets (dim <= ~2**12).
"""

ATOL_CONSTRUCT = 1e-10
ATOL_EQUAL = 1e-12

# Squared-amplitude floor below which a post-selected branch is treated
# as having no support (norm floor 1e-12, squared).
WEIGHT_FLOOR = 1e-24
