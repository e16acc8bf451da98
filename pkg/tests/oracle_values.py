"""Reference numbers frozen before the library existed.

Each value was produced by a standalone script that shares no code with
qcorr (plain loops over Bloch vectors and Shannon sums).
"""

import numpy as np

# best I(A:B) for the trine state over a 1-degree (theta, phi) grid of
# B-side projective axes, A read out in its computational basis
TRINE_PROJECTIVE_GRID = 0.459147917027245

# anti-trine POVM {2/3 |-r_i><-r_i|} on B, computational readout on A
TRINE_ANTI_TRINE = 0.5849625007211552

# Shannon mutual information of [[1/3, 1/6], [1/6, 1/3]]
TABLE_MI = 0.08170416594551044

# H(3/4, 1/4)
H_THREE_QUARTERS = 0.8112781244591328

# Bell-diagonal state 0.9 |Phi+><Phi+| + 0.1 |Psi+><Psi+|: concurrence 0.8,
# entanglement of formation h((1 + sqrt(1 - 0.64)) / 2) = h(0.8)
BELL_DIAG_CONCURRENCE = 0.8
BELL_DIAG_EOF = 0.7219280948873623


def binary_entropy(x):
    return float(-sum(p * np.log2(p) for p in (x, 1 - x) if p > 0))
