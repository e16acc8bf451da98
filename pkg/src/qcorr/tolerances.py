"""Numerical tolerances shared across the package.

All entropies are in bits.
"""

TAU_HERM = 1e-10
TAU_TRACE = 1e-10
TAU_PSD = 1e-9
TAU_CLIP = 1e-12
TAU_NUM = 1e-8
TAU_RECON = 1e-8
TAU_POVM = 1e-8

# slack for optimizer-reached equalities
TAU_KW = 1e-3
# slack for warm-start-seeded chain inequalities
TAU_CHAIN = 1e-6

# outcomes below this probability are dropped from ensembles
P_DROP = 1e-14

MAX_AMBIENT_DIM = 256
# pure-state vectors are never squared into a matrix, so they get more room
MAX_PURE_DIM = 4096
