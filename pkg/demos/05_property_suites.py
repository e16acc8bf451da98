"""
Seeded property suites
======================

Each suite draws random states from a master seed and checks one
inequality per trial. A negative margin is a counterexample, written to
disk for replay.
"""

# %%
from qcorr.verify import SuiteSpec, run_suite

for suite, n in (("prop5", 100), ("sm-superadd", 20), ("prop1", 4)):
    rep = run_suite(SuiteSpec(suite, trials=n, seed=42, dims=((2, 2), (2, 3))))
    print(rep.table())

# %%
# The same runs are available from the shell:
#   qcorr verify --suite prop5 --trials 500 --seed 1
#   qcorr verify --suite trine-gap
