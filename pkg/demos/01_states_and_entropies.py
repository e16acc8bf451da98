"""
States, marginals and entropies
===============================

A first tour: build a few bipartite states, take partial traces and look
at the entropic quantities that bound every classical correlation.
"""

# %%
# An EPR pair is pure, so its global entropy vanishes while each half is
# maximally mixed. All entropies in qcorr are in bits.
import numpy as np

from qcorr.qstate import partial_trace, purify, von_neumann_entropy
from qcorr.states import make_cc_state, make_epr, random_density
from qcorr.measures import coherent_information, mutual_information, s_min

epr = make_epr().density()
print("S(AB) =", von_neumann_entropy(epr))
print("S(A)  =", von_neumann_entropy(partial_trace(epr, [0])))

# %%
# Mutual information counts every correlation. The smaller quantity s_min
# caps the classical part: it is the least of S(A), S(B) and S(A:B).
for name, rho in (("epr", epr), ("cc", make_cc_state())):
    print(f"{name:4s} I={mutual_information(rho).value:.3f}  s_min={s_min(rho).value:.3f}  "
          f"I_c={coherent_information(rho).value:.3f}")

# %%
# Any mixed state has a purification. Tracing out the ancilla gives it back.
rho = random_density((2, 2), rank=3, seed=7)
psi = purify(rho)
print("purification dims:", psi.dims)
print("reconstruction error:", np.max(np.abs(psi.reduced([0, 1]).matrix - rho.matrix)))
