# The weak cubic resource state and what its photon statistics look like.
#
# (1 + i chi x^3)|0> only reaches |1> and |3>, always in the ratio 3:2, so the
# whole non-Gaussian content sits in a single direction |1&3> of Fock space.

import numpy as np

from cubiclab.characterize import moments, photon_probs, r_metric
from cubiclab.states import cubic_state, one_and_three

nmax = 8
for chi in (0.01, 0.09, 0.3):
    psi = cubic_state(chi, nmax)
    p = photon_probs(psi)
    print(f"chi={chi:<5} p0={p[0]:.4f} p1={p[1]:.4f} p3={p[3]:.4f}  p1/p3={p[1] / p[3]:.3f}")

# building the state by applying the truncated x matrix three times gives the same vector
chi = 0.09
a = cubic_state(chi, nmax)
b = cubic_state(chi, nmax, method="operator")
print("overlap analytic vs operator:", abs(a.overlap(b)))

# the state is a coherent superposition of |0> and |1&3>, not a mixture
print("R(0, 1&3)     =", r_metric(a, one_and_three(nmax)))
print("R(0, 1&3 perp) =", r_metric(a, one_and_three(nmax, perp=True)))

# its mean momentum is shifted by the cubic term
m = moments(a)
print(f"<x> = {m.mean_x:.2e}, <p> = {m.mean_p:.4f} (first order: {1.5 * chi:.4f})")
print("variance product:", m.var_x * m.var_p, ">= 0.25:", m.var_x * m.var_p >= 0.25)
print(np.round(a.data[:4], 4))
