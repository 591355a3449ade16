# Removing photons from the cubic state makes its quantum features easy to see.
#
# One subtraction maps |0> + c|1&3> onto |0> + sqrt2|2> independently of chi,
# a state with clearly negative Wigner regions. A mixture of coherent states
# stays positive however many photons are taken away.

import numpy as np

from cubiclab.channels import loss, subtract
from cubiclab.characterize import default_grid, negative_regions, photon_probs, r_metric, wigner
from cubiclab.focklab import DensityMatrix
from cubiclab.states import coherent, cubic_state, fock

nmax = 10
psi = cubic_state(0.09, nmax)
once, weight = subtract(psi, 1)
twice, _ = subtract(psi, 2)
print("subtraction weight <n>:", round(weight, 5))
print("after one subtraction p0, p2:", np.round(photon_probs(once)[[0, 2]], 4))
print("after two subtractions p1:", round(photon_probs(twice)[1], 6))
print("R(0,2):", r_metric(once, fock(2, nmax)))

grid = wigner(once, default_grid(-4, 4, 0.05))
print(f"min W = {grid.min():.4f} in {negative_regions(grid)} negative region(s)")

# losses blur the negativity away gradually
for eta in (1.0, 0.9, 0.8, 0.7):
    sub, _ = subtract(loss(psi, eta), 1)
    print(f"eta={eta}: min W after subtraction = {wigner(sub, default_grid(-4, 4, 0.1)).min():+.4f}")

# the classical null: a mixture of coherent states
mix = 0.5 * (coherent(0.6, nmax).dm().data + coherent(-0.4j, nmax).dm().data)
sub, _ = subtract(DensityMatrix(mix), 1)
print("coherent mixture, min W after subtraction:", f"{wigner(sub).min():.2e}")
