# The cubic signature in the coordinate representation.
#
# To first order Im rho(x, -x) = 2 chi x^3 exp(-x^2)/sqrt(pi). A small
# displacement in p hides that shape; fitting the displacement back brings it out.

import numpy as np

from cubiclab.channels import displace
from cubiclab.characterize import antidiag_im, antidiag_model, default_grid, fit_displacement
from cubiclab.states import cubic_state

chi, nmax = 0.09, 25
xs = default_grid(-3, 3, 0.02)
psi = cubic_state(chi, nmax)

ideal = antidiag_im(psi, xs)
print("max |ideal - model| :", f"{np.abs(ideal - antidiag_model(xs, chi)).max():.2e}", "(O(chi^2))")

# an unknown offset of the measured state
hidden = displace(psi, 1j * 0.25 / np.sqrt(2))
print("after a p-shift of 0.25:", f"{np.abs(antidiag_im(hidden, xs) - ideal).max():.3f}", "max change")

dp, recovered = fit_displacement(hidden, xs)
print(f"fitted shift {dp:+.4f}")
print("recovered curve error:", f"{np.abs(antidiag_im(recovered, xs) - ideal).max():.2e}")

for x, v in zip(xs[::30], antidiag_im(recovered, xs)[::30]):
    print(f"  x={x:+.2f}  Im rho(x,-x)={v:+.5f}")
