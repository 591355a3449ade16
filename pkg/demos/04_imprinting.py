# Imprinting the ancilla's nonlinearity onto coherent states.
#
# Interfering |alpha> with the ancilla on a balanced beam splitter and
# projecting the ancilla port on x=0 multiplies the two wavefunctions. With a
# cubic ancilla the output's mean momentum grows quadratically with its mean
# position; with any Gaussian ancilla it does not.

import numpy as np

from cubiclab.channels import displace
from cubiclab.imprint import quad_fit, sweep, unitary_sweep
from cubiclab.states import cubic_state, fock, squeeze

nmax = 12
alphas = np.linspace(0, 1, 6)

curve = sweep(alphas, cubic_state(0.09, nmax))
c0, c1, c2, rms = quad_fit(curve)
print("cubic ancilla  <p> = %.4f + %.4f <x> + %.4f <x>^2   (rms %.1e)" % (c0, c1, c2, rms))
for a, x, p, w in curve.points:
    print(f"  alpha={a:.1f}  <x>={x:.3f}  <p>={p:.4f}  weight={w:.3f}")

for name, anc in [
    ("vacuum", fock(0, nmax)),
    ("squeezed", squeeze(0.3, nmax) @ fock(0, nmax)),
    ("displaced", displace(fock(0, nmax), 0.2j)),
]:
    print(f"{name:>9} ancilla: c2 = {quad_fit(sweep(alphas, anc))[2]:+.1e}")

# for comparison, the gate itself: <p> moves by 3 chi <x^2>
chi = 0.02
gate = unitary_sweep(alphas, chi)
print("direct gate c2:", round(quad_fit(gate)[2], 6), "expected", 3 * chi)
