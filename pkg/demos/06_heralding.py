# Heralded preparation from a pair source and three click detectors.
#
# Without displacements three clicks almost always mean three photon pairs, so
# the signal is |3>. Displacing the idler arms before detection mixes in lower
# photon numbers; tuning the three displacements steers the signal towards the
# cubic state.

import numpy as np

from cubiclab.characterize import fidelity, photon_probs
from cubiclab.herald import HeraldConfig, herald, heralded_fidelity, optimize_betas
from cubiclab.states import cubic_state, fock

cfg = HeraldConfig(lam=0.05, nmax=5, idler_nmax=2)
rho, p = herald(cfg)
print(f"no displacement: p_success={p:.2e}, F(|3>)={fidelity(rho, fock(3, 5)):.4f}")

target = cubic_state(0.09, 5)
base = HeraldConfig(lam=0.1, nmax=5)
best = optimize_betas(target, base, starts=4, seed=0)
rho, p = herald(best)
print("optimized displacements:", np.round(best.betas, 3))
print(f"F(cubic)={heralded_fidelity(best, target):.4f}  p_success={p:.2e}")
print("photon probabilities:", np.round(photon_probs(rho), 4))
