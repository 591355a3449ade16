# Closing the loop: simulate homodyne data and reconstruct the state.

import time

import numpy as np

from cubiclab.channels import loss
from cubiclab.characterize import fidelity, photon_probs
from cubiclab.states import cubic_state
from cubiclab.tomo import TomoConfig, reconstruct, sample

truth = loss(cubic_state(0.09, 10), 0.9)
rec = sample(truth, n_per_phase=8000, seed=3)
print(f"{len(rec)} samples at {rec.phases.size} phases")

hist = []
t0 = time.perf_counter()
est = reconstruct(rec, TomoConfig(nmax=10), history=hist)
print(f"{len(hist) - 1} iterations in {time.perf_counter() - t0:.1f}s, likelihood never dropped: {np.all(np.diff(hist) >= 0)}")
print("fidelity to the true state:", round(fidelity(est, truth), 5))
print("true p :", np.round(photon_probs(truth)[:5], 4))
print("est. p :", np.round(photon_probs(est)[:5], 4))
