"""Numerical laboratory for the weak cubic-phase resource state.

Build the state (:mod:`cubiclab.states`), push it through channels
(:mod:`cubiclab.channels`), characterize it (:mod:`cubiclab.characterize`),
imprint it onto coherent states (:mod:`cubiclab.imprint`), herald it from a
pair source (:mod:`cubiclab.herald`) and reconstruct it from homodyne data
(:mod:`cubiclab.tomo`).
"""

from .channels import beamsplitter, displace, displacement, loss, rotate, subtract
from .characterize import (
    antidiag_im,
    antidiag_model,
    coord_kernel,
    fidelity,
    fit_displacement,
    hermite_fn,
    moments,
    negative_regions,
    photon_probs,
    r_metric,
    wigner,
)
from .focklab import (
    DensityMatrix,
    ModeOperator,
    StateVector,
    create,
    destroy,
    expectation,
    identity,
    number,
    partial_trace,
    quadrature,
    tensor,
)
from .herald import HeraldConfig, herald, optimize_betas
from .imprint import MomentCurve, imprint, quad_fit, sweep, unitary_sweep
from .states import (
    CubicParams,
    coherent,
    cubic_phase_gate,
    cubic_state,
    fock,
    one_and_three,
    squeeze,
    tmsv,
    vacuum,
)
from .tomo import QuadratureRecord, TomoConfig, reconstruct, sample

__version__ = "0.1.0"
