"""State transformations: photon subtraction, loss, displacement, beam splitters.

Set the environment variable ``CUBICLAB_CHECK=1`` to validate every output
density matrix (Hermitian, unit trace, PSD); the test suite does this.
"""

from __future__ import annotations

import os
import warnings

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln

from .focklab import DensityMatrix, ModeOperator, as_density, check_density, destroy, embed
from .states import TruncationWarning

__all__ = [
    "NoPhotonsError",
    "subtract",
    "loss",
    "loss_kraus",
    "displacement",
    "displace",
    "beamsplitter",
    "rotate",
]


class NoPhotonsError(ValueError):
    """Photon subtraction on a state with (numerically) no photons."""


def _out(rho):
    if os.environ.get("CUBICLAB_CHECK"):
        check_density(rho)
    return rho


def subtract(rho, k=1):
    """Virtual k-photon subtraction a^k rho a^dag^k / Tr[...].

    Returns the normalized state and the pre-normalization trace.
    """
    if k not in (1, 2):
        raise ValueError(f"k must be 1 or 2, got {k}")
    rho = as_density(rho)
    if len(rho.dims) != 1:
        raise ValueError("subtract acts on single-mode states")
    a = destroy(rho.nmax).data
    ak = np.linalg.matrix_power(a, k)
    out = ak @ rho.data @ ak.conj().T
    weight = float(np.trace(out).real)
    if weight <= 1e-12:
        raise NoPhotonsError(f"no photons to subtract (weight {weight:.3e})")
    return _out(DensityMatrix(out / weight)), weight


def loss_kraus(eta, nmax):
    """Kraus operators A_k = sum_n sqrt(C(n,k)) eta^{(n-k)/2} (1-eta)^{k/2} |n-k><n|."""
    if not 0 <= eta <= 1:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    d = nmax + 1
    ops = []
    for k in range(d):
        A = np.zeros((d, d))
        for n in range(k, d):
            logc = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
            # 0**0 = 1 keeps the eta = 0 and eta = 1 limits exact
            A[n - k, n] = np.exp(0.5 * logc) * eta ** ((n - k) / 2) * (1 - eta) ** (k / 2)
        ops.append(A)
    return ops


def loss(rho, eta):
    """Pure-loss (amplitude damping) channel with transmittance ``eta``."""
    rho = as_density(rho)
    if len(rho.dims) != 1:
        raise ValueError("loss acts on single-mode states")
    out = sum(A @ rho.data @ A.T for A in loss_kraus(eta, rho.nmax))
    return _out(DensityMatrix(out))


def displacement(beta, nmax):
    """D(beta) = exp(beta a^dag - beta* a) with exact infinite-space matrix elements.

    The matrix is the top-left block of the true operator, so D(beta)|psi>
    is exact for every output level <= nmax.
    """
    beta = complex(beta)
    d = nmax + 1
    m = np.arange(d)[:, None]
    n = np.arange(d)[None, :]
    lo = np.minimum(m, n)
    hi = np.maximum(m, n)
    x = abs(beta) ** 2
    # below the diagonal the power is of beta, above it of -beta*
    base = np.where(m >= n, beta, -np.conj(beta))
    mag = np.exp(0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) - x / 2)
    lag = eval_genlaguerre(lo, hi - lo, x)
    return ModeOperator(mag * base ** (hi - lo) * lag, label=f"D({beta:g})")


def displace(rho, beta, tol=1e-6):
    """D(beta) rho D(beta)^dag.

    A pure p-shift by dp is beta = 1j*dp/sqrt(2). Norm pushed above the cutoff
    is dropped and the result renormalized; a TruncationWarning reports losses
    above ``tol``.
    """
    rho = as_density(rho)
    if len(rho.dims) != 1:
        raise ValueError("displace acts on single-mode states")
    if beta == 0:
        return rho
    D = displacement(beta, rho.nmax).data
    out = D @ rho.data @ D.conj().T
    tr = float(np.trace(out).real)
    if 1 - tr > tol:
        warnings.warn(f"displacement by {beta} loses {1 - tr:.2e} of the trace at nmax={rho.nmax}", TruncationWarning, stacklevel=2)
    out = 0.5 * (out + out.conj().T) / tr
    return _out(DensityMatrix(out))


def rotate(rho, phi):
    """Phase-space rotation e^{-i phi n} rho e^{i phi n}."""
    rho = as_density(rho)
    ph = np.exp(-1j * phi * np.arange(rho.dims[0]))
    return DensityMatrix(ph[:, None] * rho.data * ph.conj()[None, :], rho.dims)


def beamsplitter(theta, modes=(0, 1), dims=None):
    """exp[theta (a_i^dag a_j - a_i a_j^dag)] on the modes ``(i, j)`` of ``dims``.

    theta = pi/4 is balanced. Convention: |1,0> -> cos(theta)|1,0> - sin(theta)|0,1>.
    The quadratures transform by a real rotation, so x-projections and all
    photon-number statistics are insensitive to the sign choice.
    The truncated generator is exact on photon-number blocks whose total
    number fits in both modes' cutoffs.
    """
    i, j = modes
    dims = tuple(dims)
    if i == j or not (0 <= i < len(dims) and 0 <= j < len(dims)):
        raise ValueError(f"invalid mode pair {modes} for dims {dims}")
    ai = embed(destroy(dims[i] - 1), i, dims).data
    aj = embed(destroy(dims[j] - 1), j, dims).data
    gen = theta * (ai.conj().T @ aj - ai @ aj.conj().T)
    return ModeOperator(expm(gen), dims, label=f"BS({theta:g})")
