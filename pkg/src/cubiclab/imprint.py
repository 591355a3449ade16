"""Measurement-induced imprinting of an ancilla's nonlinearity onto coherent states.

The map mixes target and ancilla on a balanced beam splitter and projects
the ancilla output onto the position eigenstate x = 0. In wavefunction terms
it fuses psi_S and psi_A into psi_S(x/sqrt2) psi_A(x/sqrt2), so a cubic phase
carried by the ancilla shows up as a quadratic dependence of <p> on <x>.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .channels import beamsplitter
from .characterize import hermite_functions, moments
from .focklab import DensityMatrix, as_density
from .states import TruncationWarning, coherent, cubic_phase_gate

__all__ = [
    "ImprintError",
    "MomentCurve",
    "imprint",
    "sweep",
    "unitary_sweep",
    "quad_fit",
]


class ImprintError(ValueError):
    """The x = 0 projection annihilated the joint state."""


@dataclass(frozen=True)
class MomentCurve:
    """Per-alpha output moments of the imprinting map.

    Moments are in the raw output coordinate, which carries the sqrt(2)
    scaling of the fused wavefunction; ``rescaled`` maps them back to the
    coordinate of the fused factors (x -> x/sqrt2, p -> sqrt2 p).
    """

    alphas: np.ndarray
    mean_x: np.ndarray
    mean_p: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        for name in ("alphas", "mean_x", "mean_p", "weights"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float))
        if np.any(np.diff(self.alphas) <= 0):
            raise ValueError("alphas must be strictly increasing")
        if np.any(self.weights <= 0):
            raise ValueError("weights must be positive")

    @property
    def points(self):
        return list(zip(self.alphas, self.mean_x, self.mean_p, self.weights))

    def rescaled(self):
        return MomentCurve(self.alphas, self.mean_x / np.sqrt(2), self.mean_p * np.sqrt(2), self.weights)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["alpha", "mean_x", "mean_p", "weight"])
            for row in self.points:
                w.writerow([f"{v:.12g}" for v in row])


@lru_cache(maxsize=8)
def _balanced_bs(d):
    return beamsplitter(np.pi / 4, (0, 1), (d, d)).data


def _pad(m, d):
    out = np.zeros((d, d), dtype=complex)
    k = m.shape[0]
    out[:k, :k] = m
    return out


def imprint(rho_in, rho_A, tol=1e-6):
    """Apply the imprinting map to ``rho_in`` with ancilla ``rho_A``.

    Returns ``(rho_out, weight)``. The x = 0 bra has Fock coefficients
    psi_n(0) and is not normalizable, so ``weight`` is a relative success
    weight rather than a probability.
    """
    rho_in, rho_A = as_density(rho_in), as_density(rho_A)
    if len(rho_in.dims) != 1 or len(rho_A.dims) != 1:
        raise ValueError("imprint takes single-mode states")
    if rho_in.dims != rho_A.dims:
        raise ValueError("target and ancilla must share a truncation")
    nmax = rho_in.nmax
    # padding to 2*nmax keeps the beam splitter exact for every photon-number block
    d = 2 * nmax + 1
    joint = np.kron(_pad(rho_in.data, d), _pad(rho_A.data, d))
    U = _balanced_bs(d)
    mixed = (U @ joint @ U.conj().T).reshape(d, d, d, d)
    bra = hermite_functions(d - 1, 0.0)[0]
    out = np.einsum("k,mkpl,l->mp", bra, mixed, bra)
    weight = float(np.trace(out).real)
    if weight < 1e-12:
        raise ImprintError(f"projection weight {weight:.3e} is numerically zero")
    kept = out[: nmax + 1, : nmax + 1]
    lost = 1 - np.trace(kept).real / weight
    if lost > tol:
        warnings.warn(f"imprint output loses {lost:.2e} above nmax={nmax}", TruncationWarning, stacklevel=2)
    kept = 0.5 * (kept + kept.conj().T)
    return DensityMatrix(kept / np.trace(kept).real), weight


def _check_alphas(alphas, hi=1.2):
    alphas = np.asarray(alphas, dtype=float)
    if alphas.ndim != 1 or alphas.size == 0:
        raise ValueError("alphas must be a non-empty 1-D sequence")
    if alphas.min() < 0 or alphas.max() > hi:
        raise ValueError(f"alphas must lie in [0, {hi}]")
    return alphas


def sweep(alphas, rho_A):
    """Imprint ``rho_A`` onto coherent states |alpha> and collect output moments."""
    alphas = _check_alphas(alphas)
    rho_A = as_density(rho_A)
    nmax = rho_A.nmax
    mx, mp, ws = [], [], []
    for a in alphas:
        out, w = imprint(coherent(a, nmax), rho_A)
        m = moments(out)
        mx.append(m.mean_x)
        mp.append(m.mean_p)
        ws.append(w)
    return MomentCurve(alphas, mx, mp, ws)


def unitary_sweep(alphas, chi, nmax=25):
    """Moments of exp(i chi x^3)|alpha>, the ideal cubic gate applied directly."""
    alphas = _check_alphas(alphas)
    V = cubic_phase_gate(chi, nmax)
    mx, mp = [], []
    for a in alphas:
        m = moments(V @ coherent(a, nmax))
        mx.append(m.mean_x)
        mp.append(m.mean_p)
    return MomentCurve(alphas, mx, mp, np.ones_like(alphas))


def quad_fit(curve):
    """Least-squares fit mean_p = c0 + c1 mean_x + c2 mean_x^2.

    Returns ``(c0, c1, c2, rms)`` with ``rms`` the root-mean-square residual.
    """
    x = np.asarray(curve.mean_x, dtype=float)
    y = np.asarray(curve.mean_p, dtype=float)
    if x.size < 4:
        raise ValueError("quad_fit needs at least 4 points")
    A = np.column_stack([np.ones_like(x), x, x**2])
    coef, _, rank, _ = np.linalg.lstsq(A, y, rcond=None)
    if rank < 3:
        raise np.linalg.LinAlgError("design matrix is rank deficient")
    rms = float(np.sqrt(np.mean((A @ coef - y) ** 2)))
    return float(coef[0]), float(coef[1]), float(coef[2]), rms
