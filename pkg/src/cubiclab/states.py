"""Constructors for the states used in the cubic-resource analysis."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import isclose

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .focklab import ModeOperator, StateVector, destroy, quadrature

__all__ = [
    "CubicParams",
    "TruncationWarning",
    "fock",
    "vacuum",
    "coherent",
    "coherent_amplitudes",
    "one_and_three",
    "cubic_state",
    "squeeze",
    "cubic_phase_gate",
    "tmsv",
]

# |1&3> = (sqrt3|1> + sqrt2|3>)/sqrt5 and its orthogonal partner
_ONE_THREE = (np.sqrt(3 / 5), np.sqrt(2 / 5))
_ONE_THREE_PERP = (np.sqrt(2 / 5), -np.sqrt(3 / 5))


class TruncationWarning(UserWarning):
    """Norm lost to the photon-number cutoff exceeds the tolerated level."""


@dataclass(frozen=True)
class CubicParams:
    """Cubic strength of the resource state.

    ``chi`` is the strength of the unsqueezed approximant; a state built from
    a pre-squeezing strength ``chi0`` and squeezing ``r`` has chi = chi0 e^{3r}.
    """

    chi: float
    chi0: float | None = None
    r: float | None = None

    def __post_init__(self):
        if self.chi0 is not None and self.r is not None:
            expected = self.chi0 * np.exp(3 * self.r)
            if not isclose(self.chi, expected, rel_tol=1e-12, abs_tol=1e-12):
                raise ValueError(f"chi={self.chi} inconsistent with chi0*exp(3r)={expected}")

    @classmethod
    def from_squeezed(cls, chi0, r):
        return cls(chi=chi0 * np.exp(3 * r), chi0=chi0, r=r)


def _check_level(n, nmax):
    if not 0 <= n <= nmax:
        raise ValueError(f"Fock level {n} outside truncation 0..{nmax}")


def fock(n, nmax):
    _check_level(n, nmax)
    amps = np.zeros(nmax + 1, dtype=complex)
    amps[n] = 1.0
    return StateVector(amps)


def vacuum(nmax):
    return fock(0, nmax)


def coherent_amplitudes(alpha, nmax):
    """Exact (untruncated-normalization) coherent amplitudes on 0..nmax."""
    n = np.arange(nmax + 1)
    alpha = complex(alpha)
    if alpha == 0:
        amps = np.zeros(nmax + 1, dtype=complex)
        amps[0] = 1.0
        return amps
    log_mag = n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1) - abs(alpha) ** 2 / 2
    return np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))


def coherent(alpha, nmax, tol=1e-6):
    """Coherent state by normalized truncation of alpha^n/sqrt(n!).

    Emits a TruncationWarning when the discarded norm exceeds ``tol``.
    """
    amps = coherent_amplitudes(alpha, nmax)
    lost = 1.0 - float(np.sum(np.abs(amps) ** 2))
    if lost > tol:
        warnings.warn(
            f"coherent state |{alpha}> loses {lost:.2e} of its norm at nmax={nmax}",
            TruncationWarning,
            stacklevel=2,
        )
    return StateVector(amps).normalize()


def one_and_three(nmax, perp=False):
    """(sqrt3|1> + sqrt2|3>)/sqrt5, or (sqrt2|1> - sqrt3|3>)/sqrt5 when ``perp``."""
    if nmax < 3:
        raise ValueError("one_and_three needs nmax >= 3")
    c1, c3 = _ONE_THREE_PERP if perp else _ONE_THREE
    amps = np.zeros(nmax + 1, dtype=complex)
    amps[1], amps[3] = c1, c3
    return StateVector(amps)


def cubic_state(chi, nmax, method="analytic", r=None):
    """Normalized weak cubic state (1 + i chi x^3)|0>.

    ``analytic`` uses the closed Fock form |0> + i chi sqrt15/(2 sqrt2) |1&3>;
    ``operator`` applies the truncated x matrix three times to the vacuum.
    If ``r`` is given the squeezing S(-r) = squeeze(-r) is applied afterwards.
    """
    if nmax < 3:
        raise ValueError("cubic_state needs nmax >= 3")
    if method == "analytic":
        amps = 1j * chi * np.sqrt(15) / (2 * np.sqrt(2)) * one_and_three(nmax).data
        amps = amps.copy()
        amps[0] += 1.0
    elif method == "operator":
        x = quadrature(nmax, "x").data
        vac = np.zeros(nmax + 1, dtype=complex)
        vac[0] = 1.0
        amps = vac + 1j * chi * (x @ (x @ (x @ vac)))
    else:
        raise ValueError(f"unknown method {method!r}")
    psi = StateVector(amps).normalize()
    if r is not None:
        psi = squeeze(-r, nmax) @ psi
    return psi


def squeeze(r, nmax):
    """Squeezer exp[(i r/2)(xp + px)], which maps x -> e^{-r} x.

    squeeze(r)|0> has <x^2> = e^{-2r}/2. The resource-state prefactor
    S(-r) = exp[-(i r/2)(xp + px)] is ``squeeze(-r)``.
    """
    if abs(r) > 1.5:
        raise ValueError(f"|r| = {abs(r)} exceeds the supported range 1.5")
    a = destroy(nmax).data
    # (i r/2)(xp + px) = (r/2)(a^2 - a^dag^2)
    gen = 0.5 * r * (a @ a - a.conj().T @ a.conj().T)
    return ModeOperator(expm(gen), label=f"S({r:g})")


def cubic_phase_gate(chi, nmax):
    """exp(i chi x^3) as a function of the truncated x matrix.

    Built from the eigendecomposition of x, so it commutes exactly with x.
    """
    x = quadrature(nmax, "x").data
    vals, vecs = np.linalg.eigh(x)
    u = (vecs * np.exp(1j * chi * vals**3)) @ vecs.conj().T
    return ModeOperator(u, label=f"V({chi:g})")


def tmsv(lam, nmax):
    """Two-mode squeezed vacuum sum_n lam^n |n,n>, renormalized on the cutoff."""
    if not 0 <= lam < 1:
        raise ValueError(f"lambda must lie in [0, 1), got {lam}")
    if lam**nmax >= 1e-3:
        warnings.warn(f"lambda^nmax = {lam**nmax:.2e}: TMSV is poorly truncated", TruncationWarning, stacklevel=2)
    d = nmax + 1
    amps = np.zeros((d, d), dtype=complex)
    amps[np.arange(d), np.arange(d)] = lam ** np.arange(d)
    return StateVector(amps.ravel(), (d, d)).normalize()
