"""Idealized conditional preparation from a photon-pair source.

A two-mode squeezed vacuum feeds the signal mode and an idler. The idler is
split three ways, each arm is displaced, and three on/off detectors must all
click. Conditioning on the triple coincidence and tracing out the idlers
leaves the heralded signal state.

An on/off detector behind a displacement D(beta) has no-click element
D(beta)^dag |0><0| D(beta) = |-beta><-beta|, so the click element is
1 - |-beta><-beta| and the triple-click projection expands by
inclusion-exclusion into eight coherent-state contractions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import combinations

import numpy as np
from scipy.optimize import minimize

from .channels import beamsplitter
from .characterize import fidelity
from .focklab import DensityMatrix, StateVector
from .states import coherent_amplitudes, tmsv

__all__ = [
    "BALANCED_SPLIT",
    "HeraldConfig",
    "HeraldError",
    "OptimizationError",
    "herald",
    "heralded_fidelity",
    "idler_modes",
    "optimize_betas",
]

# arm 1 keeps 1/3 of the idler, the rest is halved between arms 2 and 3
BALANCED_SPLIT = (float(np.arccos(1 / np.sqrt(3))), float(np.pi / 4))


class HeraldError(RuntimeError):
    """Triple-click probability is numerically zero."""

    def __init__(self, msg, p_success=0.0):
        super().__init__(msg)
        self.p_success = p_success


class OptimizationError(RuntimeError):
    """No optimizer start reached the acceptance fidelity; ``best`` holds the best config."""

    def __init__(self, msg, best, best_fidelity):
        super().__init__(msg)
        self.best = best
        self.best_fidelity = best_fidelity


@dataclass(frozen=True)
class HeraldConfig:
    """Heralding parameters.

    JSON keys: ``lambda`` (float), ``betas`` (three ``[re, im]`` pairs),
    ``split`` (two beam-splitter angles in radians), ``nmax`` (signal cutoff),
    ``idler_nmax`` (per-idler-arm cutoff).
    """

    lam: float
    betas: tuple = (0j, 0j, 0j)
    split: tuple = BALANCED_SPLIT
    nmax: int = 5
    idler_nmax: int = field(default=None)

    def __post_init__(self):
        betas = tuple(complex(b) for b in self.betas)
        if len(betas) != 3:
            raise ValueError("exactly three displacement amplitudes are required")
        split = tuple(float(s) for s in self.split)
        if len(split) != 2:
            raise ValueError("split needs two beam-splitter angles")
        idler = self.nmax if self.idler_nmax is None else int(self.idler_nmax)
        object.__setattr__(self, "betas", betas)
        object.__setattr__(self, "split", split)
        object.__setattr__(self, "idler_nmax", idler)
        if not 0 <= self.lam <= 0.5:
            raise ValueError(f"lambda must lie in [0, 0.5], got {self.lam}")
        if self.nmax < 3:
            raise ValueError("signal nmax must be at least 3")
        if idler < 2:
            raise ValueError("idler nmax must be at least 2")

    def with_betas(self, betas):
        return replace(self, betas=tuple(betas))

    def to_dict(self):
        return {
            "lambda": self.lam,
            "betas": [[b.real, b.imag] for b in self.betas],
            "split": list(self.split),
            "nmax": self.nmax,
            "idler_nmax": self.idler_nmax,
        }

    @classmethod
    def from_dict(cls, d):
        allowed = {"lambda", "betas", "split", "nmax", "idler_nmax"}
        unknown = set(d) - allowed
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "lambda" not in d:
            raise ValueError("config needs a 'lambda' entry")
        kw = {"lam": float(d["lambda"])}
        if "betas" in d:
            betas = d["betas"]
            if len(betas) != 3 or any(len(b) != 2 for b in betas):
                raise ValueError("'betas' must hold three [re, im] pairs")
            kw["betas"] = tuple(complex(float(re), float(im)) for re, im in betas)
        if "split" in d:
            kw["split"] = tuple(d["split"])
        if "nmax" in d:
            kw["nmax"] = int(d["nmax"])
        if "idler_nmax" in d:
            kw["idler_nmax"] = int(d["idler_nmax"])
        return cls(**kw)

    def to_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")

    @classmethod
    def from_json(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


@lru_cache(maxsize=16)
def _bs(theta, d):
    return beamsplitter(theta, (0, 1), (d, d)).data.reshape(d, d, d, d)


def idler_modes(cfg):
    """Pure signal + three-arm idler amplitudes, shape (ds, di, di, di)."""
    d = cfg.nmax + 1
    pair = tmsv(cfg.lam, cfg.nmax).data.reshape(d, d)
    psi = np.zeros((d, d, d, d), dtype=complex)
    psi[:, :, 0, 0] = pair
    # cutoffs of d on every arm keep both splitters exact
    psi = np.einsum("abcd,scdx->sabx", _bs(cfg.split[0], d), psi)
    psi = np.einsum("abcd,sxcd->sxab", _bs(cfg.split[1], d), psi)
    k = cfg.idler_nmax + 1
    return psi[:, :k, :k, :k]


def herald(cfg):
    """Heralded signal state and triple-click probability for ``cfg``."""
    psi = idler_modes(cfg)
    ds, k = psi.shape[0], psi.shape[1]
    no_click = [coherent_amplitudes(-b, k - 1) for b in cfg.betas]
    rho = np.zeros((ds, ds), dtype=complex)
    for size in range(4):
        for subset in combinations(range(3), size):
            phi = psi
            # contract from the last arm so axis numbers stay valid
            for arm in sorted(subset, reverse=True):
                phi = np.tensordot(phi, no_click[arm].conj(), axes=([1 + arm], [0]))
            phi = phi.reshape(ds, -1)
            rho += (-1) ** size * (phi @ phi.conj().T)
    p = float(np.trace(rho).real)
    if p < 1e-15:
        raise HeraldError(f"triple-click probability {p:.3e} is numerically zero", max(p, 0.0))
    rho = 0.5 * (rho + rho.conj().T) / p
    return DensityMatrix(rho), p


def _fit_target(target, nmax):
    amps = np.asarray(target.data if isinstance(target, StateVector) else target, dtype=complex)
    amps = amps / np.linalg.norm(amps)
    if np.sum(np.abs(amps[4:]) ** 2) > 1e-12:
        raise ValueError("target must lie in span{|0>, ..., |3>}")
    if abs(amps[0]) ** 2 > 1 - 1e-12:
        raise ValueError("target has no photon content; a triple click cannot herald the vacuum")
    out = np.zeros(nmax + 1, dtype=complex)
    m = min(amps.size, nmax + 1)
    out[:m] = amps[:m]
    return StateVector(out)


def heralded_fidelity(cfg, target):
    try:
        rho, _ = herald(cfg)
    except HeraldError:
        return 0.0
    return fidelity(rho, target)


def optimize_betas(target, cfg_base, starts=8, seed=0, scale=2.0, threshold=0.5):
    """Maximize heralded fidelity to ``target`` over the three displacements.

    Multi-start Nelder-Mead over (Re, Im) of each beta. The first start is
    the base config's betas; the rest are drawn uniformly from
    [-scale, scale]^6 with ``seed``. Raises OptimizationError if no start
    exceeds ``threshold``.
    """
    tgt = _fit_target(target, cfg_base.nmax)

    def cost(v):
        betas = v[0::2] + 1j * v[1::2]
        return -heralded_fidelity(cfg_base.with_betas(betas), tgt)

    rng = np.random.default_rng(seed)
    base = np.array([[b.real, b.imag] for b in cfg_base.betas]).ravel()
    inits = [base] + [rng.uniform(-scale, scale, 6) for _ in range(starts - 1)]
    best_v, best_f = base, -cost(base)
    for v0 in inits:
        res = minimize(cost, v0, method="Nelder-Mead", options={"xatol": 1e-6, "fatol": 1e-10, "maxiter": 4000})
        if -res.fun > best_f:
            best_v, best_f = res.x, -res.fun
    best = cfg_base.with_betas(best_v[0::2] + 1j * best_v[1::2])
    if best_f < threshold:
        raise OptimizationError(f"best fidelity {best_f:.3f} below {threshold}", best, best_f)
    return best
