"""Homodyne sampling and maximum-likelihood state reconstruction."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .characterize import hermite_functions
from .focklab import DensityMatrix, as_density

__all__ = [
    "QuadratureRecord",
    "TomoConfig",
    "TomographyError",
    "RecordFormatError",
    "default_phases",
    "quadrature_pdf",
    "sample",
    "reconstruct",
    "write_density_json",
    "read_density_json",
]


class TomographyError(RuntimeError):
    """Likelihood iteration broke down numerically."""


class RecordFormatError(ValueError):
    """Malformed quadrature CSV."""


def default_phases(k=12):
    return np.arange(k) * np.pi / k


@dataclass(frozen=True, eq=False)
class QuadratureRecord:
    """Homodyne samples: LO phase ``thetas[i]`` in [0, pi) with outcome ``xs[i]``."""

    thetas: np.ndarray
    xs: np.ndarray

    def __post_init__(self):
        th = np.asarray(self.thetas, dtype=float).ravel()
        xs = np.asarray(self.xs, dtype=float).ravel()
        if th.shape != xs.shape:
            raise ValueError("thetas and xs must have the same length")
        if np.any((th < 0) | (th >= np.pi)):
            raise ValueError("phases must lie in [0, pi)")
        if not np.all(np.isfinite(xs)):
            raise ValueError("quadrature values must be finite")
        th.setflags(write=False)
        xs.setflags(write=False)
        object.__setattr__(self, "thetas", th)
        object.__setattr__(self, "xs", xs)

    def __len__(self):
        return self.xs.size

    @property
    def phases(self):
        return np.unique(self.thetas)

    def rotated(self, delta):
        """Record with every phase shifted by ``delta`` (mod pi, flipping x across pi)."""
        th = self.thetas + delta
        wraps = np.floor(th / np.pi)
        sign = np.where(wraps % 2 == 0, 1.0, -1.0)
        return QuadratureRecord(th - wraps * np.pi, self.xs * sign)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            fh.write("theta,x\n")
            for t, x in zip(self.thetas, self.xs):
                fh.write(f"{t:.9g},{x:.9g}\n")

    @classmethod
    def from_csv(cls, path):
        thetas, xs = [], []
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise RecordFormatError(f"{path}: empty file")
            if [h.strip() for h in header] != ["theta", "x"]:
                raise RecordFormatError(f"{path}:1: expected header 'theta,x', got {','.join(header)!r}")
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 2:
                    raise RecordFormatError(f"{path}:{lineno}: expected 2 fields, got {len(row)}")
                try:
                    t, x = float(row[0]), float(row[1])
                except ValueError:
                    raise RecordFormatError(f"{path}:{lineno}: non-numeric field in {row!r}") from None
                if not (np.isfinite(t) and np.isfinite(x)) or not 0 <= t < np.pi:
                    raise RecordFormatError(f"{path}:{lineno}: value out of range in {row!r}")
                thetas.append(t)
                xs.append(x)
        if not xs:
            raise RecordFormatError(f"{path}: no samples")
        return cls(np.array(thetas), np.array(xs))


@dataclass(frozen=True)
class TomoConfig:
    """Reconstruction settings; ``tol`` bounds the per-iteration log-likelihood gain."""

    nmax: int = 10
    bins: float = 0.05
    max_iters: int = 5000
    tol: float = 1e-10
    subdiv: int = field(default=4)

    def __post_init__(self):
        if self.bins <= 0 or self.tol <= 0:
            raise ValueError("bins and tol must be positive")
        if self.nmax < 1 or self.max_iters < 1 or self.subdiv < 1:
            raise ValueError("nmax, max_iters and subdiv must be positive")


def _projector_vectors(theta, xs, nmax):
    """Rows <n|x_theta> = e^{i n theta} psi_n(x)."""
    return hermite_functions(nmax, xs) * np.exp(1j * theta * np.arange(nmax + 1))


def quadrature_pdf(rho, theta, xs):
    """Pr(x | theta) = <x_theta|rho|x_theta>."""
    rho = as_density(rho)
    w = _projector_vectors(theta, xs, rho.nmax)
    return np.einsum("im,mn,in->i", w.conj(), rho.data, w).real


def sample(rho, thetas=None, n_per_phase=10_000, seed=0, lo=-6.0, hi=6.0, step=0.005):
    """Draw homodyne outcomes by inverse-CDF sampling of each phase's marginal.

    Phase k uses its own child of ``SeedSequence(seed)``, so records are
    reproducible and independent of how phases are scheduled.
    """
    rho = as_density(rho)
    if len(rho.dims) != 1:
        raise ValueError("sample takes a single-mode state")
    thetas = default_phases() if thetas is None else np.asarray(thetas, dtype=float)
    grid = np.linspace(lo, hi, int(round((hi - lo) / step)) + 1)
    children = np.random.SeedSequence(seed).spawn(len(thetas))
    all_t, all_x = [], []
    for theta, ss in zip(thetas, children):
        pdf = np.clip(quadrature_pdf(rho, theta, grid), 0, None)
        cdf = np.concatenate([[0.0], np.cumsum(0.5 * (pdf[1:] + pdf[:-1]) * np.diff(grid))])
        cdf /= cdf[-1]
        u = np.random.default_rng(ss).random(n_per_phase)
        all_x.append(np.interp(u, cdf, grid))
        all_t.append(np.full(n_per_phase, theta))
    return QuadratureRecord(np.concatenate(all_t), np.concatenate(all_x))


def _binned_projectors(rec, cfg):
    """Histogram counts and sub-sampled projector vectors for every occupied bin."""
    w = cfg.bins
    edges_lo = np.floor(rec.xs.min() / w) * w
    counts_all, vecs_all = [], []
    offsets = (np.arange(cfg.subdiv) + 0.5) / cfg.subdiv * w
    for theta in rec.phases:
        x = rec.xs[rec.thetas == theta]
        idx = np.floor((x - edges_lo) / w).astype(int)
        bins, counts = np.unique(idx, return_counts=True)
        left = edges_lo + bins * w
        pts = (left[:, None] + offsets[None, :]).ravel()
        v = _projector_vectors(theta, pts, cfg.nmax) * np.sqrt(w / cfg.subdiv)
        vecs_all.append(v.reshape(bins.size, cfg.subdiv, cfg.nmax + 1))
        counts_all.append(counts)
    return np.concatenate(counts_all).astype(float), np.concatenate(vecs_all)


def _probs(rho, vecs):
    return np.einsum("bsm,mn,bsn->b", vecs.conj(), rho, vecs).real


def _R(freqs, probs, vecs):
    wts = freqs / probs
    return np.einsum("b,bsm,bsn->mn", wts, vecs, vecs.conj())


def reconstruct(rec, cfg=None, history=None):
    """Maximum-likelihood density matrix from a quadrature record.

    Iterates rho <- R rho R / Tr, where R = sum_j (f_j/p_j) Pi_j runs over
    histogram bins. If a full step lowers the likelihood, the step is diluted
    (R -> (1 + eps R)/(1 + eps), eps halved until the likelihood rises),
    which guarantees monotone ascent. Stops when the gain in mean
    log-likelihood falls below ``cfg.tol`` or after ``cfg.max_iters``.
    ``history``, if a list, receives the log-likelihood after every iteration.
    """
    cfg = TomoConfig() if cfg is None else cfg
    if len(rec) < 1000:
        raise ValueError(f"need at least 1000 samples, got {len(rec)}")
    if rec.phases.size < 6:
        raise ValueError(f"need at least 6 distinct phases, got {rec.phases.size}")
    counts, vecs = _binned_projectors(rec, cfg)
    freqs = counts / counts.sum()
    d = cfg.nmax + 1
    rho = np.eye(d, dtype=complex) / d

    def loglik(p):
        return float(freqs @ np.log(np.clip(p, 1e-300, None)))

    p = _probs(rho, vecs)
    ll = loglik(p)
    if history is not None:
        history.append(ll)
    eye = np.eye(d)
    for it in range(1, cfg.max_iters + 1):
        R = _R(freqs, p, vecs)
        eps = None
        while True:
            step = R if eps is None else (eye + eps * R) / (1 + eps)
            new = step @ rho @ step
            new = 0.5 * (new + new.conj().T)
            new /= np.trace(new).real
            p_new = _probs(new, vecs)
            ll_new = loglik(p_new)
            if not np.isfinite(ll_new):
                raise TomographyError(f"log-likelihood became non-finite at iteration {it}")
            if ll_new >= ll:
                break
            eps = 1.0 if eps is None else eps / 2
            if eps < 1e-12:
                # no ascent direction left: converged to machine precision
                return DensityMatrix(rho)
        gain = ll_new - ll
        rho, p, ll = new, p_new, ll_new
        if history is not None:
            history.append(ll)
        if gain < cfg.tol:
            break
    return DensityMatrix(rho)


def write_density_json(rho, path, **extra):
    """Row-major dump: ``elements[i][j] = [re, im]``."""
    rho = as_density(rho)
    out = {
        "dims": list(rho.dims),
        "elements": [[[float(v.real), float(v.imag)] for v in row] for row in rho.data],
    }
    out.update(extra)
    with open(path, "w") as fh:
        json.dump(out, fh, indent=1, sort_keys=True)
        fh.write("\n")


def read_density_json(path):
    with open(path) as fh:
        d = json.load(fh)
    arr = np.array(d["elements"], dtype=float)
    return DensityMatrix(arr[..., 0] + 1j * arr[..., 1], tuple(d["dims"]))
