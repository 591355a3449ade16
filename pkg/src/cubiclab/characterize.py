"""Diagnostics: Wigner function, coordinate kernel, R-metric, moments, fidelity."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import ndimage
from scipy.optimize import minimize_scalar
from scipy.special import eval_genlaguerre, gammaln

from .channels import displace
from .focklab import DensityMatrix, StateVector, as_density, expectation, quadrature

__all__ = [
    "WignerGrid",
    "CoordKernel",
    "Moments",
    "FitError",
    "default_grid",
    "hermite_fn",
    "hermite_functions",
    "wigner",
    "negative_regions",
    "coord_kernel",
    "antidiag_im",
    "antidiag_model",
    "r_metric",
    "photon_probs",
    "moments",
    "fit_displacement",
    "displacement_residual",
    "fidelity",
    "write_curve_csv",
]


def default_grid(lo=-5.0, hi=5.0, step=0.05):
    """Symmetric grid including both endpoints; the default covers n <= 3 states."""
    n = int(round((hi - lo) / step))
    return np.linspace(lo, hi, n + 1)


def _fmt(v):
    return f"{v:.12g}"


@dataclass(frozen=True, eq=False)
class WignerGrid:
    xs: np.ndarray
    ps: np.ndarray
    values: np.ndarray  # values[i, j] = W(xs[i], ps[j])

    def integral(self):
        dx = self.xs[1] - self.xs[0]
        dp = self.ps[1] - self.ps[0]
        return float(self.values.sum() * dx * dp)

    def marginal_x(self):
        """Integral of W over p, trapezoid rule."""
        return np.trapezoid(self.values, self.ps, axis=1)

    def min(self):
        return float(self.values.min())

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "p", "value"])
            for i, x in enumerate(self.xs):
                for j, p in enumerate(self.ps):
                    w.writerow([_fmt(x), _fmt(p), _fmt(self.values[i, j])])


@dataclass(frozen=True, eq=False)
class CoordKernel:
    xs: np.ndarray
    K: np.ndarray  # K[i, j] = rho(xs[i], xs[j])

    def diagonal(self):
        return np.real(np.diag(self.K))

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "xp", "re", "im"])
            for i, x in enumerate(self.xs):
                for j, xp in enumerate(self.xs):
                    v = self.K[i, j]
                    w.writerow([_fmt(x), _fmt(xp), _fmt(v.real), _fmt(v.imag)])


class Moments(NamedTuple):
    mean_x: float
    mean_p: float
    var_x: float
    var_p: float


class FitError(RuntimeError):
    """The one-dimensional displacement fit failed to converge."""


def write_curve_csv(path, xs, values, header=("x", "value")):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in zip(xs, *np.atleast_2d(values)):
            w.writerow([_fmt(v) for v in row])


def hermite_functions(nmax, x):
    """Matrix psi[i, n] = psi_n(x_i) for n = 0..nmax, by the normalized recurrence."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    psi = np.empty((x.size, nmax + 1))
    psi[:, 0] = np.pi ** -0.25 * np.exp(-(x**2) / 2)
    if nmax >= 1:
        psi[:, 1] = np.sqrt(2) * x * psi[:, 0]
    for n in range(1, nmax):
        psi[:, n + 1] = x * np.sqrt(2 / (n + 1)) * psi[:, n] - np.sqrt(n / (n + 1)) * psi[:, n - 1]
    return psi


def hermite_fn(n, x):
    """Oscillator eigenfunction psi_n(x) = (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2}."""
    if n < 0 or n > 60:
        raise ValueError(f"n must lie in 0..60, got {n}")
    out = hermite_functions(n, x)[:, n]
    return float(out[0]) if np.ndim(x) == 0 else out


def _single_mode(rho):
    rho = as_density(rho)
    if len(rho.dims) != 1:
        raise ValueError("expected a single-mode state")
    return rho


def wigner(rho, xs=None, ps=None):
    """Wigner function W(x, p) normalized to integrate to one (vacuum peak 1/pi).

    Each Fock matrix element |m><n| contributes a displaced-parity term
    written with associated Laguerre polynomials, so every grid point is exact.
    """
    rho = _single_mode(rho).data
    xs = default_grid() if xs is None else np.asarray(xs, dtype=float)
    ps = xs if ps is None else np.asarray(ps, dtype=float)
    X, P = np.meshgrid(xs, ps, indexing="ij")
    alpha = (X + 1j * P) / np.sqrt(2)
    r2 = 4 * np.abs(alpha) ** 2
    two_ac = 2 * np.conj(alpha)
    d = rho.shape[0]
    W = np.zeros(X.shape)
    for k in range(d):
        acc = np.zeros(X.shape, dtype=complex)
        for n in range(d - k):
            c = rho[n + k, n]
            if c == 0:
                continue
            coef = (-1) ** n * np.exp(0.5 * (gammaln(n + 1) - gammaln(n + k + 1)))
            acc += c * coef * eval_genlaguerre(n, k, r2)
        term = acc * two_ac**k
        W += term.real if k == 0 else 2 * term.real
    W *= np.exp(-r2 / 2) / np.pi
    return WignerGrid(xs, ps, W)


def negative_regions(grid, tol=1e-6):
    """Number of connected grid regions where W < -tol."""
    _, count = ndimage.label(grid.values < -tol)
    return int(count)


def coord_kernel(rho, xs=None):
    """rho(x, x') = sum_mn rho_mn psi_m(x) psi_n(x') on the grid ``xs``."""
    rho = _single_mode(rho)
    xs = default_grid() if xs is None else np.asarray(xs, dtype=float)
    psi = hermite_functions(rho.nmax, xs)
    return CoordKernel(xs, psi @ rho.data @ psi.T)


def antidiag_im(rho, xs):
    """Im rho(x, -x) sampled on ``xs``."""
    rho = _single_mode(rho)
    xs = np.asarray(xs, dtype=float)
    psi = hermite_functions(rho.nmax, xs)
    parity = (-1.0) ** np.arange(rho.dims[0])
    vals = np.einsum("im,mn,in->i", psi, rho.data, psi * parity)
    return vals.imag


def antidiag_model(xs, chi):
    """First-order anti-diagonal of the ideal cubic state, 2 chi x^3 e^{-x^2}/sqrt(pi).

    The 1/sqrt(pi) is the vacuum wavefunction normalization |psi_0(x)|^2.
    """
    xs = np.asarray(xs, dtype=float)
    return 2 * chi * xs**3 * np.exp(-(xs**2)) / np.sqrt(np.pi)


def r_metric(rho, phi):
    """|<0|rho|phi>|^2 / (<0|rho|0> <phi|rho|phi>) for phi orthogonal to |0>.

    Returns 0 when phi is unpopulated; raises ValueError when the vacuum is.
    """
    rho = _single_mode(rho)
    phi = phi.data if isinstance(phi, StateVector) else np.asarray(phi, dtype=complex)
    if phi.size != rho.dims[0]:
        raise ValueError("phi and rho live on different truncations")
    phi = phi / np.linalg.norm(phi)
    if abs(phi[0]) > 1e-12:
        raise ValueError("phi must be orthogonal to the vacuum")
    m = rho.data
    off = m[0] @ phi
    p0 = m[0, 0].real
    pphi = np.vdot(phi, m @ phi).real
    if p0 <= 1e-12:
        raise ValueError(f"vanishing denominator: <0|rho|0>={p0:.3e}")
    if pphi <= 1e-12:
        # |<0|rho|phi>|^2 <= <0|rho|0><phi|rho|phi>, so no coherence is possible
        return 0.0
    return float(abs(off) ** 2 / (p0 * pphi))


def photon_probs(rho):
    return np.real(np.diag(_single_mode(rho).data)).copy()


def moments(rho):
    rho = _single_mode(rho)
    x = quadrature(rho.nmax, "x")
    p = quadrature(rho.nmax, "p")
    mx = expectation(rho, x).real
    mp = expectation(rho, p).real
    x2 = expectation(rho, x @ x).real
    p2 = expectation(rho, p @ p).real
    return Moments(mx, mp, x2 - mx**2, p2 - mp**2)


def _cubic_profile(xs):
    return xs**3 * np.exp(-(xs**2))


def displacement_residual(rho, delta_p, xs):
    """Least-squares residual of the p-displaced anti-diagonal against beta x^3 e^{-x^2}.

    Returns ``(residual, beta)`` with beta optimal for the given shift.
    """
    shifted = displace(rho, 1j * delta_p / np.sqrt(2))
    c = antidiag_im(shifted, xs)
    m = _cubic_profile(xs)
    beta = float(c @ m / (m @ m))
    return float(np.sum((c - beta * m) ** 2)), beta


def fit_displacement(rho, xs=None, span=1.0, step=0.01):
    """Find the p-shift that best reveals a pure cubic anti-diagonal.

    Scans shifts over [-span, span], then polishes the best point with a
    bounded scalar minimization. Ties resolve to the smallest |shift|.
    Returns ``(delta_p, shifted_state)``.
    """
    rho = _single_mode(rho)
    xs = default_grid(-3, 3, 0.02) if xs is None else np.asarray(xs, dtype=float)
    grid = np.round(np.arange(-span, span + step / 2, step), 12)
    res = np.array([displacement_residual(rho, dp, xs)[0] for dp in grid])
    best = res.min()
    ties = grid[res <= best + 1e-14 * max(1.0, abs(best))]
    dp0 = float(ties[np.argmin(np.abs(ties))])
    if best <= 1e-28:
        return dp0, displace(rho, 1j * dp0 / np.sqrt(2))
    lo, hi = max(-span, dp0 - step), min(span, dp0 + step)
    opt = minimize_scalar(
        lambda d: displacement_residual(rho, d, xs)[0],
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-9},
    )
    if not opt.success:
        raise FitError(f"displacement fit did not converge: {opt.message}")
    dp = float(opt.x) if opt.fun <= best else dp0
    return dp, displace(rho, 1j * dp / np.sqrt(2))


def _purity_vector(m, tol=1e-10):
    w, v = np.linalg.eigh(m)
    if abs(w[-1] - 1) < tol and abs(np.trace(m).real - 1) < tol:
        return v[:, -1]
    return None


def fidelity(rho, sigma):
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2; |<psi|phi>|^2 for pure states."""
    if isinstance(rho, StateVector) and isinstance(sigma, StateVector):
        return float(abs(rho.overlap(sigma)) ** 2)
    a = as_density(rho).data
    b = as_density(sigma).data
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    for pure, other in ((rho, b), (sigma, a)):
        vec = pure.data if isinstance(pure, StateVector) else _purity_vector(as_density(pure).data)
        if vec is not None:
            return float(min(np.vdot(vec, other @ vec).real, 1.0))
    w, v = np.linalg.eigh(a)
    s = (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T
    ev = np.linalg.eigvalsh(s @ b @ s)
    # eigenvalue round-off can push the result a few ulps past 1
    return float(min(np.sum(np.sqrt(np.clip(ev, 0, None))) ** 2, 1.0))
