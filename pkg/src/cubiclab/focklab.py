"""Truncated Fock-space linear algebra.

Every object lives on the basis |0>..|nmax> of each mode. Multi-mode objects
carry ``dims``, the per-mode dimensions; mode 0 is the leftmost Kronecker
factor and flat indices are row-major over ``dims``.

Quadratures follow x = (a + a^dag)/sqrt(2), p = i(a^dag - a)/sqrt(2), so
[x, p] = i and the vacuum variance is 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from math import prod

import numpy as np

__all__ = [
    "StateVector",
    "DensityMatrix",
    "ModeOperator",
    "destroy",
    "create",
    "number",
    "identity",
    "quadrature",
    "tensor",
    "embed",
    "partial_trace",
    "expectation",
    "as_density",
    "is_unitary",
    "check_density",
]


def _frozen(arr, dtype=complex):
    out = np.array(arr, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


def _check_nmax(nmax):
    if int(nmax) != nmax or nmax < 1:
        raise ValueError(f"nmax must be a positive integer, got {nmax!r}")
    return int(nmax)


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state: complex amplitudes over the (multi-mode) Fock basis."""

    data: np.ndarray
    dims: tuple = field(default=None)

    def __post_init__(self):
        data = _frozen(self.data).ravel()
        dims = (data.size,) if self.dims is None else tuple(int(d) for d in self.dims)
        if prod(dims) != data.size:
            raise ValueError(f"dims {dims} do not match {data.size} amplitudes")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "dims", dims)

    @property
    def nmax(self):
        return self.dims[0] - 1

    def norm(self):
        return float(np.linalg.norm(self.data))

    def normalize(self):
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.data / n, self.dims)

    def overlap(self, other):
        """<self|other>."""
        return complex(np.vdot(self.data, other.data))

    def dm(self):
        return DensityMatrix(np.outer(self.data, self.data.conj()), self.dims)

    def __len__(self):
        return self.data.size


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Mixed state over the (multi-mode) Fock basis."""

    data: np.ndarray
    dims: tuple = field(default=None)

    def __post_init__(self):
        data = _frozen(self.data)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {data.shape}")
        dims = (data.shape[0],) if self.dims is None else tuple(int(d) for d in self.dims)
        if prod(dims) != data.shape[0]:
            raise ValueError(f"dims {dims} do not match dimension {data.shape[0]}")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "dims", dims)

    @property
    def nmax(self):
        return self.dims[0] - 1

    def trace(self):
        return float(np.trace(self.data).real)

    def normalize(self):
        tr = self.trace()
        if tr <= 0:
            raise ValueError("cannot normalize a density matrix with non-positive trace")
        return DensityMatrix(self.data / tr, self.dims)

    def dag(self):
        return DensityMatrix(self.data.conj().T, self.dims)

    def __len__(self):
        return self.data.shape[0]


@dataclass(frozen=True, eq=False)
class ModeOperator:
    """Linear operator on the truncated space; ``label`` is descriptive only."""

    data: np.ndarray
    dims: tuple = field(default=None)
    label: str = ""

    def __post_init__(self):
        data = _frozen(self.data)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ValueError(f"operator must be square, got shape {data.shape}")
        dims = (data.shape[0],) if self.dims is None else tuple(int(d) for d in self.dims)
        if prod(dims) != data.shape[0]:
            raise ValueError(f"dims {dims} do not match dimension {data.shape[0]}")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self):
        return self.data.shape[0]

    def dag(self):
        return ModeOperator(self.data.conj().T, self.dims, f"{self.label}^dag" if self.label else "")

    def __matmul__(self, other):
        if isinstance(other, ModeOperator):
            _match(self.dims, other.dims)
            return ModeOperator(self.data @ other.data, self.dims)
        if isinstance(other, StateVector):
            _match(self.dims, other.dims)
            return StateVector(self.data @ other.data, self.dims)
        return NotImplemented

    def __add__(self, other):
        _match(self.dims, other.dims)
        return ModeOperator(self.data + other.data, self.dims)

    def __sub__(self, other):
        _match(self.dims, other.dims)
        return ModeOperator(self.data - other.data, self.dims)

    def __mul__(self, scalar):
        return ModeOperator(self.data * scalar, self.dims, self.label)

    __rmul__ = __mul__

    def conjugate(self, rho):
        """Return O rho O^dag (unnormalized)."""
        _match(self.dims, rho.dims)
        return DensityMatrix(self.data @ rho.data @ self.data.conj().T, rho.dims)


def _match(d1, d2):
    if tuple(d1) != tuple(d2):
        raise ValueError(f"dimension mismatch: {tuple(d1)} vs {tuple(d2)}")


def destroy(nmax):
    """Annihilation operator with <n-1|a|n> = sqrt(n)."""
    nmax = _check_nmax(nmax)
    return ModeOperator(np.diag(np.sqrt(np.arange(1, nmax + 1)), k=1), label="a")


def create(nmax):
    nmax = _check_nmax(nmax)
    return ModeOperator(np.diag(np.sqrt(np.arange(1, nmax + 1)), k=-1), label="a^dag")


def number(nmax):
    nmax = _check_nmax(nmax)
    return ModeOperator(np.diag(np.arange(nmax + 1, dtype=float)), label="n")


def identity(dims):
    """Identity on a single mode (``dims`` given as nmax) or on a dims tuple."""
    dims = (int(dims) + 1,) if np.isscalar(dims) else tuple(dims)
    return ModeOperator(np.eye(prod(dims)), dims, label="1")


def quadrature(nmax, which="x", theta=0.0):
    """Quadrature operator x, p, or the rotated x_theta = x cos(theta) + p sin(theta)."""
    a = destroy(nmax).data
    ad = a.conj().T
    if which == "x":
        op = (a * np.exp(-1j * theta) + ad * np.exp(1j * theta)) / np.sqrt(2)
    elif which == "p":
        op = 1j * (ad - a) / np.sqrt(2)
        if theta:
            raise ValueError("theta applies to the x quadrature only")
    else:
        raise ValueError(f"which must be 'x' or 'p', got {which!r}")
    return ModeOperator(op, label=which if not theta else f"x_{theta:g}")


def tensor(*parts):
    """Kronecker product of states, density matrices or operators.

    Mode 0 is the leftmost argument. All parts must be of the same kind.
    """
    if len(parts) == 1 and isinstance(parts[0], (list, tuple)):
        parts = tuple(parts[0])
    if not parts:
        raise ValueError("tensor needs at least one part")
    kind = type(parts[0])
    if kind not in (StateVector, DensityMatrix, ModeOperator):
        raise TypeError(f"cannot tensor objects of type {kind.__name__}")
    if any(type(p) is not kind for p in parts):
        raise TypeError("tensor parts must all be of the same kind")
    data = reduce(np.kron, (p.data for p in parts))
    dims = tuple(d for p in parts for d in p.dims)
    return kind(data, dims)


def embed(op, mode, dims):
    """Lift a single-mode operator to act on ``mode`` of a multi-mode space."""
    dims = tuple(dims)
    if not 0 <= mode < len(dims):
        raise ValueError(f"mode {mode} out of range for dims {dims}")
    mat = op.data if isinstance(op, ModeOperator) else np.asarray(op)
    if mat.shape[0] != dims[mode]:
        raise ValueError(f"operator dimension {mat.shape[0]} does not match mode dimension {dims[mode]}")
    left = np.eye(prod(dims[:mode]))
    right = np.eye(prod(dims[mode + 1:]))
    return ModeOperator(np.kron(np.kron(left, mat), right), dims)


def partial_trace(rho, keep):
    """Reduced density matrix on the modes listed in ``keep`` (kept in the given order)."""
    rho = as_density(rho)
    dims = rho.dims
    keep = [keep] if np.isscalar(keep) else list(keep)
    if not keep:
        raise ValueError("keep must name at least one mode")
    if len(set(keep)) != len(keep) or any(not 0 <= k < len(dims) for k in keep):
        raise ValueError(f"invalid mode indices {keep} for dims {dims}")
    n = len(dims)
    drop = [i for i in range(n) if i not in keep]
    t = rho.data.reshape(dims + dims)
    # einsum subscripts: rows a.., cols b..; traced modes share a letter
    letters = "abcdefghijklmnopqrstuvwxyz"
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for i in drop:
        col[i] = row[i]
    out = [row[k] for k in keep] + [col[k] for k in keep]
    red = np.einsum("".join(row + col) + "->" + "".join(out), t)
    kd = tuple(dims[k] for k in keep)
    return DensityMatrix(red.reshape(prod(kd), prod(kd)), kd)


def expectation(rho, op):
    """Tr[rho O]. Real within round-off when O is Hermitian."""
    rho = as_density(rho)
    mat = op.data if isinstance(op, ModeOperator) else np.asarray(op)
    if mat.shape != rho.data.shape:
        raise ValueError(f"dimension mismatch: operator {mat.shape} vs state {rho.data.shape}")
    return complex(np.einsum("ij,ji->", rho.data, mat))


def as_density(state):
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, StateVector):
        return state.dm()
    raise TypeError(f"expected StateVector or DensityMatrix, got {type(state).__name__}")


def is_unitary(op, guard=2, atol=1e-10):
    """Check U^dag U = 1 on the single-mode levels below the top ``guard`` ones."""
    u = op.data if isinstance(op, ModeOperator) else np.asarray(op)
    g = u.conj().T @ u
    keep = u.shape[0] - guard
    return bool(np.allclose(g[:keep, :keep], np.eye(keep), atol=atol, rtol=0))


def check_density(rho, atol=1e-10, eig_tol=1e-8):
    """Raise if ``rho`` is not Hermitian, unit-trace and positive semidefinite."""
    m = rho.data
    if not np.allclose(m, m.conj().T, atol=atol, rtol=0):
        raise AssertionError("density matrix is not Hermitian")
    if abs(np.trace(m).real - 1) > atol:
        raise AssertionError(f"trace {np.trace(m).real!r} differs from 1")
    lo = np.linalg.eigvalsh((m + m.conj().T) / 2).min()
    if lo < -eig_tol:
        raise AssertionError(f"negative eigenvalue {lo:.3e}")
    return rho
