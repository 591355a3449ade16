"""Independent reference computations used to freeze and cross-check expected values.

None of these reuse the package's Fock-space machinery: they work from
wavefunctions on a grid, explicit multinomial photon paths, or brute-force
enumeration.
"""

import itertools
from functools import lru_cache

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_hermite, factorial


def hermite_table(nmax, x):
    """psi_n(x) from the explicit Hermite-polynomial formula."""
    out = np.empty((nmax + 1, x.size))
    for n in range(nmax + 1):
        norm = 1.0 / np.sqrt(2.0**n * factorial(n) * np.sqrt(np.pi))
        out[n] = norm * eval_hermite(n, x) * np.exp(-(x**2) / 2)
    return out


def wavefunction(amps, x):
    """psi(x) and psi'(x) for Fock amplitudes ``amps``."""
    amps = np.asarray(amps, dtype=complex)
    nmax = amps.size - 1
    tab = hermite_table(nmax + 1, x)
    psi = amps @ tab[: nmax + 1]
    # psi_n' = sqrt(n/2) psi_{n-1} - sqrt((n+1)/2) psi_{n+1}
    dpsi = np.zeros_like(psi)
    for n, c in enumerate(amps):
        if n > 0:
            dpsi += c * np.sqrt(n / 2) * tab[n - 1]
        dpsi -= c * np.sqrt((n + 1) / 2) * tab[n + 1]
    return psi, dpsi


def fused_moments(amps_s, amps_a, step=0.01, extent=12.0):
    """Moments of psi_S(x/sqrt2) psi_A(x/sqrt2): (mean_x, mean_p, weight)."""
    x = np.arange(-extent, extent + step / 2, step)
    y = x / np.sqrt(2)
    ps, dps = wavefunction(amps_s, y)
    pa, dpa = wavefunction(amps_a, y)
    phi = ps * pa
    dphi = (dps * pa + ps * dpa) / np.sqrt(2)
    dens = np.abs(phi) ** 2
    w = np.trapezoid(dens, x)
    mean_x = np.trapezoid(x * dens, x) / w
    mean_p = np.trapezoid(np.imag(np.conj(phi) * dphi), x) / w
    var_x = np.trapezoid((x - mean_x) ** 2 * dens, x) / w
    return mean_x, mean_p, w, var_x


def coherent_amps(alpha, nmax):
    n = np.arange(nmax + 1)
    amps = np.exp(-abs(alpha) ** 2 / 2) * alpha**n / np.sqrt(factorial(n))
    return amps / np.linalg.norm(amps)


def heralded_state(lam, betas, split, nmax, idler_nmax, m_cut=30, pad=45):
    """Signal state after three clicks, by summing every photon path explicitly.

    The idler's n photons spread over the three arms with multinomial
    amplitudes; each arm is displaced (matrix elements from a large padded
    exponential) and every click outcome m_i >= 1 up to ``m_cut`` is summed.
    """
    c1, s1 = np.cos(split[0]), np.sin(split[0])
    c2, s2 = np.cos(split[1]), np.sin(split[1])
    t = np.array([c1, -s1 * c2, s1 * s2])
    k = idler_nmax + 1
    psi = np.zeros((nmax + 1, k, k, k), dtype=complex)
    for n in range(nmax + 1):
        for n1, n2 in itertools.product(range(n + 1), repeat=2):
            n3 = n - n1 - n2
            if n3 < 0 or max(n1, n2, n3) >= k:
                continue
            mult = np.sqrt(factorial(n) / (factorial(n1) * factorial(n2) * factorial(n3)))
            psi[n, n1, n2, n3] = lam**n * mult * t[0] ** n1 * t[1] ** n2 * t[2] ** n3
    psi /= np.sqrt(np.sum(lam ** (2 * np.arange(nmax + 1))))
    ops = [_displacement(complex(b), pad)[1 : m_cut + 1, :k] for b in betas]
    amp = np.einsum("snop,an,bo,cp->sabc", psi, *ops, optimize=True).reshape(nmax + 1, -1)
    rho = amp @ amp.conj().T
    p = np.trace(rho).real
    return rho / p, p


@lru_cache(maxsize=256)
def _displacement(beta, pad):
    a = np.diag(np.sqrt(np.arange(1, pad + 1)), 1)
    return expm(beta * a.T - np.conj(beta) * a)


def grid_search(fid_fn, mags=(0.0, 0.1, 0.2, 0.3, 0.5), phases=4):
    """Brute-force maximum of ``fid_fn(betas)`` over a polar grid per arm."""
    opts = [0j] + [m * np.exp(2j * np.pi * k / phases) for m in mags if m > 0 for k in range(phases)]
    best, arg = -1.0, None
    for combo in itertools.product(opts, repeat=3):
        f = fid_fn(combo)
        if f > best:
            best, arg = f, combo
    return best, arg
