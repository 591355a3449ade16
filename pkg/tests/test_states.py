import warnings

import numpy as np
import pytest

from cubiclab.characterize import moments
from cubiclab.focklab import expectation, number, quadrature
from cubiclab.states import (
    CubicParams,
    TruncationWarning,
    coherent,
    cubic_phase_gate,
    cubic_state,
    fock,
    one_and_three,
    squeeze,
    tmsv,
)


def test_one_and_three_pair_orthonormal():
    a, b = one_and_three(5), one_and_three(5, perp=True)
    assert abs(a.overlap(a)) == pytest.approx(1)
    assert abs(a.overlap(b)) < 1e-15
    assert a.data[1] ** 2 == pytest.approx(0.6)


@pytest.mark.parametrize("chi", [0.0, 0.01, 0.09, 0.3])
def test_cubic_state_closed_form(chi):
    # x^3|0> = (3|1> + sqrt6|3>)/(2 sqrt2), checked from the matrix definition
    psi = cubic_state(chi, 8).data
    c = 1j * chi / (2 * np.sqrt(2))
    ref = np.zeros(9, dtype=complex)
    ref[0], ref[1], ref[3] = 1, 3 * c, np.sqrt(6) * c
    ref /= np.linalg.norm(ref)
    assert np.allclose(psi, ref, atol=1e-14)


def test_cubic_state_mean_p():
    chi = 0.09
    m = moments(cubic_state(chi, 8))
    assert m.mean_x == pytest.approx(0, abs=1e-14)
    assert m.mean_p == pytest.approx(1.5 * chi / (1 + 15 * chi**2 / 8), rel=1e-12)


def test_cubic_state_squeezed_matches_manual():
    psi = cubic_state(0.05, 20, r=0.2)
    ref = squeeze(-0.2, 20) @ cubic_state(0.05, 20)
    assert abs(psi.overlap(ref)) == pytest.approx(1)


def test_cubic_state_bad_method():
    with pytest.raises(ValueError):
        cubic_state(0.1, 5, method="series")


def test_cubic_params():
    p = CubicParams.from_squeezed(0.01, 0.5)
    assert p.chi == pytest.approx(0.01 * np.exp(1.5))
    with pytest.raises(ValueError):
        CubicParams(chi=1.0, chi0=0.01, r=0.5)


@pytest.mark.parametrize("r", [0.1, 0.5])
def test_squeezed_vacuum_variance(r):
    m = moments(squeeze(r, 40) @ fock(0, 40))
    assert m.var_x == pytest.approx(np.exp(-2 * r) / 2, rel=1e-8)
    assert m.var_p == pytest.approx(np.exp(2 * r) / 2, rel=1e-6)


def test_squeeze_range():
    with pytest.raises(ValueError):
        squeeze(2.0, 10)


@pytest.mark.parametrize("alpha", [0.3, 0.8 + 0.4j])
def test_coherent_moments(alpha):
    psi = coherent(alpha, 30)
    m = moments(psi)
    assert m.mean_x == pytest.approx(np.sqrt(2) * np.real(alpha), abs=1e-10)
    assert m.mean_p == pytest.approx(np.sqrt(2) * np.imag(alpha), abs=1e-10)
    assert expectation(psi, number(30)).real == pytest.approx(abs(alpha) ** 2, rel=1e-10)


def test_coherent_warns_on_truncation():
    with pytest.warns(TruncationWarning):
        coherent(2.0, 5)


def test_cubic_phase_gate_shifts_p():
    chi, nmax = 0.02, 30
    V = cubic_phase_gate(chi, nmax)
    psi = coherent(0.5, nmax)
    out = V @ psi
    x2 = expectation(psi, quadrature(nmax) @ quadrature(nmax)).real
    assert moments(out).mean_p == pytest.approx(moments(psi).mean_p + 3 * chi * x2, rel=1e-6)


def test_tmsv_distribution():
    lam = 0.3
    psi = tmsv(lam, 12)
    probs = np.abs(psi.data.reshape(13, 13).diagonal()) ** 2
    assert probs[1] / probs[0] == pytest.approx(lam**2)
    with pytest.raises(ValueError):
        tmsv(1.0, 5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        tmsv(0.1, 5)
    with pytest.warns(TruncationWarning):
        tmsv(0.9, 5)


def test_fock_bounds():
    with pytest.raises(ValueError):
        fock(4, 3)
