import numpy as np
import pytest
from oracles import hermite_table

from cubiclab.channels import displace, loss, subtract
from cubiclab.characterize import (
    FitError,
    antidiag_im,
    antidiag_model,
    coord_kernel,
    default_grid,
    displacement_residual,
    fidelity,
    fit_displacement,
    hermite_fn,
    hermite_functions,
    moments,
    negative_regions,
    photon_probs,
    r_metric,
    wigner,
)
from cubiclab.focklab import DensityMatrix
from cubiclab.states import coherent, cubic_state, fock, one_and_three


def test_hermite_recurrence_matches_explicit():
    x = np.linspace(-6, 6, 241)
    assert np.allclose(hermite_functions(20, x), hermite_table(20, x).T, atol=1e-12)


def test_hermite_fn_scalar_and_bounds():
    assert hermite_fn(0, 0.0) == pytest.approx(np.pi**-0.25)
    assert hermite_fn(1, 0.0) == 0.0
    with pytest.raises(ValueError):
        hermite_fn(61, 0.0)


@pytest.mark.parametrize("n,peak", [(0, 1 / np.pi), (1, -1 / np.pi), (2, 1 / np.pi)])
def test_wigner_fock_origin(n, peak):
    W = wigner(fock(n, 4), [0.0], [0.0])
    assert W.values[0, 0] == pytest.approx(peak)


def test_wigner_coherent_is_shifted_gaussian():
    alpha = 0.5 + 0.3j
    xs = np.linspace(-3, 3, 31)
    W = wigner(coherent(alpha, 25), xs, xs).values
    X, P = np.meshgrid(xs, xs, indexing="ij")
    x0, p0 = np.sqrt(2) * alpha.real, np.sqrt(2) * alpha.imag
    ref = np.exp(-((X - x0) ** 2) - (P - p0) ** 2) / np.pi
    assert np.allclose(W, ref, atol=1e-9)


@pytest.mark.parametrize("state", [fock(3, 5), cubic_state(0.3, 5), coherent(0.7, 15)])
def test_wigner_normalization_and_marginal(state):
    grid = wigner(state)
    assert grid.integral() == pytest.approx(1, abs=2e-3)
    diag = coord_kernel(state).diagonal()
    assert np.max(np.abs(grid.marginal_x() - diag)) < 2e-3


def test_negative_regions_counts():
    assert negative_regions(wigner(fock(0, 3))) == 0
    assert negative_regions(wigner(fock(1, 3))) == 1
    sub, _ = subtract(cubic_state(0.09, 8), 1)
    grid = wigner(sub)
    assert grid.min() < -0.01
    assert negative_regions(grid) >= 1


def test_coord_kernel_hermitian():
    K = coord_kernel(cubic_state(0.2, 8), default_grid(-3, 3, 0.1)).K
    assert np.allclose(K, K.conj().T, atol=1e-10)
    assert np.trapezoid(np.real(np.diag(K)), default_grid(-3, 3, 0.1)) == pytest.approx(1, abs=2e-3)


def test_antidiag_vacuum_zero():
    xs = default_grid(-3, 3, 0.01)
    assert np.max(np.abs(antidiag_im(fock(0, 6), xs))) < 1e-12


def test_antidiag_first_order_law():
    chi = 0.01
    xs = default_grid(-3, 3, 0.01)
    err = np.abs(antidiag_im(cubic_state(chi, 8), xs) - antidiag_model(xs, chi))
    assert err.max() <= 5 * chi**2


def test_kernel_translation_covariance():
    # a real displacement translates the kernel along the diagonal
    psi = cubic_state(0.09, 30)
    a = 0.3
    xs = np.linspace(-2, 2, 21)
    K0 = coord_kernel(psi, xs - a * np.sqrt(2)).K
    K1 = coord_kernel(displace(psi, a), xs).K
    assert np.allclose(K0, K1, atol=1e-8)


def test_p_displacement_conceals_curve():
    psi = cubic_state(0.09, 30)
    xs = default_grid(-3, 3, 0.02)
    moved = displace(psi, 1j * 0.2 / np.sqrt(2))
    assert np.max(np.abs(antidiag_im(moved, xs) - antidiag_im(psi, xs))) > 1e-3


def test_fit_displacement_undoes_shift():
    psi = cubic_state(0.09, 30)
    moved = displace(psi, 1j * 0.3 / np.sqrt(2))
    dp, shifted = fit_displacement(moved)
    assert dp == pytest.approx(-0.3, abs=1e-4)
    assert fidelity(shifted, psi) == pytest.approx(1, abs=1e-8)


def test_fit_displacement_ideal_and_vacuum():
    assert fit_displacement(cubic_state(0.09, 20))[0] == 0.0
    assert fit_displacement(fock(0, 20))[0] == 0.0


def test_displacement_residual_zero_on_ideal():
    res, beta = displacement_residual(cubic_state(0.01, 20), 0.0, default_grid(-3, 3, 0.02))
    assert res < 1e-20
    assert beta > 0


def test_r_metric_pure_and_mixed():
    one3 = one_and_three(8)
    psi = cubic_state(0.09, 8)
    assert r_metric(psi, one3) == pytest.approx(1, abs=1e-10)
    assert r_metric(psi, one_and_three(8, perp=True)) == 0.0
    mix = DensityMatrix(0.5 * (fock(0, 8).dm().data + one3.dm().data))
    assert r_metric(mix, one3) == pytest.approx(0, abs=1e-15)


def test_r_metric_errors():
    with pytest.raises(ValueError):
        r_metric(fock(1, 4), fock(2, 4))
    with pytest.raises(ValueError):
        r_metric(fock(0, 4), fock(0, 4))


def test_r_metric_decreases_with_loss():
    psi = cubic_state(0.09, 20)
    one3 = one_and_three(20)
    vals = [r_metric(loss(psi, eta), one3) for eta in (1.0, 0.9, 0.8, 0.7, 0.6, 0.5)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_subtraction_preserves_superposition():
    sub, _ = subtract(cubic_state(0.09, 8), 1)
    assert r_metric(sub, fock(2, 8)) == pytest.approx(1, abs=1e-10)


def test_photon_probs_cubic_ratio():
    p = photon_probs(cubic_state(0.2, 8))
    assert p[2] == 0 and p[4] == 0
    assert p[1] / p[3] == pytest.approx(1.5)


def test_moments_coherent():
    m = moments(coherent(1.0, 20))
    assert m.mean_x == pytest.approx(np.sqrt(2), abs=1e-6)
    assert m.var_x == pytest.approx(0.5, abs=1e-6)


@pytest.mark.parametrize("chi", [0.01, 0.09, 0.3])
def test_fidelity_to_vacuum(chi):
    f = fidelity(fock(0, 8), cubic_state(chi, 8))
    assert f == pytest.approx(1 / (1 + 15 * chi**2 / 8), abs=1e-10)


def test_fidelity_mixed_uhlmann(rng):
    from conftest import random_density

    a = DensityMatrix(random_density(rng, 4))
    b = DensityMatrix(random_density(rng, 4))
    assert fidelity(a, a) == pytest.approx(1, abs=1e-8)
    f = fidelity(a, b)
    assert 0 <= f <= 1
    assert fidelity(b, a) == pytest.approx(f, abs=1e-8)
    assert fidelity(fock(0, 3), fock(1, 3)) == 0


def test_fit_error_is_runtime_error():
    assert issubclass(FitError, RuntimeError)
