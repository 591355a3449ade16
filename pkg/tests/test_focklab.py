import numpy as np
import pytest
from conftest import random_density

from cubiclab.focklab import (
    DensityMatrix,
    ModeOperator,
    StateVector,
    check_density,
    create,
    destroy,
    embed,
    expectation,
    identity,
    is_unitary,
    number,
    partial_trace,
    quadrature,
    tensor,
)
from cubiclab.states import coherent, fock, squeeze


@pytest.mark.parametrize("nmax", [1, 4, 12])
def test_ladder_elements(nmax):
    a = destroy(nmax).data
    for n in range(1, nmax + 1):
        assert a[n - 1, n] == pytest.approx(np.sqrt(n))
    assert np.allclose(create(nmax).data, a.T)
    assert np.allclose(number(nmax).data, np.diag(np.arange(nmax + 1)))


def test_commutator_away_from_cutoff():
    nmax = 10
    a, ad = destroy(nmax), create(nmax)
    comm = (a @ ad - ad @ a).data
    # the last diagonal entry is the truncation artifact -nmax
    assert np.allclose(comm[:-1, :-1], np.eye(nmax))
    assert comm[-1, -1] == pytest.approx(-nmax)


def test_quadrature_vacuum_variance():
    nmax = 6
    vac = fock(0, nmax)
    x, p = quadrature(nmax, "x"), quadrature(nmax, "p")
    assert expectation(vac, x @ x).real == pytest.approx(0.5)
    assert expectation(vac, p @ p).real == pytest.approx(0.5)


@pytest.mark.parametrize("theta", [0.0, 0.4, np.pi / 2])
def test_rotated_quadrature(theta):
    nmax = 5
    xt = quadrature(nmax, "x", theta).data
    ref = np.cos(theta) * quadrature(nmax, "x").data + np.sin(theta) * quadrature(nmax, "p").data
    assert np.allclose(xt, ref)


def test_quadrature_rejects_unknown():
    with pytest.raises(ValueError):
        quadrature(3, "q")


def test_state_vector_immutable():
    psi = fock(1, 3)
    with pytest.raises(ValueError):
        psi.data[0] = 1.0


def test_density_matrix_validates_shape():
    with pytest.raises(ValueError):
        DensityMatrix(np.zeros((3, 4)))


def test_tensor_and_partial_trace(rng):
    r1 = DensityMatrix(random_density(rng, 2))
    r2 = DensityMatrix(random_density(rng, 3))
    joint = tensor(r1, r2)
    assert joint.dims == (3, 4)
    assert np.allclose(partial_trace(joint, [0]).data, r1.data)
    assert np.allclose(partial_trace(joint, [1]).data, r2.data)


def test_tensor_rejects_mixed_kinds():
    with pytest.raises(TypeError):
        tensor(fock(0, 2), fock(0, 2).dm())


def test_embed_acts_on_one_mode():
    dims = (3, 4)
    n1 = embed(number(3), 1, dims)
    psi = tensor(fock(2, 2), fock(3, 3))
    assert expectation(psi, n1).real == pytest.approx(3.0)


def test_is_unitary():
    assert is_unitary(squeeze(0.3, 30))
    assert not is_unitary(destroy(5))


def test_check_density_flags_negative():
    bad = DensityMatrix(np.diag([1.2, -0.2]).astype(complex))
    with pytest.raises(AssertionError):
        check_density(bad)
    check_density(coherent(0.5, 10).dm())


def test_operator_scalar_algebra():
    a = destroy(3)
    assert np.allclose(((a + a.dag()) * 0.5).data, (quadrature(3).data / np.sqrt(2)))
    assert np.allclose(identity(3).data, np.eye(4))
    assert isinstance(a @ a, ModeOperator)
    assert isinstance(a @ fock(1, 3), StateVector)
