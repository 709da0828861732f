import numpy as np
import pytest

from sudden_otto.config import load_preset
from sudden_otto.lindblad import energy_eigenbasis
from sudden_otto.model import big_omega, reconstruct_density_matrix


@pytest.fixture(scope="session")
def fig1_params():
    return load_preset("fig1").cycle_params()


@pytest.fixture(scope="session")
def fig2_params():
    return load_preset("fig2").cycle_params()


def to_product_basis(x, omega, J):
    """Reconstruct an observable vector as a product-basis density matrix
    for feeding the dense integrator."""
    Om = big_omega(omega, J)
    V = energy_eigenbasis(omega, J)
    rho = reconstruct_density_matrix(x, Om)
    return V @ rho @ V.conj().T


def rng(seed=0):
    return np.random.default_rng(seed)
