import numpy as np
import pytest

from distilcheck.projectors import two_copy_projector
from distilcheck.tensor import maximally_entangled, pair_to_cut_vector, standard_ops


@pytest.fixture(scope="session")
def ops4():
    return standard_ops(4)


@pytest.fixture(scope="session")
def q2_cut():
    return two_copy_projector(4, order="cut")


@pytest.fixture(scope="session")
def psi_plus():
    return maximally_entangled(4)


def equality_family_state(r: float) -> np.ndarray:
    """sqrt(r)|01>|psi2+> + sqrt(1-r)|psi2+>|01| in cut order; overlap 1/2 with Q."""
    psi2 = np.zeros(16, dtype=complex)
    psi2[0] = psi2[5] = 1.0 / np.sqrt(2.0)
    e01 = np.zeros(16, dtype=complex)
    e01[1] = 1.0
    pair_vec = np.sqrt(r) * np.kron(e01, psi2) + np.sqrt(1.0 - r) * np.kron(psi2, e01)
    return pair_to_cut_vector(pair_vec, 4)


@pytest.fixture(scope="session")
def equality_state_half():
    return equality_family_state(0.5)
