import numpy as np
import pytest
import scipy.linalg as sla
import scipy.sparse as sp

from tdmor.lti import DescriptorSystem


def random_stable_system(n, seed, e_identity=False):
    """Generic random stable SISO descriptor system."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((n, n))
    if e_identity:
        E = np.eye(n)
    else:
        E = np.eye(n) + 0.2 * rng.standard_normal((n, n)) / np.sqrt(n)
    lam = sla.eigvals(A, E)
    A = A - (lam.real.max() + 1.0) * E
    return DescriptorSystem(
        E=sp.csc_matrix(E),
        A=sp.csc_matrix(A),
        B=rng.standard_normal(n),
        C=rng.standard_normal(n),
    )


@pytest.fixture(scope="session")
def fom():
    from tdmor.bench import build_fom

    return build_fom()
