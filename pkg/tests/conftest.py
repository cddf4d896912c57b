import numpy as np
import pytest

from nhlab import Boundary, LatticeParams


def assert_multisets_close(a, b, tol=1e-10):
    """Match two complex eigenvalue multisets greedily within tol."""
    a = sorted(np.asarray(a, dtype=complex), key=lambda z: (z.real, z.imag))
    b = list(np.asarray(b, dtype=complex))
    for x in a:
        j = int(np.argmin([abs(x - y) for y in b]))
        assert abs(x - b[j]) < tol, f"unmatched eigenvalue {x}"
        b.pop(j)


@pytest.fixture
def defective_params():
    """Open chain at the exactly solvable point v = gamma/2."""
    return LatticeParams(v=0.5, r=0.5, gamma=1.0, n_cells=30, boundary=Boundary.OPEN)


@pytest.fixture
def periodic_params():
    return LatticeParams(v=0.5, r=0.5, gamma=1.0, n_cells=30, boundary=Boundary.PERIODIC)
