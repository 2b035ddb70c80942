import numpy as np
import pytest

from cstarlab import HermitianMatrix, SpectrumInterval, sample_hermitian


@pytest.fixture
def rand_herm():
    def make(dim, lo, hi, seed):
        return sample_hermitian(dim, SpectrumInterval(lo, hi), seed)

    return make


def mineig(a: np.ndarray) -> float:
    return float(np.linalg.eigvalsh(a)[0])


def specnorm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a, 2))


def wrap(a) -> HermitianMatrix:
    return HermitianMatrix(a)
