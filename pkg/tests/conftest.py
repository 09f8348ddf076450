from __future__ import annotations

import numpy as np
import pytest

from hdqkit import hilbert


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def m2() -> hilbert.FiniteHilbertAlgebra:
    return hilbert.example_algebra("full_matrix", n=2)


@pytest.fixture(scope="session")
def z2() -> hilbert.FiniteHilbertAlgebra:
    return hilbert.example_algebra("cyclic_group", n=2)


@pytest.fixture(scope="session")
def c3() -> hilbert.FiniteHilbertAlgebra:
    return hilbert.example_algebra("cyclic_group", n=3)


@pytest.fixture(scope="session")
def s3() -> hilbert.FiniteHilbertAlgebra:
    return hilbert.example_algebra("s3")


@pytest.fixture(scope="session")
def scalar_algebra() -> hilbert.FiniteHilbertAlgebra:
    return hilbert.example_algebra("full_matrix", n=1)
