import numpy as np
import pytest

from zsdress import build_algebra, nls_dispersion, nwave_dispersion
from zsdress.dressing import SeedVectors, dress_bd_rank1, dress_c_rank1, dress_rank_r
from zsdress.fields import Grid
from zsdress.spectral import SpectralPair

J_C2 = (2.0, 1.0)
I_C2 = (1.0, -1.0)
LAMBDA_PLUS = 0.3 + 0.5j
N_C2 = np.array([1.0, 0.8 + 0.3j, 0.5 - 0.6j, 1.2 + 0.1j])

# lines printed by the acceptance suite, collected for the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def isotropic_b2(n1=0.5 + 0.2j, n2=0.3 - 0.1j, n3=0.7j):
    n = np.array([1, n1, n2, n3, 0], dtype=complex)
    n[4] = (2 * n[1] * n[3] - n[2] ** 2) / (2 * n[0])
    return n


def isotropic_d2(n1=0.5 + 0.2j, n2=0.3 - 0.1j):
    n = np.array([1, n1, n2, 0], dtype=complex)
    n[3] = n[1] * n[2] / n[0]
    return n


def example3_seeds(a=2.0, b=1.0, c=3.0):
    n1 = np.array([1.0, a, b, -a * b])
    n2 = np.array([1.0, -a, c, a * c])
    return SeedVectors((n1, n2), (n2, n1))


@pytest.fixture(scope="session")
def pair():
    return SpectralPair.conjugate_pair(LAMBDA_PLUS)


@pytest.fixture(scope="session")
def c2():
    return build_algebra("C", 2)


@pytest.fixture(scope="session")
def c2_disp(c2):
    return nwave_dispersion(c2, J_C2, I_C2)


@pytest.fixture(scope="session")
def grid21():
    return Grid.square(3.0, 21)


@pytest.fixture(scope="session")
def example2(c2, c2_disp, pair):
    return dress_c_rank1(c2, c2_disp, pair, SeedVectors.conjugate([N_C2]))


@pytest.fixture(scope="session")
def example3(c2, c2_disp, pair):
    return dress_rank_r(c2, c2_disp, pair, example3_seeds())


@pytest.fixture(scope="session")
def example4(pair):
    basis = build_algebra("C", 2)
    disp = nls_dispersion(basis, (1.5, 0.7))
    n0 = np.array([1 + 0.2j, 0, 0, 0.7 - 0.4j])
    state, pot = dress_c_rank1(basis, disp, pair, SeedVectors.conjugate([n0]))
    return basis, disp, n0, state, pot


@pytest.fixture(scope="session")
def bd_cases(pair):
    out = {}
    for series, n in (("B", isotropic_b2()), ("D", isotropic_d2())):
        basis = build_algebra(series, 2)
        disp = nwave_dispersion(basis, J_C2, I_C2)
        out[series] = (basis, disp) + dress_bd_rank1(basis, disp, pair, SeedVectors.conjugate([n]))
    return out


@pytest.fixture(scope="session")
def d2_rank_r(pair):
    basis = build_algebra("D", 2)
    disp = nwave_dispersion(basis, J_C2, I_C2)
    p = 0.4 + 0.3j
    seeds = SeedVectors.conjugate([[1, 0, p, 0], [0, 1, 0, p]])
    return (basis, disp) + dress_rank_r(basis, disp, pair, seeds)
