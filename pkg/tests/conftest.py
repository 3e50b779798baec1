import numpy as np
import pytest

from fsscomp.cascade import CascadeParams


def random_density(rng, rank=4):
    a = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_unitary_2(rng):
    z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def x_state(c):
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = rho[3, 3] = 0.5
    rho[0, 3] = 0.5 * c
    rho[3, 0] = 0.5 * np.conj(c)
    return rho


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def dot():
    """The emitter used throughout: 3 ueV splitting, 1 ns / 0.5 ns lifetimes."""
    return CascadeParams(fss=3.0, tau_x=1.0, tau_xx=0.5)


ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
