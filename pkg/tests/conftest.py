import numpy as np
import pytest

from normgrad.pauli import Hamiltonian, PauliTerm


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_state(rng, n):
    psi = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    return psi / np.linalg.norm(psi)


def random_hamiltonian(rng, n, n_terms):
    terms = [
        PauliTerm(float(rng.normal()), "".join(rng.choice(list("IXYZ"), size=n)))
        for _ in range(n_terms)
    ]
    return Hamiltonian(n, tuple(terms))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
