import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def random_herm(rng, d, complex_=True):
    G = rng.standard_normal((d, d))
    if complex_:
        G = G + 1j * rng.standard_normal((d, d))
    return (G + G.conj().T) / 2


def random_pd(rng, d, lo=0.5, hi=3.0):
    from meanscope.linalg import SpectralBounds, random_banded_hermitian
    return random_banded_hermitian(d, SpectralBounds(lo, hi), seed=rng)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])
