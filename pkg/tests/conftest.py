import numpy as np
import pytest

from ea_atlas.channels import Channel

ACCEPTANCE_LINES = []


def random_kraus_channel(d_in, d_out=None, k=3, seed=0, trace_preserving=True):
    """Random CP map from Gaussian Kraus operators, optionally normalized to TP."""
    dims_in = d_in if isinstance(d_in, tuple) else (d_in,)
    dims_out = dims_in if d_out is None else (d_out if isinstance(d_out, tuple) else (d_out,))
    a, b = int(np.prod(dims_out)), int(np.prod(dims_in))
    rng = np.random.default_rng(seed)
    ks = [rng.normal(size=(a, b)) + 1j * rng.normal(size=(a, b)) for _ in range(k)]
    if trace_preserving:
        s = sum(x.conj().T @ x for x in ks)
        w, v = np.linalg.eigh(s)
        root = v @ np.diag(w ** -0.5) @ v.conj().T
        ks = [x @ root for x in ks]
    return Channel(dims_in, dims_out, kraus=ks)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
