import itertools

import numpy as np
import pytest

from thermal_trimer.algebra import raising_operators

import _report


def random_density_matrix(rng, dim):
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_unit(rng, size=None):
    v = rng.normal(size=(3,) if size is None else (size, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def brute_force_g(rho, positions, dets):
    """Unnormalized G_k by explicit index sums over emitter labels.

    Each detector contributes a factor exp(i R.(u_j - u_l)); the operator
    string is S+_{j1}..S+_{jk} S-_{lk}..S-_{l1}.
    """
    n = positions.shape[0]
    sp = raising_operators(n)
    sm = [s.conj().T for s in sp]
    k = len(dets)
    total = 0.0
    for js in itertools.product(range(n), repeat=k):
        for ls in itertools.product(range(n), repeat=k):
            phase = sum(np.dot(d, positions[j] - positions[l]) for d, j, l in zip(dets, js, ls))
            op = np.eye(2**n, dtype=complex)
            for j in js:
                op = op @ sp[j]
            for l in reversed(ls):
                op = op @ sm[l]
            total += np.exp(1j * phase) * np.trace(rho @ op)
    return total


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not _report.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, passed, detail in sorted(_report.RESULTS, key=lambda r: r[0]):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:2d} {name}: {detail}")
