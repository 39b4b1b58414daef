import numpy as np
import pytest

from thermal_trimer.algebra import (
    ANTISYMMETRIC,
    PRINTED_TOTAL_RAISING_SYMMETRIC,
    SYMMETRIC,
    _r_sum,
    collective_decomposition_check,
    dicke_basis,
    excitation_number,
    hamiltonian,
    ladder,
    printed_raising,
    projector,
    raising_operators,
    symmetric_jump_operators,
    total_raising,
)


def comm(a, b):
    return a @ b - b @ a


@pytest.mark.parametrize("j", [1, 2, 3])
def test_su2_relations(j):
    sp, sm, sz = (ladder(3, j, k) for k in ("raise", "lower", "inversion"))
    np.testing.assert_allclose(comm(sp, sm), 2 * sz, atol=1e-14)
    np.testing.assert_allclose(comm(sz, sp), sp, atol=1e-14)
    np.testing.assert_allclose(comm(sz, sm), -sm, atol=1e-14)
    np.testing.assert_allclose(sp @ sp, 0, atol=1e-14)


def test_distinct_emitters_commute():
    ops = [ladder(3, j, k) for j in (1, 2, 3) for k in ("raise", "lower", "inversion")]
    for a in range(9):
        for b in range(9):
            if a // 3 != b // 3:
                np.testing.assert_allclose(comm(ops[a], ops[b]), 0, atol=1e-14)


def test_atom_one_is_least_significant_bit():
    sp = ladder(3, 1)
    assert sp[1, 0] == 1.0
    assert ladder(3, 3)[4, 0] == 1.0


def test_ladder_argument_errors():
    with pytest.raises(IndexError):
        ladder(3, 4)
    with pytest.raises(ValueError):
        ladder(3, 1, "flip")


def test_excitation_number_counts_bits():
    n = excitation_number(3)
    assert np.diag(n).real.tolist() == [0, 1, 1, 2, 1, 2, 2, 3]
    np.testing.assert_allclose(comm(n, total_raising(3)), total_raising(3), atol=1e-14)


def test_collective_transform_unitary():
    t = dicke_basis().transform
    np.testing.assert_allclose(t @ t.conj().T, np.eye(8), atol=1e-14)


def test_single_excitation_coefficients():
    t = dicke_basis().transform
    # |2> is the even superposition of the three one-excitation product states
    np.testing.assert_allclose(t[1, [1, 2, 4]], 1 / np.sqrt(3), atol=1e-15)
    assert dicke_basis().symmetric == SYMMETRIC
    assert set(SYMMETRIC) | set(ANTISYMMETRIC) == set(range(1, 9))


def test_basis_round_trip(rng):
    basis = dicke_basis()
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    np.testing.assert_allclose(basis.to_bare(basis.to_collective(a)), a, atol=1e-13)
    np.testing.assert_allclose(basis.to_collective(basis.projector_bare(3, 6)), projector(3, 6), atol=1e-14)


def test_superoperator_matches_conjugation(rng):
    basis = dicke_basis()
    a = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    got = (basis.superoperator() @ a.reshape(-1, order="F")).reshape(8, 8, order="F")
    np.testing.assert_allclose(got, basis.to_collective(a), atol=1e-13)


def test_projector_algebra():
    r = {(a, b): projector(a, b) for a in range(1, 9) for b in range(1, 9)}
    np.testing.assert_allclose(sum(r[a, a] for a in range(1, 9)), np.eye(8))
    for a, b, c, d in [(2, 3, 3, 5), (2, 3, 4, 5), (8, 1, 1, 8)]:
        expected = r[a, d] * (b == c) - r[c, b] * (d == a)
        np.testing.assert_allclose(comm(r[a, b], r[c, d]), expected, atol=1e-15)


def test_decomposition_matches_tensor_construction():
    assert collective_decomposition_check() < 1e-12


def test_total_raising_on_symmetric_sector():
    sp_c = dicke_basis().to_collective(total_raising(3))
    idx = np.array(SYMMETRIC) - 1
    block = np.zeros_like(sp_c)
    block[np.ix_(idx, idx)] = sp_c[np.ix_(idx, idx)]
    np.testing.assert_allclose(block, _r_sum(PRINTED_TOTAL_RAISING_SYMMETRIC), atol=1e-14)


@pytest.mark.parametrize("j", [1, 2, 3])
def test_lowering_is_adjoint_of_raising(j):
    basis = dicke_basis()
    np.testing.assert_allclose(
        basis.to_collective(ladder(3, j, "lower")), printed_raising(j).conj().T, atol=1e-14
    )


def test_hamiltonian_spectrum():
    np.testing.assert_allclose(np.diag(hamiltonian(1.0, 0.0)).real, [0, 1, 1, 1, 2, 2, 2, 3])
    h = hamiltonian(2.0, 0.3)
    assert h[1, 1] == pytest.approx(2.0 - 0.6)
    assert h[2, 2] == pytest.approx(2.0 + 0.3)
    n_c = dicke_basis().to_collective(excitation_number(3))
    np.testing.assert_allclose(comm(h, n_c), 0, atol=1e-14)


def test_hamiltonian_matches_bare_exchange():
    sp = raising_operators(3)
    delta = 0.7
    h_bare = -delta * sum(sp[j] @ sp[l].conj().T for j in range(3) for l in range(3) if j != l)
    np.testing.assert_allclose(dicke_basis().to_collective(h_bare), hamiltonian(0.0, delta), atol=1e-14)


def test_channel_operators():
    (r1, _), (r2, _), (r3, _) = symmetric_jump_operators()
    basis = dicke_basis()
    sp = [basis.to_collective(s) for s in raising_operators(3)]
    np.testing.assert_allclose(r1, sum(sp) / 3, atol=1e-14)
    np.testing.assert_allclose(r2, (sp[0] - sp[2]) / 2, atol=1e-14)
    np.testing.assert_allclose(r3, (sp[0] - 2 * sp[1] + sp[2]) / 6, atol=1e-14)
    assert r1[7, 4] == pytest.approx(1 / np.sqrt(3))
    idx = np.array(SYMMETRIC) - 1
    np.testing.assert_allclose(r2[np.ix_(idx, idx)], 0, atol=1e-15)
    for plus, minus in symmetric_jump_operators():
        np.testing.assert_allclose(minus, plus.conj().T)
