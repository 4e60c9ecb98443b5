import random

import numpy as np
import pytest

from gammabench.opalg import (
    InconsistentSectorError,
    PauliSum,
    PauliTerm,
    RegisterMismatchError,
    SparseState,
    commutes,
    pauli_mul,
    product,
    sector_dimension_from_masks,
    sector_project,
    spectrum,
)


def random_term(rng, n):
    return PauliTerm(n, rng.randrange(4), rng.randrange(2 ** n), rng.randrange(2 ** n))


def test_single_qubit_table():
    X, Z, Y = PauliTerm.x_op(1, 0), PauliTerm.z_op(1, 0), PauliTerm.y_op(1, 0)
    assert X * Z == Y.times_i(-1)          # XZ = -iY
    assert Z * X == Y.times_i(1)           # ZX = +iY
    assert (X * X).scalar() == 1
    assert (Y * Y).scalar() == 1
    assert X * Y == Z.times_i(1)


def test_square_is_real_sign():
    rng = random.Random(0)
    for _ in range(200):
        a = random_term(rng, 5)
        assert (a * a).scalar() in (1, -1)


def test_xy_yx_identity_dense():
    # (X0 Y1)(Y1 X0) = identity, checked against the matrix oracle
    a = PauliTerm.x_op(2, 0) * PauliTerm.y_op(2, 1)
    b = PauliTerm.y_op(2, 1) * PauliTerm.x_op(2, 0)
    prod = pauli_mul(a, b)
    assert prod.scalar() == 1
    assert np.allclose(a.to_matrix() @ b.to_matrix(), np.eye(4))


def test_mul_matches_dense_oracle():
    rng = random.Random(1)
    for _ in range(10_000):
        n = rng.randrange(1, 7)
        a, b = random_term(rng, n), random_term(rng, n)
        got = (a * b).to_matrix()
        want = a.to_matrix() @ b.to_matrix()
        assert np.allclose(got, want), (a, b)


def test_mul_associative():
    rng = random.Random(2)
    for _ in range(500):
        n = rng.randrange(1, 8)
        a, b, c = (random_term(rng, n) for _ in range(3))
        assert (a * b) * c == a * (b * c)


def test_commutes_basics():
    assert commutes(PauliTerm.x_op(1, 0), PauliTerm.z_op(1, 0)) == 1
    assert commutes(PauliTerm.x_op(2, 0), PauliTerm.z_op(2, 1)) == 0


def test_commutes_matches_dense():
    rng = random.Random(3)
    for _ in range(300):
        n = rng.randrange(1, 7)
        a, b = random_term(rng, n), random_term(rng, n)
        am, bm = a.to_matrix(), b.to_matrix()
        anti = np.allclose(am @ bm, -(bm @ am))
        comm = np.allclose(am @ bm, bm @ am)
        assert comm or anti
        assert commutes(a, b) == (1 if anti and not comm else 0)


def test_register_mismatch():
    with pytest.raises(RegisterMismatchError):
        pauli_mul(PauliTerm.x_op(1, 0), PauliTerm.x_op(2, 0))


def test_dagger_matches_dense():
    rng = random.Random(4)
    for _ in range(200):
        a = random_term(rng, 4)
        assert np.allclose(a.dagger().to_matrix(), a.to_matrix().conj().T)


def test_apply_identity_and_flip():
    s = SparseState.basis_state(2, 0)
    assert PauliTerm.identity(2).apply(s).amp == {0: 1.0}
    assert PauliTerm.x_op(2, 0).apply(s).amp == {1: 1.0}


def test_apply_matches_dense():
    rng = random.Random(5)
    np_rng = np.random.default_rng(5)
    for _ in range(50):
        n = 8
        p = random_term(rng, n)
        vec = np_rng.normal(size=2 ** n) + 1j * np_rng.normal(size=2 ** n)
        state = SparseState(n, {i: vec[i] for i in range(2 ** n)})
        out = p.apply(state)
        want = p.to_matrix() @ vec if n <= 12 else None
        got = np.zeros(2 ** n, dtype=complex)
        for k, v in out.amp.items():
            got[k] = v
        assert np.allclose(got, want)


def test_apply_preserves_norm():
    rng = random.Random(6)
    np_rng = np.random.default_rng(6)
    for _ in range(50):
        p = random_term(rng, 6)
        amp = {i: complex(np_rng.normal(), np_rng.normal()) for i in range(40)}
        state = SparseState(6, amp)
        assert abs(p.apply(state).norm() - state.norm()) < 1e-12


def test_spectrum_single_z():
    h = PauliSum(1, [(1.0, PauliTerm.z_op(1, 0))])
    assert np.allclose(spectrum(h), [-1.0, 1.0])


def test_spectrum_zero_with_sector():
    h = PauliSum.zero(2)
    vals = spectrum(h, [(PauliTerm.z_op(2, 0), 1)])
    assert np.allclose(vals, [0.0, 0.0])


def test_spectrum_random_matches_dense():
    rng = random.Random(7)
    n = 8
    terms = []
    for _ in range(20):
        t = random_term(rng, n)
        # hermitize: fold the term and its dagger with a real coefficient
        c = rng.uniform(-1, 1)
        terms.append((0.5 * c, t))
        terms.append((0.5 * c, t.dagger()))
    h = PauliSum(n, terms)
    assert h.is_hermitian()
    vals = spectrum(h)
    dense = np.sort(np.linalg.eigvalsh(h.to_matrix()))
    assert np.max(np.abs(vals - dense)) < 1e-10


def test_spectrum_rejects_nonhermitian():
    h = PauliSum(1, [(1.0j, PauliTerm.z_op(1, 0))])
    with pytest.raises(ValueError):
        spectrum(h)


def test_sector_project_cases():
    z = PauliTerm.z_op(1, 0)
    up = SparseState.basis_state(1, 0)
    kept = sector_project(up, [(z, 1)])
    assert abs(kept.inner(up) - 1.0) < 1e-12
    killed = sector_project(up, [(z, -1)])
    assert killed.norm() < 1e-12


def test_inconsistent_sector_detected():
    # Z0 = +1 and -Z0 = +1 simultaneously is empty
    z = PauliTerm.z_op(2, 0)
    with pytest.raises(InconsistentSectorError):
        sector_dimension_from_masks(2, [(z, 1), (-z, 1)])


def test_sector_dimension_trace():
    z0 = PauliTerm.z_op(2, 0)
    assert sector_dimension_from_masks(2, [(z0, 1)]) == 2
    assert sector_dimension_from_masks(2, [(z0, 1), (PauliTerm.z_op(2, 1), -1)]) == 1


def test_pauli_sum_merge_and_hermitian():
    x = PauliTerm.x_op(1, 0)
    s = PauliSum(1, [(1.0, x), (2.0, x.times_i(2))])
    assert s.items()[0][0] == -1.0
    assert s.is_hermitian()
    assert not PauliSum(1, [(1.0j, x)]).is_hermitian()


def test_product_empty_needs_size():
    assert product([], 3) == PauliTerm.identity(3)
    with pytest.raises(ValueError):
        product([])
