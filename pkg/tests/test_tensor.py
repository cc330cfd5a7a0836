import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from auem.errors import InvalidArgument
from auem.machine import operator_M, params_from_fidelity
from auem.qudit import gb_vector
from auem.tensor import (
    TOL_ALG,
    TOL_EIG,
    DensityOperator,
    OperatorMatrix,
    PureState,
    complete_orthonormal,
    eig_hermitian,
    haar_random_state,
    haar_random_unitary,
    make_rng,
    partial_trace,
    random_ket,
    tensor_product,
)

SX = np.array([[0, 1], [1, 0]])
SZ = np.array([[1, 0], [0, -1]])


def test_identity_product():
    i2 = OperatorMatrix.identity((2,))
    out = tensor_product(i2, i2)
    assert out.dims == (2, 2)
    assert np.array_equal(out.mat, np.eye(4))


def test_basis_ket_product():
    out = tensor_product(PureState.basis((2,), 0), PureState.basis((2,), 1))
    assert out.dims == (2, 2)
    assert np.array_equal(out.amps, [0, 1, 0, 0])


def test_kron_matches_index_formula():
    out = tensor_product(OperatorMatrix((2,), SX), OperatorMatrix((2,), SZ)).mat
    for i in range(2):
        for k in range(2):
            for j in range(2):
                for l in range(2):
                    assert out[2 * i + k, 2 * j + l] == SX[i, j] * SZ[k, l]


def test_mixed_operands_rejected():
    with pytest.raises(InvalidArgument):
        tensor_product(PureState.basis((2,), 0), OperatorMatrix.identity((2,)))


def test_partial_trace_of_product(rng):
    psi = PureState((3,), random_ket(3, rng))
    v = random_ket(2, rng)
    rho_a = DensityOperator((2,), 0.3 * np.outer(v, v.conj()) + 0.35 * np.eye(2))
    out = partial_trace(tensor_product(psi.density(), rho_a), [0])
    assert out.dims == (3,)
    assert np.allclose(out.mat, np.outer(psi.amps, psi.amps.conj()), atol=TOL_ALG)


def test_partial_trace_bell_marginal():
    psi00 = PureState((2, 2), gb_vector(2))
    assert np.allclose(partial_trace(psi00.density(), [0]).mat, np.eye(2) / 2, atol=TOL_ALG)
    # the pure-state shortcut agrees
    assert np.allclose(partial_trace(psi00, [1]).mat, np.eye(2) / 2, atol=TOL_ALG)


def test_partial_trace_matches_double_loop(rng):
    amps = random_ket(8, rng)
    psi = PureState((2, 2, 2), amps)
    t = amps.reshape(2, 2, 2)
    brute = np.zeros((2, 2), dtype=complex)
    for a in range(2):
        for b in range(2):
            for x in range(2):
                for y in range(2):
                    brute[a, b] += t[a, x, y] * np.conj(t[b, x, y])
    assert np.allclose(partial_trace(psi.density(), [0]).mat, brute, atol=TOL_ALG)
    assert np.allclose(partial_trace(psi, [0]).mat, brute, atol=TOL_ALG)


def test_partial_trace_keeps_middle(rng):
    amps = random_ket(2 * 3 * 2, rng)
    t = amps.reshape(2, 3, 2)
    brute = np.einsum("axy,bxy->ab", t.transpose(1, 0, 2), t.transpose(1, 0, 2).conj())
    out = partial_trace(PureState((2, 3, 2), amps).density(), [1])
    assert out.dims == (3,)
    assert np.allclose(out.mat, brute, atol=TOL_ALG)


@pytest.mark.parametrize("keep", [[], [0, 1, 2], [3]])
def test_partial_trace_bad_keep(keep):
    psi = PureState.basis((2, 2, 2), 0)
    with pytest.raises(InvalidArgument):
        partial_trace(psi.density(), keep)


@settings(max_examples=30, deadline=None)
@given(da=st.integers(2, 4), db=st.integers(2, 4), seed=st.integers(0, 2**31))
def test_partial_trace_of_tensor_product(da, db, seed):
    r = make_rng(seed)
    a = OperatorMatrix((da,), r.standard_normal((da, da)) + 1j * r.standard_normal((da, da)))
    b = OperatorMatrix((db,), r.standard_normal((db, db)) + 1j * r.standard_normal((db, db)))
    from auem.tensor import partial_trace_matrix

    ab = tensor_product(a, b)
    assert np.allclose(partial_trace_matrix(ab.mat, ab.dims, [0]), a.mat * np.trace(b.mat), atol=TOL_ALG * 10)


def test_eig_sigma_z():
    pairs = eig_hermitian(OperatorMatrix((2,), SZ))
    assert [v for v, _ in pairs] == pytest.approx([1.0, -1.0])


@pytest.mark.parametrize("d", [2, 3, 5])
def test_eig_maximally_mixed(d):
    vals = [v for v, _ in eig_hermitian(np.eye(d) / d)]
    assert vals == pytest.approx([1 / d] * d, abs=TOL_EIG)


def test_eig_depolarized_qutrit(rng):
    pi_s = 0.3
    v = random_ket(3, rng)
    rho = (1 - pi_s) * np.outer(v, v.conj()) + pi_s / 3 * np.eye(3)
    vals = [x for x, _ in eig_hermitian(rho)]
    assert vals == pytest.approx([0.8, 0.1, 0.1], abs=TOL_EIG)


def test_eig_reconstruction(rng):
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    h = a + a.conj().T
    pairs = eig_hermitian(h)
    vals = [v for v, _ in pairs]
    assert vals == sorted(vals, reverse=True)
    vecs = np.column_stack([v for _, v in pairs])
    assert np.allclose(vecs.conj().T @ vecs, np.eye(5), atol=TOL_EIG)
    rebuilt = sum(lam * np.outer(v, v.conj()) for lam, v in pairs)
    assert np.allclose(rebuilt, h, atol=TOL_EIG)


def test_eig_rejects_non_hermitian():
    with pytest.raises(InvalidArgument):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_complete_full_basis_is_empty():
    vs = [PureState.basis((3,), k) for k in range(3)]
    assert complete_orthonormal(vs) == []


def test_complete_single_qubit():
    (v,) = complete_orthonormal([PureState.basis((2,), 0)])
    assert abs(v.amps[0]) < TOL_ALG
    assert abs(np.linalg.norm(v.amps) - 1) < TOL_ALG


def test_complete_machine_images():
    p = params_from_fidelity(2, 5 / 6)
    m = np.kron(operator_M(p).mat, np.eye(2))
    vs = [PureState((2, 2, 2), m @ np.kron(np.eye(2)[k], gb_vector(2))) for k in range(2)]
    extra = complete_orthonormal(vs)
    assert len(extra) == 6
    cols = np.column_stack([v.amps for v in vs + extra])
    assert np.max(np.abs(cols.conj().T @ cols - np.eye(8))) < TOL_ALG
    # deterministic
    again = complete_orthonormal(vs)
    assert all(np.array_equal(a.amps, b.amps) for a, b in zip(extra, again))


def test_complete_rejects_non_orthonormal():
    s = 1 / np.sqrt(2)
    vs = [PureState((2,), [1, 0]), PureState((2,), [s, s])]
    with pytest.raises(InvalidArgument):
        complete_orthonormal(vs)


@pytest.mark.parametrize("d", [2, 3, 7])
def test_haar_state_normalized_and_deterministic(d):
    a = haar_random_state(d, 123)
    b = haar_random_state(d, 123)
    assert abs(np.linalg.norm(a.amps) - 1) < TOL_ALG
    assert np.array_equal(a.amps, b.amps)
    assert not np.array_equal(a.amps, haar_random_state(d, 124).amps)


def test_haar_state_first_moment():
    seed = 2024
    r = make_rng(seed)
    weights = [abs(haar_random_state(2, r).amps[0]) ** 2 for _ in range(10_000)]
    assert abs(np.mean(weights) - 0.5) < 0.02, f"seed={seed}"


@pytest.mark.parametrize("d", [2, 3, 6])
def test_haar_unitary(d):
    u = haar_random_unitary(d, 9)
    assert u.is_unitary()
    assert np.array_equal(u.mat, haar_random_unitary(d, 9).mat)
    # images of the basis keep their Gram matrix
    imgs = [u.mat @ np.eye(d)[k] for k in range(d)]
    gram = np.array([[np.vdot(a, b) for b in imgs] for a in imgs])
    assert np.max(np.abs(gram - np.eye(d))) < TOL_ALG


def test_state_validation():
    with pytest.raises(InvalidArgument):
        PureState((2,), [1, 1])
    with pytest.raises(InvalidArgument):
        PureState((2, 2), [1, 0])
    with pytest.raises(InvalidArgument):
        DensityOperator((2,), np.diag([1.5, -0.5]))
