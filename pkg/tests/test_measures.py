import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from auem.errors import InvalidArgument
from auem.machine import apply_standard, depolarize, h_d, params_from_fidelity, symmetric_entangler
from auem.measures import (
    binary_entropy,
    concurrence_two_qubit,
    entanglement_pure,
    eof_two_qubit,
    fidelity_to_pure,
    shannon_entropy,
    von_neumann_entropy,
)
from auem.qudit import gb_vector, orthogonal_state
from auem.tensor import (
    TOL_ALG,
    TOL_EIG,
    DensityOperator,
    PureState,
    make_rng,
    partial_trace,
    random_ket,
    random_unitary_matrix,
)


def test_entropy_pure_and_mixed():
    assert von_neumann_entropy(PureState((3,), [0, 1, 0]).density()) == pytest.approx(0, abs=TOL_EIG)
    for d in (2, 3, 5):
        assert von_neumann_entropy(DensityOperator.maximally_mixed(d)) == pytest.approx(math.log2(d), abs=TOL_EIG)


def test_entropy_of_depolarized_qutrit(rng):
    v = random_ket(3, rng)
    rho = 0.7 * np.outer(v, v.conj()) + 0.1 * np.eye(3)
    want = -0.8 * math.log2(0.8) - 2 * 0.1 * math.log2(0.1)
    assert von_neumann_entropy(rho) == pytest.approx(want, abs=TOL_EIG)
    assert want == pytest.approx(0.9219, abs=1e-4)


def test_shannon_edge_cases():
    assert shannon_entropy([1.0, 0.0]) == 0.0
    assert binary_entropy(0.5) == pytest.approx(1.0)
    assert shannon_entropy([0.25] * 4) == pytest.approx(2.0)


def test_entanglement_bell_and_product():
    assert entanglement_pure(PureState((2, 2), gb_vector(2)), [0]) == pytest.approx(1, abs=TOL_EIG)
    prod = PureState((2, 3), np.kron([1, 0], [0, 1, 0]))
    assert entanglement_pure(prod, [0]) == pytest.approx(0, abs=TOL_EIG)


@pytest.mark.parametrize("F", [0.6, 5 / 6, 0.9])
@pytest.mark.parametrize("d", [2, 3, 4])
def test_entanglement_of_optimal_schmidt_state(d, F):
    r = make_rng(77 + d)
    weights = [F] + [(1 - F) / (d - 1)] * (d - 1)
    sig = random_unitary_matrix(d, r)
    anc = random_unitary_matrix(d * d, r)
    amps = sum(math.sqrt(w) * np.kron(sig[:, i], anc[:, i]) for i, w in enumerate(weights))
    psi = PureState((d, d, d), amps)
    assert entanglement_pure(psi, [0]) == pytest.approx(h_d(d, F), abs=TOL_EIG)
    # either side of the cut gives the same value
    assert entanglement_pure(psi, [1, 2]) == pytest.approx(h_d(d, F), abs=TOL_EIG)


@pytest.mark.parametrize("cut", [[], [0, 1], [5]])
def test_entanglement_invalid_cut(cut):
    with pytest.raises(InvalidArgument):
        entanglement_pure(PureState((2, 2), gb_vector(2)), cut)


def test_fidelity_examples(rng):
    psi = PureState((3,), random_ket(3, rng))
    assert fidelity_to_pure(psi, psi.density()) == pytest.approx(1, abs=TOL_ALG)
    assert fidelity_to_pure(psi, DensityOperator.maximally_mixed(3)) == pytest.approx(1 / 3, abs=TOL_ALG)
    p = params_from_fidelity(3, 0.8)
    assert fidelity_to_pure(psi, depolarize(p, psi)) == pytest.approx(0.8, abs=TOL_ALG)
    with pytest.raises(InvalidArgument):
        fidelity_to_pure(psi, DensityOperator.maximally_mixed(2))


def test_concurrence_examples():
    bell = PureState((2, 2), gb_vector(2)).density()
    assert concurrence_two_qubit(bell) == pytest.approx(1, abs=TOL_EIG)
    prod = PureState((2, 2), [0, 1, 0, 0]).density()
    assert concurrence_two_qubit(prod) == pytest.approx(0, abs=TOL_EIG)


def test_symmetric_entangler_signal_pair(rng):
    p = symmetric_entangler()
    psi = PureState((2,), random_ket(2, rng))
    rho_sy = partial_trace(apply_standard(p, psi).density(), [0, 2])
    # closed form from the two-term output alpha|psi>|Phi+> + beta|Phi+>|psi>
    a = b = 1 / math.sqrt(3)
    out = a * np.kron(psi.amps, gb_vector(2)) + b * np.kron(gb_vector(2), psi.amps)
    t = out.reshape(2, 2, 2)
    brute = np.einsum("sxy,txz->sytz", t, t.conj()).reshape(4, 4)
    assert np.max(np.abs(rho_sy.mat - brute)) < TOL_ALG
    assert concurrence_two_qubit(rho_sy) == pytest.approx(1 / 3, abs=TOL_EIG)
    want_eof = binary_entropy((1 + math.sqrt(8 / 9)) / 2)
    assert eof_two_qubit(rho_sy) == pytest.approx(want_eof, abs=TOL_EIG)
    assert eof_two_qubit(rho_sy) == pytest.approx(0.19, abs=0.005)


def test_mixed_signal_ancilla_pair(rng):
    psi = PureState((2,), random_ket(2, rng))
    perp = orthogonal_state(psi).amps
    v = psi.amps
    sym = np.kron(v, perp) + np.kron(perp, v)
    rho = np.outer(sym, sym.conj()) / 6 + 2 / 3 * np.outer(np.kron(v, v), np.kron(v, v).conj())
    rho = DensityOperator((2, 2), rho)
    assert concurrence_two_qubit(rho) == pytest.approx(1 / 3, abs=TOL_EIG)
    assert eof_two_qubit(rho) == pytest.approx(binary_entropy((1 + math.sqrt(8 / 9)) / 2), abs=TOL_EIG)
    assert eof_two_qubit(rho) == pytest.approx(0.19, abs=0.005)


def test_eof_endpoints():
    assert eof_two_qubit(PureState((2, 2), gb_vector(2)).density()) == pytest.approx(1, abs=TOL_EIG)
    assert eof_two_qubit(DensityOperator((2, 2), np.eye(4) / 4)) == 0.0


def test_concurrence_wrong_dims():
    with pytest.raises(InvalidArgument):
        concurrence_two_qubit(DensityOperator.maximally_mixed(3))
    with pytest.raises(InvalidArgument):
        concurrence_two_qubit(DensityOperator((2, 3), np.eye(6) / 6))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31), d=st.integers(2, 5))
def test_entropy_unitary_invariance(seed, d):
    r = make_rng(seed)
    w = r.dirichlet(np.ones(d))
    u = random_unitary_matrix(d, r)
    rho = u @ np.diag(w) @ u.conj().T
    assert von_neumann_entropy(rho) == pytest.approx(shannon_entropy(w), abs=TOL_EIG)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31), da=st.integers(2, 4), db=st.integers(2, 4))
def test_entanglement_complement_symmetry(seed, da, db):
    psi = PureState((da, db), random_ket(da * db, make_rng(seed)))
    assert entanglement_pure(psi, [0]) == pytest.approx(entanglement_pure(psi, [1]), abs=TOL_EIG)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31))
def test_eof_of_pure_state_is_entanglement_entropy(seed):
    psi = PureState((2, 2), random_ket(4, make_rng(seed)))
    assert eof_two_qubit(psi.density()) == pytest.approx(entanglement_pure(psi, [0]), abs=TOL_EIG)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31), t=st.floats(0, 1))
def test_fidelity_linear_in_rho(seed, t):
    r = make_rng(seed)
    psi = PureState((3,), random_ket(3, r))
    r1 = PureState((3,), random_ket(3, r)).density()
    r2 = DensityOperator.maximally_mixed(3)
    mix = DensityOperator((3,), t * r1.mat + (1 - t) * r2.mat)
    want = t * fidelity_to_pure(psi, r1) + (1 - t) * fidelity_to_pure(psi, r2)
    assert fidelity_to_pure(psi, mix) == pytest.approx(want, abs=TOL_ALG)
