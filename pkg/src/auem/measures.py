"""Entropy, entanglement and fidelity measures (all entropies in bits)."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import InvalidArgument
from .tensor import TOL_ALG, DensityOperator, PureState, _check_keep, eigvals_hermitian, reduced_matrix

_SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))


def shannon_entropy(probs) -> float:
    """``-sum p log2 p`` with ``0 log 0 = 0``; entries are clamped to ``[0, 1]`` first."""
    p = np.clip(np.asarray(probs, dtype=float), 0.0, 1.0)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def binary_entropy(x: float) -> float:
    return shannon_entropy([x, 1.0 - x])


def von_neumann_entropy(rho) -> float:
    """Entropy of a density operator (or raw Hermitian matrix)."""
    mat = getattr(rho, "mat", rho)
    return shannon_entropy(eigvals_hermitian(mat))


def entanglement_pure(psi: PureState, cut: Sequence[int]) -> float:
    """Entanglement entropy of a pure state across ``cut`` versus the rest."""
    cut = _check_keep(psi.dims, cut)
    rest = [i for i in range(len(psi.dims)) if i not in cut]
    # the smaller side gives the cheaper eigenproblem; both spectra agree
    dim = lambda idx: math.prod(psi.dims[i] for i in idx)  # noqa: E731
    side = cut if dim(cut) <= dim(rest) else rest
    return von_neumann_entropy(reduced_matrix(psi.amps, psi.dims, side))


def fidelity_to_pure(psi: PureState, rho: DensityOperator) -> float:
    """``<psi|rho|psi>``."""
    if psi.dims != rho.dims:
        raise InvalidArgument(f"state dims {psi.dims} != density operator dims {rho.dims}")
    val = np.vdot(psi.amps, rho.mat @ psi.amps)
    if abs(val.imag) > TOL_ALG:
        raise ArithmeticError(f"fidelity has imaginary part {val.imag}")
    return float(val.real)


_RANK_CUT = 1e-13


def concurrence_two_qubit(rho: DensityOperator) -> float:
    """Wootters concurrence of a two-qubit state.

    With ``rho = X X^dagger`` (columns of ``X`` are eigenvectors scaled by
    root eigenvalues), the ``lambda_i`` are the singular values of
    ``X^T (Y (x) Y) X``. This avoids square roots of near-zero eigenvalues,
    which would cost half the working precision on rank-deficient states.
    """
    if tuple(rho.dims) != (2, 2):
        raise InvalidArgument(f"concurrence needs dims (2, 2), got {rho.dims}")
    vals, vecs = np.linalg.eigh(rho.mat)
    keep = vals > _RANK_CUT
    x = vecs[:, keep] * np.sqrt(vals[keep])
    lams = np.zeros(4)
    sv = np.linalg.svd(x.T @ _SIGMA_YY @ x, compute_uv=False)
    lams[: len(sv)] = sv
    return float(max(0.0, lams[0] - lams[1] - lams[2] - lams[3]))


def eof_two_qubit(rho: DensityOperator) -> float:
    """Entanglement of formation from the concurrence."""
    c = concurrence_two_qubit(rho)
    return binary_entropy((1 + math.sqrt(max(0.0, 1 - c * c))) / 2)
