"""Generalized Bell states and generalized Pauli (shift-and-phase) operators.

All index arithmetic is modulo ``d``. Phases ``exp(2 pi i k / d)`` are
evaluated with ``k`` already reduced mod ``d`` so large index products do
not lose precision.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import numpy as np

from .errors import InvalidArgument, UnsupportedDimension
from .tensor import TOL_ALG, DensityOperator, OperatorMatrix, PureState


@dataclass(frozen=True)
class GBIndex:
    d: int
    m: int
    n: int

    def __post_init__(self):
        if self.d < 2:
            raise InvalidArgument(f"d must be at least 2, got {self.d}")
        if not (0 <= self.m < self.d and 0 <= self.n < self.d):
            raise InvalidArgument(f"indices ({self.m}, {self.n}) out of range for d={self.d}")

    @classmethod
    def wrap(cls, d: int, m: int, n: int) -> GBIndex:
        """Index with ``m`` and ``n`` reduced mod ``d`` (negative values allowed)."""
        return cls(d, m % d, n % d)


def root_of_unity(k: int, d: int) -> complex:
    """``exp(2 pi i k / d)`` with exact integer reduction of ``k``."""
    k %= d
    return complex(np.exp(2j * np.pi * k / d))


def _roots(d: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(d) / d)


@lru_cache(maxsize=None)
def _gb_amps(d: int, m: int, n: int) -> np.ndarray:
    w = _roots(d)
    amps = np.zeros(d * d, dtype=complex)
    for j in range(d):
        amps[j * d + (j + m) % d] = w[(j * n) % d]
    amps /= np.sqrt(d)
    amps.setflags(write=False)
    return amps


@lru_cache(maxsize=None)
def _gp_mat(d: int, m: int, n: int) -> np.ndarray:
    w = _roots(d)
    mat = np.zeros((d, d), dtype=complex)
    for k in range(d):
        mat[(k + m) % d, k] = w[(k * n) % d]
    mat.setflags(write=False)
    return mat


def gb_vector(d: int, m: int = 0, n: int = 0) -> np.ndarray:
    """Raw amplitudes of ``|psi_mn>``; indices are reduced mod ``d``."""
    return _gb_amps(d, m % d, n % d)


def gp_matrix(d: int, m: int, n: int) -> np.ndarray:
    """Raw matrix of ``U_{m,n}``; indices are reduced mod ``d``."""
    return _gp_mat(d, m % d, n % d)


def gb_state(idx: GBIndex) -> PureState:
    """``|psi_mn> = d^{-1/2} sum_j w^{jn} |j>|j+m>``."""
    return PureState((idx.d, idx.d), gb_vector(idx.d, idx.m, idx.n))


def gp_operator(idx: GBIndex) -> OperatorMatrix:
    """``U_{m,n} = sum_k w^{kn} |k+m><k|``."""
    return OperatorMatrix((idx.d,), gp_matrix(idx.d, idx.m, idx.n))


def gb_basis_matrix(d: int) -> np.ndarray:
    """Columns are ``|psi_mn>`` in the order ``m * d + n``."""
    return np.column_stack([gb_vector(d, m, n) for m in range(d) for n in range(d)])


def gb_from_gp(idx: GBIndex, side: str = "right") -> PureState:
    """Build ``|psi_mn>`` by acting locally on ``|psi_00>``.

    ``side="right"`` applies ``U_{m,n}`` to the second system;
    ``side="left"`` applies ``U_{-m,n}`` to the first and removes the
    phase ``w^{mn}``.
    """
    d, m, n = idx.d, idx.m, idx.n
    psi00 = gb_vector(d)
    eye = np.eye(d)
    if side == "right":
        amps = np.kron(eye, gp_matrix(d, m, n)) @ psi00
    elif side == "left":
        amps = root_of_unity(-m * n, d) * (np.kron(gp_matrix(d, -m, n), eye) @ psi00)
    else:
        raise InvalidArgument(f"side must be 'left' or 'right', got {side!r}")
    return PureState((d, d), amps)


def gp_twirl(rho: DensityOperator) -> OperatorMatrix:
    """``(1/d) sum_{m,n} U_{m,n} rho U_{m,n}^dagger``, which equals ``I Tr(rho)``.

    The result has trace ``d``, so it is returned as a plain operator.
    """
    if len(rho.dims) != 1:
        raise InvalidArgument("gp_twirl acts on a single d-level system")
    d = rho.dims[0]
    acc = np.zeros((d, d), dtype=complex)
    for m in range(d):
        for n in range(d):
            u = gp_matrix(d, m, n)
            acc += u @ rho.mat @ u.conj().T
    return OperatorMatrix((d,), acc / d)


def gb_eigenphase_check(k: int, l: int, m: int, n: int, d: int) -> complex:
    """Eigenvalue of ``U_{m,n} (x) U_{m,-n}`` on ``|psi_kl>``.

    Raises ``AssertionError`` if ``|psi_kl>`` is not an eigenvector with
    eigenvalue ``w^{-(nk + ml)}``.
    """
    op = np.kron(gp_matrix(d, m, n), gp_matrix(d, m, -n))
    psi = gb_vector(d, k, l)
    image = op @ psi
    value = complex(np.vdot(psi, image))
    expected = root_of_unity(-(n * k + m * l), d)
    if abs(value - expected) > TOL_ALG or np.max(np.abs(image - value * psi)) > TOL_ALG:
        raise AssertionError(
            f"GB state ({k},{l}) failed eigen-relation for ({m},{n}), d={d}: {value} != {expected}"
        )
    return value


def gb_projector_sum(d: int) -> OperatorMatrix:
    """``sum_{m,n} U_{m,n} (x) U_{m,-n}``; equals ``d^2 |psi_00><psi_00|``."""
    if d < 2:
        raise InvalidArgument("d must be at least 2")
    acc = np.zeros((d * d, d * d), dtype=complex)
    for m in range(d):
        for n in range(d):
            acc += np.kron(gp_matrix(d, m, n), gp_matrix(d, m, -n))
    return OperatorMatrix((d, d), acc)


def phase_sum(j: int, k: int, d: int) -> int:
    """``sum_n w^{(j-k) n}`` evaluated in integer arithmetic: ``d`` if ``j = k`` mod ``d``, else 0.

    For ``r = (j-k) mod d != 0`` the exponents ``r n mod d`` cover the
    subgroup of multiples of ``g = gcd(r, d)`` exactly ``g`` times each, and
    the ``d/g > 1`` roots of unity of that subgroup sum to zero.
    """
    r = (j - k) % d
    if r == 0:
        return d
    g = gcd(r, d)
    counts = Counter((r * n) % d for n in range(d))
    if counts != {e: g for e in range(0, d, g)}:
        raise AssertionError(f"exponent multiset for r={r}, d={d} is not a subgroup cover")
    return 0


def sigma_y_pair(d: int, k: int, l: int) -> np.ndarray:
    """``-i|k><l| + i|l><k|`` embedded in ``d`` dimensions (identity elsewhere)."""
    mat = np.eye(d, dtype=complex)
    mat[k, k] = mat[l, l] = 0.0
    mat[k, l] = -1j
    mat[l, k] = 1j
    return mat


def orthogonal_state(psi: PureState) -> PureState:
    """Map an even-dimensional state to an orthogonal one via conjugation.

    Applies ``sigma_y^{01} sigma_y^{23} ... sigma_y^{(d-2)(d-1)}`` to the
    entrywise conjugate of ``psi``.
    """
    if len(psi.dims) != 1:
        raise InvalidArgument("orthogonal_state needs a single subsystem")
    d = psi.dims[0]
    if d % 2:
        raise UnsupportedDimension(f"orthogonal_state needs even d, got {d}")
    amps = psi.amps.conj().copy()
    for k in range(0, d, 2):
        amps = sigma_y_pair(d, k, k + 1) @ amps
    return PureState((d,), amps)
